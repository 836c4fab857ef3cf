"""Affine-linear forms in unknown functions of (p, q), equation systems and exact solvers.

Coefficients are Laurent polynomials in ``p, q`` that may also involve the
formal constants ``c0..c4``.  Every distinct :class:`UnknownSym` (including
each derivative symbol ``f^{(a,b)}``) counts as an independent unknown in
:func:`consistency`; this is a relaxation, so an inconsistency certificate is
a proof while a consistent verdict only holds relative to the prolongation
bound that produced the system.

Elimination is delegated to :mod:`sympy`'s sparse ``DomainMatrix`` (exact,
fraction-free over polynomial rings, gmpy2-backed over QQ).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import ring

from .arena import DiffPoly, NonlinearError, Q, UnknownSym, ZERO, z_c, z_p, z_q, z_pack
from .lambdacalc import BracketStructure, LambdaPoly
from .pvadiff import TriValue

__all__ = [
    "LinForm", "LinearSystem", "NonlinearError", "collect", "prolong", "Consistent",
    "Inconsistent", "consistency", "Screen", "screen_consistency", "rational_rank", "BoundedSolution", "solve_bounded",
    "polynomial_ansatz",
]


class LinForm:
    """``sum_j r_j * U_j + r_0`` with jet-free, unknown-free coefficients ``r``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Optional[UnknownSym], DiffPoly]] = None):
        self.terms = {u: r for u, r in (terms or {}).items() if not r.is_zero()}

    @classmethod
    def from_diffpoly(cls, f: DiffPoly) -> "LinForm":
        groups: dict = {}
        for (z, jets, u), c in f.terms.items():
            if jets:
                raise ValueError("a LinForm cannot contain jet variables; collect first")
            groups.setdefault(u, {})[(z, (), None)] = c
        return cls({u: DiffPoly._raw(t) for u, t in groups.items()})

    def to_diffpoly(self) -> DiffPoly:
        out: dict = {}
        for u, r in self.terms.items():
            for (z, _, _), c in r.terms.items():
                out[(z, (), u)] = c
        return DiffPoly._raw(out)

    @property
    def constant(self) -> DiffPoly:
        return self.terms.get(None, ZERO)

    def coefficient(self, u: UnknownSym) -> DiffPoly:
        return self.terms.get(u, ZERO)

    def unknowns(self) -> set:
        return {u for u in self.terms if u is not None}

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        return None not in self.terms

    def __add__(self, other: "LinForm") -> "LinForm":
        return LinForm.from_diffpoly(self.to_diffpoly() + other.to_diffpoly())

    def __neg__(self) -> "LinForm":
        return LinForm({u: -r for u, r in self.terms.items()})

    def __sub__(self, other: "LinForm") -> "LinForm":
        return self + (-other)

    def scale(self, r) -> "LinForm":
        return LinForm.from_diffpoly(self.to_diffpoly() * r)

    def derive(self, comp: int) -> "LinForm":
        """Partial derivative in ``p`` (0) or ``q`` (1), chain rule on unknowns."""
        return LinForm.from_diffpoly(self.to_diffpoly().partial(comp))

    def substitute(self, values: Dict[UnknownSym, DiffPoly]) -> "LinForm":
        return LinForm.from_diffpoly(self.to_diffpoly().substitute_unknowns(values))

    def substitute_constants(self, values) -> "LinForm":
        return LinForm.from_diffpoly(self.to_diffpoly().substitute_constants(values))

    def __eq__(self, other) -> bool:
        return isinstance(other, LinForm) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        from .exprio import print_diffpoly
        return f"LinForm({print_diffpoly(self.to_diffpoly())})"


@dataclass(frozen=True)
class LinearSystem:
    equations: Tuple[LinForm, ...] = ()
    labels: Tuple[object, ...] = ()

    def __post_init__(self):
        if self.labels and len(self.labels) != len(self.equations):
            raise ValueError("labels and equations differ in length")

    def __len__(self) -> int:
        return len(self.equations)

    def __iter__(self):
        return iter(self.equations)

    @property
    def unknowns(self) -> Tuple[UnknownSym, ...]:
        out = set()
        for e in self.equations:
            out |= e.unknowns()
        return tuple(sorted(out))

    def is_homogeneous(self) -> bool:
        return all(e.is_homogeneous() for e in self.equations)

    def substitute(self, values: Dict[UnknownSym, DiffPoly]) -> "LinearSystem":
        return LinearSystem(tuple(e.substitute(values) for e in self.equations), self.labels)

    def residuals(self, values: Dict[UnknownSym, DiffPoly]) -> List[LinForm]:
        return [r for r in (e.substitute(values) for e in self.equations) if not r.is_zero()]

    def is_satisfied_by(self, values: Dict[UnknownSym, DiffPoly]) -> bool:
        return not self.residuals(values)

    def substitute_constants(self, values) -> "LinearSystem":
        return LinearSystem(tuple(e.substitute_constants(values) for e in self.equations),
                            self.labels)

    def __add__(self, other: "LinearSystem") -> "LinearSystem":
        labels = (self.labels or (None,) * len(self)) + (other.labels or (None,) * len(other))
        return LinearSystem(self.equations + other.equations, labels)

    def dump(self) -> str:
        """One equation per line, ``<expr> = 0``, in the exprio grammar."""
        from .exprio import print_diffpoly
        return "".join(f"{print_diffpoly(e.to_diffpoly())} = 0\n" for e in self.equations)


def _split_jets(f: DiffPoly) -> Dict[tuple, DiffPoly]:
    groups: dict = {}
    for (z, jets, u), c in f.terms.items():
        groups.setdefault(jets, {})[(z, (), u)] = c
    return {j: DiffPoly._raw(t) for j, t in groups.items()}


def _entries(value) -> Iterable[Tuple[tuple, DiffPoly]]:
    if isinstance(value, TriValue):
        for t, k, f in value.coefficients():
            yield (t, k), f
    elif isinstance(value, BracketStructure):
        for i, j in product(range(2), repeat=2):
            for s, f in sorted(value.entries[i][j].coeffs.items()):
                yield ((i, j), s), f
    elif isinstance(value, LambdaPoly):
        for s, f in sorted(value.coeffs.items()):
            yield (s,), f
    elif isinstance(value, DiffPoly):
        yield (), value
    else:
        raise TypeError(f"cannot collect equations from {type(value).__name__}")


def collect(value: Union[TriValue, BracketStructure, LambdaPoly, DiffPoly]) -> LinearSystem:
    """One equation per (component, λ/μ monomial, jet monomial) with nonzero content."""
    eqs: List[LinForm] = []
    labels: list = []
    for where, f in _entries(value):
        for jets, g in sorted(_split_jets(f).items()):
            form = LinForm.from_diffpoly(g)
            if not form.is_zero():
                eqs.append(form)
                labels.append(where + (jets,))
    return LinearSystem(tuple(eqs), tuple(labels))


def prolong(sys: LinearSystem, order: int) -> LinearSystem:
    """``sys`` plus all of its (p, q)-derivatives up to total order ``order``."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    eqs = list(sys.equations)
    labels = list(sys.labels or (None,) * len(sys))
    seen = set(eqs)
    frontier = [(e, lab, (0, 0)) for e, lab in zip(sys.equations, labels)]
    for _ in range(order):
        nxt = []
        for e, lab, (a, b) in frontier:
            for comp in (0, 1):
                d = e.derive(comp)
                mi = (a + 1, b) if comp == 0 else (a, b + 1)
                if d.is_zero() or d in seen:
                    continue
                seen.add(d)
                eqs.append(d)
                labels.append(("d", mi, lab))
                nxt.append((d, lab, mi))
        frontier = nxt
    return LinearSystem(tuple(eqs), tuple(labels))


# -- conversion to sympy domains ----------------------------------------------

_VARS = ("p", "q", "c0", "c1", "c2", "c3", "c4")
_RING, *_GENS = ring(",".join(_VARS), QQ)


def _shift_of(forms: Sequence[LinForm]) -> List[Tuple[int, int]]:
    """Per row, the (p, q) exponents needed to clear negative powers."""
    out = []
    for f in forms:
        mp = mq = 0
        for r in f.terms.values():
            for (z, _, _) in r.terms:
                mp = min(mp, z_p(z))
                mq = min(mq, z_q(z))
        out.append((-mp, -mq))
    return out


def _to_ring(r: DiffPoly, shift: Tuple[int, int]):
    terms = {}
    for (z, _, _), c in r.terms.items():
        exps = (z_p(z) + shift[0], z_q(z) + shift[1]) + z_c(z)
        terms[exps] = terms.get(exps, QQ(0)) + QQ(int(c.numerator), int(c.denominator))
    return _RING.from_dict(terms) if terms else _RING.zero


def _from_ring(el, shift: Tuple[int, int] = (0, 0)) -> DiffPoly:
    out: dict = {}
    for exps, c in el.terms():
        z = z_pack(exps[0] - shift[0], exps[1] - shift[1], exps[2:])
        out[(z, (), None)] = Q(int(c.numerator), int(c.denominator))
    return DiffPoly._raw(out)


@dataclass
class Consistent:
    rank: int
    n_unknowns: int
    n_equations: int
    bound_relative: bool = True

    @property
    def ok(self) -> bool:
        return True

    @property
    def freedom(self) -> int:
        return self.n_unknowns - self.rank


@dataclass
class Inconsistent:
    """``sum_k multipliers[k] * equation[k]`` has no unknowns and equals ``constant``."""

    multipliers: Dict[int, DiffPoly]
    constant: DiffPoly
    n_unknowns: int
    n_equations: int
    constraints: List[DiffPoly] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return False

    def verify(self, sys: LinearSystem) -> bool:
        """Independent check that the combination reproduces ``constant``."""
        acc = ZERO
        for k, m in self.multipliers.items():
            acc = acc + sys.equations[k].to_diffpoly() * m
        return acc == self.constant and not acc.is_zero() and not acc.unknowns()


def consistency(sys: LinearSystem, max_certificates: int = 8) -> Union[Consistent, Inconsistent]:
    """Exact solvability of ``sys`` over the field of rational functions in
    ``p, q`` (and the formal constants).

    Rows are scaled by monomials to become polynomial; the augmented matrix is
    reduced fraction-free.  When the system is not solvable, a left kernel
    vector of the coefficient matrix with nonzero pairing against the constant
    terms is returned as certificate; up to ``max_certificates`` such pairings
    are listed in ``constraints`` (they are the conditions on the constants
    under which the system could still be solved).
    """
    eqs = [e for e in sys.equations if not e.is_zero()]
    index = [k for k, e in enumerate(sys.equations) if not e.is_zero()]
    unknowns = sys.unknowns
    col = {u: n for n, u in enumerate(unknowns)}
    if not eqs:
        return Consistent(0, len(unknowns), 0)
    shifts = _shift_of(eqs)
    n, m = len(eqs), len(unknowns)
    rows: Dict[int, Dict[int, object]] = {}
    for r, (e, sh) in enumerate(zip(eqs, shifts)):
        row = {}
        for u, coeff in e.terms.items():
            c = m if u is None else col[u]
            row[c] = _to_ring(coeff, sh)
        rows[r] = row
    dom = _RING.to_domain()
    A = DomainMatrix({r: {c: v for c, v in row.items() if c < m} for r, row in rows.items()},
                     (n, m), dom)
    rank = A.rank() if m else 0
    b = [rows[r].get(m, _RING.zero) for r in range(n)]
    if rank == DomainMatrix(rows, (n, m + 1), dom).rank():
        return Consistent(rank, m, n)
    if m:
        kernel = A.convert_to(dom.get_field()).transpose().nullspace().to_list()
        vectors = [_clear_denominators(vec) for vec in kernel]
    else:
        vectors = [[_RING.one if i == r else _RING.zero for i in range(n)] for r in range(n)]
    certs = []
    for y in vectors:
        pairing = sum((yi * bi for yi, bi in zip(y, b) if yi and bi), _RING.zero)
        if pairing:
            certs.append((y, pairing))
            if len(certs) >= max_certificates:
                break
    y, _ = certs[0]
    multipliers = {}
    for i, yi in enumerate(y):
        if yi:
            multipliers[index[i]] = _from_ring(yi, (-shifts[i][0], -shifts[i][1]))
    constant = ZERO
    for k, mu in multipliers.items():
        constant = constant + sys.equations[k].constant * mu
    constraints = []
    for _, c in certs:
        c = c.monic()
        mons = c.monoms()
        # p and q are units of the coefficient field
        f = _from_ring(c, (min(e[0] for e in mons), min(e[1] for e in mons)))
        if f not in constraints:
            constraints.append(f)
    return Inconsistent(multipliers, constant, m, n, constraints)


def _clear_denominators(vec) -> list:
    """Scale a vector of rational functions to polynomials (primitive up to Q)."""
    den = _RING.one
    for x in vec:
        if x:
            d = _RING(x.denom) if x.denom.ring is not _RING else x.denom
            den = den.lcm(d)
    out = []
    for x in vec:
        if not x:
            out.append(_RING.zero)
            continue
        num = _RING(x.numer) if x.numer.ring is not _RING else x.numer
        d = _RING(x.denom) if x.denom.ring is not _RING else x.denom
        out.append(num * den.exquo(d))
    return out


# -- modular screening ---------------------------------------------------------

SCREEN_PRIME = 2_147_483_647


@dataclass
class Screen:
    """Ranks of ``A`` and ``[A|b]`` after specializing ``p, q, c`` at a point mod a prime."""

    rank: int
    augmented_rank: int
    n_unknowns: int
    n_equations: int
    point: Tuple[int, ...]
    prime: int

    @property
    def consistent_at_point(self) -> bool:
        return self.rank == self.augmented_rank


def _eval_mod(r: DiffPoly, point: Sequence[int], prime: int) -> int:
    acc = 0
    for (z, _, _), c in r.terms.items():
        v = int(c.numerator) * pow(int(c.denominator), -1, prime)
        v = v * pow(point[0], z_p(z), prime) * pow(point[1], z_q(z), prime)
        for k, e in enumerate(z_c(z)):
            if e:
                v = v * pow(point[2 + k], e, prime)
        acc = (acc + v) % prime
    return acc


def screen_consistency(sys: LinearSystem, point: Optional[Sequence[int]] = None,
                       prime: int = SCREEN_PRIME, seed: int = 0) -> Screen:
    """Fast probabilistic solvability test at a random point of ``(p, q, c0..c4)``.

    Ranks at a point never exceed the generic ranks, so a jump of the augmented
    rank at a point where ``A`` keeps its generic rank is inconsistency; the
    exact statement must still come from :func:`consistency`.
    """
    import random

    from sympy.polys.domains import GF

    if point is None:
        rng = random.Random(seed)
        point = tuple(rng.randrange(2, prime - 1) for _ in _VARS)
    unknowns = sys.unknowns
    col = {u: n for n, u in enumerate(unknowns)}
    m = len(unknowns)
    rows: Dict[int, Dict[int, int]] = {}
    for e in sys.equations:
        row = {}
        for u, coeff in e.terms.items():
            v = _eval_mod(coeff, point, prime)
            if v:
                row[m if u is None else col[u]] = v
        if row:
            rows[len(rows)] = row
    n = len(rows)
    dom = GF(prime)
    if not n:
        return Screen(0, 0, m, len(sys), tuple(point), prime)
    conv = {r: {c: dom(v) for c, v in row.items()} for r, row in rows.items()}
    lhs = [{c: v for c, v in row.items() if c < m} for row in conv.values()]
    lhs = {r: row for r, row in enumerate(x for x in lhs if x)}
    rank = DomainMatrix(lhs, (len(lhs), m), dom).rank() if lhs else 0
    aug = DomainMatrix(conv, (n, m + 1), dom).rank()
    return Screen(rank, aug, m, len(sys), tuple(point), prime)


# -- rank over Q ---------------------------------------------------------------

def rational_rank(vectors: Sequence[Dict[object, object]]) -> int:
    """Rank over Q of sparse vectors given as ``{coordinate: rational}``."""
    coords: dict = {}
    rows = {}
    for r, v in enumerate(vectors):
        row = {}
        for k, x in v.items():
            x = Q(x)
            if x:
                c = coords.setdefault(k, len(coords))
                row[c] = QQ(int(x.numerator), int(x.denominator))
        if row:
            rows[len(rows)] = row
    if not rows:
        return 0
    return DomainMatrix(rows, (len(rows), len(coords)), QQ).rank()


# -- polynomial-ansatz solving -----------------------------------------------------

def polynomial_ansatz(unknowns: Iterable[UnknownSym], window) -> Dict[UnknownSym, List[Tuple[int, int]]]:
    """Exponents ``(a, b)`` of the monomials ``p^a q^b`` each base unknown ranges over.

    ``window`` is ``((a_min, a_max), (b_min, b_max))``.
    """
    (a0, a1), (b0, b1) = window
    mons = [(a, b) for a in range(a0, a1 + 1) for b in range(b0, b1 + 1)]
    return {u: list(mons) for u in sorted({u.base() for u in unknowns})}


def _falling(a: int, m: int) -> int:
    out = 1
    for k in range(m):
        out *= a - k
    return out


@dataclass
class BoundedSolution:
    consistent: bool
    dimension: int
    n_parameters: int
    particular: Dict[UnknownSym, DiffPoly]
    basis: List[Dict[UnknownSym, DiffPoly]]
    window: tuple

    def values(self, coefficients: Sequence = ()) -> Dict[UnknownSym, DiffPoly]:
        """The solution ``particular + sum coefficients[k] * basis[k]``."""
        out = dict(self.particular)
        for r, vec in zip(coefficients, self.basis):
            for u, f in vec.items():
                out[u] = out.get(u, ZERO) + f * r
        return out


def solve_bounded(sys: LinearSystem, window) -> BoundedSolution:
    """Solve ``sys`` with every unknown function a Laurent polynomial in the window.

    Equations must hold identically in ``p, q`` and in the formal constants.
    """
    subs = polynomial_ansatz(sys.unknowns, window)
    params = [(u, mon) for u, mons in subs.items() for mon in mons]
    pidx = {t: k for k, t in enumerate(params)}
    rows: Dict[int, Dict[int, object]] = {}
    consts: Dict[int, object] = {}
    nrow = 0
    for e in sys.equations:
        groups: dict = {}
        for (z, jets, u), c in e.to_diffpoly().terms.items():
            if u is None:
                g = groups.setdefault((z, jets), {})
                g[None] = g.get(None, 0) + c
                continue
            base, (m, n_) = u.base(), u.deriv
            for (a, b) in subs[base]:
                k = _falling(a, m) * _falling(b, n_)
                if k:
                    key = (z + z_pack(a - m, b - n_) - z_pack(), jets)
                    g = groups.setdefault(key, {})
                    col = pidx[(base, (a, b))]
                    g[col] = g.get(col, 0) + c * k
        for key in sorted(groups):
            g = groups[key]
            row = {col: QQ(int(c.numerator), int(c.denominator))
                   for col, c in g.items() if col is not None and c}
            c0 = g.get(None)
            if not row and not c0:
                continue
            rows[nrow] = row
            if c0:
                consts[nrow] = QQ(-int(c0.numerator), int(c0.denominator))
            nrow += 1
    n = len(params)
    if nrow == 0:
        basis = [_param_vector(subs, {t: Q(1)}) for t in params]
        return BoundedSolution(True, n, n, _param_vector(subs, {}), basis, window)
    aug = {r: ({**row, n: consts[r]} if r in consts else row) for r, row in rows.items()}
    M = DomainMatrix(aug, (nrow, n + 1), QQ)
    R, pivots = M.rref()
    if n in pivots:
        return BoundedSolution(False, -1, n, {}, [], window)
    rank = len(pivots)
    Rd = R.to_dok()
    piv_row = {c: r for r, c in enumerate(pivots)}
    particular = {}
    for c, r in piv_row.items():
        v = Rd.get((r, n))
        if v:
            particular[params[c]] = Q(int(v.numerator), int(v.denominator))
    free = [c for c in range(n) if c not in piv_row]
    by_row: Dict[int, Dict[int, object]] = {}
    for (r, c), v in Rd.items():
        if c < n and c not in piv_row and v:
            by_row.setdefault(r, {})[c] = v
    basis = []
    for fcol in free:
        vec = {params[fcol]: Q(1)}
        for c, r in piv_row.items():
            v = by_row.get(r, {}).get(fcol)
            if v:
                vec[params[c]] = -Q(int(v.numerator), int(v.denominator))
        basis.append(_param_vector(subs, vec))
    return BoundedSolution(True, n - rank, n, _param_vector(subs, particular), basis, window)


def _param_vector(subs: Dict[UnknownSym, list], tvals: dict) -> Dict[UnknownSym, DiffPoly]:
    """Values of the unknown functions from values of the monomial parameters."""
    out = {}
    for u, mons in subs.items():
        acc = {}
        for mon in mons:
            v = tvals.get((u, mon))
            if v:
                acc[(z_pack(*mon), (), None)] = Q(v)
        out[u] = DiffPoly._raw(acc)
    return out
