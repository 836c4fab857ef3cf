"""Differential polynomials in two components (p, q) and two space variables (x, y).

A :class:`DiffPoly` is a sparse map from monomial keys to exact rationals.  A
monomial key is a triple ``(z, jets, unk)``:

``z``
    packed integer holding the Laurent exponents of the zero-jets ``p`` and
    ``q`` and the (nonnegative) exponents of the formal constants ``c0..c4``.
    Multiplying monomials adds the packed integers.
``jets``
    sorted tuple of positive-order jet ids, with repetition for powers.
``unk``
    ``None`` or an :class:`UnknownSym`, an unknown function of ``(p, q)``
    used by the parametric layer.  Keys carry at most one unknown; every
    computation in this package is affine-linear in them.

Jet ids pack ``(component, m, n)`` as ``(m * 64 + n) * 2 + component`` where
``m``/``n`` count x/y derivatives, so a total x-derivative adds 128 and a
y-derivative adds 2.  Ids 0 and 1 are the zero-jets ``p`` and ``q``.
"""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, NamedTuple, Optional, Tuple

from gmpy2 import mpq

__all__ = [
    "Q", "UnknownSym", "DiffPoly", "LocalFunctional", "NonlinearError",
    "jet_id", "jet_parts", "P", "Q_", "jet", "const", "unknown", "one", "zero",
    "total_derivative", "partial", "variational_derivative", "degree",
    "P_COMP", "Q_COMP", "X_AXIS", "Y_AXIS", "NUM_CONSTANTS",
]

Q = mpq

P_COMP, Q_COMP = 0, 1
X_AXIS, Y_AXIS = 0, 1
NUM_CONSTANTS = 5

_ZBITS = 12
_ZMASK = (1 << _ZBITS) - 1
_ZBIAS = 1 << (_ZBITS - 1)
_CBITS = 8
_CMASK = (1 << _CBITS) - 1
_CSHIFT = 2 * _ZBITS

ONE_Z = _ZBIAS | (_ZBIAS << _ZBITS)
P_UNIT = 1
Q_UNIT = 1 << _ZBITS
C_UNITS = tuple(1 << (_CSHIFT + _CBITS * k) for k in range(NUM_CONSTANTS))
_ZERO_JET_UNITS = (P_UNIT, Q_UNIT)

_AXIS_STEP = (128, 2)


class NonlinearError(ValueError):
    """Raised when two unknown functions would be multiplied together."""


class UnknownSym(NamedTuple):
    """Unknown function of (p, q): ``family`` tag, ``slot`` indices and the
    (p, q)-derivative multi-index ``deriv``."""

    family: str
    slot: tuple
    deriv: Tuple[int, int] = (0, 0)

    def diff(self, comp: int) -> "UnknownSym":
        a, b = self.deriv
        return UnknownSym(self.family, self.slot, (a + 1, b) if comp == 0 else (a, b + 1))

    def base(self) -> "UnknownSym":
        return UnknownSym(self.family, self.slot)


def jet_id(comp: int, m: int, n: int) -> int:
    if m < 0 or n < 0 or m >= 64 or n >= 64:
        raise ValueError(f"jet order out of range: ({m}, {n})")
    return (m * 64 + n) * 2 + comp


def jet_parts(jid: int) -> Tuple[int, int, int]:
    """Return ``(component, m, n)`` for a jet id."""
    return jid & 1, jid >> 7, (jid >> 1) & 63


def jet_order(jid: int) -> int:
    return (jid >> 7) + ((jid >> 1) & 63)


def z_pack(pe: int = 0, qe: int = 0, cexp: Iterable[int] = ()) -> int:
    z = ONE_Z + pe * P_UNIT + qe * Q_UNIT
    for k, e in enumerate(cexp):
        z += e * C_UNITS[k]
    return z


def z_p(z: int) -> int:
    return (z & _ZMASK) - _ZBIAS


def z_q(z: int) -> int:
    return ((z >> _ZBITS) & _ZMASK) - _ZBIAS


def z_c(z: int) -> Tuple[int, ...]:
    return tuple((z >> (_CSHIFT + _CBITS * k)) & _CMASK for k in range(NUM_CONSTANTS))


def z_cpart(z: int) -> int:
    """Bits of ``z`` holding the constants only."""
    return z >> _CSHIFT


def z_strip_c(z: int) -> int:
    return z & ((1 << _CSHIFT) - 1)


def _merge(j1: tuple, j2: tuple) -> tuple:
    if not j1:
        return j2
    if not j2:
        return j1
    return tuple(sorted(j1 + j2))


def _replace_one(jets: tuple, pos: int, new: int) -> tuple:
    rest = jets[:pos] + jets[pos + 1:]
    return tuple(sorted(rest + (new,)))


def _insert(jets: tuple, new: int) -> tuple:
    return tuple(sorted(jets + (new,)))


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


def mul_terms(a: dict, b: dict) -> dict:
    """Product of raw term dictionaries."""
    out: dict = {}
    get = out.get
    for (z1, j1, u1), c1 in a.items():
        for (z2, j2, u2), c2 in b.items():
            if u1 is not None and u2 is not None:
                raise NonlinearError(f"product of unknowns {u1} and {u2}")
            key = (z1 + z2 - ONE_Z, _merge(j1, j2), u1 if u2 is None else u2)
            v = get(key)
            out[key] = c1 * c2 if v is None else v + c1 * c2
    return _clean(out)


def add_into(out: dict, a: dict, scale=1) -> None:
    """``out += scale * a`` in place on raw term dictionaries (no zero stripping)."""
    get = out.get
    if scale == 1:
        for k, c in a.items():
            v = get(k)
            out[k] = c if v is None else v + c
    else:
        for k, c in a.items():
            v = get(k)
            out[k] = c * scale if v is None else v + c * scale


def _derive_terms(terms: dict, axis: int) -> dict:
    step = _AXIS_STEP[axis]
    zp_jet = jet_id(P_COMP, 1, 0) if axis == 0 else jet_id(P_COMP, 0, 1)
    zq_jet = zp_jet + 1
    out: dict = {}
    get = out.get

    def acc(key, c):
        v = get(key)
        out[key] = c if v is None else v + c

    for (z, jets, u), c in terms.items():
        pe = (z & _ZMASK) - _ZBIAS
        if pe:
            acc((z - P_UNIT, _insert(jets, zp_jet), u), c * pe)
        qe = ((z >> _ZBITS) & _ZMASK) - _ZBIAS
        if qe:
            acc((z - Q_UNIT, _insert(jets, zq_jet), u), c * qe)
        prev = None
        for pos, jid in enumerate(jets):
            if jid == prev:
                continue
            prev = jid
            mult = jets.count(jid)
            acc((z, _replace_one(jets, pos, jid + step), u), c * mult)
        if u is not None:
            acc((z, _insert(jets, zp_jet), u.diff(0)), c)
            acc((z, _insert(jets, zq_jet), u.diff(1)), c)
    return _clean(out)


def _partial_terms(terms: dict, jid: int) -> dict:
    out: dict = {}
    get = out.get
    if jid < 2:
        unit = _ZERO_JET_UNITS[jid]
        for (z, jets, u), c in terms.items():
            e = (z & _ZMASK) - _ZBIAS if jid == 0 else ((z >> _ZBITS) & _ZMASK) - _ZBIAS
            if e:
                key = (z - unit, jets, u)
                v = get(key)
                out[key] = c * e if v is None else v + c * e
            if u is not None:
                key = (z, jets, u.diff(jid))
                v = get(key)
                out[key] = c if v is None else v + c
        return _clean(out)
    for (z, jets, u), c in terms.items():
        k = jets.count(jid)
        if k:
            pos = jets.index(jid)
            key = (z, jets[:pos] + jets[pos + 1:], u)
            v = get(key)
            out[key] = c * k if v is None else v + c * k
    return _clean(out)


class DiffPoly:
    """Immutable sparse differential polynomial with exact rational coefficients."""

    __slots__ = ("terms", "_deriv", "_hash")

    def __init__(self, terms: Optional[dict] = None, _clean_input: bool = True):
        if terms is None:
            terms = {}
        elif _clean_input:
            terms = {k: Q(v) for k, v in terms.items() if v}
        self.terms: Dict[tuple, mpq] = terms
        self._deriv: list = [None, None]
        self._hash: Optional[int] = None

    @classmethod
    def _raw(cls, terms: dict) -> "DiffPoly":
        return cls(terms, _clean_input=False)

    @classmethod
    def constant(cls, value) -> "DiffPoly":
        value = Q(value)
        return cls._raw({(ONE_Z, (), None): value} if value else {})

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> "DiffPoly":
        other = _coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        add_into(out, other.terms)
        return DiffPoly._raw(_clean(out))

    __radd__ = __add__

    def __neg__(self) -> "DiffPoly":
        return DiffPoly._raw({k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> "DiffPoly":
        other = _coerce(other)
        out = dict(self.terms)
        add_into(out, other.terms, -1)
        return DiffPoly._raw(_clean(out))

    def __rsub__(self, other) -> "DiffPoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "DiffPoly":
        if isinstance(other, DiffPoly):
            return DiffPoly._raw(mul_terms(self.terms, other.terms))
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, r) -> "DiffPoly":
        r = Q(r)
        if not r:
            return ZERO
        if r == 1:
            return self
        return DiffPoly._raw({k: v * r for k, v in self.terms.items()})

    def __truediv__(self, other) -> "DiffPoly":
        if isinstance(other, DiffPoly):
            return self * other.inverse_monomial()
        return self.scale(1 / Q(other))

    def __pow__(self, n: int) -> "DiffPoly":
        if n < 0:
            return self.inverse_monomial() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse_monomial(self) -> "DiffPoly":
        """Inverse of a single term ``r * p^a * q^b`` (a unit of the Laurent ring)."""
        if len(self.terms) != 1:
            raise ZeroDivisionError("only Laurent monomials in p, q are invertible")
        (z, jets, u), c = next(iter(self.terms.items()))
        if jets or u is not None or z_cpart(z):
            raise ZeroDivisionError("only Laurent monomials in p, q are invertible")
        return DiffPoly._raw({(2 * ONE_Z - z, (), None): 1 / c})

    # -- comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, DiffPoly):
            return self.terms == other.terms
        if isinstance(other, (int, mpq)) or hasattr(other, "denominator"):
            return self.terms == DiffPoly.constant(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        from .exprio import print_diffpoly

        return f"DiffPoly({print_diffpoly(self)!r})"

    # -- calculus ---------------------------------------------------------
    def total_derivative(self, axis: int) -> "DiffPoly":
        d = self._deriv[axis]
        if d is None:
            d = DiffPoly._raw(_derive_terms(self.terms, axis))
            self._deriv[axis] = d
        return d

    def dx(self) -> "DiffPoly":
        return self.total_derivative(X_AXIS)

    def dy(self) -> "DiffPoly":
        return self.total_derivative(Y_AXIS)

    def derive(self, mi: Tuple[int, int]) -> "DiffPoly":
        """Iterated total derivative ``d_x^mi[0] d_y^mi[1]`` (cached along the chain)."""
        f = self
        for _ in range(mi[0]):
            f = f.dx()
        for _ in range(mi[1]):
            f = f.dy()
        return f

    def partial(self, jid: int) -> "DiffPoly":
        return DiffPoly._raw(_partial_terms(self.terms, jid))

    def jet_ids(self) -> set:
        """Jet ids (including zero-jets 0/1) the polynomial actually depends on."""
        out = set()
        for (z, jets, u) in self.terms:
            out.update(jets)
            if u is not None:
                out.add(0)
                out.add(1)
            else:
                if z_p(z):
                    out.add(0)
                if z_q(z):
                    out.add(1)
        return out

    # -- structure --------------------------------------------------------
    def degree(self) -> Optional[int]:
        """Homogeneous differential degree, or ``None`` if inhomogeneous or zero."""
        degs = {sum(jet_order(j) for j in jets) for (_, jets, _) in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def max_jet_factors(self) -> int:
        return max((len(jets) for (_, jets, _) in self.terms), default=0)

    def truncate_jet_factors(self, cap: int) -> "DiffPoly":
        """Drop terms with more than ``cap`` positive-order jet factors."""
        return DiffPoly._raw({k: v for k, v in self.terms.items() if len(k[1]) <= cap})

    def is_jet_free(self) -> bool:
        return all(not jets for (_, jets, _) in self.terms)

    def unknowns(self) -> set:
        return {u for (_, _, u) in self.terms if u is not None}

    def has_constants(self) -> bool:
        return any(z_cpart(z) for (z, _, _) in self.terms)

    def split_constants(self) -> Dict[Tuple[int, ...], "DiffPoly"]:
        """Group terms by their monomial in the formal constants ``c0..c4``."""
        groups: dict = {}
        for (z, jets, u), c in self.terms.items():
            groups.setdefault(z_c(z), {})[(z_strip_c(z) , jets, u)] = c
        return {k: DiffPoly._raw(v) for k, v in groups.items()}

    def substitute_constants(self, values: Dict[int, object]) -> "DiffPoly":
        """Replace constants ``c_k`` by rationals for every ``k`` in ``values``."""
        vals = {k: Q(v) for k, v in values.items()}
        out: dict = {}
        for (z, jets, u), c in self.terms.items():
            exps = z_c(z)
            for k, r in vals.items():
                e = exps[k]
                if e:
                    c = c * r ** e
                    z -= e * C_UNITS[k]
            if c:
                key = (z, jets, u)
                out[key] = out.get(key, 0) + c
        return DiffPoly._raw(_clean(out))

    def substitute_unknowns(self, values: Dict[UnknownSym, "DiffPoly"]) -> "DiffPoly":
        """Replace base unknown functions by jet-free polynomials in (p, q).

        Derivative symbols ``f^{(a,b)}`` are replaced by the corresponding
        partial derivatives of the substituted value.
        """
        out: dict = {}
        cache: dict = {}
        for (z, jets, u), c in self.terms.items():
            key = (z, jets, u)
            if u is None or u.base() not in values:
                out[key] = out.get(key, 0) + c
                continue
            val = cache.get(u)
            if val is None:
                val = values[u.base()]
                for _ in range(u.deriv[0]):
                    val = val.partial(0)
                for _ in range(u.deriv[1]):
                    val = val.partial(1)
                cache[u] = val
            for (z2, j2, u2), c2 in val.terms.items():
                k2 = (z + z2 - ONE_Z, _merge(jets, j2), u2)
                out[k2] = out.get(k2, 0) + c * c2
        return DiffPoly._raw(_clean(out))

    def sorted_terms(self) -> Iterator[Tuple[tuple, mpq]]:
        return iter(sorted(self.terms.items(), key=lambda kv: term_sort_key(kv[0])))


def term_sort_key(key: tuple) -> tuple:
    z, jets, u = key
    jet_key = tuple(sorted(jet_parts(j) for j in jets))
    ukey = () if u is None else (u.family, u.slot, u.deriv)
    return (ukey, len(jets), jet_key, tuple(-e for e in z_c(z)), -z_p(z), -z_q(z))


def _coerce(x) -> DiffPoly:
    if isinstance(x, DiffPoly):
        return x
    return DiffPoly.constant(x)


ZERO = DiffPoly()
ONE = DiffPoly.constant(1)


def zero() -> DiffPoly:
    return ZERO


def one() -> DiffPoly:
    return ONE


def jet(comp: int, m: int = 0, n: int = 0, power: int = 1) -> DiffPoly:
    """The jet variable ``u^comp_{(m,n)}`` raised to ``power``.

    Zero-jets accept negative powers; positive-order jets do not.
    """
    if m == 0 and n == 0:
        return DiffPoly._raw({(ONE_Z + power * _ZERO_JET_UNITS[comp], (), None): Q(1)})
    if power < 0:
        raise ValueError("positive-order jets cannot carry negative powers")
    return DiffPoly._raw({(ONE_Z, (jet_id(comp, m, n),) * power, None): Q(1)})


P = jet(P_COMP)
Q_ = jet(Q_COMP)


def const(k: int) -> DiffPoly:
    """Formal constant ``c_k`` (``k`` in 0..4)."""
    return DiffPoly._raw({(ONE_Z + C_UNITS[k], (), None): Q(1)})


def unknown(family: str, slot: tuple, deriv: Tuple[int, int] = (0, 0)) -> DiffPoly:
    return DiffPoly._raw({(ONE_Z, (), UnknownSym(family, tuple(slot), tuple(deriv))): Q(1)})


def total_derivative(f: DiffPoly, axis: int) -> DiffPoly:
    return f.total_derivative(axis)


def partial(f: DiffPoly, comp: int, m: int = 0, n: int = 0) -> DiffPoly:
    """Formal partial derivative with respect to the jet ``u^comp_{(m,n)}``."""
    return f.partial(comp if m == 0 and n == 0 else jet_id(comp, m, n))


def _jid_mi(jid: int) -> Tuple[int, Tuple[int, int]]:
    if jid < 2:
        return jid, (0, 0)
    comp, m, n = jet_parts(jid)
    return comp, (m, n)


def variational_derivative(f: DiffPoly, comp: int) -> DiffPoly:
    """Euler operator ``sum_L (-d)^L df/du^comp_L``."""
    out = ZERO
    for jid in f.jet_ids():
        c, mi = _jid_mi(jid)
        if c != comp:
            continue
        term = f.partial(jid).derive(mi)
        out = out + (term if (mi[0] + mi[1]) % 2 == 0 else -term)
    return out


def degree(f: DiffPoly) -> Optional[int]:
    return f.degree()


class LocalFunctional:
    """Local functional ``∫ density`` modulo total x- and y-derivatives."""

    __slots__ = ("density",)

    def __init__(self, density: DiffPoly):
        self.density = density

    def variational_gradient(self) -> Tuple[DiffPoly, DiffPoly]:
        return (variational_derivative(self.density, P_COMP),
                variational_derivative(self.density, Q_COMP))

    def _constant_part(self) -> mpq:
        return self.density.terms.get((ONE_Z, (), None), Q(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalFunctional):
            return NotImplemented
        diff = LocalFunctional(self.density - other.density)
        return (all(g.is_zero() for g in diff.variational_gradient())
                and diff._constant_part() == 0)

    def __hash__(self):
        raise TypeError("LocalFunctional equality is modulo total derivatives; not hashable")
