"""Brackets of hydrodynamic type: (g, b) data, the Mokhov compatibility
conditions, and the obstruction tensors of a pair of metrics.

Indices are 0-based throughout (0 = p, 1 = q; axis 0 = x, axis 1 = y).
``g[a][i][j]`` is ``g^{a ij}`` and ``b[a][i][j][k]`` is ``b^{a ij}_k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, List

from .arena import DiffPoly, ONE, ZERO, jet, P, Q_
from .lambdacalc import BracketStructure, LambdaPoly

__all__ = [
    "HydroStructure", "DegeneracyError", "to_lambda", "mokhov_check", "MokhovReport",
    "obstruction_tensors", "ObstructionReport", "builtin", "BUILTINS", "Frac",
]

R2 = range(2)


class DegeneracyError(ValueError):
    """A metric that has to be inverted is singular."""


@dataclass(frozen=True)
class HydroStructure:
    g: tuple  # g[axis][i][j]
    b: tuple  # b[axis][i][j][k]

    @classmethod
    def build(cls, g, b=None) -> "HydroStructure":
        gg = tuple(tuple(tuple(_dp(g[a][i][j]) for j in R2) for i in R2) for a in R2)
        if b is None:
            bb = tuple(tuple(tuple(tuple(ZERO for _ in R2) for _ in R2) for _ in R2) for _ in R2)
        else:
            bb = tuple(tuple(tuple(tuple(_dp(b[a][i][j][k]) for k in R2) for j in R2)
                             for i in R2) for a in R2)
        return cls(gg, bb)

    def swapped_b(self) -> "HydroStructure":
        """Same metrics with ``b^x`` and ``b^y`` exchanged."""
        return HydroStructure(self.g, (self.b[1], self.b[0]))


def _dp(x) -> DiffPoly:
    return x if isinstance(x, DiffPoly) else DiffPoly.constant(x)


def to_lambda(H: HydroStructure) -> BracketStructure:
    """``{u^i_λ u^j} = sum_a g^{a ji} λ_a + b^{a ji}_k u^k_a``."""
    rows = []
    for i in R2:
        row = []
        for j in R2:
            coeffs: Dict[tuple, DiffPoly] = {}
            free = ZERO
            for a in R2:
                key = (1, 0) if a == 0 else (0, 1)
                coeffs[key] = coeffs.get(key, ZERO) + H.g[a][j][i]
                for k in R2:
                    free = free + H.b[a][j][i][k] * jet(k, 1 - a, a)
            coeffs[(0, 0)] = free
            row.append(LambdaPoly(coeffs))
        rows.append(row)
    return BracketStructure(rows)


def _d(f: DiffPoly, k: int) -> DiffPoly:
    """Partial derivative with respect to the field value ``u^k``."""
    return f.partial(k)


@dataclass
class MokhovReport:
    """Nonzero residuals per condition family, keyed by the free indices."""

    residuals: Dict[str, Dict[tuple, DiffPoly]]

    def family_ok(self, name: str) -> bool:
        return not self.residuals.get(name)

    @property
    def ok(self) -> bool:
        return all(not v for v in self.residuals.values())

    def failing(self) -> List[str]:
        return [k for k, v in self.residuals.items() if v]


MOKHOV_FAMILIES = ("M1", "M2", "M3", "M4", "M5", "M6", "M7")


def mokhov_check(H: HydroStructure, literal_m6: bool = False) -> MokhovReport:
    """Evaluate the seven families of Mokhov conditions exactly.

    ``literal_m6`` reproduces a printed variant of the sixth family in which a
    factor reads ``b^{a ja}_a`` (index clash); by default the factor is
    ``b^{a ji}_a``, which makes the right side the mirror of the left side
    under ``(alpha, i) <-> (beta, j)``.
    """
    g, b = H.g, H.b
    res: Dict[str, Dict[tuple, DiffPoly]] = {k: {} for k in MOKHOV_FAMILIES}

    def put(fam, key, val):
        if not val.is_zero():
            res[fam][key] = val

    for al, i, j in product(R2, R2, R2):
        put("M1", (al, i, j), g[al][i][j] - g[al][j][i])
        for k in R2:
            put("M2", (al, i, j, k), _d(g[al][i][j], k) - b[al][i][j][k] - b[al][j][i][k])

    def m3(al, be, i, j, k):
        return sum((g[al][a][i] * b[be][j][k][a] - g[be][a][j] * b[al][i][k][a] for a in R2), ZERO)

    def m5(al, be, i, j, k, r):
        out = ZERO
        for a in R2:
            out = out + g[al][a][i] * (_d(b[be][j][k][a], r) - _d(b[be][j][k][r], a))
            out = out + b[al][i][j][a] * b[be][a][k][r] - b[al][i][k][a] * b[be][a][j][r]
        return out

    for al, be in product(R2, R2):
        for i, j, k in product(R2, R2, R2):
            put("M3", (al, be, i, j, k), m3(al, be, i, j, k) + m3(be, al, i, j, k))
            put("M4", (al, be, i, j, k),
                m3(al, be, i, j, k) + m3(al, be, j, k, i) + m3(al, be, k, i, j))
            for r in R2:
                put("M5", (al, be, i, j, k, r), m5(al, be, i, j, k, r) + m5(be, al, i, j, k, r))
                lhs = ZERO
                rhs = ZERO
                for a in R2:
                    lhs = lhs + g[be][a][i] * _d(b[al][j][k][r], a)
                    lhs = lhs - b[be][i][j][a] * b[al][a][k][r] - b[be][i][k][a] * b[al][j][a][r]
                    rhs = rhs + g[al][a][j] * _d(b[be][i][k][r], a)
                    first = b[al][j][a][a] if literal_m6 else b[al][j][i][a]
                    rhs = rhs - first * b[be][a][k][r] - b[al][j][k][a] * b[be][i][a][r]
                put("M6", (al, be, i, j, k, r), lhs - rhs)
                for s in R2:
                    put("M7", (al, be, i, j, k, r, s), _m7(g, b, al, be, i, j, k, r, s))
    return MokhovReport(res)


def _m7(g, b, al, be, i, j, k, r, s) -> DiffPoly:
    def bracket(a1, a2, i, j, k, r):
        out = ZERO
        for a in R2:
            out = out + g[a1][a][i] * (_d(b[a2][j][k][a], r) - _d(b[a2][j][k][r], a))
            out = out + b[a1][i][j][a] * b[a2][a][k][r] - b[a1][i][k][a] * b[a2][a][j][r]
        return out

    out = _d(bracket(al, be, i, j, k, r), s) + _d(bracket(be, al, i, j, k, s), r)
    for (x, y, z) in ((i, j, k), (j, k, i), (k, i, j)):
        for a in R2:
            out = out + b[be][a][x][r] * (_d(b[al][y][z][s], a) - _d(b[al][y][z][a], s))
            out = out + b[al][a][x][s] * (_d(b[be][y][z][r], a) - _d(b[be][y][z][a], r))
    return out


# -- rational functions in (p, q) ---------------------------------------------

class Frac:
    """Quotient ``num / den`` of jet-free polynomials; zero iff ``num`` is zero."""

    __slots__ = ("num", "den")

    def __init__(self, num: DiffPoly, den: DiffPoly = ONE):
        self.num = num
        self.den = den

    def __add__(self, o: "Frac") -> "Frac":
        if self.den == o.den:
            return Frac(self.num + o.num, self.den)
        return Frac(self.num * o.den + o.num * self.den, self.den * o.den)

    def __neg__(self) -> "Frac":
        return Frac(-self.num, self.den)

    def __sub__(self, o: "Frac") -> "Frac":
        return self + (-o)

    def __mul__(self, o: "Frac") -> "Frac":
        return Frac(self.num * o.num, self.den * o.den)

    def partial(self, k: int) -> "Frac":
        return Frac(self.num.partial(k) * self.den - self.num * self.den.partial(k),
                    self.den * self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def value(self) -> DiffPoly:
        """Exact polynomial value when the denominator is a Laurent monomial."""
        return self.num * self.den.inverse_monomial()


FZERO = Frac(ZERO)


def _fsum(xs) -> Frac:
    out = FZERO
    for x in xs:
        out = out + x
    return out


def _inverse(m) -> List[List[Frac]]:
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if det.is_zero():
        raise DegeneracyError("metric is singular")
    return [[Frac(m[1][1], det), Frac(-m[0][1], det)],
            [Frac(-m[1][0], det), Frac(m[0][0], det)]]


GATING_CONDITIONS = ("a", "b", "c", "d")


@dataclass
class ObstructionReport:
    gamma: list          # gamma[a][i][j][k] = Γ^{a i}_{jk}
    t_lower: dict        # (a, b) -> [i][j][k] = T^{ab i}_{jk}
    t_upper: dict        # (a, b) -> [i][j][k] = T^{ab ijk}
    residuals: Dict[str, Dict[tuple, Frac]]

    @property
    def t_zero(self) -> bool:
        return all(x.is_zero() for t in self.t_lower.values()
                   for x in _flat3(t))

    def condition_ok(self, name: str) -> bool:
        return not self.residuals.get(name)

    @property
    def ok(self) -> bool:
        return all(not v for k, v in self.residuals.items() if k in GATING_CONDITIONS)


def _flat3(t):
    return [t[i][j][k] for i in R2 for j in R2 for k in R2]


def obstruction_tensors(H: HydroStructure) -> ObstructionReport:
    """Christoffel symbols, obstruction tensors and residuals of conditions (a)-(d).

    ``Γ_{a jk}^i = -g^a_{js} b^{a si}_k`` with ``g^a_{..}`` the inverse metric; an
    axis with vanishing ``b^a`` has ``Γ^a = 0`` and needs no inversion.  The
    covariant derivative in (d) is ``∇_r T^{ijk} = ∂_r T^{ijk} + Γ^i_{rs} T^{sjk}
    + Γ^j_{rs} T^{isk} + Γ^k_{rs} T^{ijs}`` using the connection of the first
    metric.  Condition (b) is the cyclic sum ``T^{ijk} + T^{jki} + T^{kij}``; the
    variant ``T^{ijk} + T^{jki} + T^{kji}`` is reported as ``b_alt`` and does not
    count towards :attr:`ObstructionReport.ok`.
    """
    g, b = H.g, H.b
    gamma = []
    for a in R2:
        if all(b[a][i][j][k].is_zero() for i in R2 for j in R2 for k in R2):
            gamma.append([[[FZERO for _ in R2] for _ in R2] for _ in R2])
            continue
        try:
            ginv = _inverse(g[a])
        except DegeneracyError:
            raise DegeneracyError(f"metric g^{'xy'[a]} is singular but b^{'xy'[a]} is not zero")
        # gamma[a][i][j][k] = Γ^{a i}_{jk} = -sum_s g_{js} b^{si}_k
        gamma.append([[[_fsum(Frac(-b[a][s][i][k]) * ginv[j][s] for s in R2)
                        for k in R2] for j in R2] for i in R2])
    gf = [[[Frac(g[a][i][j]) for j in R2] for i in R2] for a in R2]
    t_lower: dict = {}
    t_upper: dict = {}
    for al, be in product(R2, R2):
        tl = [[[gamma[be][i][j][k] - gamma[al][i][j][k] for k in R2] for j in R2] for i in R2]
        t_lower[(al, be)] = tl
        tu = [[[_fsum(gf[al][i][x] * gf[be][k][y] * tl[j][x][y] for x in R2 for y in R2)
                for k in R2] for j in R2] for i in R2]
        t_upper[(al, be)] = tu
    res: Dict[str, Dict[tuple, Frac]] = {"a": {}, "b": {}, "b_alt": {}, "c": {}, "d": {}}

    def put(name, key, v: Frac):
        if not v.is_zero():
            res[name][key] = v

    for al, be in product(R2, R2):
        tu, tl = t_upper[(al, be)], t_lower[(al, be)]
        gm = gamma[al]
        for i, j, k in product(R2, R2, R2):
            put("a", (al, be, i, j, k), tu[i][j][k] - tu[k][j][i])
            put("b", (al, be, i, j, k), tu[i][j][k] + tu[j][k][i] + tu[k][i][j])
            put("b_alt", (al, be, i, j, k), tu[i][j][k] + tu[j][k][i] + tu[k][j][i])
            for r in R2:
                lhs = _fsum(tu[i][j][l] * tl[k][l][r] for l in R2)
                rhs = _fsum(tu[i][k][l] * tl[j][l][r] for l in R2)
                put("c", (al, be, i, j, k, r), lhs - rhs)
                cov = tu[i][j][k].partial(r)
                for s in R2:
                    cov = cov + gm[i][r][s] * tu[s][j][k] + gm[j][r][s] * tu[i][s][k] \
                        + gm[k][r][s] * tu[i][j][s]
                put("d", (al, be, r, i, j, k), cov)
    return ObstructionReport(gamma, t_lower, t_upper, res)


# -- built-in normal forms ------------------------------------------------------

def _zero_b():
    return [[[[ZERO, ZERO], [ZERO, ZERO]], [[ZERO, ZERO], [ZERO, ZERO]]] for _ in R2]


def _p1() -> HydroStructure:
    return HydroStructure.build([[[1, 0], [0, 0]], [[0, 0], [0, 1]]])


def _p2() -> HydroStructure:
    return HydroStructure.build([[[0, 1], [1, 0]], [[0, 0], [0, 1]]])


def _plp() -> HydroStructure:
    g = [[[2 * P, Q_], [Q_, ZERO]], [[ZERO, P], [P, 2 * Q_]]]
    b = _zero_b()
    b[0][0][0][0] = ONE   # b^{x 11}_1
    b[0][1][0][1] = ONE   # b^{x 21}_2
    b[1][0][1][0] = ONE   # b^{y 12}_1
    b[1][1][1][1] = ONE   # b^{y 22}_2
    return HydroStructure.build(g, b)


BUILTINS = {"p1": _p1, "p2": _p2, "plp": _plp}


def builtin(name: str) -> HydroStructure:
    try:
        return BUILTINS[name.lower()]()
    except KeyError:
        raise KeyError(f"unknown hydrodynamic structure {name!r}; choose from {sorted(BUILTINS)}")
