"""λ-polynomials, the master formula, and skewsymmetric brackets built as M - M*."""

from __future__ import annotations

from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .arena import (
    DiffPoly, ZERO, add_into, jet_parts, mul_terms, _clean,
)

__all__ = [
    "LambdaPoly", "BracketStructure", "BiValue", "shift_pow", "shift_lambda",
    "master_bracket", "adjoint_star", "skew_build", "skew_check",
]

MultiIndex = Tuple[int, int]


class LambdaPoly:
    """Polynomial in (λ1, λ2) with :class:`DiffPoly` coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Dict[MultiIndex, DiffPoly]] = None):
        self.coeffs: Dict[MultiIndex, DiffPoly] = {
            tuple(k): v for k, v in (coeffs or {}).items() if not v.is_zero()
        }

    @classmethod
    def from_raw(cls, raw: Dict[MultiIndex, dict]) -> "LambdaPoly":
        out = cls()
        for k, t in raw.items():
            t = _clean(t)
            if t:
                out.coeffs[k] = DiffPoly._raw(t)
        return out

    @classmethod
    def const(cls, f: DiffPoly, s: MultiIndex = (0, 0)) -> "LambdaPoly":
        return cls({s: f})

    def __getitem__(self, s: MultiIndex) -> DiffPoly:
        return self.coeffs.get(tuple(s), ZERO)

    def items(self):
        return self.coeffs.items()

    def __add__(self, other: "LambdaPoly") -> "LambdaPoly":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return LambdaPoly(out)

    def __neg__(self) -> "LambdaPoly":
        return LambdaPoly({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "LambdaPoly") -> "LambdaPoly":
        return self + (-other)

    def __mul__(self, other) -> "LambdaPoly":
        if isinstance(other, LambdaPoly):
            raw: dict = {}
            for s1, a in self.coeffs.items():
                for s2, b in other.coeffs.items():
                    k = (s1[0] + s2[0], s1[1] + s2[1])
                    add_into(raw.setdefault(k, {}), mul_terms(a.terms, b.terms))
            return LambdaPoly.from_raw(raw)
        return LambdaPoly({k: v * other for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, LambdaPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    def map(self, fn: Callable[[DiffPoly], DiffPoly]) -> "LambdaPoly":
        return LambdaPoly({k: fn(v) for k, v in self.coeffs.items()})

    def lambda_degree(self) -> int:
        return max((s[0] + s[1] for s in self.coeffs), default=0)

    def degree(self) -> Optional[int]:
        """Total degree (λ-degree plus differential degree) if homogeneous."""
        degs = set()
        for s, f in self.coeffs.items():
            d = f.degree()
            if d is None:
                return None
            degs.add(d + s[0] + s[1])
        return degs.pop() if len(degs) == 1 else None

    def __repr__(self) -> str:
        from .exprio import print_lambdapoly

        return f"LambdaPoly({print_lambdapoly(self)!r})"


def _shift_raw(g: DiffPoly, n: MultiIndex, out: dict, base: MultiIndex = (0, 0), scale=1) -> None:
    """Accumulate ``scale * λ^base * (λ+∂)^n g`` into ``out`` (λ-key -> term dict)."""
    n1, n2 = n
    for k1 in range(n1 + 1):
        gx = g.derive((k1, 0))
        if gx.is_zero():
            break
        b1 = comb(n1, k1)
        for k2 in range(n2 + 1):
            gxy = gx.derive((0, k2))
            if gxy.is_zero():
                break
            key = (base[0] + n1 - k1, base[1] + n2 - k2)
            add_into(out.setdefault(key, {}), gxy.terms, scale * b1 * comb(n2, k2))


def shift_pow(g: DiffPoly, m: MultiIndex, sign: int = 1) -> LambdaPoly:
    """``(sign*(λ+∂))^m g`` expanded binomially."""
    raw: dict = {}
    scale = 1 if sign > 0 or (m[0] + m[1]) % 2 == 0 else -1
    _shift_raw(g, m, raw, scale=scale)
    return LambdaPoly.from_raw(raw)


def shift_lambda(h: LambdaPoly, m: MultiIndex) -> LambdaPoly:
    """``(λ+∂)^m`` applied to every coefficient of ``h`` (λ commutes with ∂)."""
    raw: dict = {}
    for s, c in h.coeffs.items():
        _shift_raw(c, m, raw, base=s)
    return LambdaPoly.from_raw(raw)


class BracketStructure:
    """2x2 array of :class:`LambdaPoly`; entry (i, j) is ``{u^i_λ u^j}`` (0 = p, 1 = q)."""

    __slots__ = ("entries", "_shift_cache")

    def __init__(self, entries: Sequence[Sequence[LambdaPoly]]):
        self.entries: Tuple[Tuple[LambdaPoly, LambdaPoly], ...] = tuple(
            tuple(row) for row in entries)
        self._shift_cache: dict = {}

    @classmethod
    def zero(cls) -> "BracketStructure":
        return cls([[LambdaPoly(), LambdaPoly()], [LambdaPoly(), LambdaPoly()]])

    def __getitem__(self, ij: Tuple[int, int]) -> LambdaPoly:
        return self.entries[ij[0]][ij[1]]

    def map(self, fn: Callable[[LambdaPoly], LambdaPoly]) -> "BracketStructure":
        return BracketStructure([[fn(e) for e in row] for row in self.entries])

    def __add__(self, other: "BracketStructure") -> "BracketStructure":
        return BracketStructure([[self.entries[i][j] + other.entries[i][j] for j in range(2)]
                                 for i in range(2)])

    def __sub__(self, other: "BracketStructure") -> "BracketStructure":
        return BracketStructure([[self.entries[i][j] - other.entries[i][j] for j in range(2)]
                                 for i in range(2)])

    def __neg__(self) -> "BracketStructure":
        return self.map(lambda e: -e)

    def scale(self, r) -> "BracketStructure":
        return self.map(lambda e: e * r)

    def times(self, f: DiffPoly) -> "BracketStructure":
        return self.map(lambda e: e * f)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BracketStructure):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def degree(self) -> Optional[int]:
        degs = {e.degree() for row in self.entries for e in row if not e.is_zero()}
        return degs.pop() if len(degs) == 1 else None

    def substitute_constants(self, values) -> "BracketStructure":
        return self.map(lambda e: e.map(lambda f: f.substitute_constants(values)))

    def truncate_jet_factors(self, cap: int) -> "BracketStructure":
        return self.map(lambda e: e.map(lambda f: f.truncate_jet_factors(cap)))

    def shifted(self, i: int, j: int, m: MultiIndex) -> Dict[MultiIndex, DiffPoly]:
        """Cached ``(λ+∂)^m {u^i_λ u^j}`` as a map λ-key -> DiffPoly."""
        key = (i, j, m)
        hit = self._shift_cache.get(key)
        if hit is None:
            raw: dict = {}
            for s, c in self.entries[i][j].coeffs.items():
                _shift_raw(c, m, raw, base=s)
            hit = {k: DiffPoly._raw(v) for k, v in ((k, _clean(t)) for k, t in raw.items()) if v}
            self._shift_cache[key] = hit
        return hit

    def __repr__(self) -> str:
        from .exprio import print_bracket

        return f"BracketStructure({print_bracket(self)!r})"


def _jet_mi(jid: int) -> Tuple[int, MultiIndex]:
    if jid < 2:
        return jid, (0, 0)
    c, m, n = jet_parts(jid)
    return c, (m, n)


def _outer_generator(P: BracketStructure, i: int, g: DiffPoly, cap: Optional[int],
                     sink: Callable[[MultiIndex, dict], None]) -> None:
    """``{u^i_λ g}_P`` via the master formula with a generator in the first slot."""
    for jid in g.jet_ids():
        j, m = _jet_mi(jid)
        if P.entries[i][j].is_zero():
            continue
        dg = g.partial(jid)
        if dg.is_zero():
            continue
        dterms = dg.terms
        if cap is not None:
            dterms = {k: v for k, v in dterms.items() if len(k[1]) <= cap}
            if not dterms:
                continue
        for s, c in P.shifted(i, j, m).items():
            cterms = c.terms
            if cap is not None:
                cterms = {k: v for k, v in cterms.items() if len(k[1]) <= cap}
            prod = mul_terms(dterms, cterms)
            if cap is not None:
                prod = {k: v for k, v in prod.items() if len(k[1]) <= cap}
            if prod:
                sink(s, prod)


def _inner_left(P: BracketStructure, f: DiffPoly, k: int, cap: Optional[int]) -> dict:
    """``{f_ν u^k}_P`` as a raw map ν-key -> term dict."""
    out: dict = {}
    for jid in f.jet_ids():
        i, l = _jet_mi(jid)
        entry = P.entries[i][k]
        if entry.is_zero():
            continue
        df = f.partial(jid)
        if df.is_zero():
            continue
        if cap is not None:
            df = df.truncate_jet_factors(cap)
            if df.is_zero():
                continue
        sign = -1 if (l[0] + l[1]) % 2 else 1
        for s, b in entry.coeffs.items():
            bterms = b.terms
            if cap is not None:
                bterms = {kk: v for kk, v in bterms.items() if len(kk[1]) <= cap}
                if not bterms:
                    continue
            raw: dict = {}
            _shift_raw(df, (s[0] + l[0], s[1] + l[1]), raw, scale=sign)
            for nu, t in raw.items():
                t = _clean(t)
                if cap is not None:
                    t = {kk: v for kk, v in t.items() if len(kk[1]) <= cap}
                if not t:
                    continue
                prod = mul_terms(bterms, t)
                if cap is not None:
                    prod = {kk: v for kk, v in prod.items() if len(kk[1]) <= cap}
                add_into(out.setdefault(nu, {}), prod)
    return out


def master_bracket(P: BracketStructure, f: DiffPoly, g: DiffPoly) -> LambdaPoly:
    """``{f_λ g}`` for the structure ``P`` through the master formula."""
    inner: List[dict] = [_inner_left(P, f, j, None) for j in range(2)]
    inner_lp = [LambdaPoly.from_raw(r) for r in inner]
    raw: dict = {}
    for jid in g.jet_ids():
        j, m = _jet_mi(jid)
        if inner_lp[j].is_zero():
            continue
        dg = g.partial(jid)
        if dg.is_zero():
            continue
        for s, c in shift_lambda(inner_lp[j], m).coeffs.items():
            add_into(raw.setdefault(s, {}), mul_terms(dg.terms, c.terms))
    return LambdaPoly.from_raw(raw)


def adjoint_star(m: LambdaPoly) -> LambdaPoly:
    """``M* = sum_S (-λ-∂)^S M_S``."""
    raw: dict = {}
    for s, c in m.coeffs.items():
        _shift_raw(c, s, raw, scale=-1 if (s[0] + s[1]) % 2 else 1)
    return LambdaPoly.from_raw(raw)


def skew_build(m: Sequence[Sequence[LambdaPoly]]) -> BracketStructure:
    """Skewsymmetric structure with entries ``M_ij - M*_ji``."""
    return BracketStructure([[m[i][j] - adjoint_star(m[j][i]) for j in range(2)]
                             for i in range(2)])


def skew_check(P: BracketStructure) -> BracketStructure:
    """Residual of skewsymmetry: entry (i, j) is ``{u^j_λ u^i} + ({u^i_λ u^j})*``."""
    return BracketStructure([[P.entries[j][i] + adjoint_star(P.entries[i][j]) for j in range(2)]
                             for i in range(2)])


class BiValue:
    """Polynomial in (λ, μ) with DiffPoly coefficients; keys are ``(l1, l2, m1, m2)``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Dict[tuple, DiffPoly]] = None):
        self.coeffs: Dict[tuple, DiffPoly] = {
            tuple(k): v for k, v in (coeffs or {}).items() if not v.is_zero()}

    @classmethod
    def from_raw(cls, raw: Dict[tuple, dict]) -> "BiValue":
        out = cls()
        for k, t in raw.items():
            t = _clean(t)
            if t:
                out.coeffs[k] = DiffPoly._raw(t)
        return out

    def __getitem__(self, key) -> DiffPoly:
        return self.coeffs.get(tuple(key), ZERO)

    def items(self):
        return self.coeffs.items()

    def __add__(self, other: "BiValue") -> "BiValue":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return BiValue(out)

    def __neg__(self) -> "BiValue":
        return BiValue({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "BiValue") -> "BiValue":
        return self + (-other)

    def scale(self, r) -> "BiValue":
        return BiValue({k: v * r for k, v in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiValue):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    def map(self, fn: Callable[[DiffPoly], DiffPoly]) -> "BiValue":
        return BiValue({k: fn(v) for k, v in self.coeffs.items()})

    def degree(self) -> Optional[int]:
        degs = set()
        for k, f in self.coeffs.items():
            d = f.degree()
            if d is None:
                return None
            degs.add(d + sum(k))
        return degs.pop() if len(degs) == 1 else None
