"""PVA-Jacobi identity, the symmetric Schouten pairing, and the Poisson differential."""

from __future__ import annotations

import warnings
from itertools import product
from math import comb
from typing import Callable, Dict, Iterator, Optional, Tuple

from .arena import DiffPoly, add_into, _clean, jet_parts
from .lambdacalc import (
    BiValue, BracketStructure, _inner_left, _outer_generator, master_bracket,
    skew_check,
)
from .arena import jet

__all__ = [
    "EvoField", "TriValue", "apply_field", "jacobiator", "schouten",
    "d_on_field", "d_on_2cochain", "TRIPLES",
]

TRIPLES = tuple(product(range(2), repeat=3))
Triple = Tuple[int, int, int]


class EvoField:
    """Evolutionary vector field with characteristics ``(X^p, X^q)``."""

    __slots__ = ("characteristics",)

    def __init__(self, xp: DiffPoly, xq: DiffPoly):
        self.characteristics = (xp, xq)

    def __getitem__(self, i: int) -> DiffPoly:
        return self.characteristics[i]

    def degree(self) -> Optional[int]:
        degs = {x.degree() for x in self.characteristics if not x.is_zero()}
        return degs.pop() if len(degs) == 1 else None


def apply_field(X: EvoField, f: DiffPoly) -> DiffPoly:
    """Prolonged action ``sum_{i,L} (∂^L X^i) ∂f/∂u^i_L``."""
    out: dict = {}
    for jid in f.jet_ids():
        if jid < 2:
            i, mi = jid, (0, 0)
        else:
            i, m, n = jet_parts(jid)
            mi = (m, n)
        xi = X[i]
        if xi.is_zero():
            continue
        df = f.partial(jid)
        if df.is_zero():
            continue
        add_into(out, (xi.derive(mi) * df).terms)
    return DiffPoly._raw(_clean(out))


class TriValue:
    """Per component triple (i, j, k), a :class:`BiValue` in (λ, μ)."""

    __slots__ = ("components",)

    def __init__(self, components: Optional[Dict[Triple, BiValue]] = None):
        self.components: Dict[Triple, BiValue] = {
            tuple(k): v for k, v in (components or {}).items() if not v.is_zero()}

    @classmethod
    def from_raw(cls, raw: Dict[Triple, dict]) -> "TriValue":
        return cls({t: BiValue.from_raw(r) for t, r in raw.items()})

    def __getitem__(self, ijk: Triple) -> BiValue:
        return self.components.get(tuple(ijk), BiValue())

    def items(self):
        return self.components.items()

    def __add__(self, other: "TriValue") -> "TriValue":
        out = dict(self.components)
        for k, v in other.components.items():
            out[k] = out[k] + v if k in out else v
        return TriValue(out)

    def __neg__(self) -> "TriValue":
        return TriValue({k: -v for k, v in self.components.items()})

    def __sub__(self, other: "TriValue") -> "TriValue":
        return self + (-other)

    def scale(self, r) -> "TriValue":
        return TriValue({k: v.scale(r) for k, v in self.components.items()})

    def map(self, fn: Callable[[DiffPoly], DiffPoly]) -> "TriValue":
        return TriValue({k: v.map(fn) for k, v in self.components.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, TriValue):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(frozenset(self.components.items()))

    def is_zero(self) -> bool:
        return not self.components

    def coefficients(self) -> Iterator[Tuple[Triple, tuple, DiffPoly]]:
        for t, bv in sorted(self.components.items()):
            for k, f in sorted(bv.coeffs.items()):
                yield t, k, f

    def degree(self) -> Optional[int]:
        degs = {bv.degree() for bv in self.components.values()}
        return degs.pop() if len(degs) == 1 else None

    def constant_monomials(self) -> set:
        """Monomials in ``c0..c4`` (as exponent tuples) occurring anywhere."""
        out = set()
        for _, _, f in self.coefficients():
            out.update(f.split_constants())
        return out

    def substitute_constants(self, values) -> "TriValue":
        return self.map(lambda f: f.substitute_constants(values))


def _acc(out: dict, t: Triple, key: tuple, terms: dict) -> None:
    add_into(out.setdefault(t, {}).setdefault(key, {}), terms)


def _t1(outer: BracketStructure, inner: BracketStructure, out: dict, sign: int,
        cap: Optional[int]) -> None:
    """``sign * {u^i_λ {u^j_μ u^k}_inner}_outer``."""
    for i, j, k in TRIPLES:
        for tmu, g in inner.entries[j][k].coeffs.items():
            def sink(s, prod, t=(i, j, k), tmu=tmu):
                _acc(out, t, (s[0], s[1], tmu[0], tmu[1]),
                     prod if sign == 1 else {kk: -v for kk, v in prod.items()})
            _outer_generator(outer, i, g, cap, sink)


def _t2(outer: BracketStructure, inner: BracketStructure, out: dict, sign: int,
        cap: Optional[int]) -> None:
    """``sign * {u^j_μ {u^i_λ u^k}_inner}_outer``."""
    for i, j, k in TRIPLES:
        for tlam, g in inner.entries[i][k].coeffs.items():
            def sink(s, prod, t=(i, j, k), tlam=tlam):
                _acc(out, t, (tlam[0], tlam[1], s[0], s[1]),
                     prod if sign == 1 else {kk: -v for kk, v in prod.items()})
            _outer_generator(outer, j, g, cap, sink)


def _t3(outer: BracketStructure, inner: BracketStructure, out: dict, sign: int,
        cap: Optional[int]) -> None:
    """``sign * {{u^i_λ u^j}_inner {}_{λ+μ} u^k}_outer``."""
    for i, j in product(range(2), repeat=2):
        for tlam, f in inner.entries[i][j].coeffs.items():
            for k in range(2):
                nu_raw = _inner_left(outer, f, k, cap)
                for (n1, n2), terms in nu_raw.items():
                    terms = _clean(terms)
                    if not terms:
                        continue
                    for a1 in range(n1 + 1):
                        for a2 in range(n2 + 1):
                            mult = sign * comb(n1, a1) * comb(n2, a2)
                            key = (tlam[0] + a1, tlam[1] + a2, n1 - a1, n2 - a2)
                            add_into(out.setdefault((i, j, k), {}).setdefault(key, {}),
                                     terms, mult)


def _warn_if_not_skew(P: BracketStructure, what: str) -> None:
    if not skew_check(P).is_zero():
        warnings.warn(f"{what}: bracket is not skewsymmetric", RuntimeWarning, stacklevel=3)


def jacobiator(P: BracketStructure, check: bool = True, cap: Optional[int] = None) -> TriValue:
    """``{u^i_λ{u^j_μ u^k}} - {u^j_μ{u^i_λ u^k}} - {{u^i_λ u^j}_{λ+μ} u^k}``."""
    if check:
        _warn_if_not_skew(P, "jacobiator")
    out: dict = {}
    _t1(P, P, out, 1, cap)
    _t2(P, P, out, -1, cap)
    _t3(P, P, out, -1, cap)
    return TriValue.from_raw(out)


def schouten(A: BracketStructure, B: BracketStructure, check: bool = True,
             cap: Optional[int] = None) -> TriValue:
    """Symmetric pairing ``[A, B]``; ``[P, P]`` is twice the jacobiator.

    ``cap`` keeps only output terms with at most that many positive-order jet
    factors; the dropped terms never feed the retained ones.
    """
    if check:
        _warn_if_not_skew(A, "schouten")
        _warn_if_not_skew(B, "schouten")
    out: dict = {}
    _t1(A, B, out, 1, cap)
    _t1(B, A, out, 1, cap)
    _t2(A, B, out, -1, cap)
    _t2(B, A, out, -1, cap)
    _t3(B, A, out, -1, cap)
    _t3(A, B, out, -1, cap)
    return TriValue.from_raw(out)


def d_on_2cochain(P: BracketStructure, K: BracketStructure, check: bool = True,
                  cap: Optional[int] = None) -> TriValue:
    """``d_P K`` on a skewsymmetric bracket, summed term by term in the order
    ``{u^i{u^j u^k}_K}_P - {u^j{u^i u^k}_K}_P - {{u^i u^j}_K u^k}_P`` followed by
    the same three with P and K exchanged."""
    if check:
        _warn_if_not_skew(K, "d_on_2cochain")
    out: dict = {}
    _t1(P, K, out, 1, cap)
    _t2(P, K, out, -1, cap)
    _t3(P, K, out, -1, cap)
    _t1(K, P, out, 1, cap)
    _t2(K, P, out, -1, cap)
    _t3(K, P, out, -1, cap)
    return TriValue.from_raw(out)


_GENERATORS = (jet(0), jet(1))


def d_on_field(P: BracketStructure, X: EvoField) -> BracketStructure:
    """``{X^i_λ u^j} + {u^i_λ X^j} - X({u^i_λ u^j})`` entrywise."""
    rows = []
    for i in range(2):
        row = []
        for j in range(2):
            e = (master_bracket(P, X[i], _GENERATORS[j])
                 + master_bracket(P, _GENERATORS[i], X[j])
                 - P.entries[i][j].map(lambda c: apply_field(X, c)))
            row.append(e)
        rows.append(row)
    return BracketStructure(rows)
