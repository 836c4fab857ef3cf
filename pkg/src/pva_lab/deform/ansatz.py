"""Gauge-fixed skewsymmetric ansatz ``M - M*`` and its inverse, coefficient extraction.

A slot of the ansatz is ``(S, jets, ij)``: a λ multi-index ``S``, a sorted
tuple of positive-order jet ids whose orders add up to ``degree - |S|``, and a
component pair ``ij``.  For odd ``|S|`` the matrix ``M_S`` is symmetric and
the slots are ``ij`` in {00, 01, 11}; for even ``|S|`` it is skewsymmetric and
only ``ij = 01`` is free.  The unknown attached to a slot is the coefficient
of ``λ^S * jets`` in ``M_ij`` as it stands.

In degree 3 slots are also addressable by the classical names
``A^{abc}_{ij}``, ``B^{ab,cl}_{ij}``, ``C^{a,bl,cm}_{ij}``, ``D^{a,bcl}_{ij}``,
``E^{abcl}_{ij}``, ``F^{abl,cm}_{ij}``, ``G^{al,bm,cn}_{ij}`` (indices 1, 2),
whose value differs from the raw slot coefficient by the multiplicity of the
index pattern (and the 1/2 in front of E, F, G).
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, NamedTuple, Optional, Tuple

from ..arena import DiffPoly, ONE_Z, Q, ZERO, jet_id, jet_order, jet_parts, unknown
from ..lambdacalc import BracketStructure, LambdaPoly, skew_build

__all__ = [
    "Slot", "GaugeError", "jet_monomials", "ansatz_slots", "slot_family", "slot_name",
    "parse_slot_name", "name_factor", "Ansatz", "build_ansatz", "AnsatzCoefficients",
    "extract_coefficients", "bracket_from_slots", "bracket_from_named", "monomial",
]


class Slot(NamedTuple):
    S: Tuple[int, int]
    jets: Tuple[int, ...]
    ij: Tuple[int, int]


class GaugeError(ValueError):
    """The bracket cannot be written as ``M - M*`` with ``M`` in the gauge."""

    def __init__(self, message: str, residual: Optional[BracketStructure] = None):
        super().__init__(message)
        self.residual = residual


def _jets_of_order(k: int) -> List[int]:
    return [jet_id(c, m, k - m) for m in range(k, -1, -1) for c in range(2)]


@lru_cache(maxsize=None)
def jet_monomials(d: int) -> Tuple[Tuple[int, ...], ...]:
    """All multisets of positive-order jets with total order ``d`` (sorted id tuples)."""
    alljets = sorted(j for k in range(1, d + 1) for j in _jets_of_order(k))
    out = []

    def rec(start: int, left: int, acc: tuple):
        if left == 0:
            out.append(acc)
            return
        for idx in range(start, len(alljets)):
            j = alljets[idx]
            o = jet_order(j)
            if o <= left:
                rec(idx, left - o, acc + (j,))

    rec(0, d, ())
    return tuple(sorted(out, key=lambda t: (len(t), t)))


SYM_PAIRS = ((0, 0), (0, 1), (1, 1))
SKEW_PAIRS = ((0, 1),)


@lru_cache(maxsize=None)
def ansatz_slots(degree: int) -> Tuple[Slot, ...]:
    slots = []
    for s in range(degree, -1, -1):
        pairs = SYM_PAIRS if s % 2 else SKEW_PAIRS
        for s1 in range(s, -1, -1):
            S = (s1, s - s1)
            for J in jet_monomials(degree - s):
                for ij in pairs:
                    slots.append(Slot(S, J, ij))
    return tuple(slots)


def monomial(slot: Slot) -> DiffPoly:
    """The jet monomial of a slot."""
    return DiffPoly._raw({(ONE_Z, tuple(sorted(slot.jets)), None): Q(1)})


_FAMILY_BY_SHAPE = {
    (3, ()): "A", (2, (1,)): "B", (1, (1, 1)): "C", (1, (2,)): "D",
    (0, (3,)): "E", (0, (1, 2)): "F", (0, (1, 1, 1)): "G",
}


def slot_family(slot: Slot) -> str:
    s = slot.S[0] + slot.S[1]
    shape = (s, tuple(sorted(jet_order(j) for j in slot.jets)))
    deg = s + sum(shape[1])
    if deg == 3:
        return _FAMILY_BY_SHAPE[shape]
    return f"K{deg}"


def _dirs(m: int, n: int) -> str:
    return "1" * m + "2" * n


def _jet_label(j: int) -> Tuple[str, str]:
    c, m, n = jet_parts(j)
    return _dirs(m, n), str(c + 1)


def slot_name(slot: Slot) -> str:
    """Classical name of a degree-3 slot, e.g. ``D^{2,221}_{11}``."""
    fam = slot_family(slot)
    lam = _dirs(*slot.S)
    ij = f"{slot.ij[0] + 1}{slot.ij[1] + 1}"
    labels = [_jet_label(j) for j in slot.jets]
    if fam == "A":
        up = lam
    elif fam == "B":
        up = f"{lam},{labels[0][0]}{labels[0][1]}"
    elif fam == "C":
        up = lam + "," + ",".join(d + c for d, c in sorted(labels))
    elif fam == "D":
        up = f"{lam},{labels[0][0]}{labels[0][1]}"
    elif fam == "E":
        up = f"{labels[0][0]},{labels[0][1]}"
    elif fam == "F":
        second = [l for l in labels if len(l[0]) == 2][0]
        first = [l for l in labels if len(l[0]) == 1][0]
        up = f"{second[0]}{second[1]},{first[0]}{first[1]}"
    elif fam == "G":
        up = ",".join(d + c for d, c in sorted(labels))
    else:
        js = ",".join(f"{'pq'[jet_parts(j)[0]]}[{jet_parts(j)[1]},{jet_parts(j)[2]}]" for j in slot.jets)
        return f"{fam}[l{slot.S[0]}{slot.S[1]};{js};{ij}]"
    return f"{fam}^{{{up}}}_{{{ij}}}"


_NAME = re.compile(r"^\s*([A-G])\s*\^?\s*\{?([0-9,\s]+)\}?\s*_\s*\{?\s*([12])\s*,?\s*([12])\s*\}?\s*$")
_TEMPLATE = {"A": "aaa", "B": "aadc", "C": "adcdc", "D": "addc", "E": "dddc",
             "F": "ddcdc", "G": "dcdcdc"}


def _jet_from(dirs: str, comp: str) -> int:
    return jet_id(int(comp) - 1, dirs.count("1"), dirs.count("2"))


def parse_slot_name(name: str) -> Tuple[Slot, int]:
    """Slot and sign (+1/-1) for a classical name; indices are read left to right.

    ``E^{2,221}`` and ``E^{222,1}`` both denote ``∂_y^3 p``; the sign is -1 when
    a skewsymmetric family is addressed through ``_{21}``.
    """
    m = _NAME.match(name)
    if not m:
        raise KeyError(f"not a coefficient name: {name!r}")
    fam, up, i, j = m.group(1), re.sub(r"[,\s]", "", m.group(2)), int(m.group(3)), int(m.group(4))
    tmpl = _TEMPLATE[fam]
    if len(up) != len(tmpl) or any(ch not in "12" for ch in up):
        raise KeyError(f"bad index pattern in {name!r}")
    lam = ""
    jets: List[int] = []
    cur = ""
    for t, ch in zip(tmpl, up):
        if t == "a":
            lam += ch
        elif t == "d":
            cur += ch
        else:
            jets.append(_jet_from(cur, ch))
            cur = ""
    S = (lam.count("1"), lam.count("2"))
    sym = (S[0] + S[1]) % 2 == 1
    ij = (i - 1, j - 1)
    sign = 1
    if ij == (1, 0):
        ij = (0, 1)
        if not sym:
            sign = -1
    if not sym and ij[0] == ij[1]:
        raise KeyError(f"{name!r}: skewsymmetric family has no diagonal entries")
    return Slot(S, tuple(sorted(jets)), ij), sign


def _perms(seq) -> int:
    c = Counter(seq)
    out = factorial(len(seq))
    for v in c.values():
        out //= factorial(v)
    return out


def name_factor(slot: Slot) -> Fraction:
    """Raw slot coefficient divided by the value of the classical coefficient."""
    fam = slot_family(slot)
    lam = _dirs(*slot.S)
    labels = [_jet_label(j) for j in slot.jets]
    if fam == "A":
        return Fraction(_perms(lam))
    if fam == "B":
        return Fraction(_perms(lam))
    if fam == "C":
        return Fraction(2 if labels[0] != labels[1] else 1)
    if fam == "D":
        return Fraction(_perms(labels[0][0]))
    if fam == "E":
        return Fraction(_perms(labels[0][0]), 2)
    if fam == "F":
        second = [l for l in labels if len(l[0]) == 2][0]
        return Fraction(_perms(second[0]), 2)
    if fam == "G":
        return Fraction(_perms(labels), 2)
    return Fraction(1)


def _assemble(values: Dict[Slot, DiffPoly]) -> List[List[LambdaPoly]]:
    raw = [[{}, {}], [{}, {}]]
    for slot, val in values.items():
        if val.is_zero():
            continue
        term = val * monomial(slot)
        i, j = slot.ij
        targets = [((i, j), 1)]
        if i != j:
            skew = (slot.S[0] + slot.S[1]) % 2 == 0
            targets.append(((j, i), -1 if skew else 1))
        for (a, b), sgn in targets:
            d = raw[a][b]
            d[slot.S] = d.get(slot.S, ZERO) + (term if sgn == 1 else -term)
    return [[LambdaPoly(raw[i][j]) for j in range(2)] for i in range(2)]


def bracket_from_slots(values: Dict[Slot, DiffPoly]) -> BracketStructure:
    """``M - M*`` for explicit raw slot values."""
    return skew_build(_assemble(values))


def bracket_from_named(values: Dict[str, object]) -> BracketStructure:
    """``M - M*`` from classical coefficient names and their values."""
    raw: Dict[Slot, DiffPoly] = {}
    for name, val in values.items():
        slot, sign = parse_slot_name(name)
        v = val if isinstance(val, DiffPoly) else DiffPoly.constant(val)
        f = name_factor(slot)
        raw[slot] = raw.get(slot, ZERO) + v * Q(f.numerator * sign, f.denominator)
    return bracket_from_slots(raw)


@dataclass
class Ansatz:
    degree: int
    structure: BracketStructure
    slots: Tuple[Slot, ...]
    family: str

    @property
    def count(self) -> int:
        return len(self.slots)

    def unknown_for(self, slot: Slot):
        return unknown(slot_family(slot) if self.family == "" else self.family, tuple(slot))


def build_ansatz(degree: int, family: str = "") -> Ansatz:
    """Parametric skewsymmetric bracket of the given degree, one unknown per free slot.

    ``family`` overrides the unknown-family tag (default: A..G in degree 3, ``K<d>``
    otherwise).
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    slots = ansatz_slots(degree)
    values = {s: unknown(family or slot_family(s), tuple(s)) for s in slots}
    return Ansatz(degree, bracket_from_slots(values), slots, family)


class AnsatzCoefficients:
    """Raw slot coefficients of ``M`` (jet-free polynomials, possibly with unknowns)."""

    def __init__(self, degree: int, raw: Dict[Slot, DiffPoly]):
        self.degree = degree
        self.raw = {k: v for k, v in raw.items() if not v.is_zero()}

    def __getitem__(self, slot: Slot) -> DiffPoly:
        return self.raw.get(slot, ZERO)

    def named(self, name: str) -> DiffPoly:
        slot, sign = parse_slot_name(name)
        f = name_factor(slot)
        return self[slot] * Q(sign * f.denominator, f.numerator)

    def nonzero_names(self) -> Dict[str, DiffPoly]:
        out = {}
        for slot, v in sorted(self.raw.items()):
            f = name_factor(slot)
            out[slot_name(slot)] = v * Q(f.denominator, f.numerator)
        return out

    def to_bracket(self) -> BracketStructure:
        return bracket_from_slots(self.raw)

    def __eq__(self, other) -> bool:
        return isinstance(other, AnsatzCoefficients) and self.raw == other.raw


def _jet_monomial_split(f: DiffPoly) -> Dict[Tuple[int, ...], dict]:
    groups: dict = {}
    for (z, jets, u), c in f.terms.items():
        groups.setdefault(jets, {})[(z, (), u)] = c
    return groups


def extract_coefficients(K: BracketStructure, degree: Optional[int] = None) -> AnsatzCoefficients:
    """Invert ``M -> M - M*`` on the gauge by peeling λ-degrees from the top.

    At λ-degree ``s`` the top part of ``M_ij - M*_ji`` is ``M_ij - (-1)^s M_ji``,
    which is ``2 M_ij`` in the gauge; the contribution of ``M^{(s)}`` is then
    removed from every lower degree.  Raises :class:`GaugeError` with the
    leftover residual if ``K`` is not of this form (in particular if it is not
    skewsymmetric).
    """
    if degree is None:
        degree = K.degree()
        if degree is None:
            if K.is_zero():
                return AnsatzCoefficients(0, {})
            raise GaugeError("bracket is not degree-homogeneous")
    rest = [[K.entries[i][j] for j in range(2)] for i in range(2)]
    top = max((e.lambda_degree() for row in rest for e in row if not e.is_zero()), default=0)
    raw: Dict[Slot, DiffPoly] = {}
    half = Q(1, 2)
    for s in range(top, -1, -1):
        pairs = SYM_PAIRS if s % 2 else SKEW_PAIRS
        m_s = [[LambdaPoly(), LambdaPoly()], [LambdaPoly(), LambdaPoly()]]
        for i, j in pairs:
            part = {S: c * half for S, c in rest[i][j].coeffs.items() if S[0] + S[1] == s}
            if not part:
                continue
            m_s[i][j] = LambdaPoly(part)
            if i != j:
                m_s[j][i] = m_s[i][j] if s % 2 else -m_s[i][j]
            for S, c in part.items():
                for J, terms in _jet_monomial_split(c).items():
                    if sum(jet_order(x) for x in J) + s != degree:
                        raise GaugeError(f"term of wrong degree at λ^{S}", None)
                    raw[Slot(S, J, (i, j))] = DiffPoly._raw(terms)
        if all(e.is_zero() for row in m_s for e in row):
            continue
        built = skew_build(m_s)
        rest = [[rest[i][j] - built.entries[i][j] for j in range(2)] for i in range(2)]
    residual = BracketStructure(rest)
    if not residual.is_zero():
        raise GaugeError("bracket is not of the form M - M* (not skewsymmetric?)", residual)
    return AnsatzCoefficients(degree, raw)
