"""Linear functionals on degree-3 brackets that vanish on every coboundary."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from ..arena import DiffPoly, ZERO
from ..exprio import parse_diffpoly
from ..lambdacalc import BracketStructure
from .ansatz import AnsatzCoefficients, extract_coefficients, parse_slot_name
from .catalog import data_text, transpose_labels

__all__ = ["FunctionalTerm", "CoboundaryFunctional", "coboundary_functionals",
           "evaluate_functionals", "BASES"]

BASES = ("p1", "p2", "plp")


@dataclass(frozen=True)
class FunctionalTerm:
    coefficient: DiffPoly
    name: str
    deriv: Optional[int] = None    # None, 0 (d/dp) or 1 (d/dq)


@dataclass(frozen=True)
class CoboundaryFunctional:
    base: str
    name: str
    terms: Tuple[FunctionalTerm, ...]
    transpose: bool = False

    def on_coefficients(self, C: AnsatzCoefficients) -> DiffPoly:
        out = ZERO
        for t in self.terms:
            v = C.named(t.name)
            if t.deriv is not None:
                v = v.partial(t.deriv)
            out = out + t.coefficient * v
        return out

    def coefficients_of(self, K: BracketStructure) -> AnsatzCoefficients:
        return extract_coefficients(transpose_labels(K) if self.transpose else K, 3)

    def __call__(self, K: BracketStructure) -> DiffPoly:
        return self.on_coefficients(self.coefficients_of(K))


def _parse(text: str) -> Dict[str, List[CoboundaryFunctional]]:
    out: Dict[str, List[CoboundaryFunctional]] = {b: [] for b in BASES}
    header = None
    terms: List[FunctionalTerm] = []

    def flush():
        if header is not None:
            base, name, flags = header
            out[base].append(CoboundaryFunctional(base, name, tuple(terms), "transpose" in flags))

    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            flush()
            parts = line.strip("[]").split()
            header = (parts[0], parts[1], tuple(parts[2:]))
            terms = []
            continue
        parts = line.split()
        deriv = None
        if len(parts) == 3:
            deriv = {"d_p": 0, "d_q": 1}[parts[1]]
        parse_slot_name(parts[-1])      # reject unknown names early
        terms.append(FunctionalTerm(parse_diffpoly(parts[0]), parts[-1], deriv))
    flush()
    return out


@lru_cache(maxsize=None)
def _table() -> Dict[str, Tuple[CoboundaryFunctional, ...]]:
    return {k: tuple(v) for k, v in _parse(data_text("functionals.txt")).items()}


def coboundary_functionals(base: str) -> Tuple[CoboundaryFunctional, ...]:
    """The listed functionals for ``p1`` (4), ``p2`` (b0..b4) or ``plp`` (JComp1..4)."""
    try:
        return _table()[base.lower()]
    except KeyError:
        raise KeyError(f"unknown base {base!r}; choose from {BASES}")


def evaluate_functionals(base: str, K: BracketStructure) -> Dict[str, DiffPoly]:
    fs = coboundary_functionals(base)
    cache: Dict[bool, AnsatzCoefficients] = {}
    out = {}
    for f in fs:
        if f.transpose not in cache:
            cache[f.transpose] = f.coefficients_of(K)
        out[f.name] = f.on_coefficients(cache[f.transpose])
    return out
