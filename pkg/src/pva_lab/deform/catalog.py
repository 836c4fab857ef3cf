"""Named degree-3 deformations of the three hydrodynamic normal forms.

The full brackets live in ``pva_lab/data/*.pva``; derived names pick one
constant out of a family by setting the other constants to zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Dict, Tuple

from ..arena import const
from ..exprio import parse_bracket_file
from ..hydro import builtin, to_lambda
from ..lambdacalc import BracketStructure

__all__ = ["Representative", "representative", "REPRESENTATIVE_NAMES", "base_bracket",
           "data_text", "bracket_by_name", "transpose_labels"]


@dataclass(frozen=True)
class Representative:
    name: str
    base: str
    bracket: BracketStructure
    constants: Tuple[int, ...]
    description: str = ""
    normalization: Tuple[Tuple[int, str], ...] = ()

    def normalized(self) -> BracketStructure:
        """The bracket with the catalog's preferred values of the constants substituted."""
        if not self.normalization:
            return self.bracket
        return self.bracket.substitute_constants({k: Fraction(v) for k, v in self.normalization})


_FILES = {
    "h23-p1": ("p1", "h23_p1.pva", (1, 2, 3, 4), "degree-3 cocycle family of P1"),
    "h23-p2": ("p2", "h23_p2.pva", (0, 1, 2, 3, 4), "degree-3 cocycle family of P2"),
    "h23-plp-1": ("plp", "h23_plp_1.pva", (), "first degree-3 basis cocycle of P_LP"),
    "h23-plp-2": ("plp", "h23_plp_2.pva", (), "second degree-3 basis cocycle of P_LP"),
}


def _derived() -> Dict[str, Tuple[str, int]]:
    out = {}
    for k in (1, 2, 3, 4):
        out[f"p1-c{k}"] = ("h23-p1", k)
    for k in (0, 1, 2, 3, 4):
        out[f"p2-defo{k}"] = ("h23-p2", k)
    return out


_DERIVED = _derived()

# p2-defo3 with c3 = 3/2 has leading term 2 p l2^3 in [2,2]
_NORMALIZATION = {"p2-defo3": ((3, "3/2"),)}
REPRESENTATIVE_NAMES = tuple(sorted(list(_FILES) + ["h23-plp"] + list(_DERIVED)))


def data_text(filename: str) -> str:
    return resources.files("pva_lab").joinpath("data", filename).read_text(encoding="utf-8")


def transpose_labels(K: BracketStructure) -> BracketStructure:
    """Exchange the entries ``[1,2]`` and ``[2,1]``."""
    e = K.entries
    return BracketStructure([[e[0][0], e[1][0]], [e[0][1], e[1][1]]])


@lru_cache(maxsize=None)
def representative(name: str) -> Representative:
    """Look up a catalog bracket by name (see :data:`REPRESENTATIVE_NAMES`)."""
    key = name.lower()
    if key in _FILES:
        base, fname, consts, desc = _FILES[key]
        return Representative(key, base, parse_bracket_file(data_text(fname)), consts, desc)
    if key == "h23-plp":
        b1 = representative("h23-plp-1").bracket
        b2 = representative("h23-plp-2").bracket
        K = b1.times(const(1)) + b2.times(const(2))
        return Representative(key, "plp", K, (1, 2), "c1 * h23-plp-1 + c2 * h23-plp-2")
    if key in _DERIVED:
        parent, k = _DERIVED[key]
        rep = representative(parent)
        zeros = {c: 0 for c in rep.constants if c != k}
        return Representative(key, rep.base, rep.bracket.substitute_constants(zeros), (k,),
                              f"{parent} with only c{k} kept", _NORMALIZATION.get(key, ()))
    raise KeyError(f"unknown representative {name!r}; choose from {', '.join(REPRESENTATIVE_NAMES)}")


def base_bracket(base: str) -> BracketStructure:
    return to_lambda(builtin(base))


def bracket_by_name(name: str) -> BracketStructure:
    """A built-in hydrodynamic bracket (``p1``, ``p2``, ``plp``) or a catalog entry."""
    try:
        return base_bracket(name)
    except KeyError:
        return representative(name).bracket
