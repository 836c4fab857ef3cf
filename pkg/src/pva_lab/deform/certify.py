"""Nontriviality certificates for degree-3 cocycles."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from ..arena import DiffPoly, unknown
from ..linsys import rational_rank
from ..pvadiff import EvoField, d_on_2cochain, d_on_field
from .ansatz import jet_monomials
from .catalog import base_bracket, representative
from .functionals import evaluate_functionals

__all__ = ["miura_generator", "Certificate", "certify_nontrivial", "constant_rank"]


def miura_generator(degree: int = 2) -> EvoField:
    """Fully parametric evolutionary field of the given degree.

    In degree 2 this is ``f^{ab l,i} u^l_{ab} + g^{al bm,i} u^l_a u^m_b`` with
    one unknown function of (p, q) per independent jet monomial.
    """
    comps = []
    for i in range(2):
        terms: dict = {}
        for J in jet_monomials(degree):
            fam = "f" if len(J) == 1 else "g"
            u = unknown(fam, (i,) + J)
            for key, c in u.terms.items():
                terms[(key[0], J, key[2])] = c
        comps.append(DiffPoly._raw(terms))
    return EvoField(*comps)


def constant_rank(values: Dict[str, DiffPoly], constants: Sequence[int]) -> int:
    """Rank over Q of ``c -> values`` for values linear in the listed constants."""
    vectors: List[dict] = []
    for k in constants:
        target = tuple(1 if n == k else 0 for n in range(5))
        vec = {}
        for name, v in values.items():
            for cexp, part in v.split_constants().items():
                if sum(cexp) != 1:
                    if any(cexp):
                        raise ValueError(f"value of {name} is not linear in the constants")
                    continue
                if cexp != target:
                    continue
                for key, c in part.terms.items():
                    vec[(name, key)] = c
        vectors.append(vec)
    return rational_rank(vectors)


@dataclass
class Certificate:
    base: str
    representative: str
    cocycle: bool
    cocycle_residual_terms: int
    coboundary_zero: Dict[str, bool]
    values: Dict[str, DiffPoly]
    rank: int
    n_constants: int
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def certify_nontrivial(base: str, rep, X: Optional[EvoField] = None) -> Certificate:
    """Check cocycle, vanishing of the functionals on ``d_base(X)``, and injectivity.

    ``rep`` is a :class:`Representative` or a catalog name.
    """
    if isinstance(rep, str):
        rep = representative(rep)
    P = base_bracket(base)
    failures = []
    d = d_on_2cochain(P, rep.bracket)
    nres = sum(1 for _ in d.coefficients())
    if nres:
        failures.append("cocycle")
    cob = d_on_field(P, X if X is not None else miura_generator(2))
    cob_vals = evaluate_functionals(base, cob)
    cob_zero = {k: v.is_zero() for k, v in cob_vals.items()}
    for k, ok in cob_zero.items():
        if not ok:
            failures.append(f"coboundary:{k}")
    values = evaluate_functionals(base, rep.bracket)
    rank = constant_rank(values, rep.constants)
    if rank != len(rep.constants):
        failures.append("rank")
    return Certificate(base, rep.name, nres == 0, nres, cob_zero, values, rank,
                       len(rep.constants), failures)
