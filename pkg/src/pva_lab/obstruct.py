"""Extension of degree-3 deformations to order four, and its obstructions.

The extension equation is used in the halved normalization
``[P0, N] + J(K) = 0`` where ``J`` is the PVA-Jacobi expression, so that
``[K, K] = 2 J(K)`` and ``C = 2 [P0, N] + [K, K]`` is twice what is computed
here.  Only coefficients of pure (λ, μ) monomials with jet-free coefficients
are generated (``cap=0`` in :func:`pva_lab.pvadiff.schouten`); the full
expansion over the 1774 unknown functions of ``N`` is never built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .arena import DiffPoly, NUM_CONSTANTS, Q
from .deform.ansatz import Ansatz, build_ansatz
from .deform.catalog import Representative, base_bracket, representative
from .lambdacalc import BracketStructure, skew_check
from .linsys import (
    Inconsistent, LinForm, LinearSystem, Screen, collect, consistency, prolong,
    screen_consistency,
)
from .pvadiff import TriValue, jacobiator, schouten

__all__ = [
    "ExtensionProblem", "extension_problem", "square_bracket", "square_monomials",
    "Witness", "witness_coefficient", "extension_system", "plp_subsystem",
    "ExtensionVerdict", "non_extendability", "BihamiltonianReport", "bihamiltonian_check",
    "epsilon_parts", "DEFAULT_REPRESENTATIVE", "c_monomial_label",
]

DEFAULT_REPRESENTATIVE = {"p1": "h23-p1", "p2": "h23-p2", "plp": "h23-plp"}


@dataclass(frozen=True, eq=False)
class ExtensionProblem:
    base: str
    P0: BracketStructure
    infinitesimal: Representative
    candidate: Ansatz

    @property
    def name(self) -> str:
        return f"{self.base}/{self.infinitesimal.name}"


@lru_cache(maxsize=None)
def extension_problem(base: str, rep: Optional[str] = None) -> ExtensionProblem:
    base = base.lower()
    r = representative(rep or DEFAULT_REPRESENTATIVE[base])
    return ExtensionProblem(base, base_bracket(base), r, build_ansatz(5))


# -- the Schouten square -------------------------------------------------------

def square_bracket(rep: Union[Representative, str], cap: Optional[int] = None) -> TriValue:
    """``[K, K]`` for the catalog bracket ``K`` (symbolic constants kept)."""
    if isinstance(rep, str):
        rep = representative(rep)
    return schouten(rep.bracket, rep.bracket, cap=cap)


def square_monomials(T: TriValue) -> List[Tuple[int, int]]:
    """Sorted pairs ``(a, b)``, ``a <= b``, for each ``c_a c_b`` occurring in ``T``."""
    out = set()
    for exps in T.constant_monomials():
        idx = [k for k in range(NUM_CONSTANTS) for _ in range(exps[k])]
        if len(idx) != 2:
            raise ValueError(f"non-quadratic constant monomial {exps}")
        out.add(tuple(idx))
    return sorted(out)


def c_monomial_label(ab: Tuple[int, int]) -> str:
    a, b = ab
    return f"c{a}^2" if a == b else f"c{a}*c{b}"


# -- witnesses -------------------------------------------------------------------

@lru_cache(maxsize=None)
def _pure_parts(problem: ExtensionProblem) -> Tuple[TriValue, TriValue]:
    base = schouten(problem.P0, problem.candidate.structure, check=False, cap=0)
    source = jacobiator(problem.infinitesimal.bracket, check=False, cap=0)
    return base, source


@dataclass(frozen=True)
class Witness:
    triple: Tuple[int, int, int]
    key: Tuple[int, int, int, int]
    base: LinForm
    source: DiffPoly

    @property
    def is_witness(self) -> bool:
        """True when no choice of ``N`` can cancel a nonzero source."""
        return self.base.is_zero() and not self.source.is_zero()


def witness_coefficient(problem: ExtensionProblem, triple: Sequence[int],
                        lm: Sequence[Sequence[int]]) -> Witness:
    """Coefficient of ``λ^L μ^M`` (``|L| + |M| = 6``) in component ``triple`` (0-based).

    Returns the part linear in the unknowns of ``N`` and the source from ``J(K)``.
    """
    (l1, l2), (m1, m2) = lm
    if l1 + l2 + m1 + m2 != 6:
        raise ValueError("witness monomials of the order-four extension have degree 6")
    key = (l1, l2, m1, m2)
    t = tuple(triple)
    base, source = _pure_parts(problem)
    return Witness(t, key, LinForm.from_diffpoly(base[t][key]), source[t][key])


def extension_system(problem: ExtensionProblem) -> LinearSystem:
    """Jet-free coefficients of pure (λ, μ) monomials of ``[P0, N] + J(K)``."""
    base, source = _pure_parts(problem)
    return collect(base + source)


def plp_subsystem() -> LinearSystem:
    return extension_system(extension_problem("plp"))


@dataclass
class ExtensionVerdict:
    """``obstructed`` carries an exact certificate; otherwise ``inconclusive`` at the bound."""

    problem: str
    order: int
    n_equations: int
    n_unknowns: int
    status: str
    screens: List[Screen] = field(default_factory=list)
    certificate: Optional[Inconsistent] = None
    certificate_verified: bool = False

    @property
    def constraints(self) -> List[DiffPoly]:
        return self.certificate.constraints if self.certificate else []


def non_extendability(problem: ExtensionProblem, order: int = 3) -> ExtensionVerdict:
    """Search for an inconsistency of the extension system up to prolongation ``order``.

    Each order is screened modulo a prime; the first order at which the screen
    detects inconsistency is re-solved exactly to produce the certificate.
    """
    sys = extension_system(problem)
    screens = []
    last = sys
    for k in range(order + 1):
        last = prolong(sys, k) if k else sys
        s = screen_consistency(last)
        screens.append(s)
        if not s.consistent_at_point:
            res = consistency(last)
            if isinstance(res, Inconsistent):
                return ExtensionVerdict(problem.name, k, len(last), res.n_unknowns,
                                        "obstructed", screens, res, res.verify(last))
    return ExtensionVerdict(problem.name, order, len(last), len(last.unknowns),
                            "inconclusive", screens)


# -- bi-Hamiltonian pairs ------------------------------------------------------------

@dataclass
class BihamiltonianReport:
    checks: List[Tuple[str, bool]]

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)

    def failing(self) -> List[str]:
        return [name for name, ok in self.checks if not ok]


def _bihamiltonian_members() -> Dict[str, Tuple[str, BracketStructure]]:
    def pick(name, keep):
        rep = representative(name)
        zeros = {c: 0 for c in rep.constants if c not in keep}
        return rep.bracket.substitute_constants(zeros)

    return {
        "p1(0,0,c3,c4)": ("p1", pick("h23-p1", (3, 4))),
        "p2(0,0,0,c3,0)": ("p2", pick("h23-p2", (3,))),
        "p2(c0,0,0,0,c4)": ("p2", pick("h23-p2", (0, 4))),
    }


def bihamiltonian_check() -> BihamiltonianReport:
    """PVA property of the listed classes, pairwise compatibility, and compatibility with the base."""
    checks: List[Tuple[str, bool]] = []
    for label, (base, K) in _bihamiltonian_members().items():
        checks.append((f"skew {label}", skew_check(K).is_zero()))
        checks.append((f"jacobi {label}", jacobiator(K).is_zero()))
        checks.append((f"[{base}, {label}]", schouten(base_bracket(base), K).is_zero()))
    pairs = (("p1-c3", "p1-c4"), ("p2-defo0", "p2-defo4"))
    for a, b in pairs:
        ka, kb = representative(a).bracket, representative(b).bracket
        checks.append((f"[{a}, {b}]", schouten(ka, kb).is_zero()))
    for name in ("p1-c3", "p1-c4", "p2-defo3", "p2-defo0", "p2-defo4"):
        checks.append((f"jacobi {name}", jacobiator(representative(name).bracket).is_zero()))
    return BihamiltonianReport(checks)


def epsilon_parts(P0: BracketStructure, K: BracketStructure) -> Dict[int, TriValue]:
    """Coefficients of ``ε^0, ε^3, ε^6`` in ``[P0 + ε^3 K, P0 + ε^3 K]``, by polarization."""
    sp = schouten(P0 + K, P0 + K, check=False)
    sm = schouten(P0 - K, P0 - K, check=False)
    s0 = schouten(P0, P0, check=False)
    half = Q(1, 2)
    return {0: s0, 3: (sp - sm).scale(half), 6: (sp + sm - s0.scale(2)).scale(half)}
