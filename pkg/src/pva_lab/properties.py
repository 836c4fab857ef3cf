"""Seeded random objects and the algebraic identities checked on them.

Each entry of :data:`PROPERTIES` draws one case from the given
:class:`random.Random` and reports whether the identity held on it.
"""

from __future__ import annotations

import random
from typing import Callable, Dict, List, Optional, Tuple

from .arena import (
    DiffPoly, Q, jet_id, total_derivative, variational_derivative, z_pack,
)
from .deform.ansatz import ansatz_slots, bracket_from_slots, extract_coefficients
from .hydro import builtin, to_lambda
from .lambdacalc import (
    BracketStructure, LambdaPoly, adjoint_star, master_bracket, shift_pow, skew_build,
    skew_check,
)
from .pvadiff import EvoField, d_on_2cochain, d_on_field

__all__ = [
    "random_diffpoly", "random_lambdapoly", "random_field", "random_matrix",
    "random_slot_values", "shift_act", "PROPERTIES", "run_properties",
]

_BASES: Dict[str, BracketStructure] = {}


def _base(name: str) -> BracketStructure:
    if name not in _BASES:
        _BASES[name] = to_lambda(builtin(name))
    return _BASES[name]


def _coef(rng: random.Random) -> Q:
    num = rng.choice([-3, -2, -1, 1, 1, 2, 3, 5])
    return Q(num, rng.choice([1, 1, 2, 3]))


def random_diffpoly(rng: random.Random, terms: int = 3, max_order: int = 2, max_jets: int = 2,
                    max_exp: int = 2, laurent: bool = False, max_degree: Optional[int] = None
                    ) -> DiffPoly:
    """A sparse random differential polynomial in p, q and their jets."""
    lo = -1 if laurent else 0
    out: dict = {}
    for _ in range(rng.randint(1, terms)):
        jets = []
        budget = max_degree
        for _ in range(rng.randint(0, max_jets)):
            order = rng.randint(1, max_order if budget is None else max(1, min(max_order, budget)))
            if budget is not None:
                if budget < order:
                    break
                budget -= order
            m = rng.randint(0, order)
            jets.append(jet_id(rng.randint(0, 1), m, order - m))
        z = z_pack(rng.randint(lo, max_exp), rng.randint(lo, max_exp))
        key = (z, tuple(sorted(jets)), None)
        out[key] = out.get(key, 0) + _coef(rng)
    return DiffPoly(out)


def random_lambdapoly(rng: random.Random, max_lambda: int = 2, **kw) -> LambdaPoly:
    coeffs = {}
    for _ in range(rng.randint(1, 3)):
        s = rng.randint(0, max_lambda)
        a = rng.randint(0, s)
        coeffs[(a, s - a)] = random_diffpoly(rng, **kw)
    return LambdaPoly(coeffs)


def random_field(rng: random.Random, max_degree: int = 2) -> EvoField:
    kw = dict(terms=2, max_order=max_degree, max_jets=max_degree, max_degree=max_degree)
    return EvoField(random_diffpoly(rng, **kw), random_diffpoly(rng, **kw))


def random_matrix(rng: random.Random) -> List[List[LambdaPoly]]:
    return [[random_lambdapoly(rng, terms=2) for _ in range(2)] for _ in range(2)]


def random_slot_values(rng: random.Random, degree: int = 3, count: int = 6) -> Dict:
    slots = ansatz_slots(degree)
    values = {}
    for s in rng.sample(slots, count):
        values[s] = random_diffpoly(rng, terms=2, max_jets=0, laurent=True)
    return values


def shift_act(h: LambdaPoly, g: DiffPoly) -> LambdaPoly:
    """``h`` with ``λ`` replaced by ``λ + ∂`` acting on ``g`` (placed to the right)."""
    out = LambdaPoly()
    for s, c in h.coeffs.items():
        out = out + shift_pow(g, s) * c
    return out


def _lam(axis: int) -> LambdaPoly:
    return LambdaPoly({(1, 0) if axis == 0 else (0, 1): DiffPoly.constant(1)})


# -- individual identities ---------------------------------------------------------

def _sesquilinearity(rng) -> bool:
    P = _base(rng.choice(["p1", "p2", "plp"]))
    f, g = random_diffpoly(rng), random_diffpoly(rng)
    a = rng.randint(0, 1)
    fg = master_bracket(P, f, g)
    left = master_bracket(P, total_derivative(f, a), g) == -(_lam(a) * fg)
    right = master_bracket(P, f, total_derivative(g, a)) == _lam(a) * fg + fg.map(
        lambda c: total_derivative(c, a))
    return left and right


def _leibniz_right(rng) -> bool:
    P = _base(rng.choice(["p1", "p2", "plp"]))
    f, g, h = (random_diffpoly(rng, terms=2) for _ in range(3))
    return master_bracket(P, f, g * h) == (master_bracket(P, f, g) * h
                                           + master_bracket(P, f, h) * g)


def _leibniz_left(rng) -> bool:
    P = _base(rng.choice(["p1", "p2", "plp"]))
    f, g, h = (random_diffpoly(rng, terms=2) for _ in range(3))
    lhs = master_bracket(P, f * g, h)
    rhs = shift_act(master_bracket(P, f, h), g) + shift_act(master_bracket(P, g, h), f)
    return lhs == rhs


def _adjoint(rng) -> bool:
    m = random_lambdapoly(rng, max_lambda=3)
    return adjoint_star(adjoint_star(m)) == m


def _d_squared(rng) -> bool:
    P = _base(rng.choice(["p1", "p2", "plp"]))
    X = random_field(rng, max_degree=rng.randint(0, 2))
    return d_on_2cochain(P, d_on_field(P, X), check=False).is_zero()


def _euler_kernel(rng) -> bool:
    f = random_diffpoly(rng, terms=3, laurent=True)
    a = rng.randint(0, 1)
    g = total_derivative(f, a)
    return all(variational_derivative(g, i).is_zero() for i in range(2))


def _skew_build(rng) -> bool:
    return skew_check(skew_build(random_matrix(rng))).is_zero()


def _round_trip(rng) -> bool:
    values = random_slot_values(rng)
    C = extract_coefficients(bracket_from_slots(values), 3)
    return C.raw == {k: v for k, v in values.items() if not v.is_zero()}


PROPERTIES: Dict[str, Callable[[random.Random], bool]] = {
    "sesquilinearity": _sesquilinearity,
    "leibniz_right": _leibniz_right,
    "leibniz_left": _leibniz_left,
    "adjoint_involution": _adjoint,
    "d_squared": _d_squared,
    "euler_kernel": _euler_kernel,
    "skew_build": _skew_build,
    "extract_build_round_trip": _round_trip,
}


def run_properties(n: int = 1000, seed: int = 0,
                   names: Optional[List[str]] = None) -> Dict[str, Tuple[int, int]]:
    """``{name: (cases, failures)}``; each property has its own seeded stream."""
    out = {}
    for k, name in enumerate(names or list(PROPERTIES)):
        rng = random.Random(seed * 1009 + k)
        fn = PROPERTIES[name]
        bad = sum(0 if fn(rng) else 1 for _ in range(n))
        out[name] = (n, bad)
    return out
