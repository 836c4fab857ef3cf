"""Hamiltonian equations of motion and the cohomology dimension generating function."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Tuple

from ..arena import DiffPoly, ZERO, variational_derivative
from ..lambdacalc import BracketStructure

__all__ = ["hamiltonian_flow", "series_h", "cohomology_dims", "scalar_dims"]


def hamiltonian_flow(P: BracketStructure, h: DiffPoly) -> Tuple[DiffPoly, DiffPoly]:
    """``u^k_t = sum_i {u^i_∂ u^k} (δh/δu^i)`` with λ replaced by ∂ acting to the right."""
    grad = [variational_derivative(h, i) for i in range(2)]
    out = []
    for k in range(2):
        acc = ZERO
        for i in range(2):
            if grad[i].is_zero():
                continue
            for S, c in P.entries[i][k].coeffs.items():
                acc = acc + c * grad[i].derive(S)
        out.append(acc)
    return out[0], out[1]


def _mul(a: List[Fraction], b: List[Fraction], n: int) -> List[Fraction]:
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                out[i + j] += x * y
    return out


def series_h(p: int, n: int) -> List[Fraction]:
    """Coefficients of ``x^0..x^n`` in ``x^{p(p-1)/2} prod_{i=2}^p (1-x^i)^{-1} + x δ_{p0}``."""
    s = [Fraction(0)] * (n + 1)
    lead = p * (p - 1) // 2
    if lead <= n:
        s[lead] = Fraction(1)
    for i in range(2, p + 1):
        geo = [Fraction(1) if k % i == 0 else Fraction(0) for k in range(n + 1)]
        s = _mul(s, geo, n)
    if p == 0 and n >= 1:
        s[1] += 1
    return s


def scalar_dims(pmax: int, dmax: int) -> Dict[Tuple[int, int], int]:
    """Dimensions for the scalar bracket ``{u_λ u} = λ_y``: coefficients of ``h^p + h^{p+1}``."""
    out = {}
    for p in range(pmax + 1):
        a, b = series_h(p, dmax), series_h(p + 1, dmax)
        for d in range(dmax + 1):
            out[(p, d)] = int(a[d] + b[d])
    return out


def cohomology_dims(pmax: int, dmax: int) -> Dict[Tuple[int, int], int]:
    """``dim H^p_d(P1)`` for ``0 <= p <= pmax``, ``0 <= d <= dmax``: twice the scalar values."""
    if pmax < 0 or dmax < 0:
        raise ValueError("pmax and dmax must be nonnegative")
    return {k: 2 * v for k, v in scalar_dims(pmax, dmax).items()}
