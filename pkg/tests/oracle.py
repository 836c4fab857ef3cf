"""Independent sympy implementation of the master formula and the Jacobi expression.

Jets are plain sympy symbols ``u{i}_{a}_{b}``; total derivatives act by the
chain rule on whatever jets occur.  Nothing here calls the engine except the
string printer used to move objects across.
"""

from __future__ import annotations

import re
from math import comb

import sympy as sp

from pva_lab.exprio import print_diffpoly

l1, l2, m1, m2 = sp.symbols("l1 l2 m1 m2")
LAM, MU = (l1, l2), (m1, m2)
_JET = re.compile(r"u(\d)_(\d+)_(\d+)")


def u(i, a=0, b=0):
    return sp.Symbol(f"u{i}_{a}_{b}")


def to_sympy(f) -> sp.Expr:
    text = print_diffpoly(f)
    text = re.sub(r"([pq])\[(\d+),(\d+)\]", lambda m: f"u{'pq'.index(m[1])}_{m[2]}_{m[3]}", text)
    text = re.sub(r"\b([pq])\b", lambda m: f"u{'pq'.index(m[1])}_0_0", text)
    return sp.sympify(text.replace("^", "**"))


def lambda_to_sympy(h, var=LAM) -> sp.Expr:
    return sp.Add(*[to_sympy(c) * var[0] ** s[0] * var[1] ** s[1] for s, c in h.coeffs.items()])


def structure_to_sympy(P):
    """``{(i, j): {S: coefficient}}`` in sympy form."""
    return {(i, j): {s: to_sympy(c) for s, c in P.entries[i][j].coeffs.items()}
            for i in range(2) for j in range(2)}


def trivalue_to_sympy(T):
    out = {}
    for t, key, f in T.coefficients():
        out[t] = out.get(t, 0) + to_sympy(f) * l1 ** key[0] * l2 ** key[1] * m1 ** key[2] * m2 ** key[3]
    return out


def _jets(expr):
    out = []
    for s in expr.free_symbols:
        m = _JET.fullmatch(s.name)
        if m:
            out.append((s, int(m[1]), int(m[2]), int(m[3])))
    return out


def D(expr, axis):
    out = 0
    for s, i, a, b in _jets(expr):
        out += sp.diff(expr, s) * (u(i, a + 1, b) if axis == 0 else u(i, a, b + 1))
    return sp.expand(out)


def Dpow(expr, S):
    for _ in range(S[0]):
        expr = D(expr, 0)
    for _ in range(S[1]):
        expr = D(expr, 1)
    return expr


def shift(expr, S, x, sign=1):
    """``(sign*(x + ∂))^S`` applied to ``expr``."""
    out = 0
    for k1 in range(S[0] + 1):
        for k2 in range(S[1] + 1):
            out += (comb(S[0], k1) * comb(S[1], k2) * x[0] ** (S[0] - k1) * x[1] ** (S[1] - k2)
                    * Dpow(expr, (k1, k2)))
    return sp.expand(out * sign ** (S[0] + S[1]))


def master(P, f, g, x=LAM):
    """``{f_x g}`` for ``P`` in the form returned by :func:`structure_to_sympy`."""
    out = 0
    fj = _jets(f)
    for sg, j, a, b in _jets(g):
        dg = sp.diff(g, sg)
        inner = 0
        for sf, i, c, d in fj:
            right = shift(sp.diff(f, sf), (c, d), x, sign=-1)
            for S, coef in P[(i, j)].items():
                inner += coef * shift(right, S, x)
        out += dg * shift(sp.expand(inner), (a, b), x)
    return sp.expand(out)


def entry(P, i, j, x):
    return sp.Add(*[c * x[0] ** S[0] * x[1] ** S[1] for S, c in P[(i, j)].items()])


def jacobi(P):
    nu = (l1 + m1, l2 + m2)
    out = {}
    for i in range(2):
        for j in range(2):
            for k in range(2):
                t1 = master(P, u(i), entry(P, j, k, MU), LAM)
                t2 = master(P, u(j), entry(P, i, k, LAM), MU)
                t3 = master(P, entry(P, i, j, LAM), u(k), nu)
                val = sp.expand(t1 - t2 - t3)
                if val != 0:
                    out[(i, j, k)] = val
    return out


def add_structures(A, B, sign=1):
    return {ij: {S: A[ij].get(S, 0) + sign * B[ij].get(S, 0)
                 for S in set(A[ij]) | set(B[ij])} for ij in A}


def schouten(A, B):
    """``[A, B] = J(A + B) - J(A) - J(B)``."""
    ja, jb, jab = jacobi(A), jacobi(B), jacobi(add_structures(A, B))
    out = {}
    for t in set(ja) | set(jb) | set(jab):
        v = sp.expand(jab.get(t, 0) - ja.get(t, 0) - jb.get(t, 0))
        if v != 0:
            out[t] = v
    return out


def same(a: dict, b: dict) -> bool:
    keys = set(a) | set(b)
    return all(sp.expand(a.get(k, 0) - b.get(k, 0)) == 0 for k in keys)
