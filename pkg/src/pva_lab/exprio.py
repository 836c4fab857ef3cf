"""Text grammar, parser and canonical printer; bracket data files; JSON reports.

Grammar (whitespace is insignificant)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" ["-"] INT)?
    atom   := INT | jet | "l1" | "l2" | "c0".."c4" | "(" expr ")"
    jet    := ("p" | "q") ["[" INT "," INT "]"]

``p[m,n]`` is the jet with ``m`` x-derivatives and ``n`` y-derivatives, and
``p`` alone is ``p[0,0]``.  A divisor must be a rational literal or a
monomial in the zero-jets ``p``, ``q``.

Notation mapping: ``p_x`` is ``p[1,0]``, ``q_{xy}`` is ``q[1,1]``,
``p_{yyy}`` is ``p[0,3]``; ``λ_1``, ``λ_2`` are ``l1``, ``l2``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .arena import (
    DiffPoly, ONE, Q, const, jet, jet_parts, z_c, z_p, z_q,
)
from .lambdacalc import BracketStructure, LambdaPoly

__all__ = [
    "ParseError", "Num", "JetAtom", "LamAtom", "ConstAtom", "Sum", "Prod", "Div", "Neg",
    "Pow", "parse", "to_diffpoly", "to_lambdapoly", "parse_diffpoly", "parse_lambdapoly",
    "print_diffpoly", "print_lambdapoly", "print_bracket", "print_value",
    "load_bracket", "parse_bracket_file", "ClaimResult", "report", "SCHEMA",
]

SCHEMA = "pva-lab/1"


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.message = message
        self.pos = pos


# -- AST --------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class JetAtom:
    comp: int
    m: int = 0
    n: int = 0


@dataclass(frozen=True)
class LamAtom:
    axis: int


@dataclass(frozen=True)
class ConstAtom:
    index: int


@dataclass(frozen=True)
class Sum:
    items: tuple


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Prod:
    factors: tuple


@dataclass(frozen=True)
class Div:
    num: object
    den: object
    pos: int = 0


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int
    pos: int = 0


ExprAst = Union[Num, JetAtom, LamAtom, ConstAtom, Sum, Neg, Prod, Div, Pow]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|(.))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            out.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, value: Optional[str] = None):
        t = self.take()
        if t[0] != kind or (value is not None and t[1] != value):
            want = value if value is not None else kind
            got = t[1] or "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", t[2])
        return t

    def expr(self):
        items = [self.term()]
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            items.append(t if op == "+" else Neg(t))
        return items[0] if len(items) == 1 else Sum(tuple(items))

    def term(self):
        node = self.unary()
        factors = [node]
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                factors.append(rhs)
            else:
                if not _is_monomial_divisor(rhs):
                    raise ParseError("divisor must be a rational literal or a monomial in p, q",
                                     pos)
                lhs = factors[0] if len(factors) == 1 else Prod(tuple(factors))
                factors = [Div(lhs, rhs, pos)]
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            arg = self.unary()
            return arg if t[1] == "+" else Neg(arg)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            pos = self.take()[2]
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.take()
                sign = -1
            digits = self.expect("int")[1]
            if len(digits) > 3:
                raise ParseError("exponent too large", pos)
            e = int(digits) * sign
            if e < 0 and not _is_monomial_divisor(base):
                raise ParseError("negative powers are allowed only on p, q and rational literals",
                                 pos)
            return Pow(base, e, pos)
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "int":
            return Num(Fraction(int(val)))
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect("op", ")")
            return node
        if kind == "name":
            if val in ("p", "q"):
                comp = 0 if val == "p" else 1
                if self.peek()[0] == "op" and self.peek()[1] == "[":
                    self.take()
                    m = int(self.expect("int")[1])
                    self.expect("op", ",")
                    n = int(self.expect("int")[1])
                    self.expect("op", "]")
                    if m >= 64 or n >= 64:
                        raise ParseError("jet order too large", pos)
                    return JetAtom(comp, m, n)
                return JetAtom(comp)
            if val in ("l1", "l2"):
                return LamAtom(int(val[1]) - 1)
            if re.fullmatch(r"c[0-4]", val):
                return ConstAtom(int(val[1]))
            raise ParseError(f"unknown symbol {val!r}", pos)
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def _is_monomial_divisor(node) -> bool:
    if isinstance(node, Num):
        return True
    if isinstance(node, JetAtom):
        return node.m == 0 and node.n == 0
    if isinstance(node, Pow):
        return _is_monomial_divisor(node.base)
    if isinstance(node, Prod):
        return all(_is_monomial_divisor(f) for f in node.factors)
    if isinstance(node, Neg):
        return _is_monomial_divisor(node.arg)
    if isinstance(node, Div):
        return _is_monomial_divisor(node.num) and _is_monomial_divisor(node.den)
    return False


def parse(text: str) -> ExprAst:
    """Parse expression text into an AST; raises :class:`ParseError`."""
    p = _Parser(text)
    node = p.expr()
    t = p.peek()
    if t[0] != "end":
        raise ParseError(f"unexpected {t[1]!r}", t[2])
    return node


# -- lowering -----------------------------------------------------------------

def _lower(node, allow_lambda: bool) -> LambdaPoly:
    if isinstance(node, Num):
        return LambdaPoly.const(DiffPoly.constant(Q(node.value.numerator, node.value.denominator)))
    if isinstance(node, JetAtom):
        return LambdaPoly.const(jet(node.comp, node.m, node.n))
    if isinstance(node, ConstAtom):
        return LambdaPoly.const(const(node.index))
    if isinstance(node, LamAtom):
        if not allow_lambda:
            raise ParseError("λ symbols are not allowed in a differential polynomial", 0)
        return LambdaPoly.const(ONE, (1, 0) if node.axis == 0 else (0, 1))
    if isinstance(node, Sum):
        out = LambdaPoly()
        for it in node.items:
            out = out + _lower(it, allow_lambda)
        return out
    if isinstance(node, Neg):
        return -_lower(node.arg, allow_lambda)
    if isinstance(node, Prod):
        out = LambdaPoly.const(ONE)
        for f in node.factors:
            out = out * _lower(f, allow_lambda)
        return out
    if isinstance(node, Div):
        den = _lower(node.den, False)[(0, 0)]
        try:
            inv = den.inverse_monomial()
        except ZeroDivisionError as exc:
            raise ParseError(str(exc), node.pos) from None
        return _lower(node.num, allow_lambda) * inv
    if isinstance(node, Pow):
        base = _lower(node.base, allow_lambda)
        if node.exp >= 0:
            out = LambdaPoly.const(ONE)
            for _ in range(node.exp):
                out = out * base
            return out
        try:
            inv = base[(0, 0)].inverse_monomial()
        except ZeroDivisionError as exc:
            raise ParseError(str(exc), node.pos) from None
        return LambdaPoly.const(inv ** (-node.exp))
    raise TypeError(f"not an expression node: {node!r}")


def to_lambdapoly(node: ExprAst) -> LambdaPoly:
    return _lower(node, True)


def to_diffpoly(node: ExprAst) -> DiffPoly:
    return _lower(node, False)[(0, 0)]


def parse_diffpoly(text: str) -> DiffPoly:
    return to_diffpoly(parse(text))


def parse_lambdapoly(text: str) -> LambdaPoly:
    return to_lambdapoly(parse(text))


# -- printing -----------------------------------------------------------------

def _fmt_rational(c) -> str:
    c = Q(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _pow(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


def _unknown_text(u) -> str:
    slot = ",".join(str(s) for s in u.slot)
    d = "_p" * u.deriv[0] + "_q" * u.deriv[1]
    return f"{u.family}[{slot}]{d}"


def _monomial_factors(key) -> List[str]:
    z, jets, u = key
    out = []
    for k, e in enumerate(z_c(z)):
        if e:
            out.append(_pow(f"c{k}", e))
    pe, qe = z_p(z), z_q(z)
    if pe:
        out.append(_pow("p", pe))
    if qe:
        out.append(_pow("q", qe))
    parts = sorted(jet_parts(j) for j in jets)
    i = 0
    while i < len(parts):
        j = i
        while j < len(parts) and parts[j] == parts[i]:
            j += 1
        comp, m, n = parts[i]
        out.append(_pow(f"{'pq'[comp]}[{m},{n}]", j - i))
        i = j
    if u is not None:
        out.append(_unknown_text(u))
    return out


def _signed_terms(f: DiffPoly, extra: Sequence[str] = ()) -> List[Tuple[bool, str]]:
    """(negative?, text-without-sign) per term in canonical order."""
    out = []
    for key, c in f.sorted_terms():
        neg = c < 0
        a = -c if neg else c
        factors = _monomial_factors(key) + list(extra)
        if not factors:
            out.append((neg, _fmt_rational(a)))
        elif a == 1:
            out.append((neg, "*".join(factors)))
        else:
            out.append((neg, "*".join([_fmt_rational(a)] + factors)))
    return out


def _join(terms: List[Tuple[bool, str]]) -> str:
    if not terms:
        return "0"
    neg, s = terms[0]
    parts = [("-" if neg else "") + s]
    for neg, s in terms[1:]:
        parts.append((" - " if neg else " + ") + s)
    return "".join(parts)


def print_diffpoly(f: DiffPoly) -> str:
    return _join(_signed_terms(f))


def _lambda_factors(s) -> List[str]:
    out = []
    if s[0]:
        out.append(_pow("l1", s[0]))
    if s[1]:
        out.append(_pow("l2", s[1]))
    return out


def print_lambdapoly(h: LambdaPoly) -> str:
    keys = sorted(h.coeffs, key=lambda s: (-(s[0] + s[1]), -s[0]))
    terms: List[Tuple[bool, str]] = []
    for s in keys:
        f = h.coeffs[s]
        lam = _lambda_factors(s)
        if not lam or len(f) == 1:
            terms.extend(_signed_terms(f, lam))
        else:
            terms.append((False, f"({print_diffpoly(f)})*" + "*".join(lam)))
    return _join(terms)


def print_bracket(P: BracketStructure) -> str:
    lines = []
    for i in range(2):
        for j in range(2):
            lines.append(f"[{i + 1},{j + 1}] = {print_lambdapoly(P.entries[i][j])}")
    return "\n".join(lines) + "\n"


def print_value(v) -> str:
    if isinstance(v, DiffPoly):
        return print_diffpoly(v)
    if isinstance(v, LambdaPoly):
        return print_lambdapoly(v)
    if isinstance(v, BracketStructure):
        return print_bracket(v)
    if isinstance(v, (int, Fraction)) or hasattr(v, "denominator"):
        return _fmt_rational(v)
    raise TypeError(f"cannot print {type(v).__name__}")


# -- bracket data files --------------------------------------------------------

_HEADER = re.compile(r"^\[\s*([12pq])\s*,\s*([12pq])\s*\]\s*=\s*(.*)$")
_INDEX = {"1": 0, "2": 1, "p": 0, "q": 1}


def parse_bracket_file(text: str) -> BracketStructure:
    """Parse a data file of ``[i,j] = <expr>`` blocks (1 = p, 2 = q).

    Lines starting with ``#`` are comments; an entry continues over the
    following lines until the next ``[i,j] =`` header.  Missing entries are 0.
    """
    blocks: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = _HEADER.match(line.strip())
        if m:
            key = (_INDEX[m.group(1)], _INDEX[m.group(2)])
            if key in blocks:
                raise ParseError(f"duplicate entry [{m.group(1)},{m.group(2)}] on line {lineno}", 0)
            current = key
            blocks[key] = [(lineno, m.group(3))]
        elif current is None:
            raise ParseError(f"expected an '[i,j] =' header on line {lineno}", 0)
        else:
            blocks[current].append((lineno, line))
    entries = [[LambdaPoly(), LambdaPoly()], [LambdaPoly(), LambdaPoly()]]
    for (i, j), chunks in blocks.items():
        text_ = " ".join(c for _, c in chunks)
        try:
            entries[i][j] = to_lambdapoly(parse(text_))
        except ParseError as exc:
            raise ParseError(f"entry [{i + 1},{j + 1}] (from line {chunks[0][0]}): {exc.message}",
                             exc.pos) from None
    return BracketStructure(entries)


def load_bracket(path) -> BracketStructure:
    with open(path, encoding="utf-8") as fh:
        return parse_bracket_file(fh.read())


# -- reports -----------------------------------------------------------------

@dataclass
class ClaimResult:
    claim_id: str
    paper_anchor: str
    status: str
    witness: str = ""
    runtime_ms: float = 0.0
    prolongation_bound: Optional[int] = None
    optional: bool = False

    def as_dict(self) -> dict:
        d = {
            "claim_id": self.claim_id,
            "paper_anchor": self.paper_anchor,
            "status": self.status,
            "witness": self.witness,
            "runtime_ms": round(self.runtime_ms, 3),
        }
        if self.prolongation_bound is not None:
            d["prolongation_bound"] = self.prolongation_bound
        if self.optional:
            d["optional"] = True
        return d


def report(results: Sequence[ClaimResult]) -> str:
    """JSON document for a list of claim results, with a stable key order."""
    doc = {"schema": SCHEMA, "claims": [r.as_dict() for r in results]}
    return json.dumps(doc, indent=2, ensure_ascii=False)
