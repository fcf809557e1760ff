"""Object languages: knowledge/belief formulas and linear probability formulas.

Two ASTs live here.  ``FormulaKB`` is the propositional modal language with
primitive nodes ``Top | Atom | Not | And | K | B``; every other connective
(including falsehood, disjunction, implication, biconditional, and the dual
modalities) is sugar expanded at construction time.  ``FormulaL`` is the
linear probability language whose only non-Boolean node is ``t >= 0`` over
rational-linear terms in ``P(phi)`` expressions.

Also here: the threshold translation from the modal language into the
probability language, the counting-notation expansion, and construction of
instances of the counting-transfer axiom scheme.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ExpansionTooLarge, FormulaSyntaxError

# ---------------------------------------------------------------------------
# Knowledge/belief ASTs


class FormulaKB:
    __slots__ = ()


@dataclass(frozen=True)
class Top(FormulaKB):
    __slots__ = ()


@dataclass(frozen=True)
class Atom(FormulaKB):
    name: str


@dataclass(frozen=True)
class Not(FormulaKB):
    sub: FormulaKB


@dataclass(frozen=True)
class And(FormulaKB):
    left: FormulaKB
    right: FormulaKB


@dataclass(frozen=True)
class K(FormulaKB):
    sub: FormulaKB


@dataclass(frozen=True)
class B(FormulaKB):
    sub: FormulaKB


TOP = Top()


def bot() -> FormulaKB:
    return Not(TOP)


def or_(left: FormulaKB, right: FormulaKB) -> FormulaKB:
    return Not(And(Not(left), Not(right)))


def implies(left: FormulaKB, right: FormulaKB) -> FormulaKB:
    return Not(And(left, Not(right)))


def iff(left: FormulaKB, right: FormulaKB) -> FormulaKB:
    return And(implies(left, right), implies(right, left))


def k_dual(sub: FormulaKB) -> FormulaKB:
    return Not(K(Not(sub)))


def b_dual(sub: FormulaKB) -> FormulaKB:
    return Not(B(Not(sub)))


def conj(formulas) -> FormulaKB:
    """Left-nested conjunction; Top for the empty list."""
    formulas = list(formulas)
    if not formulas:
        return TOP
    out = formulas[0]
    for f in formulas[1:]:
        out = And(out, f)
    return out


def disj(formulas) -> FormulaKB:
    """Left-nested disjunction; Bot for the empty list."""
    formulas = list(formulas)
    if not formulas:
        return bot()
    out = formulas[0]
    for f in formulas[1:]:
        out = or_(out, f)
    return out


def atoms_of(formula: FormulaKB) -> frozenset[str]:
    if isinstance(formula, Atom):
        return frozenset({formula.name})
    if isinstance(formula, (Not, K, B)):
        return atoms_of(formula.sub)
    if isinstance(formula, And):
        return atoms_of(formula.left) | atoms_of(formula.right)
    return frozenset()


# ---------------------------------------------------------------------------
# Linear probability ASTs


class FormulaL:
    __slots__ = ()


class TermL:
    __slots__ = ()


@dataclass(frozen=True)
class LTop(FormulaL):
    __slots__ = ()


@dataclass(frozen=True)
class LAtom(FormulaL):
    name: str


@dataclass(frozen=True)
class LNot(FormulaL):
    sub: FormulaL


@dataclass(frozen=True)
class LAnd(FormulaL):
    left: FormulaL
    right: FormulaL


@dataclass(frozen=True)
class GeqZero(FormulaL):
    """t >= 0, the only primitive comparison."""
    term: TermL


@dataclass(frozen=True)
class Const(TermL):
    value: Fraction


@dataclass(frozen=True)
class Scaled(TermL):
    """q * P(phi)."""
    coeff: Fraction
    sub: FormulaL


@dataclass(frozen=True)
class TSum(TermL):
    left: TermL
    right: TermL


LTOP = LTop()


def _neg_term(term: TermL) -> TermL:
    if isinstance(term, Const):
        return Const(-term.value)
    if isinstance(term, Scaled):
        return Scaled(-term.coeff, term.sub)
    return TSum(_neg_term(term.left), _neg_term(term.right))


def l_ge(left: TermL, right: TermL) -> FormulaL:
    """t >= s, expanded onto the primitive comparison."""
    if right == Const(Fraction(0)):
        return GeqZero(left)
    return GeqZero(TSum(left, _neg_term(right)))


def l_le(left: TermL, right: TermL) -> FormulaL:
    return l_ge(right, left)


def l_gt(left: TermL, right: TermL) -> FormulaL:
    return LNot(l_ge(right, left))


def l_lt(left: TermL, right: TermL) -> FormulaL:
    return LNot(l_ge(left, right))


def l_eq(left: TermL, right: TermL) -> FormulaL:
    return LAnd(l_ge(left, right), l_ge(right, left))


def prob(sub: FormulaL, coeff=Fraction(1)) -> TermL:
    return Scaled(Fraction(coeff), sub)


# ---------------------------------------------------------------------------
# Threshold translation


@dataclass(frozen=True)
class Threshold:
    value: Fraction

    def __post_init__(self):
        v = Fraction(self.value)
        object.__setattr__(self, "value", v)
        if not 0 < v < 1:
            raise ValueError("threshold must lie strictly between 0 and 1")


def translate(formula: FormulaKB, c: Threshold) -> FormulaL:
    """Structural translation: K maps to P(.)=1 and B to P(.)>c."""
    if isinstance(formula, Top):
        return LTOP
    if isinstance(formula, Atom):
        return LAtom(formula.name)
    if isinstance(formula, Not):
        return LNot(translate(formula.sub, c))
    if isinstance(formula, And):
        return LAnd(translate(formula.left, c), translate(formula.right, c))
    if isinstance(formula, K):
        inner = translate(formula.sub, c)
        return l_eq(prob(inner), Const(Fraction(1)))
    if isinstance(formula, B):
        inner = translate(formula.sub, c)
        return l_gt(prob(inner), Const(c.value))
    raise TypeError(f"not a modal formula: {formula!r}")


# ---------------------------------------------------------------------------
# Counting notation and the counting-transfer scheme

DEFAULT_EXPANSION_GUARD = 4


def _counting_disjunct(phis, psis, i):
    """F_i: exactly i phis true, at least i psis true.

    Conjunctions are enumerated deterministically: the sign patterns for the
    phi block come first (by increasing set of un-negated positions, in
    lexicographic order), then the psi block patterns.
    """
    m = len(phis)
    disjuncts = []
    for pos_d in itertools.combinations(range(m), i):
        for j in range(i, m + 1):
            for pos_e in itertools.combinations(range(m), j):
                lits = []
                for k in range(m):
                    lits.append(phis[k] if k in pos_d else Not(phis[k]))
                for k in range(m):
                    lits.append(psis[k] if k in pos_e else Not(psis[k]))
                disjuncts.append(conj(lits))
    return disjuncts


def segerberg_expand(phis, psis, mode: str = "I",
                     guard: int = DEFAULT_EXPANSION_GUARD) -> FormulaKB:
    """Expand the counting notation into a plain modal formula.

    Mode ``I``: K(F_0 | ... | F_m) saying every accessible world satisfies
    at least as many psis as phis.  Mode ``E``: the conjunction of the two
    ``I`` directions.  The expansion is exponential in m, so a guard bounds
    it; past the guard, use the direct semantic evaluator instead.
    """
    phis, psis = list(phis), list(psis)
    m = len(phis)
    if m != len(psis) or m < 1:
        raise ValueError("need equally many phis and psis, at least one each")
    if m > guard:
        raise ExpansionTooLarge(f"m={m} exceeds expansion guard {guard}")
    if mode == "E":
        return And(segerberg_expand(phis, psis, "I", guard),
                   segerberg_expand(psis, phis, "I", guard))
    if mode != "I":
        raise ValueError(f"unknown mode {mode!r}")
    disjuncts = []
    for i in range(m + 1):
        disjuncts.extend(_counting_disjunct(phis, psis, i))
    return K(disj(disjuncts))


def scott_instance(phis, psis, guard: int = DEFAULT_EXPANSION_GUARD
                   ) -> FormulaKB:
    """[(phi_i I psi_i) & B phi_1 & AND_{i>=2} ~B~phi_i] -> OR_i B psi_i.

    For m = 1 the dual-belief conjunct block is empty and is omitted.
    """
    phis, psis = list(phis), list(psis)
    m = len(phis)
    if m != len(psis) or m < 1:
        raise ValueError("need equally many phis and psis, at least one each")
    antecedent = [segerberg_expand(phis, psis, "I", guard), B(phis[0])]
    antecedent.extend(b_dual(phi) for phi in phis[1:])
    return implies(conj(antecedent), disj([B(psi) for psi in psis]))


# ---------------------------------------------------------------------------
# Lexer shared by both parsers

_TOKEN_SPECS = [
    ("IFF", r"<->"),
    ("IMPL", r"->"),
    ("KDUAL", r"<K>"),
    ("BDUAL", r"<B>"),
    ("LE", r"<="),
    ("GE", r">="),
    ("LT", r"<"),
    ("GT", r">"),
    ("EQ", r"="),
    ("RAT", r"-?\d+(?:/\d+)?"),
    ("PLUS", r"\+"),
    ("STAR", r"\*"),
    ("NOT", r"~"),
    ("AND", r"&"),
    ("OR", r"\|"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("K", r"K"),
    ("B", r"B"),
    ("P", r"P"),
    ("IDENT", r"[a-z][a-zA-Z0-9_]*"),
    ("WS", r"\s+"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{n}>{p})" for n, p in _TOKEN_SPECS))


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}",
                                     pos)
        kind = m.lastgroup
        if kind != "WS":
            tok = m.group()
            if kind == "IDENT" and tok in ("true", "false"):
                kind = tok.upper()
            tokens.append(_Token(kind, tok, pos))
        pos = m.end()
    tokens.append(_Token("EOF", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise FormulaSyntaxError(
                f"expected {kind}, found {tok.text or 'end of input'}",
                tok.offset, expected={kind})
        return self.advance()

    def fail(self, expected):
        tok = self.peek()
        raise FormulaSyntaxError(
            f"unexpected {tok.text or 'end of input'}", tok.offset,
            expected=set(expected))

    def done(self):
        if self.peek().kind != "EOF":
            self.fail({"EOF"})


class _KBParser(_Parser):
    """Precedence: ~, K, B bind tightest; then &; then |; then ->, <->
    (right-associative, one level)."""

    def formula(self) -> FormulaKB:
        left = self.or_()
        kind = self.peek().kind
        if kind == "IMPL":
            self.advance()
            return implies(left, self.formula())
        if kind == "IFF":
            self.advance()
            return iff(left, self.formula())
        return left

    def or_(self) -> FormulaKB:
        out = self.and_()
        while self.peek().kind == "OR":
            self.advance()
            out = or_(out, self.and_())
        return out

    def and_(self) -> FormulaKB:
        out = self.unary()
        while self.peek().kind == "AND":
            self.advance()
            out = And(out, self.unary())
        return out

    def unary(self) -> FormulaKB:
        kind = self.peek().kind
        if kind == "NOT":
            self.advance()
            return Not(self.unary())
        if kind == "K":
            self.advance()
            return K(self.unary())
        if kind == "B":
            self.advance()
            return B(self.unary())
        if kind == "KDUAL":
            self.advance()
            return k_dual(self.unary())
        if kind == "BDUAL":
            self.advance()
            return b_dual(self.unary())
        return self.primary()

    def primary(self) -> FormulaKB:
        tok = self.peek()
        if tok.kind == "TRUE":
            self.advance()
            return TOP
        if tok.kind == "FALSE":
            self.advance()
            return bot()
        if tok.kind == "IDENT":
            self.advance()
            return Atom(tok.text)
        if tok.kind == "LPAREN":
            self.advance()
            out = self.formula()
            self.expect("RPAREN")
            return out
        self.fail({"TRUE", "FALSE", "IDENT", "LPAREN", "NOT", "K", "B"})


class _LParser(_Parser):
    """Boolean layer as in the modal language (minus modalities), with
    term comparisons at the primary level."""

    def formula(self) -> FormulaL:
        left = self.or_()
        kind = self.peek().kind
        if kind == "IMPL":
            self.advance()
            right = self.formula()
            return LNot(LAnd(left, LNot(right)))
        if kind == "IFF":
            self.advance()
            right = self.formula()
            return LAnd(LNot(LAnd(left, LNot(right))),
                        LNot(LAnd(right, LNot(left))))
        return left

    def or_(self) -> FormulaL:
        out = self.and_()
        while self.peek().kind == "OR":
            self.advance()
            right = self.and_()
            out = LNot(LAnd(LNot(out), LNot(right)))
        return out

    def and_(self) -> FormulaL:
        out = self.unary()
        while self.peek().kind == "AND":
            self.advance()
            out = LAnd(out, self.unary())
        return out

    def unary(self) -> FormulaL:
        if self.peek().kind == "NOT":
            self.advance()
            return LNot(self.unary())
        return self.primary()

    def primary(self) -> FormulaL:
        tok = self.peek()
        if tok.kind in ("RAT", "P"):
            return self.comparison()
        if tok.kind == "TRUE":
            self.advance()
            return LTOP
        if tok.kind == "FALSE":
            self.advance()
            return LNot(LTOP)
        if tok.kind == "IDENT":
            self.advance()
            return LAtom(tok.text)
        if tok.kind == "LPAREN":
            self.advance()
            out = self.formula()
            self.expect("RPAREN")
            return out
        self.fail({"TRUE", "FALSE", "IDENT", "LPAREN", "NOT", "RAT", "P"})

    def comparison(self) -> FormulaL:
        left = self.term()
        tok = self.peek()
        ops = {"GE": l_ge, "LE": l_le, "GT": l_gt, "LT": l_lt, "EQ": l_eq}
        if tok.kind not in ops:
            self.fail(set(ops))
        self.advance()
        right = self.term()
        return ops[tok.kind](left, right)

    def term(self) -> TermL:
        out = self.factor()
        while self.peek().kind == "PLUS":
            self.advance()
            out = TSum(out, self.factor())
        return out

    def factor(self) -> TermL:
        tok = self.peek()
        if tok.kind == "RAT":
            self.advance()
            q = Fraction(tok.text)
            if self.peek().kind == "STAR":
                self.advance()
                return Scaled(q, self.prob_app())
            return Const(q)
        if tok.kind == "P":
            return Scaled(Fraction(1), self.prob_app())
        self.fail({"RAT", "P"})

    def prob_app(self) -> FormulaL:
        self.expect("P")
        self.expect("LPAREN")
        out = self.formula()
        self.expect("RPAREN")
        return out


def parse_kb(text: str) -> FormulaKB:
    parser = _KBParser(text)
    out = parser.formula()
    parser.done()
    return out


def parse_l(text: str) -> FormulaL:
    parser = _LParser(text)
    out = parser.formula()
    parser.done()
    return out


# ---------------------------------------------------------------------------
# Printers (parse . print is the identity on ASTs)

_PREC_IMPL, _PREC_OR, _PREC_AND, _PREC_UNARY = 0, 1, 2, 3


def _wrap(text: str, prec: int, context: int) -> str:
    return f"({text})" if prec < context else text


def print_kb(formula: FormulaKB, _context: int = 0) -> str:
    if isinstance(formula, Top):
        return "true"
    if isinstance(formula, Atom):
        return formula.name
    if isinstance(formula, Not):
        return "~" + print_kb(formula.sub, _PREC_UNARY)
    if isinstance(formula, K):
        return "K " + print_kb(formula.sub, _PREC_UNARY)
    if isinstance(formula, B):
        return "B " + print_kb(formula.sub, _PREC_UNARY)
    if isinstance(formula, And):
        text = (print_kb(formula.left, _PREC_AND) + " & "
                + print_kb(formula.right, _PREC_UNARY))
        return _wrap(text, _PREC_AND, _context)
    raise TypeError(f"not a modal formula: {formula!r}")


def print_term(term: TermL) -> str:
    if isinstance(term, Const):
        return str(term.value)
    if isinstance(term, Scaled):
        return f"{term.coeff}*P({print_l(term.sub)})"
    return f"{print_term(term.left)} + {print_term(term.right)}"


def print_l(formula: FormulaL, _context: int = 0) -> str:
    if isinstance(formula, LTop):
        return "true"
    if isinstance(formula, LAtom):
        return formula.name
    if isinstance(formula, LNot):
        return "~" + print_l(formula.sub, _PREC_UNARY)
    if isinstance(formula, LAnd):
        text = (print_l(formula.left, _PREC_AND) + " & "
                + print_l(formula.right, _PREC_UNARY))
        return _wrap(text, _PREC_AND, _context)
    if isinstance(formula, GeqZero):
        return _wrap(f"{print_term(formula.term)} >= 0", _PREC_AND, _context)
    raise TypeError(f"not a probability formula: {formula!r}")
