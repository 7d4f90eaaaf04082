"""Polynomial symbols in z and conj(z) on C^n: representation, parsing, structure.

A symbol is stored flat, as a finite map from exponent pairs
``(beta, gamma)`` (powers of ``z`` and of ``conj(z)``) to nonzero
Gaussian-rational coefficients.  Products in the input grammar are
expanded at parse time; like terms are always merged and zero terms
dropped, so equal symbols have equal term maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

from .arith import GaussianRational, MultiIndex, format_gaussian
from .errors import DimensionMismatchError, InputError, SymbolSyntaxError

TermKey = Tuple[MultiIndex, MultiIndex]


class SymbolPolynomial:
    """Finite linear combination of monomials z^beta * conj(z)^gamma."""

    __slots__ = ("dimension", "terms")

    def __init__(self, dimension: int, terms: Dict[TermKey, GaussianRational]):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        self.dimension = dimension
        self.terms = terms

    # -- construction -----------------------------------------------------

    @staticmethod
    def zero(dimension: int) -> "SymbolPolynomial":
        return SymbolPolynomial(dimension, {})

    @staticmethod
    def constant(dimension: int, value) -> "SymbolPolynomial":
        if not isinstance(value, GaussianRational):
            value = GaussianRational.of(value)
        if value.is_zero():
            return SymbolPolynomial.zero(dimension)
        z = MultiIndex.zero(dimension)
        return SymbolPolynomial(dimension, {(z, z): value})

    @staticmethod
    def monomial(dimension: int, beta, gamma, coefficient=1) -> "SymbolPolynomial":
        if not isinstance(coefficient, GaussianRational):
            coefficient = GaussianRational.of(coefficient)
        if coefficient.is_zero():
            return SymbolPolynomial.zero(dimension)
        b = MultiIndex(beta)
        g = MultiIndex(gamma)
        if b.dimension != dimension or g.dimension != dimension:
            raise DimensionMismatchError("exponent length must equal dimension")
        return SymbolPolynomial(dimension, {(b, g): coefficient})

    @staticmethod
    def from_terms(dimension: int, items: Iterable[Tuple[TermKey, GaussianRational]]) -> "SymbolPolynomial":
        acc: Dict[TermKey, GaussianRational] = {}
        for key, coeff in items:
            prev = acc.get(key)
            total = coeff if prev is None else prev + coeff
            if total.is_zero():
                acc.pop(key, None)
            else:
                acc[key] = total
        return SymbolPolynomial(dimension, acc)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        """True iff every term has beta = gamma = 0 (the zero symbol counts)."""
        return all(b.order == 0 and g.order == 0 for b, g in self.terms)

    def is_holomorphic(self) -> bool:
        return all(g.order == 0 for _, g in self.terms)

    # -- algebra -----------------------------------------------------------

    def _check_dim(self, other: "SymbolPolynomial") -> None:
        if self.dimension != other.dimension:
            raise DimensionMismatchError(
                f"symbol dimensions differ: {self.dimension} vs {other.dimension}"
            )

    def __add__(self, other: "SymbolPolynomial") -> "SymbolPolynomial":
        self._check_dim(other)
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            prev = out.get(key)
            total = coeff if prev is None else prev + coeff
            if total.is_zero():
                out.pop(key, None)
            else:
                out[key] = total
        return SymbolPolynomial(self.dimension, out)

    def __neg__(self) -> "SymbolPolynomial":
        return SymbolPolynomial(self.dimension, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "SymbolPolynomial") -> "SymbolPolynomial":
        return self + (-other)

    def __mul__(self, other: "SymbolPolynomial") -> "SymbolPolynomial":
        self._check_dim(other)
        acc: Dict[TermKey, GaussianRational] = {}
        for (b1, g1), c1 in self.terms.items():
            for (b2, g2), c2 in other.terms.items():
                key = (b1 + b2, g1 + g2)
                c = c1 * c2
                prev = acc.get(key)
                total = c if prev is None else prev + c
                if total.is_zero():
                    acc.pop(key, None)
                else:
                    acc[key] = total
        return SymbolPolynomial(self.dimension, acc)

    def scaled(self, c) -> "SymbolPolynomial":
        if not isinstance(c, GaussianRational):
            c = GaussianRational.of(c)
        if c.is_zero():
            return SymbolPolynomial.zero(self.dimension)
        return SymbolPolynomial(self.dimension, {k: v * c for k, v in self.terms.items()})

    def __pow__(self, exponent: int) -> "SymbolPolynomial":
        if exponent < 0:
            raise ValueError("negative exponents are not representable")
        out = SymbolPolynomial.constant(self.dimension, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    def conjugate(self) -> "SymbolPolynomial":
        """Complex conjugation: (beta, gamma) -> (gamma, beta), coefficient conjugated."""
        return SymbolPolynomial(
            self.dimension,
            {(g, b): c.conjugate() for (b, g), c in self.terms.items()},
        )

    def holomorphic_split(self) -> "tuple[SymbolPolynomial, SymbolPolynomial]":
        """(pure holomorphic part, remainder); the parts sum to self."""
        holo: Dict[TermKey, GaussianRational] = {}
        rest: Dict[TermKey, GaussianRational] = {}
        for key, coeff in self.terms.items():
            (holo if key[1].order == 0 else rest)[key] = coeff
        return (
            SymbolPolynomial(self.dimension, holo),
            SymbolPolynomial(self.dimension, rest),
        )

    # -- inspection ---------------------------------------------------------

    def sorted_terms(self) -> "list[tuple[TermKey, GaussianRational]]":
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SymbolPolynomial)
            and self.dimension == other.dimension
            and self.terms == other.terms
        )

    __hash__ = None  # mutable mapping inside; identity hashing would mislead

    def __repr__(self) -> str:
        return f"SymbolPolynomial(n={self.dimension}, {self.pretty()!r})"

    def pretty(self) -> str:
        """Canonical text form; parsing it back yields an equal symbol."""
        if not self.terms:
            return "0"
        pieces = []
        for (beta, gamma), coeff in self.sorted_terms():
            mono = _monomial_text(beta, gamma, self.dimension)
            sign, body = _coefficient_text(coeff, bool(mono))
            pieces.append((sign, f"{body}*{mono}" if body and mono else (mono or body)))
        head_sign, head = pieces[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out


def _monomial_text(beta: MultiIndex, gamma: MultiIndex, dimension: int) -> str:
    def var(j: int) -> str:
        return "z" if dimension == 1 else f"z{j + 1}"

    parts = []
    for j, e in enumerate(beta):
        if e == 1:
            parts.append(var(j))
        elif e > 1:
            parts.append(f"{var(j)}^{e}")
    for j, e in enumerate(gamma):
        if e == 1:
            parts.append(f"conj({var(j)})")
        elif e > 1:
            parts.append(f"conj({var(j)})^{e}")
    return "*".join(parts)


def _coefficient_text(c: GaussianRational, has_monomial: bool) -> "tuple[str, str]":
    """Return (sign, body) where body omits a leading minus."""
    if c.re and c.im:
        return "+", f"({format_gaussian(c)})"
    if c.im:
        sign = "+" if c.im > 0 else "-"
        mag = abs(c.im)
        body = "i" if mag == 1 else f"{mag}*i"
        return sign, body
    sign = "+" if c.re >= 0 else "-"
    mag = abs(c.re)
    if has_monomial and mag == 1:
        return sign, ""
    return sign, str(mag)


# ---------------------------------------------------------------------------
# structural analysis used by the classifiers


@dataclass(frozen=True)
class GradedPiece:
    """Terms of fixed degree difference beta_s - gamma_s in one variable."""

    variable_index: int  # 1-based, matching z1..zn
    degree: int
    piece: SymbolPolynomial


@dataclass(frozen=True)
class GradedDecomposition:
    pieces: tuple
    min_degree: int
    max_degree: int


def graded_decompose(p: SymbolPolynomial, s: int) -> GradedDecomposition:
    """Group a univariate symbol by theta = beta_s - gamma_s.

    Requires ``p`` nonzero and supported on variable ``s`` alone (for a
    multivariate product symbol, decompose its per-variable factors).
    Gaps in [min_degree, max_degree] appear as zero pieces.
    """
    if p.is_zero():
        raise InputError("graded decomposition of the zero symbol is undefined")
    if not 1 <= s <= p.dimension:
        raise InputError(f"variable index {s} out of 1..{p.dimension}")
    j = s - 1
    for beta, gamma in p.terms:
        for k in range(p.dimension):
            if k != j and (beta[k] or gamma[k]):
                raise InputError(
                    f"symbol involves z{k + 1}; graded decomposition works on "
                    f"single-variable symbols only"
                )
    by_degree: Dict[int, list] = {}
    for (beta, gamma), coeff in p.terms.items():
        by_degree.setdefault(beta[j] - gamma[j], []).append(((beta, gamma), coeff))
    lo = min(by_degree)
    hi = max(by_degree)
    pieces = []
    for theta in range(lo, hi + 1):
        items = by_degree.get(theta, [])
        pieces.append(GradedPiece(s, theta, SymbolPolynomial.from_terms(p.dimension, items)))
    return GradedDecomposition(tuple(pieces), lo, hi)


def conjugate(p: SymbolPolynomial) -> SymbolPolynomial:
    return p.conjugate()


def holomorphic_split(p: SymbolPolynomial):
    return p.holomorphic_split()


def is_constant(p: SymbolPolynomial) -> bool:
    return p.is_constant()


# ---------------------------------------------------------------------------
# parser
#
# expr    := ["-"] term (("+"|"-") term)* ;
# term    := factor ("*" factor)* ;
# factor  := base ("^" uint)? ;
# base    := var | "conj(" var ")" | number | "i" | "(" expr ")" ;
# var     := "z" uint | "z" (n=1 only) ;
# number  := uint | uint "/" uint ;

_T_INT = "int"
_T_VAR = "var"
_T_CONJ = "conj"
_T_IMAG = "imag"
_T_OP = "op"
_T_END = "end"


@dataclass(frozen=True)
class _Token:
    kind: str
    value: object
    pos: int


def _tokenize(text: str) -> "list[_Token]":
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token(_T_INT, int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            word = text[i:j]
            if word == "z":
                k = j
                while k < n and text[k].isdigit():
                    k += 1
                index = int(text[j:k]) if k > j else None
                tokens.append(_Token(_T_VAR, index, i))
                i = k
                continue
            if word == "conj":
                tokens.append(_Token(_T_CONJ, word, i))
                i = j
                continue
            if word == "i":
                tokens.append(_Token(_T_IMAG, word, i))
                i = j
                continue
            raise SymbolSyntaxError(f"unknown name '{word}'", text, i)
        if ch in "+-*/^()":
            tokens.append(_Token(_T_OP, ch, i))
            i += 1
            continue
        raise SymbolSyntaxError(f"unexpected character '{ch}'", text, i)
    tokens.append(_Token(_T_END, None, n))
    return tokens


class _Parser:
    def __init__(self, text: str, dimension: int):
        self.text = text
        self.dimension = dimension
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> _Token:
        tok = self.next()
        if tok.kind != _T_OP or tok.value != op:
            raise SymbolSyntaxError(f"expected '{op}'", self.text, tok.pos)
        return tok

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok.kind == _T_OP and tok.value in ops

    def parse(self) -> SymbolPolynomial:
        poly = self.parse_expr()
        tail = self.peek()
        if tail.kind != _T_END:
            raise SymbolSyntaxError("trailing input after expression", self.text, tail.pos)
        return poly

    def parse_expr(self) -> SymbolPolynomial:
        negate = False
        if self.at_op("-"):
            self.next()
            negate = True
        poly = self.parse_term()
        if negate:
            poly = -poly
        while self.at_op("+", "-"):
            op = self.next().value
            rhs = self.parse_term()
            poly = poly + (-rhs if op == "-" else rhs)
        return poly

    def parse_term(self) -> SymbolPolynomial:
        poly = self.parse_factor()
        while self.at_op("*"):
            self.next()
            poly = poly * self.parse_factor()
        return poly

    def parse_factor(self) -> SymbolPolynomial:
        base = self.parse_base()
        if self.at_op("^"):
            self.next()
            tok = self.next()
            if tok.kind != _T_INT:
                raise SymbolSyntaxError("exponent must be a nonnegative integer", self.text, tok.pos)
            return base ** tok.value
        return base

    def parse_base(self) -> SymbolPolynomial:
        tok = self.next()
        if tok.kind == _T_INT:
            value = Fraction(tok.value)
            if self.at_op("/"):
                self.next()
                den = self.next()
                if den.kind != _T_INT:
                    raise SymbolSyntaxError("expected denominator digits", self.text, den.pos)
                if den.value == 0:
                    raise SymbolSyntaxError("zero denominator", self.text, den.pos)
                value = Fraction(tok.value, den.value)
            return SymbolPolynomial.constant(self.dimension, value)
        if tok.kind == _T_IMAG:
            return SymbolPolynomial.constant(
                self.dimension, GaussianRational.of(0, 1)
            )
        if tok.kind == _T_VAR:
            j = self._variable_index(tok)
            return SymbolPolynomial.monomial(
                self.dimension, MultiIndex.unit(self.dimension, j), MultiIndex.zero(self.dimension)
            )
        if tok.kind == _T_CONJ:
            self.expect_op("(")
            var = self.next()
            if var.kind != _T_VAR:
                raise SymbolSyntaxError("conj(...) takes a variable", self.text, var.pos)
            j = self._variable_index(var)
            self.expect_op(")")
            return SymbolPolynomial.monomial(
                self.dimension, MultiIndex.zero(self.dimension), MultiIndex.unit(self.dimension, j)
            )
        if tok.kind == _T_OP and tok.value == "(":
            poly = self.parse_expr()
            self.expect_op(")")
            return poly
        raise SymbolSyntaxError("expected a variable, number, 'i' or '('", self.text, tok.pos)

    def _variable_index(self, tok: _Token) -> int:
        index: Optional[int] = tok.value  # type: ignore[assignment]
        if index is None:
            if self.dimension != 1:
                raise SymbolSyntaxError(
                    "bare 'z' is only valid in dimension 1; use z1..zn", self.text, tok.pos
                )
            return 0
        if not 1 <= index <= self.dimension:
            raise SymbolSyntaxError(
                f"variable index {index} out of 1..{self.dimension}", self.text, tok.pos
            )
        return index - 1


def parse_symbol(text: str, dimension: int) -> SymbolPolynomial:
    """Parse a polynomial symbol in z1..zn (bare 'z' allowed when n=1)."""
    if dimension < 1:
        raise InputError("dimension must be >= 1")
    return _Parser(text, dimension).parse()
