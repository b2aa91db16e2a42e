"""Text syntax for differential expressions, and formatting back to text/LaTeX.

Grammar, loosest binding first::

    sum     := product (("+" | "-") product)*
    product := unary (("*" | "/" | <juxtaposition>) unary)*
    unary   := "-" unary | "+" unary | power
    power   := primary ("^" unary)?            # right-associative
    primary := NUMBER | SYMBOL | ATOM | FUNC "(" sum ")"
             | "d" ["^" INT] "(" sum ")" | "(" sum ")"

Differentials.  ``d`` followed by exactly one letter is an order-1 atom
(``dx``); ``d2x``, ``d^2x`` and ``d^2(x)`` are order-2 atoms (no spaces
inside).  So ``dx`` always means the differential; the product of a symbol
named ``d`` with ``x`` must be written ``d * x`` or ``d x``.  Multi-letter
symbols need the call form, ``d(alpha)`` or ``d^2(alpha)``.  As in Leibniz notation ``dx^2`` is
``(dx)^2``; the differential of ``x^2`` is written ``d(x^2)``.

``d(...)`` around anything other than a symbol or an atom is a request to
differentiate.  ``parse`` rejects it unless ``differentiate=True``.

Exponents must reduce to rational constants (``x^(1/3)``, ``x^-5``).
Decimal literals are read exactly (``0.5`` is 1/2).

Plain formatting rules:

* a term prints as sign, coefficient, numerator factors, then ``/`` and the
  denominator (parenthesized when it has more than one factor);
* when the denominator is a single power ``dv^n`` and the numerator's
  differentials have total order ``n``, each numerator differential gets its
  own share of ``dv``: ``dy d^2x/dx^3`` prints as ``dy/dx*d^2x/dx^2``, the
  shares listed by increasing differential order;
* juxtaposition separates factors with a space, an integer coefficient is
  glued to a following symbol or function (``3x^2 dx``), and ``*`` is used
  before factors that begin with a digit or a parenthesis;
* a power of a higher differential is parenthesized, ``(d^2x)^2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .expr import (
    FUNCTIONS, Add, Atom, Const, Expr, Func, Mul, PendingDifferential, Pow, Sym,
    normalize,
)

__all__ = [
    "SourceSpan", "ParseError", "UnknownFunction", "NonRationalExponent",
    "parse", "parse_raw", "format_expr",
]


@dataclass(frozen=True)
class SourceSpan:
    """Half-open byte range into the UTF-8 encoded input."""

    start: int
    end: int

    def __post_init__(self):
        if not 0 <= self.start <= self.end:
            raise ValueError(f"bad span {self.start}..{self.end}")


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan, text: str = ""):
        super().__init__(message)
        self.message = message
        self.span = span
        self.text = text

    def __str__(self):
        if not self.text:
            return f"{self.message} at {self.span.start}..{self.span.end}"
        raw = self.text.encode()
        col = len(raw[: self.span.start].decode(errors="ignore"))
        width = max(1, len(raw[self.span.start: self.span.end].decode(errors="ignore")))
        return f"{self.message}\n  {self.text}\n  {' ' * col}{'^' * width}"


class UnknownFunction(ParseError):
    pass


class NonRationalExponent(ParseError):
    pass


# -- tokenizer ---------------------------------------------------------------

_NUMBER = re.compile(r"\d+(?:\.\d*)?|\.\d+")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_ATOM_WORD = re.compile(r"d(\d*)([A-Za-z])\Z")
_DPOW = re.compile(r"d\^(\d+)")


@dataclass
class _Tok:
    kind: str  # num, ident, atom, dop, op, end
    value: object
    start: int
    end: int


def _tokenize(text: str, err) -> list[_Tok]:
    toks: list[_Tok] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            m = _NUMBER.match(text, i)
            toks.append(_Tok("num", Fraction(m.group()), i, m.end()))
            i = m.end()
            continue
        if ch.isascii() and (ch.isalpha() or ch == "_"):
            m = _IDENT.match(text, i)
            word = m.group()
            if word == "d":
                j = m.end()
                mp = _DPOW.match(text, i)
                if j < n and text[j] == "(":
                    toks.append(_Tok("dop", 1, i, j))
                    i = j
                    continue
                if mp and mp.end() < n:
                    order, k = int(mp.group(1)), mp.end()
                    if text[k] == "(" or (text[k].isascii() and text[k].isalpha()):
                        if order < 1:
                            raise err("differential order must be at least 1", i, k)
                        if text[k] == "(":
                            toks.append(_Tok("dop", order, i, k))
                            i = k
                        else:
                            toks.append(_Tok("atom", Atom(text[k], order), i, k + 1))
                            i = k + 1
                        continue
            am = _ATOM_WORD.match(word)
            if am:
                order = int(am.group(1)) if am.group(1) else 1
                if order < 1:
                    raise err("differential order must be at least 1", i, m.end())
                toks.append(_Tok("atom", Atom(am.group(2), order), i, m.end()))
            else:
                toks.append(_Tok("ident", word, i, m.end()))
            i = m.end()
            continue
        if ch in "+-*/^()":
            toks.append(_Tok("op", ch, i, i + 1))
            i += 1
            continue
        raise err(f"unexpected character {ch!r}", i, i + 1)
    toks.append(_Tok("end", None, n, n))
    return toks


# -- parser ------------------------------------------------------------------

_STARTS_PRIMARY = {"num", "ident", "atom", "dop"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text, self._error)
        self.pos = 0
        self.pending: list[tuple[int, int]] = []

    def _span(self, start: int, end: int) -> SourceSpan:
        b0 = len(self.text[:start].encode())
        b1 = b0 + len(self.text[start:end].encode())
        return SourceSpan(b0, b1)

    def _error(self, message: str, start: int, end: int, cls=ParseError) -> ParseError:
        return cls(message, self._span(start, end), self.text)

    @property
    def tok(self) -> _Tok:
        return self.toks[self.pos]

    def _is_op(self, ch: str) -> bool:
        return self.tok.kind == "op" and self.tok.value == ch

    def _expect(self, ch: str) -> _Tok:
        if not self._is_op(ch):
            t = self.tok
            found = "end of input" if t.kind == "end" else repr(self.text[t.start:t.end])
            raise self._error(f"expected {ch!r}, found {found}", t.start, max(t.end, t.start))
        t = self.tok
        self.pos += 1
        return t

    def parse(self) -> Expr:
        if self.tok.kind == "end":
            raise self._error("empty expression", 0, 0)
        e = self.sum()
        if self.tok.kind != "end":
            t = self.tok
            raise self._error(f"unexpected {self.text[t.start:t.end]!r}", t.start, t.end)
        return e

    def sum(self) -> Expr:
        terms = [self.product()]
        while self._is_op("+") or self._is_op("-"):
            negate = self.tok.value == "-"
            self.pos += 1
            rhs = self.product()
            terms.append(Mul((Const(-1), rhs)) if negate else rhs)
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def product(self) -> Expr:
        factors = [self.unary()]
        while True:
            if self._is_op("*"):
                self.pos += 1
                factors.append(self.unary())
            elif self._is_op("/"):
                self.pos += 1
                factors.append(Pow(self.unary(), Fraction(-1)))
            elif self.tok.kind in _STARTS_PRIMARY or self._is_op("("):
                factors.append(self.unary())
            else:
                break
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def unary(self) -> Expr:
        if self._is_op("-"):
            self.pos += 1
            return Mul((Const(-1), self.unary()))
        if self._is_op("+"):
            self.pos += 1
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if not self._is_op("^"):
            return base
        self.pos += 1
        start = self.tok.start
        exponent = self.unary()
        end = self.toks[self.pos - 1].end
        try:
            value = normalize(exponent)
        except Exception:
            value = None
        if not isinstance(value, Const):
            raise self._error("exponent must be a rational constant", start, end,
                              NonRationalExponent)
        return Pow(base, value.value)

    def primary(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.pos += 1
            return Const(t.value)
        if t.kind == "atom":
            self.pos += 1
            return t.value
        if t.kind == "ident":
            self.pos += 1
            if self._is_op("("):
                if t.value not in FUNCTIONS:
                    raise self._error(f"unknown function {t.value!r}", t.start, t.end,
                                      UnknownFunction)
                self.pos += 1
                arg = self.sum()
                self._expect(")")
                return Func(t.value, arg)
            try:
                return Sym(t.value)
            except ValueError as exc:
                raise self._error(str(exc), t.start, t.end) from None
        if t.kind == "dop":
            self.pos += 1
            self._expect("(")
            arg = self.sum()
            close = self._expect(")")
            if isinstance(arg, Sym):
                return Atom(arg.name, t.value)
            if isinstance(arg, Atom):
                return Atom(arg.base, arg.order + t.value)
            self.pending.append((t.start, close.end))
            return PendingDifferential(arg, t.value)
        if self._is_op("("):
            self.pos += 1
            e = self.sum()
            self._expect(")")
            return e
        found = "end of input" if t.kind == "end" else repr(self.text[t.start:t.end])
        raise self._error(f"unexpected {found}", t.start, max(t.end, t.start))


def parse_raw(text: str) -> Expr:
    """Parse without normalizing; ``PendingDifferential`` nodes are kept."""
    return _Parser(text).parse()


def parse(text: str, differentiate: bool = False) -> Expr:
    """Parse ``text`` into a normalized expression.

    With ``differentiate=True`` every ``d(...)`` of a composite argument is
    carried out; otherwise such a request is a ``ParseError``.
    """
    p = _Parser(text)
    e = p.parse()
    if p.pending:
        if not differentiate:
            start, end = p.pending[0]
            raise p._error("d(...) of a composite expression is only allowed "
                           "where differentiation is requested", start, end)
        from .differential import resolve_pending

        return resolve_pending(e)
    return normalize(e)


# -- formatting --------------------------------------------------------------


def _split_term(t: Expr) -> tuple[Fraction, list[tuple[Expr, Fraction]]]:
    if isinstance(t, Const):
        return t.value, []
    fs = t.factors if isinstance(t, Mul) else (t,)
    coef = Fraction(1)
    out = []
    for f in fs:
        if isinstance(f, Const):
            coef *= f.value
        elif isinstance(f, Pow):
            out.append((f.base, f.exp))
        else:
            out.append((f, Fraction(1)))
    return coef, out


def _differential_share(num, den) -> Optional[tuple[Atom, list]]:
    """The homogeneous split ``a^e / dv^(order*e)`` if it applies."""
    if len(den) != 1:
        return None
    (dv, n), = den
    if not (isinstance(dv, Atom) and dv.order == 1 and n.denominator == 1):
        return None
    atoms = [(g, e) for g, e in num if isinstance(g, Atom)]
    if not atoms or any(e.denominator != 1 for _, e in atoms):
        return None
    if sum(g.order * e for g, e in atoms) != n:
        return None
    return dv, sorted(atoms, key=lambda ge: (ge[0].order, ge[0].base))


class _Plain:
    def exponent(self, e: Fraction) -> str:
        return str(e) if e.denominator == 1 else f"({e})"

    def atom(self, a: Atom) -> str:
        if len(a.base) == 1:
            return f"d{a.base}" if a.order == 1 else f"d^{a.order}{a.base}"
        return f"d({a.base})" if a.order == 1 else f"d^{a.order}({a.base})"

    def base(self, g: Expr, powered: bool) -> str:
        if isinstance(g, Sym):
            return g.name
        if isinstance(g, Atom):
            s = self.atom(g)
            return f"({s})" if powered and g.order > 1 and len(g.base) == 1 else s
        if isinstance(g, Func):
            return f"{g.name}({self.sum(g.arg)})"
        if isinstance(g, Const):
            v = g.value
            return str(v) if v.denominator == 1 and v >= 0 else f"({v})"
        return f"({self.sum(g)})"

    def factor(self, g: Expr, e: Fraction) -> str:
        if e == 1:
            return self.base(g, False)
        return f"{self.base(g, True)}^{self.exponent(e)}"

    def join(self, coef: Optional[int], items: list[tuple[Expr, Fraction]]) -> str:
        out = "" if coef is None else str(coef)
        prev_is_coef = coef is not None
        for g, e in items:
            s = self.factor(g, e)
            if not out:
                out = s
            elif s[0].isdigit() or s[0] == "(":
                out += "*" + s
            elif prev_is_coef and not isinstance(g, Atom):
                out += s
            else:
                out += " " + s
            prev_is_coef = False
        return out

    def term(self, t: Expr) -> tuple[bool, str]:
        coef, fs = _split_term(t)
        neg = coef < 0
        coef = abs(coef)
        num = [(g, e) for g, e in fs if e > 0]
        den = [(g, -e) for g, e in fs if e < 0]
        p, q = coef.numerator, coef.denominator
        if not fs:
            return neg, str(coef)
        share = _differential_share(num, den)
        if share is not None:
            dv, atoms = share
            plain = [(g, e) for g, e in num if not isinstance(g, Atom)]
            if q != 1:
                head = f"{p}/{q} {self.join(None, plain)}".rstrip()
            else:
                head = self.join(p if p != 1 else None, plain)
            groups = [f"{self.factor(g, e)}/{self.factor(dv, g.order * e)}" for g, e in atoms]
            body = "*".join(groups)
            return neg, f"{head} {body}" if head else body
        numstr = self.join(p if (p != 1 or not num) else None, num)
        if not den and q == 1:
            return neg, numstr
        den_items = len(den) + (q != 1)
        denstr = self.join(q if q != 1 else None, den)
        return neg, f"{numstr}/{denstr}" if den_items == 1 else f"{numstr}/({denstr})"

    def sum(self, e: Expr) -> str:
        terms = e.terms if isinstance(e, Add) else (e,)
        out = ""
        for i, t in enumerate(terms):
            neg, body = self.term(t)
            if i == 0:
                out = f"-{body}" if neg else body
            else:
                out += f" - {body}" if neg else f" + {body}"
        return out


_LATEX_FUNCS = {"sin": r"\sin", "cos": r"\cos", "exp": r"\exp", "ln": r"\ln"}


class _Latex(_Plain):
    def exponent(self, e: Fraction) -> str:
        return f"{{{e}}}"

    def symbol(self, name: str) -> str:
        return name if len(name) == 1 else rf"\mathit{{{name}}}"

    def atom(self, a: Atom) -> str:
        d = r"\mathrm{d}" if a.order == 1 else rf"\mathrm{{d}}^{{{a.order}}}"
        return d + self.symbol(a.base)

    def base(self, g: Expr, powered: bool) -> str:
        if isinstance(g, Sym):
            return self.symbol(g.name)
        if isinstance(g, Atom):
            s = self.atom(g)
            return rf"\left({s}\right)" if powered and g.order > 1 else s
        if isinstance(g, Func):
            name = _LATEX_FUNCS.get(g.name, rf"\operatorname{{{g.name}}}")
            return rf"{name}\left({self.sum(g.arg)}\right)"
        if isinstance(g, Const):
            return self.coef(g.value) if g.value.denominator == 1 else rf"\left({self.coef(g.value)}\right)"
        return rf"\left({self.sum(g)}\right)"

    def coef(self, c: Fraction) -> str:
        return str(c) if c.denominator == 1 else rf"\frac{{{c.numerator}}}{{{c.denominator}}}"

    def join(self, coef, items) -> str:
        parts = [] if coef is None else [str(coef)]
        for g, e in items:
            s = self.factor(g, e)
            if parts and s[0].isdigit():
                parts.append(r"\cdot")
            parts.append(s)
        return " ".join(parts)

    def term(self, t: Expr) -> tuple[bool, str]:
        coef, fs = _split_term(t)
        neg = coef < 0
        coef = abs(coef)
        if not fs:
            return neg, self.coef(coef)
        num = [(g, e) for g, e in fs if e > 0]
        den = [(g, -e) for g, e in fs if e < 0]
        share = _differential_share(num, den)
        if share is not None:
            dv, atoms = share
            head = [] if coef == 1 else [self.coef(coef)]
            plain = [(g, e) for g, e in num if not isinstance(g, Atom)]
            if plain:
                head.append(self.join(None, plain))
            groups = "".join(
                rf"\frac{{{self.factor(g, e)}}}{{{self.factor(dv, g.order * e)}}}" for g, e in atoms)
            return neg, " ".join(head + [groups])
        p, q = coef.numerator, coef.denominator
        numstr = self.join(p if (p != 1 or not num) else None, num)
        if not den and q == 1:
            return neg, numstr
        denstr = self.join(q if q != 1 else None, den)
        return neg, rf"\frac{{{numstr}}}{{{denstr}}}"


_STYLES = {"plain": _Plain(), "latex": _Latex()}


def format_expr(e: Expr, style: str = "plain") -> str:
    """Render ``e`` (normalized first) as ``plain`` text or ``latex``."""
    try:
        fmt = _STYLES[style]
    except KeyError:
        raise ValueError(f"unknown style {style!r}") from None
    return fmt.sum(normalize(e))
