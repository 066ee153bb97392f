"""Multivariate polynomials over F_p, monomial enumeration and parsing.

Monomials are exponent tuples; polynomials map monomials to nonzero residues
mod p.  The canonical monomial order is degree-lex (total degree first, then
lexicographic with earlier variables larger), the only order used anywhere in
the toolkit.
"""

from __future__ import annotations

from math import comb

from .fieldmath import DEFAULT_PRIME

Monomial = tuple  # exponent vector, length = number of variables


def mono_degree(m: Monomial) -> int:
    return sum(m)

def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))

def mono_key(m: Monomial):
    """Sort key for degree-lex with x1 > x2 > ...; ascending within a degree
    means x1-heavy monomials first (x^2, xy, y^2)."""
    return (mono_degree(m), tuple(-e for e in m))


def monomials_of_degree(nvars: int, d: int):
    """All monomials in nvars variables of total degree d, degree-lex sorted.

    Length is C(d + nvars - 1, nvars - 1).
    """
    if d < 0:
        raise ValueError("degree must be >= 0")
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + [e], remaining - e, slots - 1)

    if nvars == 0:
        return [()] if d == 0 else []
    rec([], d, nvars)
    assert len(out) == comb(d + nvars - 1, nvars - 1)
    return out


def monomials_below(nvars: int, bound: int):
    """All monomials of degree < bound, sorted by degree then degree-lex."""
    out = []
    for d in range(bound):
        out.extend(monomials_of_degree(nvars, d))
    return out


class Poly:
    """A polynomial in `nvars` variables over F_p.

    Stored as {monomial: coefficient} with no zero coefficients.
    """

    __slots__ = ("coeffs", "nvars", "p")

    def __init__(self, coeffs: dict, nvars: int, p: int = DEFAULT_PRIME):
        self.nvars = nvars
        self.p = p
        self.coeffs = {m: c % p for m, c in coeffs.items() if c % p != 0}

    @classmethod
    def zero(cls, nvars: int, p: int = DEFAULT_PRIME) -> "Poly":
        return cls({}, nvars, p)

    @classmethod
    def constant(cls, c: int, nvars: int, p: int = DEFAULT_PRIME) -> "Poly":
        return cls({(0,) * nvars: c}, nvars, p)

    @classmethod
    def variable(cls, i: int, nvars: int, p: int = DEFAULT_PRIME) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): 1}, nvars, p)

    @classmethod
    def monomial(cls, m: Monomial, p: int = DEFAULT_PRIME, c: int = 1) -> "Poly":
        return cls({tuple(m): c}, len(m), p)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.coeffs:
            return -1
        return max(mono_degree(m) for m in self.coeffs)

    def order(self) -> int:
        """Degree of the lowest nonzero homogeneous component; -1 if zero."""
        if not self.coeffs:
            return -1
        return min(mono_degree(m) for m in self.coeffs)

    def constant_term(self) -> int:
        return self.coeffs.get((0,) * self.nvars, 0)

    def is_unit(self) -> bool:
        """Unit in the local ring: nonzero constant term."""
        return self.constant_term() != 0

    def _check(self, other: "Poly") -> None:
        if self.nvars != other.nvars or self.p != other.p:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = (out.get(m, 0) + c) % self.p
        return Poly(out, self.nvars, self.p)

    def __sub__(self, other: "Poly") -> "Poly":
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = (out.get(m, 0) - c) % self.p
        return Poly(out, self.nvars, self.p)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.coeffs.items()}, self.nvars, self.p)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        out = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                m = mono_mul(m1, m2)
                out[m] = (out.get(m, 0) + c1 * c2) % self.p
        return Poly(out, self.nvars, self.p)

    def scale(self, c: int) -> "Poly":
        return Poly({m: cc * c for m, cc in self.coeffs.items()},
                    self.nvars, self.p)

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power")
        result = Poly.constant(1, self.nvars, self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift_vars(self, new_nvars: int) -> "Poly":
        """Reinterpret in a ring with extra trailing variables."""
        if new_nvars < self.nvars:
            raise ValueError("cannot drop variables")
        pad = new_nvars - self.nvars
        return Poly({m + (0,) * pad: c for m, c in self.coeffs.items()},
                    new_nvars, self.p)

    def initial_form(self) -> "Poly":
        """Lowest-degree homogeneous component (order form at the origin)."""
        if not self.coeffs:
            raise ValueError("initial form of the zero polynomial")
        o = self.order()
        return Poly({m: c for m, c in self.coeffs.items()
                     if mono_degree(m) == o}, self.nvars, self.p)

    def truncate(self, bound: int) -> "Poly":
        """Drop all terms of degree >= bound."""
        return Poly({m: c for m, c in self.coeffs.items()
                     if mono_degree(m) < bound}, self.nvars, self.p)

    def sorted_terms(self):
        return sorted(self.coeffs.items(), key=lambda mc: mono_key(mc[0]))

    def to_string(self, varnames) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            if c != 1 or mono_degree(m) == 0:
                factors.append(str(c))
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(varnames[i])
                elif e > 1:
                    factors.append(f"{varnames[i]}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.nvars == other.nvars
            and self.p == other.p
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((frozenset(self.coeffs.items()), self.nvars, self.p))

    def __repr__(self):
        return f"Poly({self.coeffs!r}, nvars={self.nvars}, p={self.p})"


class PolyVec:
    """A fixed-length vector of polynomials (an element of a free module)."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = list(entries)
        if not self.entries:
            raise ValueError("PolyVec needs at least one entry")

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    @property
    def nvars(self):
        return self.entries[0].nvars

    @property
    def p(self):
        return self.entries[0].p

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def scale_poly(self, f: Poly) -> "PolyVec":
        return PolyVec([f * e for e in self.entries])

    def __add__(self, other: "PolyVec") -> "PolyVec":
        return PolyVec([a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "PolyVec") -> "PolyVec":
        return PolyVec([a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "PolyVec":
        return PolyVec([-a for a in self.entries])

    def __eq__(self, other):
        return isinstance(other, PolyVec) and self.entries == other.entries

    def __repr__(self):
        return f"PolyVec({self.entries!r})"


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class _Parser:
    """Recursive-descent parser for the polynomial grammar:

        expr   := ['-'] term (('+'|'-') term)*
        term   := factor ('*' factor)*
        factor := base ('^' integer)?
        base   := integer | variable | '(' expr ')'

    Implicit multiplication is a syntax error.
    """

    def __init__(self, text: str, varnames, p: int):
        self.text = text
        self.pos = 0
        self.varnames = list(varnames)
        self.nvars = len(self.varnames)
        self.p = p

    def error(self, msg: str):
        raise ParseError(msg, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected '{ch}'")
        self.pos += 1

    def parse(self) -> Poly:
        result = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("unexpected trailing input")
        return result

    def expr(self) -> Poly:
        negate = False
        if self.peek() == "-":
            self.pos += 1
            negate = True
        elif self.peek() == "+":
            self.pos += 1
        result = self.term()
        if negate:
            result = -result
        while True:
            op = self.peek()
            if op == "+":
                self.pos += 1
                result = result + self.term()
            elif op == "-":
                self.pos += 1
                result = result - self.term()
            else:
                return result

    def term(self) -> Poly:
        result = self.factor()
        while self.peek() == "*":
            self.pos += 1
            result = result * self.factor()
        return result

    def factor(self) -> Poly:
        base = self.base()
        if self.peek() == "^":
            self.pos += 1
            e = self.integer()
            base = base ** e
        return base

    def base(self) -> Poly:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            self.expect(")")
            return inner
        if ch.isdigit():
            return Poly.constant(self.integer(), self.nvars, self.p)
        if ch.isalpha() or ch == "_":
            name = self.identifier()
            if name not in self.varnames:
                self.error(f"unknown variable '{name}'")
            return Poly.variable(self.varnames.index(name), self.nvars, self.p)
        self.error("expected a number, variable or '('")

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def identifier(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        return self.text[start:self.pos]


def parse(text: str, varnames, p: int = DEFAULT_PRIME) -> Poly:
    """Parse a polynomial expression over the named variables."""
    return _Parser(text, varnames, p).parse()
