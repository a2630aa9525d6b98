"""Exact arithmetic over prime fields and rational function fields F_p(t_1..t_m).

Everything is exact: prime-field residues, sparse multivariate polynomials
with graded-lex term order (t_1 < t_2 < ... < t_m), and rational functions.
The variables double as a p-base of the function field: every element a has
a unique decomposition a = sum_theta x_theta^p * b_theta with b_theta the
monomials of exponent < p (``theta_decompose``).
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass

SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13, 17)
MAX_VARS = 4


class DivisionByZero(ArithmeticError):
    """Division by zero (field element, polynomial or rational function)."""


class ZeroPolynomial(ValueError):
    """The zero polynomial was passed where a nonzero one is required."""


class ParseError(ValueError):
    """Malformed rational-function text."""


class PrimeField:
    """The coefficient field F_p; elements are plain ints in [0, p)."""

    __slots__ = ("p",)

    def __init__(self, p):
        if p not in SUPPORTED_PRIMES:
            raise ValueError(f"unsupported prime modulus {p} (need one of {SUPPORTED_PRIMES})")
        self.p = p

    def normalize(self, a):
        return a % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise DivisionByZero("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    def elements(self):
        return range(self.p)

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and self.p == other.p

    def __hash__(self):
        return hash(("PrimeField", self.p))


def _grlex_key(e):
    # graded-lex with t_1 < t_2 < ... < t_m: compare total degree, then
    # exponents of the largest variable first.
    return (sum(e), tuple(reversed(e)))


class MultiPoly:
    """Sparse polynomial over F_p: map from exponent tuples to nonzero residues."""

    __slots__ = ("p", "nvars", "terms")

    def __init__(self, p, nvars, terms=None, *, _clean=False):
        self.p = p
        self.nvars = nvars
        if terms is None:
            terms = {}
        if _clean:
            self.terms = terms
            return
        clean = {}
        for e, c in terms.items():
            c %= p
            if c:
                e = tuple(int(x) for x in e)
                if len(e) != nvars or any(x < 0 for x in e):
                    raise ValueError(f"bad exponent vector {e} for {nvars} variables")
                clean[e] = c
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, p, nvars):
        return cls(p, nvars, {}, _clean=True)

    @classmethod
    def const(cls, p, nvars, c):
        c %= p
        if not c:
            return cls.zero(p, nvars)
        return cls(p, nvars, {(0,) * nvars: c}, _clean=True)

    @classmethod
    def one(cls, p, nvars):
        return cls.const(p, nvars, 1)

    @classmethod
    def variable(cls, p, nvars, i):
        """The variable t_i, 1-based."""
        e = tuple(1 if k == i - 1 else 0 for k in range(nvars))
        return cls(p, nvars, {e: 1}, _clean=True)

    @classmethod
    def monomial(cls, p, nvars, e, c=1):
        return cls(p, nvars, {tuple(e): c % p})

    # -- predicates and views ------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * self.nvars, 0)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self):
        """Degree in the single variable (univariate only)."""
        if self.nvars != 1:
            raise ValueError("degree() is univariate-only; use total_degree()")
        if not self.terms:
            return -1
        return max(e[0] for e in self.terms)

    def leading(self):
        """(exponent, coefficient) of the graded-lex leading term."""
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.p == other.p
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.p, self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"MultiPoly(p={self.p}, {self.terms!r})"

    # -- ring operations -----------------------------------------------

    def _check(self, other):
        if self.p != other.p or self.nvars != other.nvars:
            raise ValueError("mixed polynomial rings")

    def __add__(self, other):
        self._check(other)
        p = self.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = (out.get(e, 0) + c) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly(p, self.nvars, out, _clean=True)

    def __neg__(self):
        p = self.p
        return MultiPoly(p, self.nvars, {e: p - c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        p = self.p
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = (out.get(e, 0) + c1 * c2) % p
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return MultiPoly(p, self.nvars, out, _clean=True)

    def scale(self, c):
        c %= self.p
        if not c:
            return MultiPoly.zero(self.p, self.nvars)
        return MultiPoly(
            self.p, self.nvars, {e: (c * v) % self.p for e, v in self.terms.items()}, _clean=True
        )

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = MultiPoly.one(self.p, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def deriv(self, i):
        """Partial derivative with respect to t_i (1-based)."""
        p = self.p
        out = {}
        for e, c in self.terms.items():
            k = e[i - 1]
            v = (c * k) % p
            if k and v:
                e2 = list(e)
                e2[i - 1] = k - 1
                e2 = tuple(e2)
                out[e2] = (out.get(e2, 0) + v) % p
                if not out[e2]:
                    del out[e2]
        return MultiPoly(p, self.nvars, out, _clean=True)

    def frobenius(self):
        """p-th power, computed by spreading exponents (freshman's dream)."""
        p = self.p
        return MultiPoly(
            p, self.nvars, {tuple(p * x for x in e): c for e, c in self.terms.items()}, _clean=True
        )

    # -- division ------------------------------------------------------

    def divmod_single(self, g):
        """Reduce by a single divisor: self = q*g + r, no term of r divisible
        by the leading monomial of g.  Unique for a fixed term order."""
        self._check(g)
        if g.is_zero:
            raise DivisionByZero("polynomial division by zero")
        p = self.p
        glm, glc = g.leading()
        glc_inv = pow(glc, p - 2, p)
        work = dict(self.terms)
        q = {}
        r = {}
        while work:
            e = max(work, key=_grlex_key)
            c = work[e]
            if all(a >= b for a, b in zip(e, glm)):
                d = tuple(a - b for a, b in zip(e, glm))
                coef = (c * glc_inv) % p
                q[d] = (q.get(d, 0) + coef) % p
                if not q[d]:
                    del q[d]
                # the leading term cancels exactly; strictly smaller ones update
                for ge, gc in g.terms.items():
                    e2 = tuple(a + b for a, b in zip(d, ge))
                    v = (work.get(e2, 0) - coef * gc) % p
                    if v:
                        work[e2] = v
                    else:
                        work.pop(e2, None)
            else:
                r[e] = c
                del work[e]
        return (
            MultiPoly(p, self.nvars, q, _clean=True),
            MultiPoly(p, self.nvars, r, _clean=True),
        )

    def try_exact_div(self, g):
        """self / g if the division is exact, else None.  Bails out on the
        first remainder term, so failure is cheap even for large inputs."""
        self._check(g)
        if g.is_zero:
            raise DivisionByZero("polynomial division by zero")
        if self.is_zero:
            return self
        p = self.p
        glm, glc = g.leading()
        glc_inv = pow(glc, p - 2, p)
        work = dict(self.terms)
        q = {}
        while work:
            e = max(work, key=_grlex_key)
            if not all(a >= b for a, b in zip(e, glm)):
                return None
            c = work[e]
            d = tuple(a - b for a, b in zip(e, glm))
            coef = (c * glc_inv) % p
            q[d] = (q.get(d, 0) + coef) % p
            if not q[d]:
                del q[d]
            for ge, gc in g.terms.items():
                e2 = tuple(a + b for a, b in zip(d, ge))
                v = (work.get(e2, 0) - coef * gc) % p
                if v:
                    work[e2] = v
                else:
                    work.pop(e2, None)
        return MultiPoly(p, self.nvars, q, _clean=True)

    def monic(self):
        if self.is_zero:
            raise ZeroPolynomial("cannot make the zero polynomial monic")
        _, lc = self.leading()
        return self.scale(pow(lc, self.p - 2, self.p))

    def compose(self, values):
        """Evaluate at rational functions (one per variable)."""
        if len(values) != self.nvars:
            raise ValueError("wrong number of substitution values")
        field_zero = values[0].parent_zero() if values else None
        acc = None
        powers = [{} for _ in range(self.nvars)]

        def var_pow(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = values[i] ** k
            return cache[k]

        for e, c in self.terms.items():
            term = None
            for i, k in enumerate(e):
                if k:
                    f = var_pow(i, k)
                    term = f if term is None else term * f
            if term is None:
                term = values[0].const_like(c)
            else:
                term = term.scale(c)
            acc = term if acc is None else acc + term
        if acc is None:
            return values[0].const_like(0) if values else field_zero
        return acc


def poly_gcd_univariate(f, g):
    """Monic gcd of univariate polynomials over F_p."""
    if f.nvars != 1 or g.nvars != 1:
        raise ValueError("univariate gcd only")
    a, b = f, g
    while not b.is_zero:
        _, r = a.divmod_single(b)
        a, b = b, r
    if a.is_zero:
        return a
    return a.monic()


def inverse_mod(f, g):
    """Inverse of f modulo g in F_p[t] (univariate, coprime)."""
    p = f.p
    r0, r1 = g, f
    s0 = MultiPoly.zero(p, 1)
    s1 = MultiPoly.one(p, 1)
    while not r1.is_zero:
        q, r = r0.divmod_single(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree() != 0:
        raise ValueError("elements are not coprime")
    lc = r0.constant_value()
    _, rem = (s0.scale(pow(lc, p - 2, p))).divmod_single(g)
    return rem


class RatFunc:
    """Rational function num/den over F_p(t_1..t_m).

    Univariate pairs are stored gcd-reduced with monic denominator; for
    m >= 2 only monomial content and exact full cancellations are removed
    and equality is decided by cross-multiplication.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _reduced=False):
        if den is None:
            den = MultiPoly.one(num.p, num.nvars)
        if den.is_zero:
            raise DivisionByZero("rational function with zero denominator")
        if not _reduced:
            num, den = _reduce_fraction(num, den)
        self.num = num
        self.den = den

    # -- helpers used by MultiPoly.compose -----------------------------

    def parent_zero(self):
        return RatFunc(MultiPoly.zero(self.num.p, self.num.nvars))

    def const_like(self, c):
        return RatFunc(MultiPoly.const(self.num.p, self.num.nvars, c))

    # -- views ----------------------------------------------------------

    @property
    def p(self):
        return self.num.p

    @property
    def nvars(self):
        return self.num.nvars

    @property
    def is_zero(self):
        return self.num.is_zero

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        dc = self.den.constant_value()
        return (self.num.constant_value() * pow(dc, self.p - 2, self.p)) % self.p

    def is_polynomial(self):
        return self.den.is_constant()

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        if self.p != other.p or self.nvars != other.nvars:
            return False
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        # hash on the reduced pair; equal univariate values hash equal, and
        # multivariate callers avoid hashing (cross-multiplied equality).
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.num.terms!r}, {self.den.terms!r})"

    # -- field operations ------------------------------------------------

    def _check(self, other):
        if self.p != other.p or self.nvars != other.nvars:
            raise ValueError("mixed function fields")

    def __add__(self, other):
        self._check(other)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        num = self.num * other.den + other.num * self.den
        if self.nvars > 1 and not num.is_zero:
            # no multivariate gcd: cancel one full denominator when possible,
            # which keeps repeated mixed-denominator sums from snowballing
            q = num.try_exact_div(self.den)
            if q is not None:
                return RatFunc(q, other.den)
            q = num.try_exact_div(other.den)
            if q is not None:
                return RatFunc(q, self.den)
        return RatFunc(num, self.den * other.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    def scale(self, c):
        return RatFunc(self.num.scale(c), self.den)

    def inverse(self):
        if self.is_zero:
            raise DivisionByZero("inverse of the zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, n):
        if n < 0:
            return (self.inverse()) ** (-n)
        return RatFunc(self.num**n, self.den**n)

    def frobenius(self):
        return RatFunc(self.num.frobenius(), self.den.frobenius(), _reduced=True)

    def deriv(self, i):
        """Partial derivative (quotient rule), 1-based variable index."""
        n = self.num.deriv(i) * self.den - self.num * self.den.deriv(i)
        return RatFunc(n, self.den * self.den)

    def compose(self, values):
        nv = self.num.compose(values)
        dv = self.den.compose(values)
        return nv / dv


def _reduce_fraction(num, den):
    p = num.p
    nvars = num.nvars
    if num.is_zero:
        return MultiPoly.zero(p, nvars), MultiPoly.one(p, nvars)
    # strip shared monomial content
    mins = []
    for i in range(nvars):
        mn = min(min(e[i] for e in num.terms), min(e[i] for e in den.terms))
        mins.append(mn)
    if any(mins):
        num = MultiPoly(
            p, nvars, {tuple(a - b for a, b in zip(e, mins)): c for e, c in num.terms.items()},
            _clean=True,
        )
        den = MultiPoly(
            p, nvars, {tuple(a - b for a, b in zip(e, mins)): c for e, c in den.terms.items()},
            _clean=True,
        )
    if den.is_constant():
        c = pow(den.constant_value(), p - 2, p)
        return num.scale(c), MultiPoly.one(p, nvars)
    if nvars == 1:
        g = poly_gcd_univariate(num, den)
        if g.degree() > 0:
            num = num.try_exact_div(g)
            den = den.try_exact_div(g)
        _, lc = den.leading()
        if lc != 1:
            inv = pow(lc, p - 2, p)
            num = num.scale(inv)
            den = den.scale(inv)
        return num, den
    q = num.try_exact_div(den)
    if q is not None:
        return q, MultiPoly.one(p, nvars)
    _, lc = den.leading()
    if lc != 1:
        inv = pow(lc, p - 2, p)
        num = num.scale(inv)
        den = den.scale(inv)
    return num, den


# -- the function field ------------------------------------------------


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@dataclass(frozen=True)
class FunctionField:
    """The rational function field F_p(t_1..t_m) with ordered p-base t_1 < ... < t_m."""

    p: int
    vars: tuple

    def __post_init__(self):
        if self.p not in SUPPORTED_PRIMES:
            raise ValueError(f"unsupported prime {self.p}")
        names = tuple(self.vars)
        object.__setattr__(self, "vars", names)
        if not 1 <= len(names) <= MAX_VARS:
            raise ValueError(f"need between 1 and {MAX_VARS} variables")
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        for nm in names:
            if not _NAME_RE.fullmatch(nm):
                raise ValueError(f"bad variable name {nm!r}")

    @property
    def m(self):
        return len(self.vars)

    # -- element constructors -----------------------------------------

    def zero(self):
        return RatFunc(MultiPoly.zero(self.p, self.m))

    def one(self):
        return RatFunc(MultiPoly.one(self.p, self.m))

    def const(self, c):
        return RatFunc(MultiPoly.const(self.p, self.m, c))

    def var(self, i):
        """The generator t_i as a rational function (1-based)."""
        return RatFunc(MultiPoly.variable(self.p, self.m, i))

    def from_poly(self, poly):
        return RatFunc(poly)

    def monomial_poly(self, e, c=1):
        return MultiPoly.monomial(self.p, self.m, e, c)

    def b_theta(self, theta):
        """The p-base monomial prod t_i^theta(i)."""
        return MultiPoly.monomial(self.p, self.m, tuple(theta))

    def all_thetas(self):
        return itertools.product(range(self.p), repeat=self.m)

    # -- text grammar ----------------------------------------------------

    def parse(self, text):
        """Parse the rational-function grammar: ints, variables, + - * / ^, parens."""
        return _Parser(self, text).parse()

    def poly_str(self, poly):
        if poly.is_zero:
            return "0"
        parts = []
        for e, c in poly.sorted_terms():
            factors = []
            if c != 1 or sum(e) == 0:
                factors.append(str(c))
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(self.vars[i])
                elif k > 1:
                    factors.append(f"{self.vars[i]}^{k}")
            parts.append("*".join(factors))
        return "+".join(parts)

    def ratfunc_str(self, rf):
        if rf.is_polynomial():
            return self.poly_str(rf.num)
        return f"({self.poly_str(rf.num)})/({self.poly_str(rf.den)})"


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()+\-*/^]))")


class _Parser:
    """Recursive-descent parser for the rational-function grammar."""

    def __init__(self, field, text):
        self.field = field
        self.tokens = []
        pos = 0
        while pos < len(text):
            mo = _TOKEN_RE.match(text, pos)
            if not mo or mo.end() == pos:
                if text[pos:].strip():
                    raise ParseError(f"bad character at {text[pos:]!r}")
                break
            if mo.group(1) is not None:
                self.tokens.append(("int", int(mo.group(1))))
            elif mo.group(2) is not None:
                self.tokens.append(("name", mo.group(2)))
            else:
                self.tokens.append(("op", mo.group(3)))
            pos = mo.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self):
        v = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"trailing tokens at {self.tokens[self.i:]}")
        return v

    def expr(self):
        kind, val = self.peek()
        negate = False
        while kind == "op" and val in "+-":
            self.next()
            if val == "-":
                negate = not negate
            kind, val = self.peek()
        v = self.term()
        if negate:
            v = -v
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.term()
                v = v + rhs if val == "+" else v - rhs
            else:
                return v

    def term(self):
        v = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                rhs = self.factor()
                if val == "*":
                    v = v * rhs
                else:
                    if rhs.is_zero:
                        raise DivisionByZero("division by zero in expression")
                    v = v / rhs
            else:
                return v

    def factor(self):
        v = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind, e = self.next()
            if kind != "int":
                raise ParseError("exponent must be a nonnegative integer")
            v = v**e
        return v

    def atom(self):
        kind, val = self.next()
        if kind == "int":
            return self.field.const(val)
        if kind == "name":
            if val not in self.field.vars:
                raise ParseError(f"unknown variable {val!r}")
            return self.field.var(self.field.vars.index(val) + 1)
        if kind == "op" and val == "(":
            v = self.expr()
            kind, val = self.next()
            if not (kind == "op" and val == ")"):
                raise ParseError("missing closing parenthesis")
            return v
        if kind == "op" and val == "-":
            return -self.atom()
        raise ParseError(f"unexpected token {val!r}")


# -- elementwise operations --------------------------------------------


def ratfunc_arith(a, b, op):
    """Field arithmetic dispatch used by the JSON front ends."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero:
            raise DivisionByZero("division by zero rational function")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def frobenius(a):
    """a -> a^p, elementwise Frobenius of the function field."""
    return a.frobenius()


def theta_decompose(a):
    """Unique decomposition a = sum_theta x_theta^p * b_theta.

    Clears the denominator via a = (f * g^(p-1)) / g^p and splits the
    monomials of f * g^(p-1) by exponent residues mod p.  Returns only the
    nonzero components, keyed by theta tuples.
    """
    p = a.p
    nvars = a.nvars
    if a.is_zero:
        return {}
    f = a.num
    g = a.den
    h = f * g ** (p - 1)
    buckets = {}
    for e, c in h.terms.items():
        theta = tuple(x % p for x in e)
        root = tuple(x // p for x in e)
        bucket = buckets.setdefault(theta, {})
        bucket[root] = c  # distinct e give distinct (theta, root)
    out = {}
    for theta, terms in buckets.items():
        x = RatFunc(MultiPoly(p, nvars, terms, _clean=True), g)
        if not x.is_zero:
            out[theta] = x
    return out


def theta_recompose(field, parts):
    """Inverse of theta_decompose: sum_theta x_theta^p * b_theta."""
    acc = field.zero()
    for theta, x in parts.items():
        acc = acc + x.frobenius() * RatFunc(field.b_theta(theta))
    return acc


def pth_root(a):
    """x with x^p = a, or None when a is not a p-th power."""
    parts = theta_decompose(a)
    zero_theta = (0,) * a.nvars
    for theta in parts:
        if theta != zero_theta:
            return None
    if not parts:
        return RatFunc(MultiPoly.zero(a.p, a.nvars))
    return parts[zero_theta]


def theta_support_within(a, allowed):
    """True when every theta with a nonzero component vanishes outside
    the allowed 1-based variable index set (membership in k^p({t_i}))."""
    allowed = set(allowed)
    for theta in theta_decompose(a):
        for i, k in enumerate(theta, start=1):
            if k and i not in allowed:
                return False
    return True


# -- univariate factorization -------------------------------------------


@functools.lru_cache(maxsize=None)
def irreducible_univariate(p, d):
    """All monic irreducible univariate polynomials of degree d over F_p,
    by trial division against lower-degree irreducibles."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    smaller = []
    for dd in range(1, d // 2 + 1):
        smaller.extend(irreducible_univariate(p, dd))
    out = []
    for tail in itertools.product(range(p), repeat=d):
        terms = {(d,): 1}
        for k, c in enumerate(tail):
            if c:
                terms[(k,)] = c
        f = MultiPoly(p, 1, terms, _clean=True)
        if all(f.try_exact_div(q) is None for q in smaller):
            out.append(f)
    out.sort(key=lambda f: sorted(f.terms.items()))
    return tuple(out)


def factor_univariate(f):
    """Factor a univariate polynomial into monic irreducibles with
    multiplicities (leading coefficient is not included)."""
    if f.nvars != 1:
        raise ValueError("factor_univariate needs a univariate polynomial")
    if f.is_zero:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    p = f.p
    work = f.monic()
    out = {}
    d = 1
    while work.degree() > 0:
        if 2 * d > work.degree():
            out[work] = out.get(work, 0) + 1
            break
        for q in irreducible_univariate(p, d):
            while True:
                quo = work.try_exact_div(q)
                if quo is None:
                    break
                work = quo
                out[q] = out.get(q, 0) + 1
            if work.degree() < 2 * d:
                break
        d += 1
        if work.degree() > 0 and 2 * d > work.degree():
            out[work] = out.get(work, 0) + 1
            break
    return sorted(out.items(), key=lambda t: sorted(t[0].terms.items()))


def is_irreducible_univariate(f):
    if f.nvars != 1 or f.degree() < 1:
        return False
    fm = f.monic()
    for d in range(1, f.degree() // 2 + 1):
        for q in irreducible_univariate(f.p, d):
            if fm.try_exact_div(q) is not None:
                return False
    return True


@functools.lru_cache(maxsize=None)
def irreducible_polys(field, max_degree):
    """Monic irreducible polynomials of (total) degree <= max_degree.

    Univariate fields use the cached sieve; for m >= 2 candidates are
    enumerated and tested by exhaustive trial division, which is only
    sensible at small degree, so the envelope is guarded.
    """
    if field.m == 1:
        out = []
        for d in range(1, max_degree + 1):
            out.extend(irreducible_univariate(field.p, d))
        return tuple(out)
    if field.p > 3 or field.m > 2 or max_degree > 3:
        raise ValueError("multivariate irreducible enumeration is desk-scale only")
    p = field.p
    m = field.m
    monomials = [
        e
        for e in itertools.product(range(max_degree + 1), repeat=m)
        if sum(e) <= max_degree
    ]
    by_degree = {d: [] for d in range(1, max_degree + 1)}
    for coeffs in itertools.product(range(p), repeat=len(monomials)):
        terms = {e: c for e, c in zip(monomials, coeffs) if c}
        if not terms:
            continue
        f = MultiPoly(p, m, terms, _clean=True)
        d = f.total_degree()
        if d < 1:
            continue
        if f.leading()[1] != 1:
            continue
        by_degree[d].append(f)
    irred = []
    for d in range(1, max_degree + 1):
        for f in by_degree[d]:
            composite = False
            for dd in range(1, d // 2 + 1):
                for g in irred:
                    if g.total_degree() == dd and f.try_exact_div(g) is not None:
                        composite = True
                        break
                if composite:
                    break
            if not composite:
                irred.append(f)
    return tuple(irred)
