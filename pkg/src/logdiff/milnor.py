"""Milnor K-theory symbols mod p and the differential symbol into the
logarithmic kernel.

``d_k`` sends a symbol {a_1,...,a_n} to dlog a_1 ^ ... ^ dlog a_n; its image
lands in the kernel of F - 1 modulo exact forms.  ``kato_decompose`` inverts
it constructively at p = 2: the support tuples are peeled in decreasing
order, and each coefficient is written as a dlog wedge plus something
strictly smaller via a two-step tower argument (a linear-map kernel pick
that changes the sub-p-base, then a rank-one relative Artin-Schreier solve).
Every intermediate identity is verified exactly before returning.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dataclass_field

from .arith import (
    RatFunc,
    factor_univariate,
    frobenius,
    inverse_mod,
    irreducible_polys,
    theta_decompose,
    theta_support_within,
)
from .forms import (
    DiffForm,
    dlog,
    in_lt_s_plus_exact,
    lt_s_membership,
    nu_membership,
    omega,
    wedge,
    zero_form,
)
from .truncation import CoordinateSystem, UnsupportedDenominator, fp_solve


class ZeroEntry(ValueError):
    """Milnor symbols need nonzero entries."""


class NotInNu(ValueError):
    """The form is not in the kernel of F - 1 modulo exact forms."""


class PreconditionFailed(ValueError):
    """The peeling hypothesis fails for this coefficient and tuple."""


class InternalAssertionFailed(AssertionError):
    """A step the underlying argument guarantees failed; an implementation bug."""


class ZeroMap(ValueError):
    """Reserved for the degenerate linear-map pick (handled, not raised)."""


class UnsupportedInstance(ValueError):
    """Outside the supported decomposition envelope (p = 2, m <= 2, n <= 2)."""


# -- symbol sums -------------------------------------------------------------


class MilnorSymbolSum:
    """Formal Z/p-combination of n-tuples of nonzero field elements."""

    __slots__ = ("field", "degree", "terms")

    def __init__(self, field, degree, terms=()):
        self.field = field
        self.degree = degree
        clean = []
        for coeff, entries in terms:
            coeff %= field.p
            if not coeff:
                continue
            entries = tuple(entries)
            if len(entries) != degree:
                raise ValueError("symbol length mismatch")
            for x in entries:
                if x.is_zero:
                    raise ZeroEntry("zero entry in a Milnor symbol")
            clean.append((coeff, entries))
        self.terms = tuple(clean)

    @classmethod
    def symbol(cls, field, entries, coeff=1):
        return cls(field, len(tuple(entries)), [(coeff, tuple(entries))])

    def __add__(self, other):
        if self.field != other.field or self.degree != other.degree:
            raise ValueError("mixed symbol groups")
        return MilnorSymbolSum(self.field, self.degree, self.terms + other.terms)

    def scale(self, c):
        return MilnorSymbolSum(
            self.field, self.degree, [((c * k) % self.field.p, e) for k, e in self.terms]
        )

    def __repr__(self):
        bits = []
        for c, entries in self.terms:
            inner = ", ".join(self.field.ratfunc_str(x) for x in entries)
            bits.append(f"{c}*{{{inner}}}")
        return " + ".join(bits) if bits else "0"


def d_k(sigma):
    """The differential symbol: sum of coeff * dlog a_1 ^ ... ^ dlog a_n."""
    f = sigma.field
    out = zero_form(f, sigma.degree)
    for coeff, entries in sigma.terms:
        term = DiffForm(f, 0, {(): f.const(coeff)})
        for x in entries:
            if x.is_zero:
                raise ZeroEntry("zero entry in a Milnor symbol")
            term = wedge(term, dlog(f, x))
        out = out + term
    return out


def verify_in_nu(sigma):
    """The image of the differential symbol is killed by F - 1 mod exact
    forms; this asserts it for a concrete symbol sum."""
    return nu_membership(d_k(sigma))


# -- constructive inverse in degree one (univariate) -------------------------


def dlog_inverse_n1(w):
    """x with dlog x = w over F_p(t), canonical as a product of monic
    irreducibles with exponents in [0, p)."""
    f = w.field
    if f.m != 1:
        raise ValueError("dlog inversion implemented for one variable")
    if w.degree != 1:
        raise ValueError("need a 1-form")
    if not nu_membership(w):
        raise NotInNu("form is not a dlog class")
    if w.is_zero:
        return f.one()
    p = f.p
    c = w.coeff((1,))
    r = c / f.var(1)  # coefficient of dt
    num, den = r.num, r.den
    x = f.one()
    for q, mult in factor_univariate(den):
        if mult > 1:
            raise InternalAssertionFailed("repeated pole in a dlog class")
        cof = den.try_exact_div(q)
        _, residue = (num * inverse_mod(cof, q)).divmod_single(q)
        qprime = q.deriv(1)
        _, e_poly = (residue * inverse_mod(qprime, q)).divmod_single(q)
        if not e_poly.is_constant():
            raise InternalAssertionFailed("non-integral residue in a dlog class")
        e = e_poly.constant_value() % p
        if e:
            x = x * RatFunc(q) ** e
    if dlog(f, x) != w:
        raise InternalAssertionFailed("dlog inversion failed verification")
    return x


# -- the tower machinery (p = 2) ----------------------------------------------


def lemma_c_pick(f_one, f_b, b):
    """A nonzero c = c_0 + c_1 b with f(c) = 0, for a linear map f given by
    its values on the basis {1, b} (characteristic 2).  Tie-breaks: c_1 = 1
    when the kernel allows it (f(b) = 0 gives c = b), c = 1 when f(1) = 0;
    otherwise c = f(b) + f(1) * b, scaled free of divisions."""
    if f_one.is_zero and f_b.is_zero:
        return b
    if f_one.is_zero:
        return b.const_like(1)
    if f_b.is_zero:
        return b
    return f_b + f_one * b


def _rel_split(field, a, j):
    """Coordinates of a over the index-j p-th-power split: a = sum_r a_r t_j^r
    with each a_r in k^p({t_i : i != j})-span (p = 2 uses r in {0, 1})."""
    p = field.p
    parts = [field.zero() for _ in range(p)]
    tj = field.var(j)
    for theta, root in theta_decompose(a).items():
        r = theta[j - 1]
        b_rest = list(theta)
        b_rest[j - 1] = 0
        piece = root.frobenius() * RatFunc(field.b_theta(tuple(b_rest)))
        parts[r] = parts[r] + piece
    return parts


def _relative_cartier_solve(field, a, j):
    """x in k^p({t_i : i <= j}) with (t_j dx/dt_j)/x = a.

    Works in the degree-p extension of kappa = k^p({t_i : i < j}) generated
    by t_j; solvability is exactly the vanishing of a 2x2 determinant, which
    is the relative Artin-Schreier hypothesis (characteristic 2)."""
    if field.p != 2:
        raise UnsupportedInstance("relative solve implemented for p = 2")
    tj = field.var(j)
    if a.is_zero:
        return field.one()
    a0, a1 = _rel_split(field, a, j)
    det = a0 * a0 + a1 * a1 * tj * tj + a0
    if not det.is_zero:
        raise InternalAssertionFailed("relative Artin-Schreier hypothesis fails")
    if a1.is_zero:
        if a == field.one():
            return tj
        raise InternalAssertionFailed("degenerate relative solve with a not in {0, 1}")
    x = a + field.one()
    lhs = (x.deriv(j) * tj) / x
    if lhs != a:
        raise InternalAssertionFailed("relative Cartier solution failed verification")
    return x


def _rel_proj0(field, x):
    """theta = 0 projection of x as a field element (the p-th power of the
    theta-free coordinate)."""
    parts = theta_decompose(x)
    zero_theta = (0,) * field.m
    root = parts.get(zero_theta)
    if root is None:
        return field.zero()
    return root.frobenius()


@dataclass
class TraceStep:
    s: tuple
    route: str
    c: str | None = None
    note: str = ""


def proposition_step(a, s, fld):
    """Peel one basis tuple: returns (v, xs) with

        a * omega_s = v + dlog x_1 ^ ... ^ dlog x_n,

    v supported strictly below s and x_i in k^p({t_j : j <= s(i)}).  The
    hypothesis ((a^p - a) omega_s in Omega(<s) + exact) is checked; the
    internal claims the argument guarantees are asserted; the output
    equation is verified exactly."""
    if fld.p != 2:
        raise UnsupportedInstance("decomposition implemented for p = 2")
    s = tuple(s)
    n = len(s)
    if a.is_zero:
        raise PreconditionFailed("zero coefficient")
    phi = omega(fld, s, frobenius(a) - a)
    if not in_lt_s_plus_exact(phi, s):
        raise PreconditionFailed("(a^p - a) omega_s not in Omega(<s) + exact forms")
    if not theta_support_within(a, range(1, s[-1] + 1)):
        raise InternalAssertionFailed("coefficient not in k_2")
    trace = []
    if n == 1:
        return _peel_degree_one(a, s, fld, trace)
    if n == 2 and fld.m == 2 and s == (1, 2):
        return _peel_degree_two(a, s, fld, trace)
    raise UnsupportedInstance(f"tuple {s} outside the supported envelope")


def _peel_degree_one(a, s, fld, trace):
    j = s[0]
    if fld.m == 1:
        w = omega(fld, s, a)
        x = dlog_inverse_n1(w)
        v = w - dlog(fld, x)
        if not v.is_zero:
            raise InternalAssertionFailed("univariate dlog inversion left a remainder")
        trace.append(TraceStep(s=s, route="dlog-inverse", c=None))
        return v, [x], trace
    x = _relative_cartier_solve(fld, a, j)
    if not theta_support_within(x, range(1, j + 1)):
        raise InternalAssertionFailed("solution escapes k^p({t_i : i <= s(1)})")
    v = omega(fld, s, a) - dlog(fld, x)
    if not lt_s_membership(v, s):
        raise InternalAssertionFailed("remainder not strictly below s")
    trace.append(
        TraceStep(s=s, route="relative-cartier", c=None, note=f"base k^p(t_1..t_{j - 1})")
    )
    return v, [x], trace


def _peel_degree_two(a, s, fld, trace):
    t1 = fld.var(1)
    f_one = _rel_proj0(fld, a)
    f_b = _rel_proj0(fld, a * t1)
    c = lemma_c_pick(f_one, f_b, t1)
    c0, c1 = _rel_split(fld, c, 1)
    if c1.is_zero:
        raise InternalAssertionFailed("kernel pick landed in k_0")
    if not theta_support_within(c, (1,)):
        raise InternalAssertionFailed("kernel pick escapes k_1")
    a_prime = (a * c) / (c1 * t1)
    trace.append(
        TraceStep(
            s=s,
            route="tower",
            c=fld.ratfunc_str(c),
            note="p-base of k_2/k_0 becomes {c, t_2}",
        )
    )
    # the recursive remainder v' is parallel to dlog t_1 and c lies in
    # k^p(t_1), so dlog c ^ v' = 0 and only the wedge survives
    _v_prime, xs_rest, subtrace = _peel_degree_one(a_prime, (2,), fld, trace=[])
    trace.extend(subtrace)
    x1 = c
    dl = wedge(dlog(fld, x1), dlog(fld, xs_rest[0]))
    v = omega(fld, s, a) - dl
    if not lt_s_membership(v, s):
        raise InternalAssertionFailed("degree-two remainder not strictly below s")
    if not theta_support_within(x1, (1,)):
        raise InternalAssertionFailed("x_1 escapes its sub-p-base")
    return v, [x1, xs_rest[0]], trace


@dataclass
class DecompositionResult:
    """Symbols with d_k(symbols) + residual equal to the input form."""

    symbols: MilnorSymbolSum
    residual: DiffForm
    trace: list = dataclass_field(default_factory=list)


def kato_decompose(w):
    """Write a logarithmic-kernel form as a sum of dlog wedges (p = 2).

    Tuples are peeled in decreasing lexicographic order (a linear extension
    of the componentwise order, with which it coincides for m <= 2); the
    result is re-verified via d_k before returning."""
    fld = w.field
    if fld.p != 2:
        raise UnsupportedInstance("decomposition implemented for p = 2")
    if fld.m > 2 or w.degree > 2 or w.degree < 1:
        raise UnsupportedInstance("supported envelope is m <= 2, 1 <= n <= 2")
    if not nu_membership(w):
        raise NotInNu("input is not in the logarithmic kernel")
    n = w.degree
    current = w
    terms = []
    trace = []
    for s in sorted(itertools.combinations(range(1, fld.m + 1), n), reverse=True):
        a = current.coeff(s)
        if a.is_zero:
            continue
        v, xs, steps = proposition_step(a, s, fld)
        acc = DiffForm(fld, 0, {(): fld.one()})
        for x in xs:
            acc = wedge(acc, dlog(fld, x))
        if omega(fld, s, a) - acc != v:
            raise InternalAssertionFailed("peeled equation failed verification")
        current = current - acc
        terms.append((1, tuple(xs)))
        trace.extend(steps)
    residual = current
    if not residual.is_zero:
        raise InternalAssertionFailed("nonzero residual after peeling")
    sigma = MilnorSymbolSum(fld, n, terms)
    if d_k(sigma) != w:
        raise InternalAssertionFailed("decomposition failed d_k verification")
    return DecompositionResult(symbols=sigma, residual=residual, trace=trace)


# -- brute-force oracle (univariate, degree one) -------------------------------


def dlog_wedge_search(w, degree_bound):
    """Exhaustive-search oracle over F_p-combinations of dlog q for monic
    irreducibles q of degree <= bound (univariate).  Returns a symbol sum
    with d_k image equal to w, or None."""
    fld = w.field
    if fld.m != 1 or w.degree != 1:
        raise ValueError("oracle covers the univariate degree-one envelope")
    irrs = irreducible_polys(fld, degree_bound)
    coord = CoordinateSystem(fld, irrs)
    columns = []
    for q in irrs:
        columns.append(coord.ratfunc_coords(dlog(fld, RatFunc(q)).coeff((1,))))
    try:
        target = coord.ratfunc_coords(w.coeff((1,)))
    except UnsupportedDenominator:
        return None
    sol = fp_solve(fld.p, columns, target)
    if sol is None:
        return None
    terms = [(c, (RatFunc(q),)) for c, q in zip(sol, irrs) if c]
    sigma = MilnorSymbolSum(fld, 1, terms)
    if d_k(sigma) != w:
        return None
    return sigma
