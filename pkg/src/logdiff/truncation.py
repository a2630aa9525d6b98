"""Bounded (truncated) solvers: finite-dimensional F_p slices of the
function field closed enough for Artin-Schreier linear algebra.

A truncation consists of polynomial numerators of degree <= D over
denominators that are products of distinct monic irreducibles of degree
<= D (capped by ``max_den_factors`` for multivariate fields, where the
full subset family is exponentially large).  Everything is exact: values
are coordinatized by partial-fraction-style expansions and the maps
a -> a^p - a and a -> class of (F-1)a are F_p-linear.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .arith import MultiPoly, RatFunc, frobenius, inverse_mod, irreducible_polys
from .forms import artin_schreier_class, omega, zero_form


MAX_DEGREE_BOUND = 8


@dataclass(frozen=True)
class TruncationSpec:
    """Degree bound D plus a cap on distinct irreducible denominator factors."""

    degree_bound: int
    max_den_factors: int = 1

    def __post_init__(self):
        if not 0 <= self.degree_bound <= MAX_DEGREE_BOUND:
            raise ValueError(f"degree bound must be in 0..{MAX_DEGREE_BOUND}")
        if self.max_den_factors < 0:
            raise ValueError("factor cap must be >= 0")


def _monomials_upto(field, d):
    out = []
    for e in itertools.product(range(d + 1), repeat=field.m):
        if sum(e) <= d:
            out.append(tuple(e))
    out.sort(key=lambda e: (sum(e), e))
    return out


def coefficient_generators(field, spec):
    """F_p-spanning set of the truncated coefficient space: monomials of
    degree <= D and t^e / g for denominators g built from <= cap distinct
    irreducibles of degree <= D, numerator degree <= deg g."""
    D = spec.degree_bound
    gens = [RatFunc(field.monomial_poly(e)) for e in _monomials_upto(field, D)]
    if spec.max_den_factors == 0 or D == 0:
        return gens
    irrs = irreducible_polys(field, D)
    for r in range(1, spec.max_den_factors + 1):
        for combo in itertools.combinations(irrs, r):
            g = combo[0]
            for q in combo[1:]:
                g = g * q
            dg = g.total_degree()
            for e in _monomials_upto(field, dg):
                gens.append(RatFunc(field.monomial_poly(e), g))
    return gens


# -- canonical coordinates --------------------------------------------------


class UnsupportedDenominator(ValueError):
    """The denominator does not factor over the truncation irreducibles."""


class CoordinateSystem:
    """Exact F_p-linear coordinates for rational functions whose denominators
    factor over a fixed irreducible list.

    Univariate fields get full partial fractions (canonical for any
    squarefree-or-not product).  Multivariate fields support denominators
    that are a power of a single list irreducible (all that the truncated
    pipelines produce after content reduction), via q-adic digits.
    """

    def __init__(self, field, irreducibles):
        self.field = field
        self.irreducibles = tuple(irreducibles)

    def _factor_den(self, den):
        """Factor a (content-normalized) denominator over the list."""
        out = []
        work = den
        for idx, q in enumerate(self.irreducibles):
            mult = 0
            while True:
                quo = work.try_exact_div(q)
                if quo is None:
                    break
                work = quo
                mult += 1
            if mult:
                out.append((idx, q, mult))
        if not work.is_constant():
            raise UnsupportedDenominator(
                f"denominator has a factor outside the truncation: {work.terms}"
            )
        return out, work.constant_value()

    def ratfunc_coords(self, v):
        """Coordinates of a rational function value (canonical, linear)."""
        p = self.field.p
        if v.is_zero:
            return {}
        num, den = v.num, v.den
        factors, unit = self._factor_den(den)
        if unit != 1:
            num = num.scale(pow(unit, p - 2, p))
        # cancel common factors so the expansion is canonical per value
        reduced = []
        for idx, q, mult in factors:
            while mult:
                quo = num.try_exact_div(q)
                if quo is None:
                    break
                num = quo
                mult -= 1
            if mult:
                reduced.append((idx, q, mult))
        factors = reduced
        out = {}
        if not factors:
            self._add_poly(out, (), num)
            return out
        if self.field.m == 1:
            self._univariate_partial_fractions(out, num, factors)
            return out
        if len(factors) != 1:
            raise UnsupportedDenominator(
                "multivariate coordinates support a single irreducible factor"
            )
        idx, q, a = factors[0]
        # q-adic digits: num = sum digit_k q^k, digits reduced mod LM(q)
        digits = []
        work = num
        while not work.is_zero:
            quo, rem = work.divmod_single(q)
            digits.append(rem)
            work = quo
        poly_tail = MultiPoly.zero(self.field.p, self.field.m)
        for k, digit in enumerate(digits):
            if digit.is_zero:
                continue
            if k < a:
                self._add_poly(out, ((idx, a - k),), digit)
            else:
                poly_tail = poly_tail + digit * q ** (k - a)
        self._add_poly(out, (), poly_tail)
        return out

    def _univariate_partial_fractions(self, out, num, factors):
        p = self.field.p
        den = MultiPoly.one(p, 1)
        for _, q, mult in factors:
            den = den * q**mult
        proper_sum = MultiPoly.zero(p, 1)
        for idx, q, a in factors:
            qa = q**a
            cofactor = den.try_exact_div(qa)
            inv = inverse_mod(cofactor, qa)
            _, r = (num * inv).divmod_single(qa)
            # digits of the q-part by q-adic expansion
            work = r
            k = 0
            while not work.is_zero and k < a:
                quo, digit = work.divmod_single(q)
                if not digit.is_zero:
                    self._add_poly(out, ((idx, a - k),), digit)
                work = quo
                k += 1
            proper_sum = proper_sum + r * cofactor
        poly_part = (num - proper_sum).try_exact_div(den)
        if poly_part is None:
            raise AssertionError("partial fraction bookkeeping failed")
        self._add_poly(out, (), poly_part)

    def _add_poly(self, out, denkey, poly):
        p = self.field.p
        for e, c in poly.terms.items():
            key = (denkey, e)
            v = (out.get(key, 0) + c) % p
            if v:
                out[key] = v
            else:
                out.pop(key, None)

    def form_coords(self, form):
        """Flattened coordinates of a differential form (per tuple, per key)."""
        out = {}
        for s, x in form.coeffs.items():
            for key, c in self.ratfunc_coords(x).items():
                out[(s,) + key] = c
        return out


# -- F_p linear algebra ------------------------------------------------------


def fp_solve(p, columns, target):
    """Solve sum_i x_i * columns[i] = target over F_p, treating each column
    and the target as sparse coordinate dicts.  Returns a coefficient list
    or None."""
    keys = sorted({k for col in columns for k in col} | set(target))
    key_pos = {k: i for i, k in enumerate(keys)}
    nrows = len(keys)
    ncols = len(columns)
    rows = [[0] * (ncols + 1) for _ in range(nrows)]
    for j, col in enumerate(columns):
        for k, v in col.items():
            rows[key_pos[k]][j] = v % p
    for k, v in target.items():
        rows[key_pos[k]][ncols] = v % p
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if rows[i][c] % p), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, nrows):
        if rows[i][ncols] % p:
            return None
    sol = [0] * ncols
    for k, c in enumerate(pivots):
        sol[c] = rows[k][ncols]
    return sol


def fp_nullspace(p, columns):
    """Basis of {x : sum x_i columns[i] = 0} over F_p (columns sparse dicts)."""
    keys = sorted({k for col in columns for k in col})
    ncols = len(columns)
    if p == 2:
        # bitmask rows over the columns for speed
        key_pos = {k: i for i, k in enumerate(keys)}
        rows = [0] * len(keys)
        for j, col in enumerate(columns):
            for k, v in col.items():
                if v % 2:
                    rows[key_pos[k]] |= 1 << j
        pivots = {}
        reduced = []
        for row in rows:
            for c, prow in pivots.items():
                if row >> c & 1:
                    row ^= prow
            if row:
                low = (row & -row).bit_length() - 1
                pivots[low] = row
                reduced.append(row)
        # back-substitute to echelon
        pivot_cols = sorted(pivots)
        for c in pivot_cols:
            prow = pivots[c]
            for c2 in pivot_cols:
                if c2 != c and pivots[c2] >> c & 1:
                    pivots[c2] ^= prow
        basis = []
        pivot_set = set(pivot_cols)
        for free in range(ncols):
            if free in pivot_set:
                continue
            vec = [0] * ncols
            vec[free] = 1
            for c in pivot_cols:
                if pivots[c] >> free & 1:
                    vec[c] = 1
            basis.append(vec)
        return basis
    key_pos = {k: i for i, k in enumerate(keys)}
    rows = [[0] * ncols for _ in keys]
    for j, col in enumerate(columns):
        for k, v in col.items():
            rows[key_pos[k]][j] = v % p
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [0] * ncols
        vec[free] = 1
        for k, c in enumerate(pivots):
            v = rows[k][free]
            if v:
                vec[c] = (-v) % p
        basis.append(vec)
    return basis


def independent_subset(p, columns):
    """Indices of a maximal linearly independent subset (greedy echelon)."""
    chosen = []
    echelon = {}  # pivot key -> dict
    for j, col in enumerate(columns):
        work = dict(col)
        while work:
            k = min(work)
            if k in echelon:
                prow, pval = echelon[k]
                f = (work[k] * pow(pval, p - 2, p)) % p
                for kk, vv in prow.items():
                    nv = (work.get(kk, 0) - f * vv) % p
                    if nv:
                        work[kk] = nv
                    else:
                        work.pop(kk, None)
            else:
                echelon[k] = (work, work[k])
                chosen.append(j)
                break
    return chosen


# -- the bounded solvers -----------------------------------------------------


def solve_artin_schreier_bounded(field, g, spec):
    """Some a in the truncation with a^p - a = g, else None (which does not
    certify global insolvability).  Univariate fields only: the truncated
    space is the full partial-fraction space of the spec."""
    if field.m != 1:
        raise ValueError("bounded Artin-Schreier solving is univariate-only")
    gens = coefficient_generators(field, spec)
    coord = CoordinateSystem(field, irreducible_polys(field, spec.degree_bound))
    try:
        target = coord.ratfunc_coords(g)
    except UnsupportedDenominator:
        return None
    columns = [coord.ratfunc_coords(frobenius(b) - b) for b in gens]
    sol = fp_solve(field.p, columns, target)
    if sol is None:
        return None
    a = field.zero()
    for c, b in zip(sol, gens):
        if c:
            a = a + b.scale(c)
    # constants are the ambiguity; canonicalize by zeroing the constant term
    const = _constant_term(field, a)
    if const:
        a = a - field.const(const)
    if frobenius(a) - a != g:
        raise AssertionError("bounded Artin-Schreier solution failed verification")
    return a


def _constant_term(field, a):
    """The theta-free constant of the polynomial part, when visible."""
    if a.is_zero:
        return 0
    if a.den.is_constant():
        return a.num.constant_value()
    return 0


def nu_basis_bounded(field, n, spec):
    """F_p-basis of {a in truncated Omega^n : (F-1)a = 0 mod exact forms}.

    The kernel is computed exactly: the truncation only bounds the domain,
    membership of the Artin-Schreier class is decided globally."""
    if not 1 <= n <= field.m:
        raise ValueError("degree out of range")
    gens = coefficient_generators(field, spec)
    coord = CoordinateSystem(field, irreducible_polys(field, max(spec.degree_bound, 1)))
    tuples = list(itertools.combinations(range(1, field.m + 1), n))
    forms = []
    value_cols = []
    for s in tuples:
        for g in gens:
            forms.append(omega(field, s, g))
            value_cols.append({(s,) + k: v for k, v in coord.ratfunc_coords(g).items()})
    keep = independent_subset(field.p, value_cols)
    forms = [forms[i] for i in keep]
    class_cols = [coord.form_coords(artin_schreier_class(f)) for f in forms]
    basis_vectors = fp_nullspace(field.p, class_cols)
    basis = []
    for vec in basis_vectors:
        acc = zero_form(field, n)
        for c, f in zip(vec, forms):
            if c:
                acc = acc + f.scale(c)
        if not acc.is_zero:
            basis.append(acc)
    return basis
