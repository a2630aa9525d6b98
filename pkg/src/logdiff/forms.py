"""Differential forms over F_p(t_1..t_m) in the dlog basis.

A degree-n form is a sparse map from strictly increasing index tuples s to
coefficients: a_s * omega_s with omega_s = dlog t_{s(1)} ^ ... ^ dlog t_{s(n)}.
This basis makes the inverse Cartier operator diagonal (coefficientwise
Frobenius) and splits the complex into theta-graded pieces on which the
differential is wedging with lambda_theta = sum theta(i) dlog t_i; for
theta != 0 an explicit contracting homotopy certifies exactness, which
yields a canonical projection ``normal_form_mod_exact`` onto a complement
of the exact forms, with an exact-preimage witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .arith import RatFunc, theta_decompose


class ZeroArgument(ValueError):
    """dlog of zero is undefined."""


class DegreeOverflow(ValueError):
    """A nonzero form of degree above the number of variables."""


class ZeroTheta(ValueError):
    """The contracting homotopy needs theta != 0."""


class NotAutomorphism(ValueError):
    """The substitution is not in the supported automorphism family."""


class DiffForm:
    """Sparse differential form; degree-0 forms hold a single () entry."""

    __slots__ = ("field", "degree", "coeffs")

    def __init__(self, field, degree, coeffs=None):
        self.field = field
        self.degree = degree
        clean = {}
        if coeffs:
            for s, x in coeffs.items():
                s = tuple(s)
                if len(s) != degree:
                    raise ValueError(f"tuple {s} has wrong length for degree {degree}")
                if any(not 1 <= i <= field.m for i in s) or any(
                    a >= b for a, b in zip(s, s[1:])
                ):
                    raise ValueError(f"tuple {s} is not strictly increasing in 1..{field.m}")
                if not x.is_zero:
                    clean[s] = x
        if degree > field.m and clean:
            raise DegreeOverflow(f"nonzero form of degree {degree} over m = {field.m}")
        self.coeffs = clean

    # -- basics ---------------------------------------------------------

    @property
    def is_zero(self):
        return not self.coeffs

    def support(self):
        return sorted(self.coeffs)

    def coeff(self, s):
        return self.coeffs.get(tuple(s), self.field.zero())

    def __eq__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        if self.field != other.field or self.degree != other.degree:
            return False
        for s in set(self.coeffs) | set(other.coeffs):
            if self.coeff(s) != other.coeff(s):
                return False
        return True

    def __repr__(self):
        inner = ", ".join(
            f"{s}: {self.field.ratfunc_str(x)}" for s, x in sorted(self.coeffs.items())
        )
        return f"DiffForm(deg={self.degree}, {{{inner}}})"

    def __add__(self, other):
        if self.field != other.field or self.degree != other.degree:
            raise ValueError("cannot add forms of different degree or field")
        out = dict(self.coeffs)
        for s, x in other.coeffs.items():
            y = out.get(s)
            v = x if y is None else x + y
            if v.is_zero:
                out.pop(s, None)
            else:
                out[s] = v
        return DiffForm(self.field, self.degree, out)

    def __neg__(self):
        return DiffForm(self.field, self.degree, {s: -x for s, x in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, x):
        """Multiply by a rational-function (or int) scalar."""
        if isinstance(x, int):
            x = self.field.const(x)
        if x.is_zero:
            return zero_form(self.field, self.degree)
        return DiffForm(self.field, self.degree, {s: c * x for s, c in self.coeffs.items()})


def zero_form(field, degree):
    return DiffForm(field, degree, {})


def omega(field, s, coeff=None):
    """The basis form omega_s, optionally scaled."""
    c = coeff if coeff is not None else field.one()
    return DiffForm(field, len(s), {tuple(s): c})


# -- wedge and exterior derivative ---------------------------------------


def _merge_tuples(s, t):
    """Sorted union and sign of the shuffle, or None on a repeated index."""
    if set(s) & set(t):
        return None, 0
    inversions = sum(1 for a in s for b in t if a > b)
    merged = tuple(sorted(s + t))
    return merged, -1 if inversions % 2 else 1


def wedge(a, b):
    """Exterior product; bilinear, graded-anticommutative, alternating."""
    if a.field != b.field:
        raise ValueError("mixed fields")
    field = a.field
    degree = a.degree + b.degree
    out = {}
    for s, x in a.coeffs.items():
        for t, y in b.coeffs.items():
            merged, sign = _merge_tuples(s, t)
            if merged is None:
                continue
            c = x * y
            if sign < 0:
                c = -c
            prev = out.get(merged)
            v = c if prev is None else prev + c
            if v.is_zero:
                out.pop(merged, None)
            else:
                out[merged] = v
    if degree > field.m:
        # alternation killed everything above top degree
        return DiffForm(field, degree, {})
    return DiffForm(field, degree, out)


def ext_d(a):
    """Exterior derivative in the dlog basis: d(x omega_s) = dx ^ omega_s
    with dx = sum_i (t_i dx/dt_i) dlog t_i.  Top-degree forms map to 0."""
    field = a.field
    if a.degree > field.m:
        raise DegreeOverflow("differential of an over-degree form")
    out = zero_form(field, a.degree + 1)
    for s, x in a.coeffs.items():
        dx = {}
        for i in range(1, field.m + 1):
            c = x.deriv(i) * field.var(i)
            if not c.is_zero:
                dx[(i,)] = c
        if dx:
            out = out + wedge(DiffForm(field, 1, dx), omega(field, s))
    return out


def dlog(field, x):
    """Logarithmic differential dlog x = dx / x as a 1-form; multiplicative:
    dlog(xy) = dlog x + dlog y."""
    if x.is_zero:
        raise ZeroArgument("dlog of zero")
    coeffs = {}
    for i in range(1, field.m + 1):
        c = (x.deriv(i) * field.var(i)) / x
        if not c.is_zero:
            coeffs[(i,)] = c
    return DiffForm(field, 1, coeffs)


# -- theta grading ---------------------------------------------------------


@dataclass
class ThetaComponent:
    """The piece of a form whose coefficients lie in k^p * b_theta."""

    theta: tuple
    form: DiffForm


def theta_split(a):
    """Split a form into its theta-graded components (exact, finite)."""
    field = a.field
    parts = {}
    for s, x in a.coeffs.items():
        for theta, root in theta_decompose(x).items():
            piece = root.frobenius() * RatFunc(field.b_theta(theta))
            comp = parts.setdefault(theta, {})
            prev = comp.get(s)
            v = piece if prev is None else prev + piece
            if v.is_zero:
                comp.pop(s, None)
            else:
                comp[s] = v
    return {
        theta: ThetaComponent(theta, DiffForm(field, a.degree, comp))
        for theta, comp in parts.items()
        if comp
    }


def lambda_form(field, theta):
    """lambda_theta = sum_i theta(i) dlog t_i."""
    coeffs = {}
    for i, k in enumerate(theta, start=1):
        if k % field.p:
            coeffs[(i,)] = field.const(k)
    return DiffForm(field, 1, coeffs)


def lt_s_membership(a, s):
    """True when every support tuple is strictly below s in the
    componentwise partial order."""
    s = tuple(s)
    if a.degree != len(s):
        raise ValueError("degree mismatch")
    for t in a.coeffs:
        if not (all(x <= y for x, y in zip(t, s)) and t != s):
            return False
    return True


def contracting_homotopy(component):
    """The homotopy h with lambda_theta ^ h(eta) + h(lambda_theta ^ eta) = eta
    on the theta-component (theta != 0): contract the smallest index j with
    theta(j) != 0 and divide by theta(j)."""
    theta = tuple(component.theta)
    field = component.form.field
    p = field.p
    j = None
    for i, k in enumerate(theta, start=1):
        if k % p:
            j = i
            break
    if j is None:
        raise ZeroTheta("contracting homotopy needs theta != 0")
    inv = pow(theta[j - 1] % p, p - 2, p)
    out = {}
    for s, x in component.form.coeffs.items():
        if j not in s:
            continue
        pos = s.index(j)  # 0-based position
        sign = -1 if pos % 2 else 1
        t = s[:pos] + s[pos + 1 :]
        c = x.scale(inv if sign > 0 else (-inv) % p)
        prev = out.get(t)
        v = c if prev is None else prev + c
        if v.is_zero:
            out.pop(t, None)
        else:
            out[t] = v
    return DiffForm(field, component.form.degree - 1, out)


# -- canonical projection modulo exact forms -------------------------------


def normal_form_with_witness(a):
    """(nf(a), xi) with a - nf(a) = d xi, nf idempotent and linear, and
    nf(d anything) = 0: theta = 0 components pass through, every other
    component is replaced by h(d component)."""
    if a.degree < 1:
        raise ValueError("normal form needs degree >= 1")
    field = a.field
    zero_theta = (0,) * field.m
    nf = zero_form(field, a.degree)
    witness = zero_form(field, a.degree - 1)
    for theta, comp in theta_split(a).items():
        if theta == zero_theta:
            nf = nf + comp.form
            continue
        lam = lambda_form(field, theta)
        d_comp = wedge(lam, comp.form)  # = d on this component
        nf = nf + contracting_homotopy(ThetaComponent(theta, d_comp))
        witness = witness + contracting_homotopy(comp)
    return nf, witness


def normal_form_mod_exact(a):
    return normal_form_with_witness(a)[0]


def inverse_cartier(a):
    """Coefficientwise Frobenius in the dlog basis."""
    return DiffForm(a.field, a.degree, {s: x.frobenius() for s, x in a.coeffs.items()})


def artin_schreier_class(a):
    """The canonical representative of (F - 1)(a) modulo exact forms.

    F(a) has p-th-power coefficients, hence is theta = 0 pure and already
    canonical; linearity of the projection gives nf(F(a) - a) = F(a) - nf(a),
    which keeps the theta machinery on the small input coefficients."""
    if a.degree < 1:
        raise ValueError("artin_schreier_class needs degree >= 1")
    return inverse_cartier(a) - normal_form_mod_exact(a)


def nu_membership(a):
    """True iff a is killed by F - 1 modulo exact forms."""
    return artin_schreier_class(a).is_zero


# -- membership in Omega(<s) + exact forms ---------------------------------


def _solve_linear_over_field(field, rows, rhs):
    """Solve M y = rhs over the rational function field; returns a solution
    list or None.  M entries and rhs are RatFunc."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    A = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if not A[i][c].is_zero:
                pr = i
                break
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = A[r][c].inverse()
        A[r] = [x * inv for x in A[r]]
        for i in range(nrows):
            if i != r and not A[i][c].is_zero:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if not A[i][ncols].is_zero:
            return None
    sol = [field.zero() for _ in range(ncols)]
    for k, c in enumerate(pivots):
        sol[c] = A[k][ncols]
    return sol


def in_lt_s_plus_exact(eta, s):
    """Exact decision: eta in Omega^n(<s) + d Omega^(n-1).

    Per theta component: the theta = 0 part of any exact form vanishes, so
    that component must already be supported below s; for theta != 0 the
    component complex is exact and the condition is a small linear system
    over the coefficient field (d acts as wedging with lambda_theta)."""
    field = eta.field
    s = tuple(s)
    n = eta.degree
    zero_theta = (0,) * field.m
    for theta, comp in theta_split(eta).items():
        if theta == zero_theta:
            if not lt_s_membership(comp.form, s):
                return False
            continue
        lam = lambda_form(field, theta)
        u_tuples = [
            tuple(u) for u in itertools.combinations(range(1, field.m + 1), n - 1)
        ]
        w_tuples = [
            tuple(w)
            for w in itertools.combinations(range(1, field.m + 1), n)
            if not (all(x <= y for x, y in zip(w, s)) and tuple(w) != s)
        ]
        if not w_tuples:
            continue
        columns = {}
        for k, u in enumerate(u_tuples):
            image = wedge(lam, omega(field, u))
            for w, c in image.coeffs.items():
                columns[(w, k)] = c
        rows = []
        rhs = []
        for w in w_tuples:
            rows.append(
                [columns.get((w, k), field.zero()) for k in range(len(u_tuples))]
            )
            rhs.append(comp.form.coeff(w))
        if _solve_linear_over_field(field, rows, rhs) is None:
            return False
    return True


# -- automorphisms of the function field ------------------------------------


def _recognize_generator_image(field, img):
    """Return the target variable index when img is t_j + c or 1/t_j."""
    p = field.p
    if img.is_polynomial():
        poly = img.num
        support = {e for e in poly.terms}
        var_es = [e for e in support if sum(e) == 1]
        const_e = (0,) * field.m
        if len(var_es) == 1 and support <= {var_es[0], const_e}:
            if poly.terms[var_es[0]] == 1:
                return var_es[0].index(1) + 1
        return None
    num, den = img.num, img.den
    if num.is_constant() and num.constant_value() == 1:
        den_es = list(den.terms)
        if len(den_es) == 1 and sum(den_es[0]) == 1 and den.terms[den_es[0]] == 1:
            return den_es[0].index(1) + 1
    return None


def apply_endomorphism(a, images):
    """Push a form through a field automorphism given by generator images.

    Supported family (checked): each t_i maps to t_j + c or 1/t_j with the
    assignment i -> j a permutation.  Coefficients are substituted and each
    dlog t_i is rewritten as dlog(image), expanded in the standard basis;
    this commutes with the exterior derivative."""
    field = a.field
    if isinstance(images, dict):
        image_list = [images[i] for i in range(1, field.m + 1)]
    else:
        image_list = list(images)
    if len(image_list) != field.m:
        raise NotAutomorphism("need an image for every variable")
    targets = []
    for img in image_list:
        j = _recognize_generator_image(field, img)
        if j is None:
            raise NotAutomorphism("image is not of the form t_j + c or 1/t_j")
        targets.append(j)
    if sorted(targets) != list(range(1, field.m + 1)):
        raise NotAutomorphism("generator images do not permute the variables")
    out = zero_form(field, a.degree)
    dlog_images = [dlog(field, img) for img in image_list]
    for s, x in a.coeffs.items():
        term = DiffForm(field, 0, {(): x.compose(image_list)})
        for i in s:
            term = wedge(term, dlog_images[i - 1])
        out = out + term
    return out
