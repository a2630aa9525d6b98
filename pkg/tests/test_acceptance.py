"""Acceptance suite: one test per criterion, exact arithmetic throughout,
each printing a PASS line with its elapsed time against the stated budget.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines.
"""

import random
import time

from logdiff.arith import (
    FunctionField,
    RatFunc,
    frobenius,
    irreducible_polys,
)
from logdiff.forms import (
    ThetaComponent,
    contracting_homotopy,
    dlog,
    ext_d,
    lambda_form,
    normal_form_mod_exact,
    normal_form_with_witness,
    nu_membership,
    omega,
    theta_split,
    wedge,
    apply_endomorphism,
)
from logdiff.milnor import (
    MilnorSymbolSum,
    d_k,
    dlog_inverse_n1,
    dlog_wedge_search,
    kato_decompose,
    verify_in_nu,
)
from logdiff.presentation import (
    FinAbGroup,
    FiniteLocalRing,
    omega1_standard,
    omega1_symbolic,
)
from logdiff.truncation import (
    TruncationSpec,
    coefficient_generators,
    nu_basis_bounded,
    solve_artin_schreier_bounded,
)
from logdiff.witt import (
    WittRing,
    additive_order,
    artin_schreier_witt_cokernel,
    ghost_components,
    hsym_group,
    witt_add_int,
    witt_frobenius,
    witt_mul_int,
    witt_verschiebung,
)
from conftest import random_form, random_poly, random_ratfunc


class Budget:
    def __init__(self, number, label, seconds):
        self.number = number
        self.label = label
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        status = "PASS" if exc_type is None else "FAIL"
        print(f"ACCEPTANCE {self.number:>2} {status} {self.label}: "
              f"{elapsed:.2f}s (budget {self.seconds}s)")
        if exc_type is None:
            assert elapsed < self.seconds, (
                f"criterion {self.number} exceeded its {self.seconds}s budget"
            )
        return False


def test_criterion_01_presentation_equivalence():
    rings = [
        ("Z/4", FiniteLocalRing.modpk(2, 2), None),
        ("Z/9", FiniteLocalRing.modpk(3, 2), None),
        ("F2[t]/t^2", FiniteLocalRing.truncated(2, 2), (2, 2)),
        ("F2[t]/t^3", FiniteLocalRing.truncated(2, 3), (2, 3)),
        ("F3[t]/t^2", FiniteLocalRing.truncated(3, 2), (3, 2)),
        ("F2[x,y]/(x,y)^2", FiniteLocalRing.square_zero_2vars(2), None),
    ]
    with Budget(1, "symbol presentation matches the standard one", 10):
        for name, ring, pn in rings:
            sym = omega1_symbolic(ring, 3)
            std = omega1_standard(ring)
            assert sym == std, name
            if pn is not None:
                p, n = pn
                want = p**n if n % p == 0 else p ** (n - 1)
                assert sym.order() == want, name


def test_criterion_02_de_rham_complex():
    rng = random.Random(2)
    with Budget(2, "d after d vanishes", 5):
        count = 0
        while count < 100:
            p = rng.choice((2, 3))
            m = rng.choice((1, 2, 3))
            field = FunctionField(p, ("t", "u", "v")[:m])
            degree = rng.randrange(0, m)
            a = random_form(rng, field, degree, 4)
            assert ext_d(ext_d(a)).is_zero
            count += 1


def test_criterion_03_theta_machinery():
    rng = random.Random(3)
    with Budget(3, "homotopy identity and canonical projection", 10):
        count = 0
        while count < 100:
            p = rng.choice((2, 3))
            m = rng.choice((1, 2))
            field = FunctionField(p, ("t", "u")[:m])
            degree = rng.randrange(1, m + 1)
            a = random_form(rng, field, degree, 2)
            # homotopy identity on every graded piece
            for theta, comp in theta_split(a).items():
                if all(x == 0 for x in theta):
                    continue
                lam = lambda_form(field, theta)
                lhs = wedge(lam, contracting_homotopy(comp))
                lhs = lhs + contracting_homotopy(
                    ThetaComponent(theta, wedge(lam, comp.form))
                )
                assert lhs == comp.form
            # nf kills exact forms, is idempotent, and returns an exact witness
            xi = random_form(rng, field, degree - 1, 2)
            assert normal_form_mod_exact(ext_d(xi)).is_zero
            nf, wit = normal_form_with_witness(a)
            assert a - nf == ext_d(wit)
            assert normal_form_mod_exact(nf) == nf
            count += 1


def test_criterion_04_nu_and_differential_symbol():
    rng = random.Random(4)
    with Budget(4, "symbol images in the kernel; Steinberg vanishing", 10):
        checked = 0
        while checked < 200:
            p = rng.choice((2, 3))
            field = FunctionField(p, ("t", "u", "v"))
            n = rng.choice((1, 2, 3))
            terms = []
            for _ in range(rng.choice((1, 2))):
                entries = tuple(
                    RatFunc(random_poly(rng, field, 2, nonzero=True)) for _ in range(n)
                )
                terms.append((rng.randint(1, p - 1), entries))
            assert verify_in_nu(MilnorSymbolSum(field, n, terms))
            checked += 1
        steinberg = 0
        while steinberg < 100:
            p = rng.choice((2, 3))
            m = rng.choice((1, 2))
            field = FunctionField(p, ("t", "u")[:m])
            a = random_ratfunc(rng, field, 2, nonzero=True)
            if a == field.one():
                continue
            sigma = MilnorSymbolSum.symbol(field, (a, field.one() - a))
            assert d_k(sigma).is_zero
            steinberg += 1


def test_criterion_05_constructive_cartier_degree_one():
    rng = random.Random(5)
    with Budget(5, "dlog inversion round trip over F_2(t) and F_3(t)", 10):
        for p in (2, 3):
            field = FunctionField(p, ("t",))
            irrs = irreducible_polys(field, 3)
            for _ in range(50):
                exps = {q: rng.randrange(p) for q in irrs if rng.random() < 0.5}
                x = field.one()
                for q, e in exps.items():
                    x = x * RatFunc(q) ** e
                w = dlog(field, x)
                got = dlog_inverse_n1(w)
                assert dlog(field, got) == w
                want = field.one()
                for q, e in sorted(
                    exps.items(), key=lambda t: sorted(t[0].terms.items())
                ):
                    if e:
                        want = want * RatFunc(q) ** e
                assert got == want


def test_criterion_06_kato_decomposition():
    with Budget(6, "full decomposition of every truncated kernel element", 60):
        envelopes = [
            (FunctionField(2, ("t",)), 1, 3, True),
            (FunctionField(2, ("t", "u")), 1, 2, False),
            (FunctionField(2, ("t", "u")), 2, 2, False),
        ]
        for field, n, bound, with_oracle in envelopes:
            basis = nu_basis_bounded(field, n, TruncationSpec(bound))
            assert basis
            for w in basis:
                result = kato_decompose(w)
                assert result.residual.is_zero
                assert d_k(result.symbols) == w
                if with_oracle:
                    sigma = dlog_wedge_search(w, bound)
                    assert sigma is not None
                    assert d_k(sigma) == w


def test_criterion_07_witt_vectors():
    rng = random.Random(7)
    with Budget(7, "ghost identities, unit order, F after V", 10):
        pairs = 0
        while pairs < 100:
            p = rng.choice((2, 3))
            i = rng.choice((1, 2, 3))
            x = [rng.randrange(12) for _ in range(i)]
            y = [rng.randrange(12) for _ in range(i)]
            gx, gy = ghost_components(p, x), ghost_components(p, y)
            assert ghost_components(p, witt_add_int(p, x, y)) == [
                a + b for a, b in zip(gx, gy)
            ]
            assert ghost_components(p, witt_mul_int(p, x, y)) == [
                a * b for a, b in zip(gx, gy)
            ]
            pairs += 1
        for p in (2, 3):
            for i in (1, 2, 3):
                ring = WittRing(p, 1, i)
                assert additive_order(ring.one()) == p**i
                elems = list(ring.elements())
                rng.shuffle(elems)
                for a in elems[:5]:
                    pa = ring.zero()
                    for _ in range(p):
                        pa = pa + a
                    assert witt_frobenius(witt_verschiebung(a)) == pa


def test_criterion_08_finite_field_symbol_groups():
    with Budget(8, "presented symbol groups match the enumeration oracle", 30):
        cases = {
            (2, 1, 1): FinAbGroup((2,)),
            (4, 1, 1): FinAbGroup((2,)),
            (4, 2, 1): FinAbGroup((4,)),
        }
        for (q, i, n), want in cases.items():
            got = hsym_group(q, i, n)
            assert got == want, (q, i, n)
            assert got == artin_schreier_witt_cokernel(q, i)
        assert hsym_group(2, 1, 2).is_trivial
        # no oracle for (4, 1, 2): assert the frozen value and stability
        first = hsym_group(4, 1, 2)
        assert first.is_trivial  # recorded regression value
        assert hsym_group(4, 1, 2) == first


def test_criterion_09_bounded_cokernel_probe():
    rng = random.Random(9)
    field = FunctionField(2, ("t",))
    spec = TruncationSpec(2)
    gens = coefficient_generators(field, spec)

    def random_trunc(nonzero=False):
        while True:
            a = field.zero()
            for g in gens:
                if rng.random() < 0.25:
                    a = a + g
            if not (nonzero and a.is_zero):
                return a

    with Budget(9, "symbol-presentation relations realize to zero", 20):
        for _ in range(50):
            a = random_trunc()
            a1, a2 = random_trunc(), random_trunc()
            b = random_trunc(nonzero=True)
            b1, b2 = random_trunc(nonzero=True), random_trunc(nonzero=True)
            # additivity in the coefficient slot realizes identically
            lhs = omega(field, (1,), (a1 + a2) * _dlog_coeff(field, b))
            rhs = omega(field, (1,), a1 * _dlog_coeff(field, b)) + omega(
                field, (1,), a2 * _dlog_coeff(field, b)
            )
            assert lhs == rhs
            # multiplicativity in the dlog slot
            assert dlog(field, b1 * b2) == dlog(field, b1) + dlog(field, b2)
            # [a, a] realizes to an exact form
            if not a.is_zero:
                assert normal_form_mod_exact(
                    omega(field, (1,), a * _dlog_coeff(field, a))
                ).is_zero
            # the Artin-Schreier relation, discharged by an explicit solution
            rhs_val = frobenius(a) - a
            sol = solve_artin_schreier_bounded(field, rhs_val, spec)
            assert sol is not None
            assert frobenius(sol) - sol == rhs_val
            # and at the 1-form level: (a^p - a) dlog b is the class image of
            # a dlog b under F - 1
            from logdiff.forms import artin_schreier_class

            target = normal_form_mod_exact(omega(field, (1,), rhs_val * _dlog_coeff(field, b)))
            assert artin_schreier_class(omega(field, (1,), a * _dlog_coeff(field, b))) == target


def _dlog_coeff(field, x):
    """Coefficient of dlog t in dlog x (univariate)."""
    return (x.deriv(1) * field.var(1)) / x


def test_criterion_10_automorphism_invariance():
    rng = random.Random(10)
    with Budget(10, "kernel membership is automorphism invariant", 10):
        count = 0
        while count < 50:
            m = rng.choice((1, 2))
            field = FunctionField(2, ("t", "u")[:m])
            t = field.var(1)
            subs = [
                [t + field.one()] + [field.var(i) for i in range(2, m + 1)],
                [field.one() / t] + [field.var(i) for i in range(2, m + 1)],
            ]
            if m == 2:
                subs.append([field.var(2), field.var(1)])
            if rng.random() < 0.5:
                a = dlog(field, RatFunc(random_poly(rng, field, 2, nonzero=True)))
            else:
                a = random_form(rng, field, 1, 2)
            member = nu_membership(a)
            for images in subs:
                assert nu_membership(apply_endomorphism(a, images)) == member
            count += 1
