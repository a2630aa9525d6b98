"""Truncated coefficient spaces: coordinates, bounded Artin-Schreier solving,
bases of the truncated logarithmic kernel."""

import pytest

from logdiff.arith import FunctionField, RatFunc, frobenius, irreducible_polys
from logdiff.forms import dlog, nu_membership
from logdiff.truncation import (
    CoordinateSystem,
    TruncationSpec,
    coefficient_generators,
    fp_nullspace,
    fp_solve,
    independent_subset,
    nu_basis_bounded,
    solve_artin_schreier_bounded,
)
from conftest import random_ratfunc

F2 = FunctionField(2, ("t",))
F3 = FunctionField(3, ("t",))
F22 = FunctionField(2, ("t", "u"))


class TestCoordinates:
    def test_linear_and_faithful(self, rng):
        coord = CoordinateSystem(F2, irreducible_polys(F2, 3))
        gens = coefficient_generators(F2, TruncationSpec(3))
        for _ in range(40):
            a = rng.choice(gens)
            b = rng.choice(gens)
            ca, cb = coord.ratfunc_coords(a), coord.ratfunc_coords(b)
            csum = dict(ca)
            for k, v in cb.items():
                csum[k] = (csum.get(k, 0) + v) % 2
                if not csum[k]:
                    del csum[k]
            assert csum == coord.ratfunc_coords(a + b)
        assert coord.ratfunc_coords(F2.zero()) == {}

    def test_zero_detection(self, rng):
        # coords vanish exactly on the zero value
        coord = CoordinateSystem(F3, irreducible_polys(F3, 2))
        for _ in range(30):
            a = random_ratfunc(rng, F3, 2)
            den_ok = True
            try:
                c = coord.ratfunc_coords(a)
            except Exception:
                den_ok = False
            if den_ok:
                assert (not c) == a.is_zero

    def test_multivariate_single_factor(self):
        irrs = irreducible_polys(F22, 2)
        coord = CoordinateSystem(F22, irrs)
        q = next(p for p in irrs if F22.poly_str(p) == "u+t")
        v = RatFunc(F22.monomial_poly((1, 0)), q * q)
        c = coord.ratfunc_coords(v)
        assert c
        # cancellation: (t * q) / q^2 has the same coordinates as t / q
        v2 = RatFunc(F22.monomial_poly((1, 0)) * q, q * q)
        w2 = RatFunc(F22.monomial_poly((1, 0)), q)
        assert coord.ratfunc_coords(v2) == coord.ratfunc_coords(w2)


class TestFpLinear:
    def test_solve(self):
        cols = [{0: 1, 1: 1}, {1: 1}]
        target = {0: 1}
        sol = fp_solve(2, cols, target)
        assert sol is not None
        assert sol[0] == 1 and sol[1] == 1

    def test_solve_inconsistent(self):
        assert fp_solve(2, [{0: 1}], {1: 1}) is None

    def test_nullspace_p2_and_p3(self):
        for p in (2, 3):
            cols = [{0: 1}, {0: p - 1}, {1: 1}]
            basis = fp_nullspace(p, cols)
            assert len(basis) == 1
            v = basis[0]
            # combination really vanishes
            assert (v[0] * 1 + v[1] * (p - 1)) % p == 0 and v[2] == 0

    def test_independent_subset(self):
        cols = [{0: 1}, {0: 1}, {1: 1}, {0: 1, 1: 1}]
        keep = independent_subset(2, cols)
        assert keep == [0, 2]

    def test_nullspace_vectors_annihilate(self, rng):
        # the p = 2 bitset path and the generic path both return genuine
        # nullspace bases of full dimension
        for p in (2, 3):
            for _ in range(15):
                ncols = rng.randint(1, 8)
                nkeys = rng.randint(1, 5)
                cols = [
                    {k: rng.randrange(p) for k in range(nkeys)} for _ in range(ncols)
                ]
                cols = [{k: v for k, v in c.items() if v} for c in cols]
                basis = fp_nullspace(p, cols)
                for vec in basis:
                    acc = {}
                    for x, col in zip(vec, cols):
                        for k, v in col.items():
                            acc[k] = (acc.get(k, 0) + x * v) % p
                    assert all(v == 0 for v in acc.values())
                # rank-nullity: dim(null) = ncols - rank
                rank = len(independent_subset(p, cols))
                assert len(basis) == ncols - rank


class TestSolveArtinSchreier:
    def test_example(self):
        t = F2.var(1)
        got = solve_artin_schreier_bounded(F2, t * t + t, TruncationSpec(2))
        assert got == t

    def test_zero(self):
        got = solve_artin_schreier_bounded(F2, F2.zero(), TruncationSpec(2))
        assert got is not None and got.is_zero

    def test_unsolvable(self):
        assert solve_artin_schreier_bounded(F2, F2.var(1), TruncationSpec(6)) is None

    def test_random_round_trip(self, rng):
        spec = TruncationSpec(2)
        gens = coefficient_generators(F2, spec)
        for _ in range(20):
            a = F2.zero()
            for g in gens:
                if rng.random() < 0.3:
                    a = a + g
            rhs = frobenius(a) - a
            sol = solve_artin_schreier_bounded(F2, rhs, spec)
            assert sol is not None
            assert frobenius(sol) - sol == rhs

    def test_p3(self, rng):
        spec = TruncationSpec(2)
        t = F3.var(1)
        g = frobenius(t) - t  # t^3 - t
        sol = solve_artin_schreier_bounded(F3, g, spec)
        assert sol is not None and frobenius(sol) - sol == g

    def test_multivariate_rejected(self):
        with pytest.raises(ValueError):
            solve_artin_schreier_bounded(F22, F22.zero(), TruncationSpec(1))


class TestNuBasisBounded:
    def test_dimensions_univariate(self):
        dims = {}
        for D in (0, 1, 2, 3):
            dims[D] = len(nu_basis_bounded(F2, 1, TruncationSpec(D)))
        assert dims == {0: 1, 1: 2, 2: 3, 3: 5}

    def test_d0_is_dlog_t(self):
        basis = nu_basis_bounded(F2, 1, TruncationSpec(0))
        assert basis[0] == dlog(F2, F2.var(1))

    def test_members_are_in_nu(self):
        for b in nu_basis_bounded(F2, 1, TruncationSpec(2)):
            assert nu_membership(b)

    def test_spans_dlog_irreducibles(self):
        # every dlog q for irreducible q of degree <= 2 lies in the span
        basis = nu_basis_bounded(F2, 1, TruncationSpec(2))
        from logdiff.truncation import CoordinateSystem, fp_solve

        coord = CoordinateSystem(F2, irreducible_polys(F2, 2))
        cols = [coord.ratfunc_coords(b.coeff((1,))) for b in basis]
        for q in irreducible_polys(F2, 2):
            w = dlog(F2, RatFunc(q))
            assert fp_solve(2, cols, coord.ratfunc_coords(w.coeff((1,)))) is not None

    def test_basis_elements_are_dlog_classes(self):
        # cross-check: inverting each basis element lands on a product of
        # monic irreducibles of degree <= D
        from logdiff.arith import factor_univariate
        from logdiff.milnor import dlog_inverse_n1

        D = 2
        allowed = set(irreducible_polys(F2, D))
        for w in nu_basis_bounded(F2, 1, TruncationSpec(D)):
            x = dlog_inverse_n1(w)
            assert dlog(F2, x) == w
            for q, _ in factor_univariate(x.num * x.den):
                assert q in allowed

    def test_two_variables_degree_one(self):
        basis = nu_basis_bounded(F22, 1, TruncationSpec(1))
        # kernel = span of dlog q over the six degree-one irreducibles
        assert len(basis) == 6
        for b in basis:
            assert nu_membership(b)

    def test_two_variables_top_degree(self):
        basis = nu_basis_bounded(F22, 2, TruncationSpec(1))
        assert basis
        for b in basis:
            assert nu_membership(b)

    def test_degree_out_of_range(self):
        with pytest.raises(ValueError):
            nu_basis_bounded(F2, 2, TruncationSpec(1))
