"""Witt vectors: universal polynomials, ghost components, F and V, and the
presented symbol groups with their enumeration oracles."""

import pytest

from logdiff.presentation import FinAbGroup
from logdiff.witt import (
    GaloisField,
    MismatchedParameters,
    OutOfSupportedRange,
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


class TestGaloisField:
    def test_f4(self):
        gf = GaloisField(2, 2)
        assert len(gf.elements()) == 4
        z = (0, 1)
        # z^2 = z + 1 under z^2 + z + 1 = 0
        assert gf.mul(z, z) == (1, 1)
        for a in gf.units():
            assert gf.mul(a, gf.inv(a)) == gf.one

    def test_frobenius_enumerates_squares(self):
        gf = GaloisField(3, 2)
        frob = {a: gf.frobenius(a) for a in gf.elements()}
        # Frobenius is a field automorphism of order 2
        assert sorted(frob.values()) == sorted(gf.elements())
        for a in gf.elements():
            assert frob[frob[a]] == a

    def test_unsupported(self):
        with pytest.raises(OutOfSupportedRange):
            GaloisField(2, 3)

    @pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13, 17])
    def test_modulus_irreducible(self, p):
        # the hardcoded quadratic modulus has no root in F_p
        from logdiff.witt import _QUADRATIC_MODULUS

        c0, c1 = _QUADRATIC_MODULUS[p]
        assert all((r * r + c1 * r + c0) % p for r in range(p))


class TestWittArithmetic:
    def test_carry_example(self):
        R = WittRing(2, 1, 2)
        one = R.vector(((1,), (0,)))
        assert (one + one).comps == ((0,), (1,))

    def test_teichmuller_multiplicative(self):
        R = WittRing(3, 1, 2)
        gf = R.gf
        for a in gf.elements():
            for b in gf.elements():
                ta, tb = R.teichmuller(a), R.teichmuller(b)
                assert (ta * tb) == R.teichmuller(gf.mul(a, b))

    def test_zero_identity(self):
        R = WittRing(2, 1, 3)
        for w in R.elements():
            assert w + R.zero() == w

    def test_mismatched(self):
        a = WittRing(2, 1, 2).one()
        b = WittRing(2, 1, 3).one()
        with pytest.raises(MismatchedParameters):
            a + b


class TestGhost:
    def test_exact_identities(self, rng):
        for p in (2, 3):
            for i in (1, 2, 3):
                for _ in range(12):
                    x = [rng.randrange(12) for _ in range(i)]
                    y = [rng.randrange(12) for _ in range(i)]
                    gx, gy = ghost_components(p, x), ghost_components(p, y)
                    gs = ghost_components(p, witt_add_int(p, x, y))
                    gm = ghost_components(p, witt_mul_int(p, x, y))
                    assert gs == [a + b for a, b in zip(gx, gy)]
                    assert gm == [a * b for a, b in zip(gx, gy)]

    def test_p5_universal_polynomials(self, rng):
        for _ in range(5):
            x = [rng.randrange(8) for _ in range(2)]
            y = [rng.randrange(8) for _ in range(2)]
            gx, gy = ghost_components(5, x), ghost_components(5, y)
            assert ghost_components(5, witt_add_int(5, x, y)) == [
                a + b for a, b in zip(gx, gy)
            ]
            assert ghost_components(5, witt_mul_int(5, x, y)) == [
                a * b for a, b in zip(gx, gy)
            ]

    def test_mod_reduced_congruence(self, rng):
        # after reducing components mod p, ghost_n is stable mod p^(n+1)
        for p in (2, 3):
            i = 3
            for _ in range(10):
                x = [rng.randrange(12) for _ in range(i)]
                y = [rng.randrange(12) for _ in range(i)]
                exact = witt_add_int(p, x, y)
                reduced = [c % p for c in witt_add_int(p, [a % p for a in x], [b % p for b in y])]
                ge, gr = ghost_components(p, exact), ghost_components(p, reduced)
                for n, (a, b) in enumerate(zip(ge, gr)):
                    assert (a - b) % p ** (n + 1) == 0
                # the last component in particular is stable mod p^i
                assert (ge[-1] - gr[-1]) % p**i == 0


class TestFrobeniusVerschiebung:
    def test_frobenius_identity_on_prime_field(self):
        R = WittRing(2, 1, 2)
        for w in R.elements():
            assert witt_frobenius(w) == w

    def test_frobenius_on_f4_length1(self):
        R = WittRing(2, 2, 1)
        z = R.vector(((0, 1),))
        assert witt_frobenius(z).comps == (R.gf.mul((0, 1), (0, 1)),)

    def test_frobenius_ring_hom(self, rng):
        R = WittRing(2, 2, 2)
        elems = list(R.elements())
        for _ in range(25):
            a, b = rng.choice(elems), rng.choice(elems)
            assert witt_frobenius(a * b) == witt_frobenius(a) * witt_frobenius(b)
            assert witt_frobenius(a + b) == witt_frobenius(a) + witt_frobenius(b)

    def test_verschiebung(self):
        R = WittRing(2, 1, 2)
        v = witt_verschiebung(R.vector(((1,), (1,))))
        assert v.comps == ((0,), (1,))
        assert witt_verschiebung(R.zero()) == R.zero()

    def test_fv_is_multiplication_by_p(self, rng):
        for p in (2, 3):
            R = WittRing(p, 1, 3)
            elems = list(R.elements())
            rng.shuffle(elems)
            for a in elems[:20]:
                pa = R.zero()
                for _ in range(p):
                    pa = pa + a
                assert witt_frobenius(witt_verschiebung(a)) == pa

    def test_verschiebung_additive(self, rng):
        R = WittRing(3, 1, 2)
        elems = list(R.elements())
        for _ in range(20):
            a, b = rng.choice(elems), rng.choice(elems)
            assert witt_verschiebung(a + b) == witt_verschiebung(a) + witt_verschiebung(b)


class TestWittUnitStructure:
    @pytest.mark.parametrize("p", [2, 3])
    @pytest.mark.parametrize("i", [1, 2, 3])
    def test_unit_generates_z_mod_pi(self, p, i):
        R = WittRing(p, 1, i)
        one = R.one()
        assert additive_order(one) == p**i
        # the subring generated by 1 has p^i elements
        seen = set()
        acc = R.zero()
        for _ in range(p**i):
            seen.add(acc.comps)
            acc = acc + one
        assert len(seen) == p**i


class TestHsymGroups:
    def test_known_values(self):
        assert hsym_group(2, 1, 1) == FinAbGroup((2,))
        assert hsym_group(4, 1, 1) == FinAbGroup((2,))
        assert hsym_group(4, 2, 1) == FinAbGroup((4,))
        assert hsym_group(2, 1, 2).is_trivial

    def test_oracle_agreement(self):
        for q, i in [(2, 1), (2, 2), (4, 1), (4, 2), (3, 1), (3, 2), (9, 1), (9, 2)]:
            assert hsym_group(q, i, 1) == artin_schreier_witt_cokernel(q, i)

    def test_oracle_values(self):
        assert artin_schreier_witt_cokernel(2, 3) == FinAbGroup((8,))
        assert artin_schreier_witt_cokernel(3, 2) == FinAbGroup((9,))
        assert hsym_group(4, 3, 1) == artin_schreier_witt_cokernel(4, 3) == FinAbGroup((8,))

    def test_regression_q4_n2(self):
        # no independent oracle here; frozen computed value
        assert hsym_group(4, 1, 2).is_trivial
        assert hsym_group(4, 2, 2).is_trivial

    def test_out_of_range(self):
        with pytest.raises(OutOfSupportedRange):
            hsym_group(8, 1, 1)
        with pytest.raises(OutOfSupportedRange):
            hsym_group(4, 4, 1)
        with pytest.raises(OutOfSupportedRange):
            hsym_group(4, 1, 3)
