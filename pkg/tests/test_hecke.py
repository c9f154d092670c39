import pytest
import sympy

from glnlab.errors import CharacterMismatch, UnsupportedRank
from glnlab.hecke import (
    Gl1TwistedElement,
    HeckeElement,
    SatakeImage,
    UnitCharacter,
    chi_t,
    convolve,
    coset_decompose,
    gl1_convolution_by_finite_sum,
    gl1_twisted_convolve,
    modulus_delta,
    modulus_delta_exponent,
    satake_by_coset_count,
    satake_transform,
    smith_exponents,
)
from glnlab.rings import FiniteField, HalfPowerLaurent


def v_pow(q, k):
    return HalfPowerLaurent.v_power(q, k)


class TestCosets:
    def test_gl2_minuscule_p2(self):
        reps = coset_decompose((1, 0), 2, 2)
        mats = {tuple(tuple(int(x) for x in r) for r in m) for m in reps}
        assert mats == {((2, 0), (0, 1)), ((2, 1), (0, 1)), ((1, 0), (0, 2))}

    def test_gl2_minuscule_count(self):
        for p in (2, 3, 5):
            assert len(coset_decompose((1, 0), 2, p)) == p + 1

    def test_gl2_central(self):
        for p in (2, 3):
            reps = coset_decompose((1, 1), 2, p)
            assert len(reps) == 1
            assert reps[0] == ((p, 0), (0, p))

    def test_gl2_weight_two(self):
        # number of index-p^2 sublattices with divisors (1, p^2)
        for p in (2, 3):
            reps = coset_decompose((2, 0), 2, p)
            assert len(reps) == p * (p + 1)

    def test_negative_entries(self):
        reps = coset_decompose((0, -1), 2, 2)
        assert len(reps) == 3
        for m in reps:
            assert smith_exponents([list(r) for r in m], 2) == (-1, 0)

    def test_gl3_minuscule_count(self):
        for p in (2, 3):
            reps = coset_decompose((1, 0, 0), 3, p)
            assert len(reps) == p * p + p + 1

    def test_gl3_second_minuscule_count(self):
        for p in (2, 3):
            reps = coset_decompose((1, 1, 0), 3, p)
            assert len(reps) == p * p + p + 1

    def test_unsupported_rank(self):
        with pytest.raises(UnsupportedRank):
            coset_decompose((1, 0, 0, 0), 4, 2)

    def test_non_dominant_rejected(self):
        with pytest.raises(ValueError):
            coset_decompose((0, 1), 2, 2)


class TestConvolution:
    def test_unit(self):
        for p in (2, 3):
            t = HeckeElement.basis((2, 1), p)
            e = HeckeElement.unit(2, p)
            assert convolve(t, e) == t
            assert convolve(e, t) == t

    def test_minuscule_square(self):
        # T_(1,0)^2 = T_(2,0) + (q+1) T_(1,1)
        for p in (2, 3):
            t = HeckeElement.basis((1, 0), p)
            expect = HeckeElement(2, p, {
                (2, 0): 1,
                (1, 1): p + 1,
            })
            assert convolve(t, t) == expect

    def test_central_translation(self):
        for p in (2, 3):
            z = HeckeElement.basis((1, 1), p)
            t = HeckeElement.basis((1, 0), p)
            assert convolve(z, t) == HeckeElement.basis((2, 1), p)

    def test_commutative(self):
        p = 2
        pairs = [((1, 0), (2, 0)), ((1, 0), (2, 1)), ((2, 0), (1, 1))]
        for lam, mu in pairs:
            f = HeckeElement.basis(lam, p)
            g = HeckeElement.basis(mu, p)
            assert convolve(f, g) == convolve(g, f)

    def test_associative(self):
        p = 2
        a = HeckeElement.basis((1, 0), p)
        b = HeckeElement.basis((1, 1), p)
        c = HeckeElement.basis((0, -1), p)
        assert convolve(convolve(a, b), c) == convolve(a, convolve(b, c))

    def test_gl1(self):
        f = HeckeElement.basis((1,), 3)
        g = HeckeElement.basis((2,), 3)
        assert convolve(f, g) == HeckeElement.basis((3,), 3)

    def test_gl3_central(self):
        z = HeckeElement.basis((1, 1, 1), 2)
        t = HeckeElement.basis((1, 0, 0), 2)
        assert convolve(z, t) == HeckeElement.basis((2, 1, 1), 2)


class TestModulus:
    def test_closed_form_exponent(self):
        assert modulus_delta_exponent((1, 0), 2) == -1
        assert modulus_delta_exponent((1, 1), 2) == 0
        assert modulus_delta_exponent((1, 0, 0), 3) == -2
        assert modulus_delta_exponent((2, 1, 0), 3) == -4

    def test_counting_cross_check(self):
        for q in (2, 3):
            assert modulus_delta((1, 0), 2, q) == v_pow(q, -2)
            assert modulus_delta((0, 0), 2, q) == v_pow(q, 0)
            assert modulus_delta((2, -1), 2, q) == v_pow(q, -6)
            assert modulus_delta((1, 0, -1), 3, q) == v_pow(q, -8)


class TestTransformGl2:
    def test_unit(self):
        for p in (2, 3):
            img = satake_transform(HeckeElement.unit(2, p), box_bound=1)
            assert img == SatakeImage(2, p, {(0, 0): 1})

    def test_minuscule(self):
        for p in (2, 3):
            img = satake_transform(HeckeElement.basis((1, 0), p))
            assert img == SatakeImage(2, p, {
                (1, 0): v_pow(p, 1),
                (0, 1): v_pow(p, 1),
            })

    def test_central(self):
        for p in (2, 3):
            img = satake_transform(HeckeElement.basis((1, 1), p))
            assert img == SatakeImage(2, p, {(1, 1): 1})

    def test_weight_two(self):
        p = 2
        img = satake_transform(HeckeElement.basis((2, 0), p))
        assert img == SatakeImage(2, p, {
            (2, 0): v_pow(p, 2),
            (0, 2): v_pow(p, 2),
            (1, 1): p - 1,
        })

    def test_homomorphism(self):
        for p in (2, 3):
            f = HeckeElement.basis((1, 0), p)
            g = HeckeElement.basis((1, 1), p)
            lhs = satake_transform(convolve(f, f), box_bound=2)
            assert lhs == satake_transform(f) * satake_transform(f)
            lhs = satake_transform(convolve(f, g), box_bound=2)
            assert lhs == satake_transform(f) * satake_transform(g)

    def test_homomorphism_negative_support(self):
        p = 2
        f = HeckeElement.basis((0, -1), p)
        g = HeckeElement.basis((1, 0), p)
        lhs = satake_transform(convolve(f, g), box_bound=2)
        assert lhs == satake_transform(f) * satake_transform(g)

    def test_weyl_invariance(self):
        for lam in [(1, 0), (2, 0), (2, 1), (2, -1)]:
            img = satake_transform(HeckeElement.basis(lam, 3))
            assert img.weyl_invariant()

    def test_triangular_leading_term(self):
        # coefficient at a strictly dominant lam is v^(lam1 - lam2)
        for p in (2, 3):
            for lam in [(1, 0), (2, 0), (2, 1), (1, -1)]:
                img = satake_transform(HeckeElement.basis(lam, p))
                assert img.coeffs[lam] == v_pow(p, lam[0] - lam[1])

    def test_oracle_agreement(self):
        for p in (2, 3):
            for lam in [(1, 0), (1, 1), (2, 0), (2, 1)]:
                f = HeckeElement.basis(lam, p)
                assert satake_transform(f) == satake_by_coset_count(f)

    def test_oracle_agreement_combination(self):
        p = 2
        f = HeckeElement(2, p, {(1, 0): 3, (1, 1): v_pow(p, 1)})
        assert satake_transform(f) == satake_by_coset_count(f)

    def test_gl1_identity_map(self):
        f = HeckeElement(1, 5, {(2,): 7, (-1,): 1})
        img = satake_transform(f)
        assert img.coeffs[(2,)] == 7 and img.coeffs[(-1,)] == 1


class TestTransformGl3:
    def test_gate(self):
        t = HeckeElement.basis((1, 0, 0), 2)
        with pytest.raises(UnsupportedRank):
            satake_transform(t)

    def test_minuscule(self):
        for p in (2, 3):
            t = HeckeElement.basis((1, 0, 0), p)
            img = satake_transform(t, enable_rank3=True)
            expect = SatakeImage(3, p, {
                (1, 0, 0): v_pow(p, 2),
                (0, 1, 0): v_pow(p, 2),
                (0, 0, 1): v_pow(p, 2),
            })
            assert img == expect

    def test_central(self):
        t = HeckeElement.basis((1, 1, 1), 2)
        img = satake_transform(t, enable_rank3=True)
        assert img == SatakeImage(3, 2, {(1, 1, 1): 1})

    def test_oracle_agreement(self):
        for lam in [(1, 0, 0), (1, 1, 0)]:
            t = HeckeElement.basis(lam, 2)
            assert satake_transform(t, enable_rank3=True) \
                == satake_by_coset_count(t)

    def test_homomorphism_with_central(self):
        z = HeckeElement.basis((1, 1, 1), 2)
        t = HeckeElement.basis((1, 0, 0), 2)
        lhs = satake_transform(convolve(z, t), box_bound=2, enable_rank3=True)
        rhs = satake_transform(z, enable_rank3=True) \
            * satake_transform(t, enable_rank3=True)
        assert lhs == rhs

    def test_homomorphism_minuscule_pair(self):
        t = HeckeElement.basis((1, 0, 0), 2)
        u = HeckeElement.basis((0, 0, -1), 2)
        lhs = satake_transform(convolve(t, u), box_bound=2, enable_rank3=True)
        rhs = satake_transform(t, enable_rank3=True) \
            * satake_transform(u, enable_rank3=True)
        assert lhs == rhs


class TestChiT:
    def test_minuscule_character(self):
        alpha, beta, v = sympy.symbols("alpha beta v")
        img = satake_transform(HeckeElement.basis((1, 0), 2))
        expr = chi_t(img, (alpha, beta))
        assert sympy.expand(expr - v * (alpha + beta)) == 0

    def test_central_character(self):
        alpha, beta = sympy.symbols("alpha beta")
        img = satake_transform(HeckeElement.basis((1, 1), 2))
        assert sympy.expand(chi_t(img, (alpha, beta)) - alpha * beta) == 0

    def test_multiplicative(self):
        alpha, beta = sympy.symbols("alpha beta")
        f = HeckeElement.basis((1, 0), 3)
        g = HeckeElement.basis((1, 1), 3)
        lhs = chi_t(satake_transform(convolve(f, g), box_bound=2),
                    (alpha, beta))
        rhs = chi_t(satake_transform(f), (alpha, beta)) \
            * chi_t(satake_transform(g), (alpha, beta))
        assert sympy.expand(lhs - rhs) == 0

    def test_zero_entry_rejected(self):
        from glnlab.errors import ZeroEntry
        img = satake_transform(HeckeElement.basis((1, 0), 2))
        with pytest.raises(ZeroEntry):
            chi_t(img, (0, 1))


class TestGl1Twisted:
    def test_trivial_character_convolution(self):
        phi = UnitCharacter(0)
        f = Gl1TwistedElement.basis(1, phi)
        g = Gl1TwistedElement.basis(2, phi)
        assert gl1_twisted_convolve(f, g) == Gl1TwistedElement.basis(3, phi)

    def test_character_values_are_roots_of_unity(self):
        F = FiniteField(3, 1)
        phi = UnitCharacter(1, F, exponent=1)
        vals = [phi.value(u) for u in F.units()]
        for val in vals:
            assert sympy.simplify(val**2 - 1) == 0
        assert any(sympy.simplify(val + 1) == 0 for val in vals)

    def test_character_is_multiplicative(self):
        F = FiniteField(2, 2)
        phi = UnitCharacter(1, F, exponent=1)
        for u in F.units():
            for w in F.units():
                assert (phi.value_exponent(u) + phi.value_exponent(w)) \
                    % phi.order == phi.value_exponent(u * w)

    def test_twisted_convolution_matches_finite_sum(self):
        F = FiniteField(3, 1)
        phi = UnitCharacter(1, F, exponent=1)
        f = Gl1TwistedElement(phi, {0: 1, 1: 2})
        g = Gl1TwistedElement(phi, {-1: 1, 2: 1})
        algebraic = gl1_twisted_convolve(f, g)
        finite = gl1_convolution_by_finite_sum(f, g)
        assert {m: sympy.expand(c) for m, c in finite.items()} \
            == algebraic.support

    def test_twisted_convolution_matches_finite_sum_f4(self):
        F = FiniteField(2, 2)
        phi = UnitCharacter(1, F, exponent=1)
        f = Gl1TwistedElement.basis(0, phi)
        g = Gl1TwistedElement.basis(1, phi)
        algebraic = gl1_twisted_convolve(f, g)
        finite = gl1_convolution_by_finite_sum(f, g)
        assert {m: sympy.simplify(c) for m, c in finite.items()} \
            == algebraic.support

    def test_character_mismatch(self):
        F = FiniteField(3, 1)
        f = Gl1TwistedElement.basis(0, UnitCharacter(0))
        g = Gl1TwistedElement.basis(0, UnitCharacter(1, F, exponent=1))
        with pytest.raises(CharacterMismatch):
            gl1_twisted_convolve(f, g)

    def test_commutative_and_associative(self):
        phi = UnitCharacter(0)
        a = Gl1TwistedElement(phi, {0: 1, 1: 1})
        b = Gl1TwistedElement(phi, {-1: 2})
        c = Gl1TwistedElement(phi, {3: 1})
        assert gl1_twisted_convolve(a, b) == gl1_twisted_convolve(b, a)
        assert gl1_twisted_convolve(gl1_twisted_convolve(a, b), c) \
            == gl1_twisted_convolve(a, gl1_twisted_convolve(b, c))
