import random
from fractions import Fraction
from itertools import combinations

import pytest

from seshadri.polynomials import Monomial, MonomialOrder, PolynomialRing
from seshadri.groebner import (
    Ideal,
    NonHomogeneousError,
    buchberger,
    divide_exact,
    graded_piece,
    hilbert_data,
    hilbert_function,
    ideal_quotient,
    intersect,
    monomials_of_degree,
    normal_form_against,
    s_polynomial,
    saturate,
    saturate_variable,
)

from conftest import random_homogeneous, random_poly


def twisted_cubic(ring4):
    return Ideal(
        ring4,
        [
            ring4.parse("x0*x3 - x1*x2"),
            ring4.parse("x1^2 - x0*x2"),
            ring4.parse("x2^2 - x1*x3"),
        ],
    )


class TestBuchberger:
    def test_principal_ideal(self, ring2):
        basis = Ideal(ring2, [ring2.parse("x0")]).groebner_basis()
        assert [str(g) for g in basis] == ["x0"]

    def test_twisted_cubic_quadrics_are_a_basis(self, ring4):
        # independent check first: every S-polynomial of the three quadrics
        # reduces to zero under plain multivariate division by them
        gens = list(twisted_cubic(ring4).generators)
        for f, g in combinations(gens, 2):
            remainder = normal_form_against(s_polynomial(f, g), gens)
            assert remainder.is_zero()
        basis = twisted_cubic(ring4).groebner_basis()
        assert len(basis) == 3
        assert {str(b) for b in basis} == {
            "x1^2 - x0*x2",
            "x1*x2 - x0*x3",
            "x2^2 - x1*x3",
        }

    def test_unit_ideal(self, ring2):
        basis = Ideal(ring2, [ring2.parse("x0"), ring2.parse("x0 + 1")]).groebner_basis()
        assert [str(g) for g in basis] == ["1"]

    def test_empty_input(self, ring2):
        assert buchberger([]) == ()

    def test_deterministic(self, ring4, rng):
        gens = [random_homogeneous(ring4, 2, rng) for _ in range(3)]
        assert Ideal(ring4, gens).groebner_basis() == Ideal(ring4, gens).groebner_basis()

    def test_sugar_handles_inhomogeneous_input(self, ring3):
        gens = [ring3.parse("x0^2 - x1"), ring3.parse("x0*x1 - x2")]
        basis = buchberger(gens)
        for f, g in combinations(basis, 2):
            assert normal_form_against(s_polynomial(f, g), list(basis)).is_zero()


class TestNormalForm:
    def test_generator_reduces_to_zero(self, ring4):
        ideal = twisted_cubic(ring4)
        assert ideal.normal_form(ring4.parse("x0*x3 - x1*x2")).is_zero()

    def test_disjoint_support(self, ring2):
        ideal = Ideal(ring2, [ring2.parse("x1")])
        f = ring2.parse("x0")
        assert ideal.normal_form(f) == f

    def test_single_division_step(self, ring3):
        ideal = Ideal(ring3, [ring3.parse("x1^2 - x0*x2")])
        assert ideal.normal_form(ring3.parse("x1^2")) == ring3.parse("x0*x2")

    def test_difference_is_always_a_member(self, ring3, rng):
        gens = [random_homogeneous(ring3, 2, rng) for _ in range(2)]
        ideal = Ideal(ring3, gens)
        for _ in range(10):
            f = random_poly(ring3, 3, rng)
            assert ideal.contains(f - ideal.normal_form(f))


def assert_same_ideal(computed, expected_gens):
    expected = Ideal(computed.ring, [computed.ring.parse(e) for e in expected_gens])
    assert computed.equals(expected)


class TestQuotientAndSaturation:
    def test_principal_power(self, ring2):
        q = ideal_quotient(Ideal(ring2, [ring2.parse("x0^2")]), Ideal(ring2, [ring2.parse("x0")]))
        assert_same_ideal(q, ["x0"])

    def test_principal_product(self, ring2):
        q = ideal_quotient(Ideal(ring2, [ring2.parse("x0*x1")]), Ideal(ring2, [ring2.parse("x0")]))
        assert_same_ideal(q, ["x1"])

    def test_square_of_maximal_ideal(self, ring2):
        m = Ideal(ring2, [ring2.parse("x0"), ring2.parse("x1")])
        m2 = Ideal(ring2, [ring2.parse("x0^2"), ring2.parse("x0*x1"), ring2.parse("x1^2")])
        assert_same_ideal(ideal_quotient(m2, m), ["x0", "x1"])

    def test_quotient_by_zero_ideal(self, ring2):
        q = ideal_quotient(Ideal(ring2, [ring2.parse("x0")]), Ideal(ring2, []))
        assert q.is_unit()

    def test_strip_multiplicity(self, ring2):
        s = saturate(Ideal(ring2, [ring2.parse("x0^2*x1")]), Ideal(ring2, [ring2.parse("x0")]))
        assert_same_ideal(s, ["x1"])

    def test_two_rounds_then_stable(self, ring3):
        s = saturate(
            Ideal(ring3, [ring3.parse("x0*x1"), ring3.parse("x0*x2")]),
            Ideal(ring3, [ring3.parse("x0")]),
        )
        assert_same_ideal(s, ["x1", "x2"])

    def test_unit_ideal_is_a_fixed_point(self, ring2):
        unit = Ideal(ring2, [ring2.one()])
        s = saturate(unit, Ideal(ring2, [ring2.parse("x0")]))
        assert s.is_unit()

    def test_saturation_contains_and_is_idempotent(self, ring3, rng):
        for _ in range(8):
            I = Ideal(ring3, [random_homogeneous(ring3, rng.randint(1, 3), rng) for _ in range(2)])
            J = Ideal(ring3, [ring3.parse("x0")])
            s = saturate(I, J)
            assert s.contains_ideal(I)
            assert saturate(s, J).equals(s)

    def test_quotient_times_divisor_lands_inside(self, ring3, rng):
        for _ in range(6):
            J = Ideal(ring3, [random_homogeneous(ring3, 2, rng) for _ in range(2)])
            I = Ideal(ring3, [random_homogeneous(ring3, rng.randint(1, 2), rng)])
            q = ideal_quotient(J, I)
            for g in q.generators:
                for f in I.generators:
                    assert J.contains(g * f)

    def test_variable_saturation_matches_general_route(self, ring3, rng):
        for _ in range(6):
            I = Ideal(ring3, [random_homogeneous(ring3, rng.randint(2, 3), rng) for _ in range(2)])
            var = rng.randrange(3)
            fast = saturate_variable(I, var)
            slow = saturate(I, Ideal(ring3, [ring3.variable(var)]))
            assert fast.equals(slow)

    def test_intersection_membership(self, ring3, rng):
        for _ in range(5):
            I = Ideal(ring3, [random_homogeneous(ring3, 2, rng)])
            J = Ideal(ring3, [random_homogeneous(ring3, 2, rng)])
            meet = intersect(I, J)
            for g in meet.generators:
                assert I.contains(g) and J.contains(g)
            for f in I.generators:
                for g in J.generators:
                    assert meet.contains(f * g)

    def test_divide_exact(self, ring3, rng):
        for _ in range(10):
            f = random_poly(ring3, 2, rng)
            g = random_poly(ring3, 2, rng)
            if not f or not g:
                continue
            assert divide_exact(f * g, g) == f
        with pytest.raises(ValueError):
            divide_exact(ring3.parse("x0"), ring3.parse("x1"))


def _standard_monomial_count(basis, nvars, degree):
    """Count degree-d monomials outside the leading-term ideal by enumeration."""
    lms = [g.leading_monomial() for g in basis]
    count = 0
    for exps in monomials_of_degree(nvars, degree):
        mono = Monomial(exps)
        if not any(lm.divides(mono) for lm in lms):
            count += 1
    return count


class TestHilbertData:
    def test_projective_space(self, ring4):
        data = hilbert_data(Ideal(ring4, []))
        assert data.dimension == 3
        assert data.degree == 1

    def test_plane_conic(self, ring3):
        data = hilbert_data(Ideal(ring3, [ring3.parse("x0*x2 - x1^2")]))
        assert (data.dimension, data.degree) == (1, 2)

    def test_twisted_cubic(self, ring4):
        ideal = twisted_cubic(ring4)
        data = hilbert_data(ideal)
        assert (data.dimension, data.degree) == (1, 3)
        # oracle: count standard monomials in degrees 1..4 and compare with
        # the extracted Hilbert polynomial 3t + 1
        basis = ideal.groebner_basis()
        for t in range(1, 5):
            assert _standard_monomial_count(basis, 4, t) == 3 * t + 1
        assert data.hilbert_polynomial == (Fraction(1), Fraction(3))

    def test_empty_scheme(self, ring3):
        data = hilbert_data(Ideal(ring3, [ring3.parse("x0"), ring3.parse("x1"), ring3.parse("x2")]))
        assert data.is_empty
        assert data.degree is None
        assert data.hilbert_polynomial == ()

    def test_rejects_inhomogeneous(self, ring2):
        with pytest.raises(NonHomogeneousError):
            hilbert_data(Ideal(ring2, [ring2.parse("x0 + 1")]))

    def test_order_independence(self, rng):
        # dimension and degree agree between grevlex and lex on random ideals
        for trial in range(10):
            nvars = rng.choice((3, 4))
            names = tuple(f"x{i}" for i in range(nvars))
            grevlex_ring = PolynomialRing(names)
            lex_ring = PolynomialRing(names, order=MonomialOrder.lex(nvars))
            gens = []
            for _ in range(rng.randint(1, 2)):
                gens.append(random_homogeneous(grevlex_ring, rng.randint(1, 3), rng))
            a = hilbert_data(Ideal(grevlex_ring, gens))
            b = hilbert_data(Ideal(lex_ring, [lex_ring.from_terms(g.terms) for g in gens]))
            assert (a.dimension, a.degree) == (b.dimension, b.degree)


class TestGradedPiece:
    def test_conic_degree_one_is_empty(self, ring3):
        ideal = Ideal(ring3, [ring3.parse("x0*x2 - x1^2")])
        assert graded_piece(ideal, 1) == []

    def test_conic_degree_two_is_the_generator(self, ring3):
        ideal = Ideal(ring3, [ring3.parse("x0*x2 - x1^2")])
        piece = graded_piece(ideal, 2)
        assert len(piece) == 1
        assert ideal.contains(piece[0])

    def test_twisted_cubic_degree_two(self, ring4):
        # 10 monomials of degree 2 on P^3 minus h^0(O_P1(6)) = 7 leaves 3
        piece = graded_piece(twisted_cubic(ring4), 2)
        assert len(piece) == 3

    def test_dimension_matches_hilbert_function(self, ring3, rng):
        from math import comb

        for _ in range(6):
            ideal = Ideal(ring3, [random_homogeneous(ring3, rng.randint(1, 3), rng) for _ in range(2)])
            saturated = saturate(ideal, Ideal(ring3, ring3.variables()))
            for d in range(1, 5):
                expected = comb(d + 2, 2) - hilbert_function(saturated, d)
                assert len(graded_piece(saturated, d)) == expected

    def test_rejects_nonpositive_degree(self, ring3):
        with pytest.raises(ValueError):
            graded_piece(Ideal(ring3, [ring3.parse("x0")]), 0)


class TestBuchbergerCriterionSuite:
    def test_random_ideals_pass_s_pair_reduction(self, rng):
        for trial in range(20):
            nvars = rng.choice((3, 4))
            ring = PolynomialRing(tuple(f"x{i}" for i in range(nvars)))
            gens = [
                random_homogeneous(ring, rng.randint(1, 3), rng)
                for _ in range(rng.randint(2, 3))
            ]
            basis = Ideal(ring, gens).groebner_basis()
            members = list(basis)
            for f, g in combinations(basis, 2):
                assert normal_form_against(s_polynomial(f, g), members).is_zero()

    def test_membership_of_random_combinations(self, ring3, rng):
        gens = [random_homogeneous(ring3, 2, rng) for _ in range(2)]
        ideal = Ideal(ring3, gens)
        for _ in range(15):
            member = ring3.zero()
            for g in gens:
                member = member + random_poly(ring3, 2, rng) * g
            assert ideal.contains(member)
