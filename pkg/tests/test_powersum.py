"""Generalized power sums, series, reconstruction, asymptotics, delta form."""

from fractions import Fraction
from math import comb

import pytest

from looptool.errors import (HoldoutMismatchError, RecursionMismatch,
                             SingularSystem, UnitCircleRoot)
from looptool.knots import FIELD_SQRT21, fixture
from looptool.laurent import LaurentPolynomial, RationalFunction
from looptool.numberfield import QQ
from looptool.powersum import (CoverPolynomial, GeneralizedPowerSum,
                               asymptotic_fit_check, check_recurrence,
                               gps_to_series, leading_asymptotic,
                               quad_to_delta_form, reconstruct_p,
                               series_coefficients, series_from_values)

LP = LaurentPolynomial


def test_gps_linear_sequence():
    gps = GeneralizedPowerSum([(QQ.one(), [QQ.zero(), QQ.one()])])
    series, values = gps_to_series(gps, 10)
    assert values[:5] == [QQ.element(k) for k in range(5)]
    t = LP(QQ, {1: 1})
    assert series == RationalFunction(t, LP(QQ, {0: 1, 1: -1}) ** 2)


def test_gps_geometric():
    gps = GeneralizedPowerSum([(QQ.element(2), [QQ.one()])])
    series, _ = gps_to_series(gps, 6)
    assert series == RationalFunction(LP.one(QQ), LP(QQ, {0: 1, 1: -2}))


def test_series_roundtrip_regenerates(rng):
    lam = QQ.element(Fraction(3, 2))
    gps = GeneralizedPowerSum([
        (QQ.one(), [QQ.element(2)]),
        (lam, [QQ.element(1), QQ.element(Fraction(-1, 3))]),
    ])
    series, values = gps_to_series(gps, gps.order)
    coeffs = series_coefficients(series, gps.order + 20)
    for n, c in enumerate(coeffs):
        assert c == gps.value(n)


def test_recursion_mismatch_detected():
    values = [QQ.element(v) for v in (1, 2, 4, 8, 17)]  # breaks a_n = 2a_{n-1}
    s = LP(QQ, {0: 1, 1: -2})
    with pytest.raises(RecursionMismatch):
        series_from_values(values, s)
    assert not check_recurrence(values, s)


def test_41_generating_series_matches_printed(field_sqrt21):
    fx = fixture("4_1")
    terms = [
        (field_sqrt21.one(), [field_sqrt21.zero(),
                              field_sqrt21.element(Fraction(-82, 1512))]),
        (fx.lam, [field_sqrt21.zero(), field_sqrt21.element(Fraction(-55, 1512))]),
        (fx.lam_inv, [field_sqrt21.zero(), field_sqrt21.element(Fraction(-55, 1512))]),
    ]
    gps = GeneralizedPowerSum(terms)
    series, _ = gps_to_series(gps, 12)
    printed = fx.series[2]
    lifted = RationalFunction(LP(field_sqrt21, printed.num.coeffs),
                              LP(field_sqrt21, printed.den.coeffs))
    assert series == lifted


def test_41_series_coefficients_match_averages():
    fx = fixture("4_1")
    one = FIELD_SQRT21.one()
    coeffs = series_coefficients(fx.series[2], 41)
    for n in range(1, 41):
        resultant = (one - fx.lam ** n) * (one - fx.lam_inv ** n)
        assert coeffs[n] == resultant * fx.phi_average(2, n).value


def test_renormalized_recurrence_to_40():
    from looptool.rootsum import cyclic_resultant
    fx = fixture("4_1")
    s = LP.one(FIELD_SQRT21)
    for root in (FIELD_SQRT21.element(-1), -fx.lam, -fx.lam_inv):
        s = s * LP(FIELD_SQRT21, {0: 1, 1: -root}) ** 2
    values = [FIELD_SQRT21.zero()]
    for n in range(1, 41):
        Nn = cyclic_resultant(fx.delta, n)
        values.append(FIELD_SQRT21.element(Nn.coords[0]) * fx.phi_average(2, n).value)
    assert check_recurrence(values, s)


# -- reconstruction ---------------------------------------------------------


def test_basis_counts_match_table():
    assert len(CoverPolynomial.basis(1, 2)) == 3
    assert len(CoverPolynomial.basis(1, 3)) == 10
    assert len(CoverPolynomial.basis(4, 2)) == 15
    assert len(CoverPolynomial.basis(4, 3)) == 140


def test_trivial_planted_p_equals_y():
    p = reconstruct_p([(n, QQ.element(n)) for n in (1, 2, 3)],
                      [QQ.element(2)], 2, 1)
    assert p.terms == {((0,), 1): QQ.one()}
    assert leading_asymptotic(p) == 1


def test_41_ell2_reconstruction_from_three_values():
    fx = fixture("4_1")
    values = [(n, fx.phi_average(2, n).value) for n in range(1, 4)]
    p = reconstruct_p(values, [fx.lam], 2, 1)
    assert p.terms[((0,), 1)] == Fraction(55, 1512)
    assert p.terms[((1,), 1)] == Fraction(-192, 1512)
    assert p.terms[((2,), 1)] == Fraction(192, 1512)
    for n in range(4, 21):
        assert p.evaluate(n) == fx.phi_average(2, n).value


def test_41_ell3_needs_ten_values():
    fx = fixture("4_1")
    values = [(n, fx.phi_average(3, n).value) for n in range(1, 11)]
    p = reconstruct_p(values, [fx.lam], 3, 1)
    for n in range(11, 26):
        assert p.evaluate(n) == fx.phi_average(3, n).value


def test_planted_random_recoveries(rng):
    pool = [Fraction(2), Fraction(3), Fraction(5), Fraction(7, 2), Fraction(5, 3)]
    for _ in range(20):
        r = rng.randint(1, 2)
        ell = rng.randint(2, 3)
        roots = [QQ.element(c) for c in rng.sample(pool, r)]
        basis = CoverPolynomial.basis(r, ell)
        terms = {key: QQ.element(Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
                 for key in basis if rng.random() < 0.8}
        planted = CoverPolynomial(QQ, ell, roots, terms)
        needed = (ell - 1) * comb(r + 2 * ell - 2, r)
        values = [(n, planted.evaluate(n)) for n in range(1, needed + 5)]
        assert reconstruct_p(values, roots, ell, r) == planted


def test_holdout_mismatch_detected():
    fx = fixture("4_1")
    values = [(n, fx.phi_average(2, n).value) for n in range(1, 5)]
    values[-1] = (4, values[-1][1] + 1)
    with pytest.raises(HoldoutMismatchError):
        reconstruct_p(values, [fx.lam], 2, 1)


def test_singular_window_detected():
    # root 1 is resonant: 1 - lam^n = 0 inside the window
    from looptool.errors import ResonantRoot
    with pytest.raises((SingularSystem, ResonantRoot)):
        reconstruct_p([(n, QQ.element(n)) for n in (1, 2, 3)],
                      [QQ.element(1)], 2, 1)


def test_json_roundtrip_and_symmetric_alpha(field_sqrt21):
    fx = fixture("4_1")
    values = [(n, fx.phi_average(2, n).value) for n in range(1, 4)]
    p = reconstruct_p(values, [fx.lam], 2, 1)
    assert CoverPolynomial.from_json(p.to_json(), field_sqrt21) == p
    symmetric = {"ell": 2, "r": 1, "roots": [fx.lam.to_json()],
                 "terms": [
                     {"alpha": [1, 0], "beta": 1, "coeff": "55/1512"},
                     {"alpha": [0, 1], "beta": 1, "coeff": "55/1512"},
                     {"alpha": [1, 1], "beta": 1, "coeff": "-192/1512"}]}
    assert CoverPolynomial.from_json(symmetric, field_sqrt21) == p


# -- asymptotics -----------------------------------------------------------------


def test_leading_asymptotics_41():
    fx = fixture("4_1")
    p2 = reconstruct_p([(n, fx.phi_average(2, n).value) for n in range(1, 4)],
                       [fx.lam], 2, 1)
    assert leading_asymptotic(p2) == Fraction(55, 1512)
    p3 = reconstruct_p([(n, fx.phi_average(3, n).value) for n in range(1, 11)],
                       [fx.lam], 3, 1)
    assert leading_asymptotic(p3) == fx.psi[3].value


def test_leading_asymptotic_inverse_root_convention():
    fx = fixture("4_1")
    # reconstruct with the root inside the unit disk: x -> 1 limit
    p = reconstruct_p([(n, fx.phi_average(2, n).value) for n in range(1, 4)],
                      [fx.lam_inv], 2, 1)
    assert leading_asymptotic(p) == Fraction(55, 1512)


def test_leading_asymptotic_vanishing_case():
    p = CoverPolynomial(QQ, 2, [QQ.element(2)], {((1,), 1): QQ.one()})
    assert leading_asymptotic(p) == 0  # x -> 0 since |2| > 1


def test_unit_circle_root_rejected():
    p = CoverPolynomial(QQ, 2, [QQ.element(-1)], {((1,), 1): QQ.one()})
    with pytest.raises(UnitCircleRoot):
        leading_asymptotic(p)


def test_multiplicative_leading_term():
    fx = fixture("4_1")
    for m in (2, 3):
        values = [(n, fx.phi_average(2, m * n).value) for n in range(1, 4)]
        p_m = reconstruct_p(values, [fx.lam ** m], 2, 1)
        assert leading_asymptotic(p_m) == FIELD_SQRT21.element(Fraction(55, 1512)) * m


def test_asymptotic_fit_check_cases():
    fx = fixture("4_1")
    psi2 = FIELD_SQRT21.element(Fraction(55, 1512))
    values = [(n, fx.phi_average(2, n).value) for n in range(10, 41)]
    assert asymptotic_fit_check(values, psi2, fx.lam, 2, 90)
    exact = [(n, psi2 * n) for n in range(10, 26)]
    assert asymptotic_fit_check(exact, psi2, fx.lam, 2, 60)
    wrong = FIELD_SQRT21.element(Fraction(56, 1512))
    assert not asymptotic_fit_check(values, wrong, fx.lam, 2, 90)


# -- quadratic delta form -------------------------------------------------------


def test_quad_form_matches_41_table():
    fx = fixture("4_1")
    p = reconstruct_p([(n, fx.phi_average(2, n).value) for n in range(1, 4)],
                      [fx.lam], 2, 1)
    q = quad_to_delta_form(p)
    assert q.terms == {(2, 1): FIELD_SQRT21.element(Fraction(4, 3)),
                       (1, 1): FIELD_SQRT21.element(Fraction(20, 63)),
                       (0, 0): FIELD_SQRT21.element(Fraction(55, 1512))}
    for n in range(1, 31):
        assert q.average(n) == fx.phi_average(2, n).value


def test_quad_form_zero():
    p = CoverPolynomial(QQ, 2, [QQ.element(2)], {})
    assert quad_to_delta_form(p).terms == {}


def test_quad_form_planted_oracle(rng):
    lam = QQ.element(2)
    p = CoverPolynomial(QQ, 2, [lam], {((1,), 1): QQ.element(Fraction(3, 7)),
                                       ((2,), 1): QQ.element(Fraction(-2, 5))})
    q = quad_to_delta_form(p)
    for n in range(1, 16):
        assert q.average(n) == p.evaluate(n)


def test_quad_form_coeffs_invariant_under_root_swap():
    fx = fixture("4_1")
    values = [(n, fx.phi_average(2, n).value) for n in range(1, 4)]
    q1 = quad_to_delta_form(reconstruct_p(values, [fx.lam], 2, 1))
    q2 = quad_to_delta_form(reconstruct_p(values, [fx.lam_inv], 2, 1))
    assert q1.terms == q2.terms
    # coefficients land in the rational subfield
    for c in q1.terms.values():
        assert c.is_rational()
