"""Field arithmetic, inverses, certified embeddings, serialization."""

from fractions import Fraction

import mpmath
import pytest

from conftest import random_element
from looptool.errors import ParseError, ZeroInverse
from looptool.numberfield import (ComplexBall, FieldElement, NumberField, QQ,
                                  parse_rational, sqrt_lower, sqrt_upper)


def test_rational_parsing_roundtrip():
    assert parse_rational("3/7") == Fraction(3, 7)
    assert parse_rational("-5") == -5
    with pytest.raises(ParseError):
        parse_rational("0.5")
    with pytest.raises(ParseError):
        parse_rational("1e3")


def test_inverse_identity_in_qq():
    one = QQ.one()
    assert one.inverse() == one


def test_inverse_cubic_example():
    # xi^3 = xi + 1: 1/xi = xi^2 - 1 since xi(xi^2 - 1) = xi^3 - xi = 1
    K = NumberField([-1, -1, 0, 1])
    xi = K.generator()
    assert xi.inverse() == K.element([-1, 0, 1])
    assert xi * xi.inverse() == 1


def test_inverse_golden_pair(field_sqrt21):
    s21 = field_sqrt21.generator()
    lam = (5 + s21) / 2
    assert lam.inverse() == (5 - s21) / 2
    assert lam * ((5 - s21) / 2) == 1


def test_zero_inverse_raises():
    with pytest.raises(ZeroInverse):
        QQ.zero().inverse()


def test_field_axioms_random(rng, field_cubic):
    for _ in range(300):
        a = random_element(rng, field_cubic)
        b = random_element(rng, field_cubic)
        c = random_element(rng, field_cubic)
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        if not a.is_zero():
            assert a * a.inverse() == 1


def test_minpoly_must_be_squarefree():
    with pytest.raises(ParseError):
        NumberField([1, 2, 1])  # (x+1)^2


def test_minpoly_must_be_monic():
    with pytest.raises(ParseError):
        NumberField([-21, 0, 2])


def test_embed_rational_is_exact_point():
    ball = QQ.element(Fraction(3, 4)).embed(precision_digits=10)
    assert ball.re == Fraction(3, 4) and ball.im == 0 and ball.radius == 0


def test_embed_sqrt21_30_digits(field_sqrt21):
    ball = field_sqrt21.generator().embed(precision_digits=30)
    assert ball.radius <= Fraction(1, 10 ** 30)
    want = mpmath.mpf("4.5825756949558400065880471937280")
    assert abs(ball.to_mpc().real - want) < mpmath.mpf(10) ** -28
    assert ball.to_mpc().real > 0  # root_index selects the positive root


def test_embed_cubic_complex_root(field_cubic):
    # the geometric root is approximately -0.662 - 0.562 i
    ball = field_cubic.generator().embed(precision_digits=25)
    z = ball.to_mpc()
    assert abs(z.real - mpmath.mpf("-0.6623589786")) < 1e-9
    assert abs(z.imag - mpmath.mpf("-0.5622795120")) < 1e-9


def test_embedding_homomorphism_many_pairs(rng, field_cubic, field_sqrt21):
    def digits_of(radius):
        if radius == 0:
            return 40
        return min(120, int(-mpmath.log10(
            mpmath.mpf(radius.numerator) / radius.denominator)))

    for field in (field_cubic, field_sqrt21):
        for _ in range(500):
            a = random_element(rng, field)
            b = random_element(rng, field)
            outer = a.embed(precision_digits=15) * b.embed(precision_digits=15)
            inner = (a * b).embed(precision_digits=digits_of(outer.radius) + 3)
            assert outer.contains_ball(inner)


def test_certified_roots_pairwise_disjoint(field_cubic):
    balls = field_cubic.certified_roots(30)
    assert len(balls) == 3
    for i in range(3):
        for j in range(i + 1, 3):
            d2 = (balls[i].re - balls[j].re) ** 2 + (balls[i].im - balls[j].im) ** 2
            rr = balls[i].radius + balls[j].radius
            assert d2 > rr * rr


def test_abs_bounds_certify_unit_circle_side(field_sqrt21):
    lam = (5 + field_sqrt21.generator()) / 2
    assert lam.embed(precision_digits=20).abs_lower() > 1
    assert lam.inverse().embed(precision_digits=20).abs_upper() < 1


def test_sqrt_bounds_tiny_values():
    q = Fraction(1, 10 ** 200)
    up, lo = sqrt_upper(q), sqrt_lower(q)
    assert lo * lo <= q <= up * up
    assert up < Fraction(2, 10 ** 100)


def test_serialization_roundtrip(rng, field_cubic):
    for _ in range(50):
        a = random_element(rng, field_cubic)
        assert FieldElement.from_json(a.to_json()) == a
    b = QQ.element(Fraction(-7, 3))
    assert FieldElement.from_json(b.to_json()) == b
    assert FieldElement.from_json("4/9", QQ) == Fraction(4, 9)


def test_cross_field_promotion(field_sqrt21):
    a = QQ.element(Fraction(1, 2))
    s = field_sqrt21.generator()
    assert (a + s) - s == field_sqrt21.element(Fraction(1, 2))
    assert (a * s) / s == Fraction(1, 2)


def test_ball_arithmetic_encloses():
    b1 = ComplexBall(Fraction(1), Fraction(2), Fraction(1, 100))
    b2 = ComplexBall(Fraction(-3), Fraction(1, 2), Fraction(1, 50))
    prod = b1 * b2
    # true product of centers lies inside
    assert prod.contains_ball(ComplexBall(b1.re * b2.re - b1.im * b2.im,
                                          b1.re * b2.im + b1.im * b2.re))
