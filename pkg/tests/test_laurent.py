"""Laurent polynomials, rational functions, matrices, partial fractions."""

from fractions import Fraction

import pytest

from looptool.errors import IncompleteFactorization, SingularMatrix, ZeroBase
from looptool.laurent import (LaurentMatrix, LaurentPolynomial,
                              RationalFunction, partial_fractions,
                              proportional_up_to_unit,
                              recombine_partial_fractions)
from looptool.numberfield import QQ

LP = LaurentPolynomial

DELTA_41 = LP(QQ, {1: 1, 0: -5, -1: 1})


def test_eval_delta_41_values():
    assert DELTA_41.eval(QQ.element(1)) == -3
    assert DELTA_41.eval(QQ.element(-1)) == -7


def test_eval_at_one_is_coefficient_sum(rng):
    for _ in range(30):
        p = LP(QQ, {k: rng.randint(-9, 9) for k in range(-3, 4)})
        total = sum((c.coords[0] for c in p.coeffs.values()), Fraction(0))
        assert p.eval(QQ.element(1)) == total


def test_eval_zero_base_raises():
    with pytest.raises(ZeroBase):
        DELTA_41.eval(QQ.zero())


def test_eval_in_extension(field_sqrt21):
    lam = (5 + field_sqrt21.generator()) / 2
    assert DELTA_41.eval(lam).is_zero()


def test_eval_ring_homomorphism(rng):
    for _ in range(60):
        p = LP(QQ, {k: rng.randint(-5, 5) for k in range(-2, 3)})
        q = LP(QQ, {k: rng.randint(-5, 5) for k in range(-2, 3)})
        a = QQ.element(Fraction(rng.randint(1, 9), rng.randint(1, 9)))
        assert (p * q).eval(a) == p.eval(a) * q.eval(a)
        assert (p + q).eval(a) == p.eval(a) + q.eval(a)


def test_rational_function_canonical_form():
    f = RationalFunction(LP(QQ, {0: 2, 1: -2}), LP(QQ, {0: 4, 1: -8, 2: 4}))
    g = RationalFunction(LP(QQ, {0: 1}), LP(QQ, {0: 2, 1: -2}))
    assert f == g
    assert f.den.coefficient(0) == 1 and f.den.min_exp() == 0


def test_zero_rational_function_is_canonical():
    z = RationalFunction(LP.zero(QQ), DELTA_41)
    assert z == 0 and z.is_polynomial()


def test_matrix_inverse_identity_and_scalar():
    I3 = LaurentMatrix.identity(QQ, 3)
    inv = I3.inverse()
    for i in range(3):
        for j in range(3):
            assert inv[i][j] == (1 if i == j else 0)
    M = LaurentMatrix.from_rows(QQ, [[DELTA_41]])
    assert M.inverse()[0][0] == RationalFunction(LP.one(QQ), DELTA_41)


def test_matrix_inverse_both_sides(rng):
    done = 0
    while done < 15:
        n = rng.randint(1, 4)
        M = LaurentMatrix.from_rows(QQ, [
            [LP(QQ, {k: rng.randint(-3, 3) for k in range(-1, 2)})
             for _ in range(n)] for _ in range(n)])
        if M.det().is_zero():
            continue
        inv = M.inverse()
        for i in range(n):
            for j in range(n):
                left = right = None
                for k in range(n):
                    t1 = inv[k][j] * M.entries[i][k]
                    t2 = inv[i][k] * M.entries[k][j]
                    left = t1 if left is None else left + t1
                    right = t2 if right is None else right + t2
                want = 1 if i == j else 0
                assert left == want and right == want
        done += 1


def test_singular_matrix_raises():
    M = LaurentMatrix.from_rows(QQ, [[LP.one(QQ), LP.one(QQ)],
                                     [LP.one(QQ), LP.one(QQ)]])
    assert M.det().is_zero()
    with pytest.raises(SingularMatrix):
        M.inverse()


def test_bareiss_det_matches_cofactor(rng):
    def cof(rows, n):
        if n == 1:
            return rows[0][0]
        acc = LP.zero(QQ)
        for j in range(n):
            minor = [[rows[i][k] for k in range(n) if k != j]
                     for i in range(1, n)]
            term = rows[0][j] * cof(minor, n - 1)
            acc = acc + term if j % 2 == 0 else acc - term
        return acc

    for _ in range(10):
        n = rng.randint(1, 3)
        rows = [[LP(QQ, {k: rng.randint(-3, 3) for k in range(0, 2)})
                 for _ in range(n)] for _ in range(n)]
        assert LaurentMatrix(QQ, rows).det() == cof(rows, n)


def test_partial_fractions_two_simple_poles():
    a, b = QQ.element(2), QQ.element(3)
    f = RationalFunction(LP.one(QQ),
                         LP(QQ, {0: 1, 1: -2}) * LP(QQ, {0: 1, 1: -3}))
    poly, terms = partial_fractions(f, [(a, 1), (b, 1)])
    # 1/(1-b/a) = -2 and 1/(1-a/b) = 3
    assert poly.is_zero()
    assert terms[(0, 1)] == -2 and terms[(1, 1)] == 3
    assert recombine_partial_fractions(poly, terms, [(a, 1), (b, 1)]) == f


def test_partial_fractions_identity_on_single_factor():
    c = QQ.element(5)
    f = RationalFunction(LP.one(QQ), LP(QQ, {0: 1, 1: -5}))
    poly, terms = partial_fractions(f, [(c, 1)])
    assert poly.is_zero() and terms[(0, 1)] == 1


def test_partial_fractions_delta41_over_sqrt21(field_sqrt21):
    lam = (5 + field_sqrt21.generator()) / 2
    f = RationalFunction(LP(field_sqrt21, {0: 1}),
                         LP(field_sqrt21, DELTA_41.coeffs))
    roots = [(lam, 1), (lam.inverse(), 1)]
    poly, terms = partial_fractions(f, roots)
    assert recombine_partial_fractions(poly, terms, roots) == f


def test_partial_fractions_rejects_wrong_roots():
    f = RationalFunction(LP.one(QQ), LP(QQ, {0: 1, 1: -2}))
    with pytest.raises(IncompleteFactorization):
        partial_fractions(f, [(QQ.element(3), 1)])


def test_proportional_up_to_unit():
    p = LP(QQ, {1: 1, 0: -5, -1: 1})
    q = LP(QQ, {3: -2, 2: 10, 1: -2})  # -2 t^2 * p
    assert proportional_up_to_unit(p, q)
    assert not proportional_up_to_unit(p, LP(QQ, {1: 1, 0: -4, -1: 1}))


def test_laurent_serialization_roundtrip(field_cubic):
    p = LP(field_cubic, {-2: field_cubic.generator(), 0: 3,
                         5: field_cubic.element([1, 2, 3])})
    assert LP.from_json(p.to_json(), field_cubic) == p
    f = RationalFunction(p, LP(field_cubic, {0: 1, 1: 1}))
    assert RationalFunction.from_json(f.to_json(), field_cubic) == f
