"""Generalized power sums and polynomial forms of cover invariant sequences.

A sequence sum_j A_j(n) lam_j^n with polynomial coefficients satisfies the
constant-coefficient linear recurrence with characteristic polynomial
s(t) = prod (1 - lam_j t)^{deg A_j + 1} and has a rational generating series.

CoverPolynomial is the polynomial p(x_1..x_r, y) whose evaluation at
x_j = 1/(1 - lam_j^n), y = n gives the invariant of the n-cover.  The
canonical coefficient basis uses one variable per root pair (total degree
at most 2*ell - 2, y-degree 1..ell-1), which has exactly
(ell-1) * C(r + 2ell - 2, r) coefficients; inputs written in the redundant
two-variables-per-pair form are folded through 1/(1 - lam^{-n}) =
1 - 1/(1 - lam^n).
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath

from .errors import (HoldoutMismatchError, ParseError, RecursionMismatch,
                     ResonantRoot, SingularError, SingularSystem,
                     UnitCircleRoot)
from .laurent import LaurentPolynomial, RationalFunction
from .linalg import solve
from .numberfield import FieldElement, NumberField, QQ
from .rootsum import XLaurent, delta_basis_inverse


class GeneralizedPowerSum:
    """Terms (root, coefficient polynomial in n), roots pairwise distinct."""

    def __init__(self, terms: Sequence[Tuple[FieldElement, Sequence[FieldElement]]]):
        if not terms:
            raise ParseError("need at least one term")
        self.terms = []
        seen = set()
        for root, coeffs in terms:
            key = root.coords
            if key in seen:
                raise ParseError("roots must be pairwise distinct")
            seen.add(key)
            coeffs = list(coeffs)
            while coeffs and coeffs[-1].is_zero():
                coeffs.pop()
            if not coeffs:
                raise ParseError("zero coefficient polynomial")
            self.terms.append((root, coeffs))
        self.field = self.terms[0][0].field
        self.order = sum(len(c) for _, c in self.terms)

    def value(self, n: int) -> FieldElement:
        acc = self.field.zero()
        for root, coeffs in self.terms:
            poly = self.field.zero()
            for c in reversed(coeffs):
                poly = poly * n + c
            acc = acc + poly * root ** n
        return acc

    def characteristic(self) -> LaurentPolynomial:
        """s(t) = prod_j (1 - lam_j t)^{d_j}."""
        s = LaurentPolynomial.one(self.field)
        for root, coeffs in self.terms:
            factor = LaurentPolynomial(self.field, {0: 1, 1: -root})
            s = s * factor ** len(coeffs)
        return s


def check_recurrence(values: Sequence[FieldElement], s: LaurentPolynomial) -> bool:
    """Do the values satisfy the recurrence with characteristic s(t)?

    s(t) = 1 - s_1 t - ... - s_d t^d encodes a_{n+d} = sum s_i a_{n+d-i}.
    """
    coeffs, shift = s.as_poly_coeffs()
    if shift != 0 or coeffs[0] != 1:
        raise ParseError("characteristic polynomial must have constant term 1")
    d = len(coeffs) - 1
    for n in range(d, len(values)):
        acc = values[n]
        for i in range(1, d + 1):
            acc = acc + coeffs[i] * values[n - i]
        if not acc.is_zero():
            return False
    return True


def gps_to_series(gps: GeneralizedPowerSum, order: int):
    """Rational generating series r(t)/s(t) of the sequence, plus the first
    `order` sequence values (starting at n = 0).

    s(t) comes from the roots; r(t) is the truncation of s * (sum a_n t^n)
    below degree d, and the recurrence is verified on the remaining values
    (RecursionMismatch flags an inconsistent sequence).
    """
    d = gps.order
    if order < d:
        raise ParseError(f"order must be at least the GPS order {d}")
    values = [gps.value(n) for n in range(order)]
    return series_from_values(values, gps.characteristic()), values


def series_from_values(values: Sequence[FieldElement], s: LaurentPolynomial
                       ) -> RationalFunction:
    field = s.field
    coeffs, shift = s.as_poly_coeffs()
    if shift != 0:
        raise ParseError("characteristic polynomial must start at t^0")
    d = len(coeffs) - 1
    if len(values) < d:
        raise ParseError("not enough values")
    num: Dict[int, FieldElement] = {}
    for k in range(len(values)):
        acc = field.zero()
        for i in range(0, min(k, d) + 1):
            acc = acc + coeffs[i] * values[k - i]
        if k < d:
            if not acc.is_zero():
                num[k] = acc
        elif not acc.is_zero():
            raise RecursionMismatch(f"sequence violates its recurrence at n = {k}")
    return RationalFunction(LaurentPolynomial(field, num), s)


def series_coefficients(rf: RationalFunction, count: int) -> List[FieldElement]:
    """First `count` power series coefficients of a rational function that is
    regular at t = 0."""
    field = rf.field
    num, nshift = rf.num.as_poly_coeffs()
    den, dshift = rf.den.as_poly_coeffs()
    if dshift != 0:
        raise ParseError("denominator must be regular at t = 0")
    if nshift < 0:
        raise ParseError("series has a pole at t = 0")
    inv0 = den[0].inverse()
    out = []
    for k in range(count):
        acc = field.zero()
        kk = k - nshift
        if 0 <= kk < len(num):
            acc = acc + num[kk]
        for i in range(1, min(k, len(den) - 1) + 1):
            acc = acc - den[i] * out[k - i]
        out.append(acc * inv0)
    return out


# ---------------------------------------------------------------------------
# Cover polynomials
# ---------------------------------------------------------------------------

class CoverPolynomial:
    """p(x_1..x_r, y) with x_j standing for 1/(1 - lam_j^n) and y for n.

    terms maps (alpha, beta) -> coefficient with alpha a length-r exponent
    tuple, |alpha| <= 2*ell - 2, and 1 <= beta <= ell - 1.
    """

    def __init__(self, field: NumberField, ell: int, roots: Sequence[FieldElement],
                 terms: Dict[Tuple[Tuple[int, ...], int], FieldElement]):
        self.field = field
        self.ell = int(ell)
        self.roots = list(roots)
        self.r = len(self.roots)
        if self.ell < 2:
            raise ParseError("ell must be >= 2")
        clean = {}
        for (alpha, beta), c in terms.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.r:
                raise ParseError("alpha length must equal the number of root pairs")
            if sum(alpha) > 2 * self.ell - 2:
                raise ParseError("total x-degree exceeds 2*ell - 2")
            if not 1 <= beta <= self.ell - 1:
                raise ParseError("y-degree must lie in 1..ell-1")
            if not c.is_zero():
                clean[(alpha, int(beta))] = c
        self.terms = clean

    @classmethod
    def basis(cls, r: int, ell: int):
        """Canonical dense index set; size (ell-1) * C(r + 2ell - 2, r)."""
        alphas = [a for a in itertools.product(range(2 * ell - 1), repeat=r)
                  if sum(a) <= 2 * ell - 2]
        alphas.sort()
        return [(alpha, beta) for beta in range(1, ell) for alpha in alphas]

    def evaluate(self, n: int) -> FieldElement:
        one = self.field.one()
        xs = []
        for lam in self.roots:
            diff = one - lam ** n
            if diff.is_zero():
                raise ResonantRoot(f"lam^{n} = 1 for a root")
            xs.append(diff.inverse())
        acc = self.field.zero()
        for (alpha, beta), c in self.terms.items():
            v = c * Fraction(n) ** beta
            for x, a in zip(xs, alpha):
                if a:
                    v = v * x ** a
            acc = acc + v
        return acc

    def __eq__(self, other):
        return (isinstance(other, CoverPolynomial) and self.ell == other.ell
                and self.roots == other.roots and self.terms == other.terms)

    def scale(self, c) -> "CoverPolynomial":
        return CoverPolynomial(self.field, self.ell, self.roots,
                               {k: v * c for k, v in self.terms.items()})

    # -- serialization: alpha emitted in paired (a_j, 0) form ------------------

    def to_json(self) -> dict:
        terms = []
        for (alpha, beta), c in sorted(self.terms.items()):
            paired = []
            for a in alpha:
                paired.extend([a, 0])
            terms.append({"alpha": paired, "beta": beta, "coeff": c.to_json()})
        return {"ell": self.ell, "r": self.r,
                "roots": [lam.to_json() for lam in self.roots],
                "terms": terms}

    @classmethod
    def from_json(cls, obj, field: Optional[NumberField] = None) -> "CoverPolynomial":
        if field is None:
            field = NumberField.from_json(obj["roots"][0]) if obj.get("roots") else QQ
        roots = [FieldElement.from_json(x, field) for x in obj.get("roots", [])]
        ell = int(obj["ell"])
        r = len(roots)
        terms: Dict[Tuple[Tuple[int, ...], int], FieldElement] = {}
        for item in obj.get("terms", []):
            paired = [int(a) for a in item["alpha"]]
            beta = int(item["beta"])
            coeff = FieldElement.from_json(item["coeff"], field)
            if len(paired) == r:
                paired = [x for a in paired for x in (a, 0)]
            if len(paired) != 2 * r:
                raise ParseError("alpha must have length 2r (or r)")
            # fold the redundant second variable of each pair through
            # 1/(1 - lam^{-n}) = 1 - 1/(1 - lam^n)
            expanded = [((0,) * r, coeff)]
            for j in range(r):
                a, b = paired[2 * j], paired[2 * j + 1]
                new = []
                for alpha_vec, c in expanded:
                    # multiply by u_j^a * (1 - u_j)^b
                    binom = [Fraction(1)]
                    for _ in range(b):
                        binom = [p - q for p, q in zip(binom + [Fraction(0)],
                                                       [Fraction(0)] + binom)]
                    for k, bc in enumerate(binom):
                        if bc == 0:
                            continue
                        vec = list(alpha_vec)
                        vec[j] += a + k
                        new.append((tuple(vec), c * bc))
                expanded = new
            for alpha_vec, c in expanded:
                key = (alpha_vec, beta)
                terms[key] = terms.get(key, field.zero()) + c
        return cls(field, ell, roots, {k: v for k, v in terms.items()
                                       if not v.is_zero()})

    @classmethod
    def load(cls, path, field: Optional[NumberField] = None) -> "CoverPolynomial":
        with open(path) as fh:
            return cls.from_json(json.load(fh), field)


def reconstruct_p(values: Sequence[Tuple[int, FieldElement]],
                  roots: Sequence[FieldElement], ell: int, r: int,
                  validate_rest: bool = True) -> CoverPolynomial:
    """Solve for the cover polynomial from consecutive sequence values.

    Needs at least (ell-1) * C(r + 2ell - 2, r) values; the first that many
    build the square linear system, the rest validate the solution exactly.
    """
    if len(roots) != r:
        raise ParseError("expected one root per pair")
    field = roots[0].field if roots else QQ
    basis = CoverPolynomial.basis(r, ell)
    needed = (ell - 1) * comb(r + 2 * ell - 2, r)
    assert len(basis) == needed
    if len(values) < needed:
        raise ParseError(f"need {needed} values, got {len(values)}")
    one = field.one()

    def row_for(n: int):
        xs = []
        for lam in roots:
            diff = one - lam ** n
            if diff.is_zero():
                raise ResonantRoot(f"lam^{n} = 1 inside the window")
            xs.append(diff.inverse())
        row = []
        for alpha, beta in basis:
            v = field.element(Fraction(n) ** beta)
            for x, a in zip(xs, alpha):
                if a:
                    v = v * x ** a
            row.append(v)
        return row

    window = values[:needed]
    A = [row_for(n) for n, _ in window]
    b = [field.element(v.coords[0]) if isinstance(v, FieldElement) and v.field.degree == 1
         else v for _, v in window]
    try:
        coeffs = solve(field, A, b)
    except SingularError as exc:
        raise SingularSystem("reconstruction system is singular "
                             "(resonance or bad window)") from exc
    terms = {key: c for key, c in zip(basis, coeffs) if not c.is_zero()}
    p = CoverPolynomial(field, ell, list(roots), terms)
    if validate_rest:
        for n, v in values[needed:]:
            if p.evaluate(n) != v:
                raise HoldoutMismatchError(f"reconstruction fails at held-out n = {n}")
    return p


# ---------------------------------------------------------------------------
# Asymptotics
# ---------------------------------------------------------------------------

_ABS_PRECISIONS = (30, 60, 120, 240)


def _abs_vs_one(lam: FieldElement) -> int:
    """+1, -1 by certified comparison of |lam| with 1; UnitCircleRoot if the
    comparison cannot be decided at escalating precision."""
    for digits in _ABS_PRECISIONS:
        ball = lam.embed(None, digits)
        if ball.abs_lower() > 1:
            return 1
        if ball.abs_upper() < 1:
            return -1
    raise UnitCircleRoot(f"|lam| = 1 within precision for {lam!r}")


def leading_asymptotic(p: CoverPolynomial) -> FieldElement:
    """Limit coefficient: substitute x_j -> 0 (|lam_j| > 1) or 1 (|lam_j| < 1)
    and return the coefficient of y^1."""
    subs = []
    for lam in p.roots:
        side = _abs_vs_one(lam)
        subs.append(p.field.zero() if side > 0 else p.field.one())
    out = p.field.zero()
    for (alpha, beta), c in p.terms.items():
        if beta != 1:
            continue
        v = c
        for x, a in zip(subs, alpha):
            if a:
                v = v * x ** a
        out = out + v
    return out


def asymptotic_fit_check(values: Sequence[Tuple[int, FieldElement]],
                         psi: FieldElement, lam_max: FieldElement, ell: int,
                         precision_digits: int = 80) -> bool:
    """Monitor |Phi_n - n psi| / (n^{ell-1} |lam|^{-n}) over the window.

    Returns False when the ratio grows by more than a factor of two from the
    first half of the window to the second (or is unbounded); True when the
    envelope holds.
    """
    if len(values) < 4:
        raise ParseError("need at least 4 values")
    with mpmath.workdps(precision_digits + 10):
        psi_c = psi.to_mpc(precision_digits)
        lam_abs = abs(lam_max.to_mpc(precision_digits))
        ratios = []
        for n, v in values:
            vc = v.to_mpc(precision_digits)
            diff = abs(vc - n * psi_c)
            # rounding noise floor; exact coincidences must register as zero
            floor = (abs(vc) + abs(n * psi_c) + 1) * mpmath.mpf(10) ** (-precision_digits)
            if diff <= floor:
                diff = mpmath.mpf(0)
            envelope = mpmath.mpf(n) ** (ell - 1) * lam_abs ** (-n)
            ratios.append(diff / envelope)
        mid = len(ratios) // 2
        first = max(ratios[:mid])
        second = max(ratios[mid:])
        if first == 0:
            return second == 0
        return second <= 2 * first


# ---------------------------------------------------------------------------
# Quadratic-delta change of basis
# ---------------------------------------------------------------------------

class DeltaForm:
    """q(x, y) with x standing for 1/delta(t) and y for 1/n, where delta is
    the monic palindromic quadratic with root lam."""

    def __init__(self, field: NumberField, lam: FieldElement,
                 terms: Dict[Tuple[int, int], FieldElement]):
        self.field = field
        self.lam = lam
        self.terms = {k: v for k, v in terms.items() if not v.is_zero()}

    def delta_polynomial(self) -> LaurentPolynomial:
        tr = self.lam + self.lam.inverse()
        return LaurentPolynomial(self.field, {1: 1, 0: -tr, -1: 1})

    def as_rational_function(self, n: int) -> RationalFunction:
        """q(1/delta(t), 1/n) as a rational function of t for fixed n."""
        delta = RationalFunction.from_poly(self.delta_polynomial())
        inv_delta = delta.reciprocal()
        acc = RationalFunction.from_poly(LaurentPolynomial.zero(self.field))
        inv_n = Fraction(1, n)
        for (i, j), c in sorted(self.terms.items()):
            coeff = c * inv_n ** j
            term = RationalFunction.from_poly(
                LaurentPolynomial(self.field, {0: coeff}))
            if i:
                term = term * inv_delta ** i
            acc = acc + term
        return acc

    def average(self, n: int) -> FieldElement:
        from .rootsum import av_exact
        return av_exact(self.as_rational_function(n), n)

    def x_degree(self) -> int:
        return max((i for i, _ in self.terms), default=0)

    def y_degree(self) -> int:
        return max((j for _, j in self.terms), default=0)


def quad_to_delta_form(p: CoverPolynomial) -> DeltaForm:
    """Rewrite a one-root-pair cover polynomial as a sum over roots of unity
    of q(1/delta(t), 1/n).

    Uses the triangular basis inverse: u^a = sum_i beta_{a,i}(1/n) S_i with
    S_0 = 1 = sum_{t^n=1} (1/n) and S_i the delta power sums; positive
    powers of n must cancel in the assembled q (they do for sequences with
    linear leading asymptotics), otherwise the input is rejected.
    """
    if p.r != 1:
        raise ParseError("quadratic form needs exactly one root pair")
    lam = p.roots[0]
    field = p.field
    a_max = max((alpha[0] for (alpha, _) in p.terms), default=0)
    beta_rows = delta_basis_inverse(lam, a_max) if a_max > 0 else \
        [[XLaurent.constant(field, 1)]]
    out: Dict[Tuple[int, int], FieldElement] = {}
    for (alpha, beta), c in p.terms.items():
        a = alpha[0]
        # n^beta * u^a -> integrand sum_i [beta_{a,i}(1/n) adjusted] x^i
        row = beta_rows[a]
        for i in range(a + 1):
            entry = row[i]
            if entry.is_zero():
                continue
            for exp, coeff in entry.coeffs.items():
                # exp <= 0 power of n from the basis inverse; S_0 carries an
                # extra 1/n when pushed under the root-of-unity sum
                n_power = exp + beta - (1 if i == 0 else 0)
                key = (i, -n_power)
                out[key] = out.get(key, field.zero()) + c * coeff
    bad = {k: v for k, v in out.items() if k[1] < 0 and not v.is_zero()}
    if bad:
        raise ParseError(f"positive powers of n survive: {sorted(bad)}")
    return DeltaForm(field, lam, {k: v for k, v in out.items() if not v.is_zero()})
