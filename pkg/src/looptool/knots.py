"""Exact data for the 4_1 and 5_2 knots and the evaluators built on it.

Values of the 2-loop invariant of 4_1 covers carry a global sqrt(-3) unit;
they are stored as rational (or Q(sqrt21)) values tagged with that unit, so
all arithmetic stays in real quadratic fields.  The 5_2 data lives in the
cubic field of discriminant -23 generated by the complex root
xi ~ -0.662 - 0.562i of xi^3 - xi - 1.

Three independent routes to the same numbers exist for 4_1 (average over
roots of unity, generalized-power-sum closed form, generating series), which
is what the test suite leans on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

import mpmath

from .errors import ParseError
from .laurent import LaurentPolynomial, RationalFunction
from .numberfield import FieldElement, NumberField, QQ
from .rootsum import av_exact

#: Real quadratic field Q(sqrt 21); root_index 1 is the positive square root.
FIELD_SQRT21 = NumberField([-21, 0, 1], root_index=1)

#: Cubic field of discriminant -23; root_index 0 is xi ~ -0.662 - 0.562i.
FIELD_52 = NumberField([-1, -1, 0, 1], root_index=0)


@dataclass(frozen=True)
class TaggedValue:
    """A field value optionally carrying a formal sqrt(-3) unit."""
    value: FieldElement
    sqrt_m3: bool = False

    def __add__(self, other: "TaggedValue") -> "TaggedValue":
        if self.sqrt_m3 != other.sqrt_m3:
            if self.value.is_zero():
                return other
            if other.value.is_zero():
                return self
            raise ValueError("cannot add values with different units")
        return TaggedValue(self.value + other.value, self.sqrt_m3)

    def __mul__(self, other: "TaggedValue") -> "TaggedValue":
        value = self.value * other.value
        if self.sqrt_m3 and other.sqrt_m3:
            return TaggedValue(value * (-3), False)
        return TaggedValue(value, self.sqrt_m3 or other.sqrt_m3)

    def __eq__(self, other):
        if not isinstance(other, TaggedValue):
            return NotImplemented
        if self.value.is_zero() and other.value.is_zero():
            return True
        return self.value == other.value and self.sqrt_m3 == other.sqrt_m3

    def scale(self, c) -> "TaggedValue":
        return TaggedValue(self.value * c, self.sqrt_m3)

    def to_mpc(self, precision_digits: int = 30):
        with mpmath.workdps(precision_digits + 10):
            base = self.value.to_mpc(precision_digits)
            if self.sqrt_m3:
                base = base * mpmath.sqrt(mpmath.mpf(3)) * 1j
            return base

    def __repr__(self):
        return f"{self.value!r}" + (" (unit sqrt(-3))" if self.sqrt_m3 else "")


def _q(text: str) -> Fraction:
    return Fraction(text)


def _el52(c0="0", c1="0", c2="0") -> FieldElement:
    return FIELD_52.element([_q(str(c0)), _q(str(c1)), _q(str(c2))])


class KnotFixture:
    """One knot's exact data: delta, phi tables, closed forms, asymptotics.

    phi[ell] maps the delta-power k to the coefficient list [c0, c1, c2]
    meaning c0 + c1/n + c2/n^2 multiplying delta(t)^(-k).
    """

    def __init__(self, name: str, field: NumberField,
                 delta: LaurentPolynomial,
                 phi: Dict[int, Dict[int, List[FieldElement]]],
                 phi_units: Dict[int, bool]):
        self.name = name
        self.field = field
        self.delta = delta
        self.phi = phi
        self.phi_units = phi_units

    def phi_rational_function(self, ell: int, n: int) -> RationalFunction:
        """phi_ell^c(t, n) for fixed n, over the fixture field."""
        if ell not in self.phi:
            raise ParseError(f"no phi table for ell = {ell}")
        table = self.phi[ell]
        kmax = max(table)
        field = self.field
        num = LaurentPolynomial.zero(field)
        inv_n = Fraction(1, n)
        for k, coeffs in table.items():
            c = field.zero()
            scale = Fraction(1)
            for ci in coeffs:
                c = c + ci * scale
                scale *= inv_n
            num = num + self.delta ** (kmax - k) * c
        return RationalFunction(num, self.delta ** kmax)

    def phi_average(self, ell: int, n: int) -> TaggedValue:
        """Av_n(phi_ell^c(t, n)), exact."""
        value = av_exact(self.phi_rational_function(ell, n), n)
        return TaggedValue(value, self.phi_units.get(ell, False))


# ---------------------------------------------------------------------------
# 4_1
# ---------------------------------------------------------------------------

_DELTA_41 = LaurentPolynomial(QQ, {1: 1, 0: -5, -1: 1})

_PHI_41 = {
    2: {2: [QQ.element(0), QQ.element(_q("4/3"))],
        1: [QQ.element(0), QQ.element(_q("20/63"))],
        0: [QQ.element(_q("55/1512"))]},
    3: {4: [QQ.element(0), QQ.element(0), QQ.element(_q("-80/3"))],
        3: [QQ.element(0), QQ.element(0), QQ.element(_q("-1976/315"))],
        2: [QQ.element(_q("-8/189")), QQ.element(0), QQ.element(_q("916/1323"))],
        1: [QQ.element(_q("473/26460")), QQ.element(0), QQ.element(_q("2036/19845"))]},
}


class FigureEightFixture(KnotFixture):
    """4_1: everything lives in Q or Q(sqrt 21), 2-loop values carry sqrt(-3)."""

    def __init__(self):
        super().__init__("4_1", QQ, _DELTA_41, _PHI_41, {2: True, 3: False})
        s21 = FIELD_SQRT21.generator()
        self.sqrt21 = s21
        self.lam = (5 + s21) / 2
        self.lam_inv = (5 - s21) / 2
        self.psi = {
            2: TaggedValue(FIELD_SQRT21.element(_q("55/1512")), True),
            3: TaggedValue(self.sqrt21 * _q("-317/238140"), False),
        }
        t = LaurentPolynomial.variable(QQ)
        one = LaurentPolynomial.one(QQ)
        quad = LaurentPolynomial(QQ, {0: 1, 1: -5, 2: 1})          # 1 - 5t + t^2
        quad2 = LaurentPolynomial(QQ, {0: 1, 1: -23, 2: 1})        # (1-lam^2 t)(1-lam^-2 t)
        tm1 = LaurentPolynomial(QQ, {0: -1, 1: 1})                 # -1 + t
        num2 = LaurentPolynomial(QQ, {1: 119, 2: -530, 3: 1068, 4: -530, 5: 119})
        self.series = {
            2: RationalFunction(-num2, (tm1 ** 2) * (quad ** 2) * 504),
            3: RationalFunction(
                LaurentPolynomial(QQ, {1: 1, 2: 1}) * LaurentPolynomial(QQ, {
                    0: 343, 1: -15565, 2: 249432, 3: -1448727, 4: 4346901,
                    5: -6772800, 6: 4346901, 7: -1448727, 8: 249432,
                    9: -15565, 10: 343}),
                (tm1 ** 3) * (quad2 ** 2) * (quad ** 3) * 588),
        }
        self.series_units = {2: True, 3: False}
        self._series_coeff_cache: Dict[int, List[FieldElement]] = {}

    # -- closed forms in Q(sqrt 21) -------------------------------------------

    def phi_closed(self, ell: int, n: int) -> TaggedValue:
        lam_n = self.lam ** n
        lam_mn = self.lam_inv ** n
        one = FIELD_SQRT21.one()
        resultant = (one - lam_n) * (one - lam_mn)
        if ell == 2:
            num = (lam_n * 55 + 82 + lam_mn * 55) * Fraction(-n, 1512)
            value = num / resultant
            return TaggedValue(value, True)
        if ell == 3:
            sq = resultant * resultant
            part_n2 = (lam_n * _q("32/1323") + _q("32/441") + lam_mn * _q("32/1323")) \
                * Fraction(-n * n)
            sym = (lam_n * lam_n * _q("-317/238140") + lam_n * _q("-1985/166698")
                   + lam_mn * _q("1985/166698") + lam_mn * lam_mn * _q("317/238140"))
            part_n1 = self.sqrt21 * sym * n
            value = (part_n2 + part_n1) / sq
            return TaggedValue(value, False)
        raise ParseError(f"no closed form for ell = {ell}")

    # -- generating series ---------------------------------------------------------

    def series_value(self, ell: int, n: int) -> TaggedValue:
        """Recover Phi^c_ell(n) from the t^n series coefficient."""
        from .powersum import series_coefficients
        if ell not in self.series:
            raise ParseError(f"no series for ell = {ell}")
        cache = self._series_coeff_cache.setdefault(ell, [])
        if len(cache) <= n:
            cache[:] = series_coefficients(self.series[ell], n + 1)
        a_n = cache[n]
        one = FIELD_SQRT21.one()
        resultant = (one - self.lam ** n) * (one - self.lam_inv ** n)
        value = a_n / resultant ** (ell - 1)
        return TaggedValue(value, self.series_units[ell])

    # -- assembled (non-connected) invariants ------------------------------------

    def phi_full(self, ell: int, n: int) -> FieldElement:
        """Phi_ell(n): Phi_2 = Phi_2^c; Phi_3 = Phi_3^c + (Phi_2^c)^2 / 2.

        The square of a sqrt(-3)-tagged value is -3 times the rational
        square, so both are plain rational numbers.
        """
        if ell == 2:
            return self.phi_average(2, n).value
        if ell == 3:
            c3 = self.phi_average(3, n).value
            c2 = self.phi_average(2, n)
            assert c2.sqrt_m3
            sq = c2.value * c2.value * Fraction(-3, 2)
            return c3 + sq
        raise ParseError(f"ell = {ell} not tabulated")


# ---------------------------------------------------------------------------
# 5_2
# ---------------------------------------------------------------------------

_DELTA_52_COEFF = _el52(2, 4, 2)

_DELTA_52 = LaurentPolynomial(FIELD_52, {
    1: _DELTA_52_COEFF, 0: _el52(-5, -2, 3), -1: _DELTA_52_COEFF})

_PHI_52 = {
    2: {
        2: [_el52(), _el52(_q("64912/7705"), _q("12928/7705"), _q("-34716/7705"))],
        1: [_el52(_q("39/46"), _q("-56/46"), _q("-24/46")),
            _el52(_q("104510156/94440185"), _q("-60179356/94440185"),
                  _q("-14887968/94440185"))],
        0: [_el52(_q("123094133/2266564440"), _q("-446744448/2266564440"),
                  _q("259344006/2266564440"))],
    },
    3: {
        4: [_el52(), _el52(),
            _el52(_q("144171776/516235"), _q("86345584/516235"),
                  _q("-136288528/516235"))],
        3: [_el52(),
            _el52(_q("362208/7705"), _q("-57728/7705"), _q("-243704/7705")),
            _el52(_q("2021650619247678416/12919632159420875"),
                  _q("-194429261261137656/12919632159420875"),
                  _q("-1412467704798780848/12919632159420875"))],
        2: [_el52(_q("19464170555699/8731939505100"),
                  _q("-1654507907596/2182984876275"),
                  _q("661858625444/727661625425")),
            _el52(_q("43685924340213/2910646501700"),
                  _q("-13472722690929/1455323250850"),
                  _q("2008555368111/2910646501700")),
            _el52(_q("161627626755245606632/8963543285548396125"),
                  _q("-119998551075098128112/8963543285548396125"),
                  _q("127286031414479468/2987847761849465375"))],
        1: [_el52(_q("59134987864619182444/475067794134064994625"),
                  _q("-1527155471544628788041/1900271176536259978500"),
                  _q("3826051934183205772/6885040494696594125")),
            _el52(_q("1746056639554239/35675794171336900"),
                  _q("-31637787802490587/17837897085668450"),
                  _q("11693862723463677/8918948542834225")),
            _el52(_q("-19378724062777204444/475067794134064994625"),
                  _q("-474092286600322084396/475067794134064994625"),
                  _q("128349517059147927744/158355931378021664875"))],
        0: [_el52(_q("-428855832942393/8918948542834225"),
                  _q("-2998162280908073/35675794171336900"),
                  _q("1615737458359533/17837897085668450"))],
    },
}

#: Minimal polynomial over Q of the root lambda of delta_52 (degree 6).
LAMBDA_52_SEXTIC = [8, -28, 270, -109, 270, -28, 8][::-1]

_PSI_52_NUM = {
    2: ([-16601383280, 239466164328, -30998500743, 51073175277,
         -2600093877, 384393303], 1160480993280),
    3: ([3763333983996990578027312, -27832672813601695938777064,
         98732772027957178344155, 1194221340324541487037559,
         -453984084634619809746255, 29998843726647510986933],
        26122110666289424422956544000),
}


class FiveTwoFixture(KnotFixture):
    """5_2: values in the cubic field; asymptotics via the degree-6 lambda."""

    def __init__(self):
        super().__init__("5_2", FIELD_52, _DELTA_52, _PHI_52, {2: False, 3: False})
        self.lam_quadratic = (_DELTA_52_COEFF, _el52(-5, -2, 3))  # a t^2 + b t + a

    def lambda_sextic_residue(self) -> List[FieldElement]:
        """Reduce the printed degree-6 polynomial mod the quadratic of lambda
        over the cubic field; an all-zero result certifies the sextic."""
        a, b = self.lam_quadratic
        # monic quadratic: u^2 + (b/a) u + 1
        p = b / a
        one = FIELD_52.one()
        # reduce sum c_k u^k
        coeffs = [FIELD_52.element(c) for c in LAMBDA_52_SEXTIC]
        while len(coeffs) > 2:
            top = coeffs.pop()
            if top.is_zero():
                continue
            deg = len(coeffs)  # reduced monomial u^deg = -p u^{deg-1} - u^{deg-2}
            coeffs[deg - 1] = coeffs[deg - 1] - top * p
            coeffs[deg - 2] = coeffs[deg - 2] - top
        return coeffs

    def lambda_numeric(self, precision_digits: int = 60):
        """The root of delta inside the unit disk, numerically."""
        with mpmath.workdps(precision_digits + 15):
            a = self.lam_quadratic[0].to_mpc(precision_digits + 10)
            b = self.lam_quadratic[1].to_mpc(precision_digits + 10)
            disc = mpmath.sqrt(b * b - 4 * a * a)
            roots = [(-b + disc) / (2 * a), (-b - disc) / (2 * a)]
            lam = min(roots, key=abs)
            return lam

    def psi_numeric(self, ell: int, precision_digits: int = 100):
        """Leading asymptotic coefficient, numerically.

        The tabulated integer coefficients are those of a polynomial in the
        algebraic integer 2*lambda (the sextic of lambda has leading
        coefficient 8, so 2*lambda is integral); deriving the asymptotics
        exactly from the phi tables reproduces every tabulated coefficient
        under that normalization.
        """
        if ell not in _PSI_52_NUM:
            raise ParseError(f"no asymptotic value for ell = {ell}")
        coeffs, den = _PSI_52_NUM[ell]
        with mpmath.workdps(precision_digits + 15):
            mu = 2 * self.lambda_numeric(precision_digits + 10)
            acc = mpmath.mpc(0)
            for c in reversed(coeffs):
                acc = acc * mu + c
            return acc / den


_FIXTURES = {}


def fixture(name: str) -> KnotFixture:
    """The shared fixture instance for '4_1' or '5_2'."""
    key = name.replace("-", "_")
    if key not in _FIXTURES:
        if key == "4_1":
            _FIXTURES[key] = FigureEightFixture()
        elif key == "5_2":
            _FIXTURES[key] = FiveTwoFixture()
        else:
            raise ParseError(f"unknown knot fixture {name!r}")
    return _FIXTURES[key]


def export_csv_rows(values) -> List[str]:
    """Rows `n,coord_0,...[,unit]` for a list of (n, TaggedValue)."""
    out = []
    for n, tv in values:
        cells = [str(n)] + [str(c) for c in tv.value.coords]
        if tv.sqrt_m3:
            cells.append("sqrt(-3)")
        out.append(",".join(cells))
    return out
