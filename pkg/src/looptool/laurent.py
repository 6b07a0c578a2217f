"""Laurent polynomials, rational functions and matrices over a number field.

Laurent polynomials are sparse maps exponent -> coefficient with no stored
zeros.  Rational functions are kept reduced (unit gcd) and carry a canonical
unit normalization: the denominator has lowest exponent 0 and constant term
1, which makes serialized forms and equality tests bit-exact.

Determinants and inverses of matrices use fraction-free Bareiss elimination
over the Laurent ring, so intermediate entries stay polynomial and the only
divisions performed are exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Sequence

from .errors import (IncompleteFactorization, ParseError, SingularMatrix,
                     ZeroBase)
from .numberfield import QQ, FieldElement, NumberField, parse_rational


def _as_element(field: NumberField, value) -> FieldElement:
    if isinstance(value, FieldElement):
        if value.field == field:
            return value
        if value.field.degree == 1:
            return field.element(value.coords[0])
        if field.degree == 1:
            raise TypeError("cannot demote a non-rational element to QQ")
        raise TypeError("coefficient from a different field")
    return field.element(parse_rational(value))


class LaurentPolynomial:
    """Sparse Laurent polynomial sum c_k t^k over a fixed number field."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: Dict[int, FieldElement] | None = None):
        self.field = field
        clean: Dict[int, FieldElement] = {}
        if coeffs:
            for k, v in coeffs.items():
                v = _as_element(field, v)
                if not v.is_zero():
                    clean[int(k)] = v
        self.coeffs = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, field: NumberField) -> "LaurentPolynomial":
        return cls(field, {})

    @classmethod
    def one(cls, field: NumberField) -> "LaurentPolynomial":
        return cls(field, {0: field.one()})

    @classmethod
    def monomial(cls, field: NumberField, exponent: int, coeff=1) -> "LaurentPolynomial":
        return cls(field, {exponent: coeff})

    @classmethod
    def variable(cls, field: NumberField) -> "LaurentPolynomial":
        return cls.monomial(field, 1)

    @classmethod
    def from_coeff_list(cls, field: NumberField, coeffs: Sequence, shift: int = 0):
        return cls(field, {i + shift: c for i, c in enumerate(coeffs)})

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def min_exp(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no exponents")
        return min(self.coeffs)

    def max_exp(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no exponents")
        return max(self.coeffs)

    def coefficient(self, k: int) -> FieldElement:
        return self.coeffs.get(k, self.field.zero())

    def as_poly_coeffs(self):
        """Return (dense coefficient list, shift) with p = t^shift * sum c_i t^i."""
        if self.is_zero():
            return [], 0
        lo, hi = self.min_exp(), self.max_exp()
        out = [self.field.zero()] * (hi - lo + 1)
        for k, v in self.coeffs.items():
            out[k - lo] = v
        return out, lo

    def degree_span(self) -> int:
        return 0 if self.is_zero() else self.max_exp() - self.min_exp()

    # -- ring operations ------------------------------------------------------

    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            if other.field == self.field:
                return other
            if other.field.degree == 1:
                return LaurentPolynomial(self.field, other.coeffs)
            if self.field.degree == 1:
                raise _Promote(other.field)
            raise TypeError("Laurent polynomials over incompatible fields")
        if isinstance(other, (int, Fraction, FieldElement)):
            return LaurentPolynomial(self.field, {0: other})
        return NotImplemented

    def _binop(self, other, op):
        try:
            o = self._coerce(other)
        except _Promote as p:
            lifted = LaurentPolynomial(p.field, self.coeffs)
            return op(lifted, lifted._coerce(other))
        if o is NotImplemented:
            return NotImplemented
        return op(self, o)

    def __add__(self, other):
        def add(a, b):
            out = dict(a.coeffs)
            for k, v in b.coeffs.items():
                out[k] = out.get(k, a.field.zero()) + v
            return LaurentPolynomial(a.field, out)
        return self._binop(other, add)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.field, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a + (-b))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        def mul(a, b):
            out: Dict[int, FieldElement] = {}
            for i, c in a.coeffs.items():
                for j, d in b.coeffs.items():
                    k = i + j
                    prod = c * d
                    if k in out:
                        out[k] = out[k] + prod
                    else:
                        out[k] = prod
            return LaurentPolynomial(a.field, out)
        return self._binop(other, mul)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers only via RationalFunction")
        result = LaurentPolynomial.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPolynomial":
        return LaurentPolynomial(self.field, {e + k: v for e, v in self.coeffs.items()})

    def scale(self, c) -> "LaurentPolynomial":
        return self * c

    def invert_variable(self) -> "LaurentPolynomial":
        """Substitute t -> 1/t."""
        return LaurentPolynomial(self.field, {-k: v for k, v in self.coeffs.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            other = LaurentPolynomial(self.field, {0: other})
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        if other.field != self.field:
            try:
                diff = self - other
            except TypeError:
                return False
            return diff.is_zero()
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, frozenset(self.coeffs.items())))

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            c = self.coeffs[k]
            if k == 0:
                parts.append(f"({c!r})")
            elif k == 1:
                parts.append(f"({c!r})*t")
            else:
                parts.append(f"({c!r})*t^{k}")
        return " + ".join(parts)

    # -- evaluation -----------------------------------------------------------

    def __call__(self, a):
        return self.eval(a)

    def eval(self, a) -> FieldElement:
        """Exact value sum c_k a^k; a may live in an extension field."""
        if self.is_zero():
            if isinstance(a, FieldElement):
                return a.field.zero()
            return self.field.zero()
        if not isinstance(a, FieldElement):
            a = self.field.element(parse_rational(a))
        if a.is_zero() and self.min_exp() < 0:
            raise ZeroBase("evaluation at 0 with negative exponents present")
        target = a.field if a.field.degree > 1 else self.field
        acc = target.zero()
        powers: Dict[int, FieldElement] = {}

        def power(k: int) -> FieldElement:
            if k not in powers:
                powers[k] = a ** k
            return powers[k]

        for k, c in self.coeffs.items():
            term = power(k) * c
            acc = acc + term
        return acc

    def eval_ball(self, ball, precision_digits=30):
        """Numeric evaluation on a ComplexBall (or mpmath number)."""
        import mpmath
        if hasattr(ball, "to_mpc"):
            z = ball.to_mpc()
        else:
            z = mpmath.mpc(ball)
        acc = mpmath.mpc(0)
        for k, c in self.coeffs.items():
            acc += c.to_mpc(precision_digits) * z ** k
        return acc

    # -- division --------------------------------------------------------------

    def divmod_poly(self, other: "LaurentPolynomial"):
        """Division in the polynomialized forms; returns (quotient, remainder)
        with self = q*other + r as Laurent polynomials (shifts handled)."""
        o = self._coerce(other)
        if o is NotImplemented or o.is_zero():
            raise ZeroDivisionError("Laurent division by zero")
        if self.is_zero():
            return self, self
        a, sa = self.as_poly_coeffs()
        b, sb = o.as_poly_coeffs()
        quo = [self.field.zero()] * max(0, len(a) - len(b) + 1)
        rem = list(a)
        db = len(b) - 1
        lead_inv = b[-1].inverse()
        while len(rem) >= len(b):
            if rem[-1].is_zero():
                rem.pop()
                continue
            c = rem[-1] * lead_inv
            k = len(rem) - len(b)
            quo[k] = c
            for i in range(len(b)):
                rem[i + k] = rem[i + k] - c * b[i]
            rem.pop()
        while rem and rem[-1].is_zero():
            rem.pop()
        q_lp = LaurentPolynomial.from_coeff_list(self.field, quo, sa - sb)
        r_lp = LaurentPolynomial.from_coeff_list(self.field, rem, sa)
        return q_lp, r_lp

    def divide_exact(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        q, r = self.divmod_poly(other)
        if not r.is_zero():
            raise ValueError("inexact Laurent division")
        return q

    def divides(self, other: "LaurentPolynomial") -> bool:
        if self.is_zero():
            return other.is_zero()
        return other.divmod_poly(self)[1].is_zero()

    def gcd(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        """Monic gcd of the polynomialized forms (unit-normalized, exponent 0 low)."""
        a, b = self, self._coerce(other)
        if a.is_zero():
            return b.monic() if not b.is_zero() else b
        if b.is_zero():
            return a.monic()
        a = a.shift(-a.min_exp())
        b = b.shift(-b.min_exp())
        while not b.is_zero():
            a, b = b, a.divmod_poly(b)[1]
            if not b.is_zero():
                b = b.shift(-b.min_exp())
        return a.monic()

    def monic(self) -> "LaurentPolynomial":
        """Normalize: lowest exponent 0, leading (highest) coefficient 1."""
        if self.is_zero():
            return self
        p = self.shift(-self.min_exp())
        lead = p.coeffs[p.max_exp()]
        return p * lead.inverse()

    def derivative(self) -> "LaurentPolynomial":
        return LaurentPolynomial(self.field,
                                 {k - 1: v * k for k, v in self.coeffs.items() if k != 0})

    def substitute_power(self, m: int) -> "LaurentPolynomial":
        """t -> t^m."""
        return LaurentPolynomial(self.field, {k * m: v for k, v in self.coeffs.items()})

    # -- serialization ------------------------------------------------------------

    def to_json(self) -> dict:
        return {str(k): v.to_json() for k, v in sorted(self.coeffs.items())}

    @classmethod
    def from_json(cls, obj, field: NumberField) -> "LaurentPolynomial":
        if not isinstance(obj, dict):
            raise ParseError("Laurent polynomial must be an object {exponent: element}")
        out = {}
        for k, v in obj.items():
            try:
                exp = int(k)
            except ValueError as exc:
                raise ParseError(f"bad exponent key {k!r}") from exc
            out[exp] = FieldElement.from_json(v, field)
        return cls(field, out)


class _Promote(Exception):
    def __init__(self, field):
        self.field = field


def proportional_up_to_unit(p: LaurentPolynomial, q: LaurentPolynomial) -> bool:
    """True when p = c * t^k * q for some nonzero field scalar c and k in Z."""
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    pk = sorted(p.coeffs)
    qk = sorted(q.coeffs)
    if len(pk) != len(qk):
        return False
    shift = pk[0] - qk[0]
    if any(a - b != shift for a, b in zip(pk, qk)):
        return False
    ratio = p.coeffs[pk[0]] / q.coeffs[qk[0]]
    return all(p.coeffs[k + shift] == ratio * q.coeffs[k] for k in qk)


class RationalFunction:
    """Reduced quotient of Laurent polynomials with canonical normalization."""

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPolynomial, den: LaurentPolynomial, reduce: bool = True):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.field != den.field:
            den = num._coerce(den)
        if num.is_zero():
            den = LaurentPolynomial.one(den.field)
        elif reduce:
            g = num.gcd(den)
            if g.degree_span() > 0:
                num = num.divide_exact(g)
                den = den.divide_exact(g)
        # canonical unit: denominator lowest exponent 0, constant term 1
        k = den.min_exp()
        num = num.shift(-k)
        den = den.shift(-k)
        c = den.coefficient(0)
        cinv = c.inverse()
        self.num = num * cinv
        self.den = den * cinv

    @classmethod
    def from_poly(cls, p: LaurentPolynomial) -> "RationalFunction":
        return cls(p, LaurentPolynomial.one(p.field), reduce=False)

    @property
    def field(self):
        return self.num.field if not self.num.is_zero() else self.den.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den == LaurentPolynomial.one(self.den.field)

    def as_polynomial(self) -> LaurentPolynomial:
        if not self.den.divides(self.num):
            raise ValueError("not a Laurent polynomial")
        return self.num.divide_exact(self.den)

    # -- field operations ----------------------------------------------------------

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, LaurentPolynomial):
            return RationalFunction.from_poly(other)
        if isinstance(other, (int, Fraction, FieldElement)):
            f = self.den.field
            return RationalFunction.from_poly(LaurentPolynomial(f, {0: other}))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def reciprocal(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("reciprocal of zero")
        return RationalFunction(self.den, self.num, reduce=False)

    def __pow__(self, n: int):
        if n == 0:
            return RationalFunction.from_poly(LaurentPolynomial.one(self.field))
        base = self if n > 0 else self.reciprocal()
        return RationalFunction(base.num ** abs(n), base.den ** abs(n), reduce=False)

    def invert_variable(self) -> "RationalFunction":
        return RationalFunction(self.num.invert_variable(), self.den.invert_variable())

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.is_polynomial():
            return repr(self.num)
        return f"({self.num!r}) / ({self.den!r})"

    def eval(self, a) -> FieldElement:
        d = self.den.eval(a)
        if d.is_zero():
            raise ZeroDivisionError(f"denominator vanishes at {a!r}")
        return self.num.eval(a) / d

    __call__ = eval

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, obj, field: NumberField) -> "RationalFunction":
        if not isinstance(obj, dict) or "num" not in obj or "den" not in obj:
            raise ParseError("rational function needs 'num' and 'den'")
        return cls(LaurentPolynomial.from_json(obj["num"], field),
                   LaurentPolynomial.from_json(obj["den"], field))


def partial_fractions(f: RationalFunction, roots):
    """Decompose f = poly_part + sum c_{j,m} / (1 - lam_j t)^m.

    `roots` lists (lam_j, multiplicity) pairs that must account exactly for
    the non-monomial part of the denominator.  Returns (poly_part, terms)
    where terms maps (j, m) to the coefficient c_{j,m}.
    """
    field = f.field
    for lam, _ in roots:
        if isinstance(lam, FieldElement) and lam.field.degree > field.degree:
            field = lam.field
    one = LaurentPolynomial.one(field)
    # check the supplied roots multiply back to the denominator (up to unit)
    prod = one
    for lam, mult in roots:
        factor = LaurentPolynomial(field, {0: 1, 1: -(_as_element(field, lam))})
        prod = prod * factor ** mult
    den = LaurentPolynomial(field, f.den.coeffs)
    if not proportional_up_to_unit(prod, den):
        raise IncompleteFactorization("roots do not multiply back to the denominator")

    remainder = RationalFunction(LaurentPolynomial(field, f.num.coeffs), den)
    terms = {}
    for j, (lam, mult) in enumerate(roots):
        lam = _as_element(field, lam)
        inv_lam = lam.inverse()
        factor = RationalFunction.from_poly(
            LaurentPolynomial(field, {0: 1, 1: -lam}))
        for m in range(mult, 0, -1):
            cleared = remainder * factor ** m
            c = cleared.eval(inv_lam)
            terms[(j, m)] = c
            if not c.is_zero():
                remainder = remainder - RationalFunction(
                    LaurentPolynomial(field, {0: c}),
                    LaurentPolynomial(field, {0: 1, 1: -lam}) ** m)
    if not remainder.is_polynomial():
        raise IncompleteFactorization("leftover non-polynomial part")
    return remainder.as_polynomial(), terms


def recombine_partial_fractions(poly_part: LaurentPolynomial, terms, roots) -> RationalFunction:
    field = poly_part.field
    total = RationalFunction.from_poly(poly_part)
    for (j, m), c in terms.items():
        lam = _as_element(field, roots[j][0])
        total = total + RationalFunction(
            LaurentPolynomial(field, {0: c}),
            LaurentPolynomial(field, {0: 1, 1: -lam}) ** m)
    return total


class LaurentMatrix:
    """Dense rectangular matrix with LaurentPolynomial entries."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: NumberField, entries: List[List[LaurentPolynomial]]):
        self.field = field
        self.entries = entries
        self.rows = len(entries)
        self.cols = len(entries[0]) if entries else 0
        for row in entries:
            if len(row) != self.cols:
                raise ParseError("ragged matrix")

    @classmethod
    def from_rows(cls, field: NumberField, rows) -> "LaurentMatrix":
        out = []
        for row in rows:
            out.append([e if isinstance(e, LaurentPolynomial)
                        else LaurentPolynomial(field, {0: e}) for e in row])
        return cls(field, out)

    @classmethod
    def identity(cls, field: NumberField, n: int) -> "LaurentMatrix":
        one = LaurentPolynomial.one(field)
        zero = LaurentPolynomial.zero(field)
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, field: NumberField, rows: int, cols: int) -> "LaurentMatrix":
        z = LaurentPolynomial.zero(field)
        return cls(field, [[z for _ in range(cols)] for _ in range(rows)])

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def __eq__(self, other):
        return (isinstance(other, LaurentMatrix) and self.rows == other.rows
                and self.cols == other.cols
                and all(self.entries[i][j] == other.entries[i][j]
                        for i in range(self.rows) for j in range(self.cols)))

    def __add__(self, other):
        assert (self.rows, self.cols) == (other.rows, other.cols)
        return LaurentMatrix(self.field,
                             [[self.entries[i][j] + other.entries[i][j]
                               for j in range(self.cols)] for i in range(self.rows)])

    def __sub__(self, other):
        assert (self.rows, self.cols) == (other.rows, other.cols)
        return LaurentMatrix(self.field,
                             [[self.entries[i][j] - other.entries[i][j]
                               for j in range(self.cols)] for i in range(self.rows)])

    def __neg__(self):
        return LaurentMatrix(self.field,
                             [[-self.entries[i][j] for j in range(self.cols)]
                              for i in range(self.rows)])

    def __mul__(self, other):
        if isinstance(other, LaurentMatrix):
            assert self.cols == other.rows
            out = []
            for i in range(self.rows):
                row = []
                for j in range(other.cols):
                    acc = LaurentPolynomial.zero(self.field)
                    for k in range(self.cols):
                        acc = acc + self.entries[i][k] * other.entries[k][j]
                    row.append(acc)
                out.append(row)
            return LaurentMatrix(self.field, out)
        return LaurentMatrix(self.field,
                             [[e * other for e in row] for row in self.entries])

    __rmul__ = __mul__

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix(self.field,
                             [[self.entries[i][j] for i in range(self.rows)]
                              for j in range(self.cols)])

    def invert_variable(self) -> "LaurentMatrix":
        return LaurentMatrix(self.field,
                             [[e.invert_variable() for e in row] for row in self.entries])

    def exponents(self):
        out = set()
        for row in self.entries:
            for e in row:
                out.update(e.coeffs)
        return sorted(out)

    def coefficient_matrix(self, k: int):
        """k-th coefficient as a plain field matrix (list of lists)."""
        return [[e.coefficient(k) for e in row] for row in self.entries]

    def eval(self, a):
        """Entrywise exact evaluation at a field point; plain field matrix."""
        return [[e.eval(a) for e in row] for row in self.entries]

    def det(self) -> LaurentPolynomial:
        """Fraction-free Bareiss determinant."""
        n = self.rows
        if n != self.cols:
            raise ValueError("determinant of non-square matrix")
        if n == 0:
            return LaurentPolynomial.one(self.field)
        M = [[self.entries[i][j] for j in range(n)] for i in range(n)]
        sign = 1
        prev = LaurentPolynomial.one(self.field)
        for k in range(n - 1):
            if M[k][k].is_zero():
                for i in range(k + 1, n):
                    if not M[i][k].is_zero():
                        M[k], M[i] = M[i], M[k]
                        sign = -sign
                        break
                else:
                    return LaurentPolynomial.zero(self.field)
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                    M[i][j] = num.divide_exact(prev)
                M[i][k] = LaurentPolynomial.zero(self.field)
            prev = M[k][k]
        d = M[n - 1][n - 1]
        return d if sign == 1 else -d

    def inverse(self):
        """Exact inverse as a list of lists of RationalFunction.

        Fraction-free Gauss-Jordan (Bareiss): the left block stays
        polynomial throughout and every division is exact; the final
        quotient by the pivot column produces the rational entries.
        """
        n = self.rows
        if n != self.cols:
            raise ValueError("inverse of non-square matrix")
        zero = LaurentPolynomial.zero(self.field)
        one = LaurentPolynomial.one(self.field)
        aug = [[self.entries[i][j] for j in range(n)]
               + [one if i == j else zero for j in range(n)] for i in range(n)]
        prev = one
        for k in range(n):
            if aug[k][k].is_zero():
                for i in range(k + 1, n):
                    if not aug[i][k].is_zero():
                        aug[k], aug[i] = aug[i], aug[k]
                        break
                else:
                    raise SingularMatrix("matrix has zero determinant")
            pivot = aug[k][k]
            for i in range(n):
                if i == k:
                    continue
                factor = aug[i][k]
                for j in range(2 * n):
                    if j == k:
                        continue
                    num = aug[i][j] * pivot - factor * aug[k][j]
                    aug[i][j] = num.divide_exact(prev)
                aug[i][k] = zero
            prev = pivot
        out = []
        for i in range(n):
            d = aug[i][i]
            if d.is_zero():
                raise SingularMatrix("matrix has zero determinant")
            out.append([RationalFunction(aug[i][n + j], d) for j in range(n)])
        return out

    def to_json(self):
        return [[e.to_json() for e in row] for row in self.entries]

    @classmethod
    def from_json(cls, obj, field: NumberField) -> "LaurentMatrix":
        return cls(field, [[LaurentPolynomial.from_json(e, field) for e in row]
                           for row in obj])


def rational_matrix_mul(A, B):
    """Product of matrices with RationalFunction (or Laurent) entries."""
    rows, inner, cols = len(A), len(A[0]), len(B[0])
    assert inner == len(B)
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = None
            for k in range(inner):
                term = A[i][k] * B[k][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out
