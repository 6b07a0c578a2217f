"""Arbitrary-precision rationals and number-field arithmetic.

A number field is Q[xi]/(m(xi)) for a monic squarefree m with rational
coefficients; its elements are coordinate vectors over Q in the power basis
1, xi, ..., xi^(d-1).  All values are immutable; arithmetic returns new
objects, so elements are safe to share across threads.

Complex embeddings are certified: every approximate root of m carries an
isolation radius r such that the disk of radius r around the approximation
contains exactly one root of m.  The radius bound used is the classical

    min_i |x - root_i|  <=  deg(m) * |m(x) / m'(x)|

which is evaluated in exact rational arithmetic on dyadic approximations
(mpmath floats convert to Fraction without rounding), so the enclosures are
rigorous, not heuristic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .errors import ParseError, PrecisionUnreachable, ZeroInverse

Rational = Fraction


def parse_rational(text) -> Fraction:
    """Parse a decimal-free "p/q" string (or int) into a Fraction."""
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if isinstance(text, str):
        s = text.strip()
        if "." in s or "e" in s or "E" in s:
            raise ParseError(f"rationals must be decimal-free p/q strings, got {text!r}")
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational {text!r}") from exc
    raise ParseError(f"not a rational: {text!r}")


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


# ---------------------------------------------------------------------------
# Polynomials over Q, as coefficient lists [c0, c1, ...] with no trailing zeros.
# ---------------------------------------------------------------------------

def _poly_trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_add(p, q):
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return _poly_trim(out)


def _poly_scale(p, c):
    if c == 0:
        return []
    return [a * c for a in p]


def _poly_mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _poly_trim(out)


def _poly_divmod(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quo = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    dq, lead = len(q) - 1, q[-1]
    while len(rem) - 1 >= dq and rem:
        c = rem[-1] / lead
        k = len(rem) - 1 - dq
        quo[k] = c
        for i, b in enumerate(q):
            rem[i + k] -= c * b
        _poly_trim(rem)
    return _poly_trim(quo), rem


def _poly_gcd(p, q):
    a, b = list(p), list(q)
    while b:
        a, b = b, _poly_divmod(a, b)[1]
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _poly_deriv(p):
    return _poly_trim([i * c for i, c in enumerate(p)][1:])


def _poly_extgcd(a, m):
    """Return (g, s) with s*a = g (mod m), g monic."""
    r0, r1 = list(m), list(a)
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_add(s0, _poly_scale(_poly_mul(q, s1), -1))
    if not r0:
        return [], []
    lead = r0[-1]
    return [c / lead for c in r0], [c / lead for c in s0]


# ---------------------------------------------------------------------------
# Exact complex rational arithmetic (re, im) pairs, used by the certifier.
# ---------------------------------------------------------------------------

def _c_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _c_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _c_abs2(a) -> Fraction:
    return a[0] * a[0] + a[1] * a[1]


def _c_poly_eval(p: Sequence[Fraction], z):
    acc = (Fraction(0), Fraction(0))
    for c in reversed(p):
        acc = _c_mul(acc, z)
        acc = (acc[0] + c, acc[1])
    return acc


def _sqrt_shift(num: int, den: int) -> int:
    # keep ~128 significant bits in the integer square root so the bounds
    # have relative (not absolute) error ~2^-128
    deficit = 256 - (num.bit_length() - den.bit_length())
    return max(64, (deficit + 1) // 2 + 1)


def sqrt_upper(q: Fraction) -> Fraction:
    """Rational u with u*u >= q >= 0, tight to ~128 bits."""
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return Fraction(0)
    num, den = q.numerator, q.denominator
    shift = _sqrt_shift(num, den)
    n = (num << (2 * shift)) // den + 1
    r = math.isqrt(n) + 1
    return Fraction(r, 1 << shift)


def sqrt_lower(q: Fraction) -> Fraction:
    """Rational u >= 0 with u*u <= q, tight to ~128 bits."""
    if q <= 0:
        return Fraction(0)
    num, den = q.numerator, q.denominator
    shift = _sqrt_shift(num, den)
    n = (num << (2 * shift)) // den
    r = math.isqrt(n)
    return Fraction(r, 1 << shift)


def _mpf_to_fraction(x) -> Fraction:
    """Exact conversion; mpmath floats are dyadic rationals."""
    if x == 0:
        return Fraction(0)
    sign, man, exp, _ = x._mpf_
    val = Fraction(man, 1)
    val = val * (Fraction(2) ** exp)
    return -val if sign else val


class ComplexBall:
    """Closed disk with exact rational center and radius.

    Addition and multiplication are outward-rounded in exact arithmetic, so a
    ball computed from enclosures of inputs encloses the true result.
    """

    __slots__ = ("re", "im", "radius")

    def __init__(self, re, im, radius=Fraction(0)):
        self.re = Fraction(re)
        self.im = Fraction(im)
        self.radius = Fraction(radius)
        if self.radius < 0:
            raise ValueError("negative radius")

    def __repr__(self):
        return f"ComplexBall({self.re}, {self.im}, r={self.radius})"

    def __add__(self, other):
        other = _as_ball(other)
        return ComplexBall(self.re + other.re, self.im + other.im,
                           self.radius + other.radius)

    def __mul__(self, other):
        other = _as_ball(other)
        c = _c_mul((self.re, self.im), (other.re, other.im))
        r = (sqrt_upper(_c_abs2((self.re, self.im))) * other.radius
             + sqrt_upper(_c_abs2((other.re, other.im))) * self.radius
             + self.radius * other.radius)
        return ComplexBall(c[0], c[1], r)

    __radd__ = __add__
    __rmul__ = __mul__

    def scaled(self, q: Fraction) -> "ComplexBall":
        q = Fraction(q)
        return ComplexBall(self.re * q, self.im * q, self.radius * abs(q))

    def abs_upper(self) -> Fraction:
        return sqrt_upper(_c_abs2((self.re, self.im))) + self.radius

    def abs_lower(self) -> Fraction:
        lo = sqrt_lower(_c_abs2((self.re, self.im))) - self.radius
        return lo if lo > 0 else Fraction(0)

    def contains_ball(self, other: "ComplexBall") -> bool:
        d2 = _c_abs2((self.re - other.re, self.im - other.im))
        gap = self.radius - other.radius
        return gap >= 0 and d2 <= gap * gap

    def to_mpc(self):
        return mpmath.mpc(mpmath.mpf(self.re.numerator) / self.re.denominator,
                          mpmath.mpf(self.im.numerator) / self.im.denominator)


def _as_ball(x) -> ComplexBall:
    if isinstance(x, ComplexBall):
        return x
    if isinstance(x, (int, Fraction)):
        return ComplexBall(Fraction(x), Fraction(0))
    raise TypeError(f"cannot interpret {x!r} as a ball")


# ---------------------------------------------------------------------------
# Number fields
# ---------------------------------------------------------------------------

_MAX_CERTIFY_ATTEMPTS = 8


class NumberField:
    """Q[xi]/(m(xi)) with a preferred complex embedding.

    `root_index` indexes the roots of m sorted by (real part, imaginary
    part) of their certified approximations and selects the embedding used
    by numeric routines.
    """

    def __init__(self, minpoly: Iterable, root_index: int = 0):
        coeffs = [parse_rational(c) for c in minpoly]
        _poly_trim(coeffs)
        if len(coeffs) < 2:
            raise ParseError("minpoly must have degree >= 1")
        if coeffs[-1] != 1:
            raise ParseError("minpoly must be monic")
        g = _poly_gcd(coeffs, _poly_deriv(coeffs))
        if len(g) > 1:
            raise ParseError("minpoly must be squarefree")
        self.minpoly = tuple(coeffs)
        self.degree = len(coeffs) - 1
        if not 0 <= root_index < self.degree:
            raise ParseError(f"root_index {root_index} out of range for degree {self.degree}")
        self.root_index = root_index
        self._roots_cache: dict = {}
        self._reduction_rows = self._build_reduction()

    def _build_reduction(self):
        # coordinate rows of xi^(d+k) for k = 0..d-2, so products reduce by
        # table lookup: xi^(d+k+1) = xi * xi^(d+k) with the overflow folded
        # back through the xi^d row.
        d = self.degree
        rows = []
        cur = [-c for c in self.minpoly[:-1]]
        rows.append(list(cur))
        for _ in range(max(0, d - 2)):
            shifted = [Fraction(0)] + cur[:-1]
            top = cur[-1]
            nxt = [shifted[i] + top * rows[0][i] for i in range(d)]
            rows.append(nxt)
            cur = nxt
        return rows

    # -- identity ------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, NumberField)
                and self.minpoly == other.minpoly
                and self.root_index == other.root_index)

    def __hash__(self):
        return hash((self.minpoly, self.root_index))

    def __repr__(self):
        return f"NumberField({[str(c) for c in self.minpoly]}, root_index={self.root_index})"

    # -- element constructors --------------------------------------------------

    def element(self, coords) -> "FieldElement":
        if isinstance(coords, (int, Fraction, str)):
            coords = [parse_rational(coords)] + [Fraction(0)] * (self.degree - 1)
        coords = [parse_rational(c) for c in coords]
        if len(coords) > self.degree:
            raise ParseError(f"expected at most {self.degree} coordinates")
        coords += [Fraction(0)] * (self.degree - len(coords))
        return FieldElement(self, tuple(coords))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def generator(self) -> "FieldElement":
        if self.degree == 1:
            return self.element(-self.minpoly[0])
        return self.element([0, 1])

    # -- certified roots -------------------------------------------------------

    def certified_roots(self, precision_digits: int) -> list:
        """All roots of minpoly as pairwise-disjoint certified balls."""
        adequate = [p for p in self._roots_cache if p >= precision_digits]
        if adequate:
            return self._roots_cache[min(adequate)]
        target = Fraction(1, 10 ** precision_digits)
        dps = max(30, 2 * precision_digits + 20)
        d = self.degree
        p = list(self.minpoly)
        dp = _poly_deriv(p)
        for _ in range(_MAX_CERTIFY_ATTEMPTS):
            with mpmath.workdps(dps):
                coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(p)]
                try:
                    approx = mpmath.polyroots(coeffs, maxsteps=200, extraprec=dps)
                except mpmath.libmp.NoConvergence:
                    dps *= 2
                    continue
                centers = [(_mpf_to_fraction(r.real), _mpf_to_fraction(r.imag))
                           for r in approx]
            balls = []
            ok = True
            for z in centers:
                num = _c_poly_eval(p, z)
                dnm = _c_poly_eval(dp, z)
                lo = sqrt_lower(_c_abs2(dnm))
                if lo == 0:
                    ok = False
                    break
                radius = d * sqrt_upper(_c_abs2(num)) / lo
                if radius > target:
                    ok = False
                    break
                balls.append(ComplexBall(z[0], z[1], radius))
            if ok:
                for i in range(d):
                    for j in range(i + 1, d):
                        sep2 = _c_abs2((balls[i].re - balls[j].re,
                                        balls[i].im - balls[j].im))
                        rr = balls[i].radius + balls[j].radius
                        if sep2 <= rr * rr:
                            ok = False
            if ok:
                balls.sort(key=lambda b: (b.re, b.im))
                self._roots_cache[precision_digits] = balls
                return balls
            dps *= 2
        raise PrecisionUnreachable(
            f"could not isolate roots of {list(self.minpoly)} to {precision_digits} digits")

    def root_ball(self, root_index=None, precision_digits: int = 30) -> ComplexBall:
        idx = self.root_index if root_index is None else root_index
        roots = self.certified_roots(precision_digits)
        if not 0 <= idx < len(roots):
            raise ParseError(f"root index {idx} out of range")
        return roots[idx]

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        return {"minpoly": [format_rational(c) for c in self.minpoly],
                "root_index": self.root_index}

    @classmethod
    def from_json(cls, obj) -> "NumberField":
        if not isinstance(obj, dict) or "minpoly" not in obj:
            raise ParseError("field description needs a 'minpoly' list")
        return cls(obj["minpoly"], int(obj.get("root_index", 0)))


class FieldElement:
    """Immutable element of a NumberField as a rational coordinate vector."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: tuple):
        self.field = field
        self.coords = coords

    # -- coercion --------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field == self.field:
                return other
            if other.field.degree == 1:
                return self.field.element(other.coords[0])
            if self.field.degree == 1:
                return NotImplemented  # handled by reflected op
            raise TypeError(f"elements of incompatible fields: "
                            f"{self.field!r} vs {other.field!r}")
        if isinstance(other, (int, Fraction)):
            return self.field.element(other)
        return NotImplemented

    # -- ring operations ---------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return self._promote_op(other, "add")
        return FieldElement(self.field,
                            tuple(a + b for a, b in zip(self.coords, o.coords)))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return self._promote_op(other, "sub")
        return FieldElement(self.field,
                            tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return self._promote_op(other, "mul")
        d = self.field.degree
        if d == 1:
            return FieldElement(self.field, (self.coords[0] * o.coords[0],))
        conv = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o.coords):
                    if b:
                        conv[i + j] += a * b
        out = conv[:d]
        rows = self.field._reduction_rows
        for k in range(d, 2 * d - 1):
            c = conv[k]
            if c:
                row = rows[k - d]
                for i in range(d):
                    out[i] += c * row[i]
        return FieldElement(self.field, tuple(out))

    def _promote_op(self, other, op):
        # self lives in Q, other in a bigger field
        if isinstance(other, FieldElement) and self.field.degree == 1:
            lifted = other.field.element(self.coords[0])
            if op == "add":
                return lifted + other
            if op == "sub":
                return lifted - other
            if op == "mul":
                return lifted * other
            if op == "div":
                return lifted / other
        return NotImplemented

    __radd__ = __add__
    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroInverse("inverse of zero field element")
        if self.field.degree == 1:
            return FieldElement(self.field, (1 / self.coords[0],))
        g, s = _poly_extgcd(_poly_trim(list(self.coords)), list(self.field.minpoly))
        if len(g) != 1:
            raise ZeroInverse("element not invertible; minpoly not squarefree?")
        return self.field.element(s)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return self._promote_op(other, "div")
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise TypeError("integer exponents only")
        base = self
        if exponent < 0:
            base = self.inverse()
            exponent = -exponent
        result = self.field.one()
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # -- predicates --------------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        if isinstance(other, FieldElement):
            try:
                o = self._coerce(other)
            except TypeError:
                return False
            if o is NotImplemented:
                return other.__eq__(self)
            return self.coords == o.coords
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash((self.field, self.coords))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if self.is_rational():
            return format_rational(self.coords[0])
        terms = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            if i == 0:
                terms.append(format_rational(c))
            else:
                xi = "xi" if i == 1 else f"xi^{i}"
                terms.append(f"{format_rational(c)}*{xi}")
        return " + ".join(terms) if terms else "0"

    # -- embeddings ---------------------------------------------------------------

    def embed(self, root_index=None, precision_digits: int = 30) -> ComplexBall:
        """Certified complex ball containing the image of this element."""
        if precision_digits < 1:
            raise ValueError("precision_digits must be >= 1")
        target = Fraction(1, 10 ** precision_digits)
        if self.is_rational():
            return ComplexBall(self.coords[0], Fraction(0))
        extra = 10
        for _ in range(_MAX_CERTIFY_ATTEMPTS):
            root = self.field.root_ball(root_index, precision_digits + extra)
            acc = ComplexBall(Fraction(0), Fraction(0))
            for c in reversed(self.coords):
                acc = acc * root + ComplexBall(c, Fraction(0))
            if acc.radius <= target:
                return acc
            extra *= 2
        raise PrecisionUnreachable(
            f"embedding of {self!r} did not reach {precision_digits} digits")

    def to_mpc(self, precision_digits: int = 30):
        """Approximate complex value (ball center) at the field's embedding."""
        return self.embed(None, precision_digits).to_mpc()

    # -- serialization ---------------------------------------------------------------

    def to_json(self) -> dict:
        return {"minpoly": [format_rational(c) for c in self.field.minpoly],
                "coords": [format_rational(c) for c in self.coords],
                "root_index": self.field.root_index}

    @classmethod
    def from_json(cls, obj, field: NumberField | None = None) -> "FieldElement":
        if isinstance(obj, (str, int)):
            return (field or QQ).element(parse_rational(obj))
        if not isinstance(obj, dict):
            raise ParseError(f"cannot parse field element from {obj!r}")
        if "minpoly" in obj:
            fld = NumberField(obj["minpoly"], int(obj.get("root_index", 0)))
            if field is not None and fld != field and fld.degree > 1:
                raise ParseError("element minpoly disagrees with file-level field")
        elif field is not None:
            fld = field
        else:
            raise ParseError("element needs a minpoly or an ambient field")
        if "coords" not in obj:
            raise ParseError("element needs 'coords'")
        return fld.element(obj["coords"])


#: The rationals as a degree-1 field (minpoly xi, i.e. xi = 0).
QQ = NumberField([0, 1])


def common_field(*elements: FieldElement) -> NumberField:
    """The unique non-rational field among the arguments, or QQ."""
    field = QQ
    for e in elements:
        if e.field.degree > 1:
            if field.degree > 1 and field != e.field:
                raise TypeError("elements from two distinct extensions")
            field = e.field
    return field
