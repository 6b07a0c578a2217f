"""Exact summation of rational functions over roots of unity.

The workhorse identity: for the n x n cyclic-shift matrix C (the companion
matrix of t^n - 1), the eigenvalues of C are exactly the n-th roots of unity,
so

    sum_{w^n = 1} f(w)  =  trace f(C).

f(C) is computed in the commutant algebra F[C] = F[t]/(t^n - 1): fold the
numerator's exponents mod n, invert the folded denominator by the extended
Euclidean algorithm against t^n - 1, and multiply.  Since trace C^k is n for
k = 0 mod n and 0 otherwise, the trace is n times the constant coefficient.
This keeps every computation in exact field arithmetic; no complex root of
unity is ever evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from .errors import (ParseError, PoleOnTorus, ResonantRoot, RootOfUnityPole,
                     SingularError)
from .laurent import LaurentPolynomial, RationalFunction, partial_fractions
from .numberfield import QQ, FieldElement, NumberField

# ---------------------------------------------------------------------------
# Arithmetic in F[t]/(t^n - 1), elements as dense coefficient lists.
# ---------------------------------------------------------------------------


def fold_mod_cyclic(p: LaurentPolynomial, n: int) -> List[FieldElement]:
    """Image of a Laurent polynomial in F[t]/(t^n - 1)."""
    field = p.field
    out = [field.zero()] * n
    for k, c in p.coeffs.items():
        out[k % n] = out[k % n] + c
    return out


def _cyc_mul(a: Sequence[FieldElement], b: Sequence[FieldElement], n: int,
             field: NumberField) -> List[FieldElement]:
    out = [field.zero()] * n
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if y.is_zero():
                continue
            k = (i + j) % n
            out[k] = out[k] + x * y
    return out


def _dense_trim(p: List[FieldElement]) -> List[FieldElement]:
    while p and p[-1].is_zero():
        p.pop()
    return p


def _dense_divmod(a: List[FieldElement], b: List[FieldElement], field):
    quo = [field.zero()] * max(0, len(a) - len(b) + 1)
    rem = list(a)
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
    return quo, _dense_trim(rem)


def invert_mod_cyclic(a: Sequence[FieldElement], n: int,
                      field: NumberField) -> List[FieldElement] | None:
    """Inverse of a in F[t]/(t^n - 1), or None when gcd(a, t^n - 1) != 1."""
    a = _dense_trim(list(a))
    if not a:
        return None
    modulus = [field.zero()] * (n + 1)
    modulus[0] = -field.one()
    modulus[n] = field.one()
    r0, r1 = modulus, list(a)
    s0, s1 = [], [field.one()]
    while r1:
        q, r = _dense_divmod(r0, r1, field)
        r0, r1 = r1, r
        # s_new = s0 - q*s1
        qs1 = [field.zero()] * (len(q) + len(s1) - 1) if q and s1 else []
        for i, x in enumerate(q):
            if x.is_zero():
                continue
            for j, y in enumerate(s1):
                qs1[i + j] = qs1[i + j] + x * y
        m = max(len(s0), len(qs1))
        s_new = [(s0[i] if i < len(s0) else field.zero())
                 - (qs1[i] if i < len(qs1) else field.zero()) for i in range(m)]
        s0, s1 = s1, _dense_trim(s_new)
    if len(r0) != 1:
        return None
    lead_inv = r0[0].inverse()
    inv = [c * lead_inv for c in s0]
    inv += [field.zero()] * (n - len(inv))
    return [inv[i] for i in range(n)]


def ratfun_mod_cyclic(f: RationalFunction, n: int) -> List[FieldElement]:
    """Image of f in F[t]/(t^n - 1); raises RootOfUnityPole at denominator zeros."""
    field = f.field
    den = fold_mod_cyclic(f.den, n)
    den_inv = invert_mod_cyclic(den, n, field)
    if den_inv is None:
        raise RootOfUnityPole(
            f"denominator vanishes at an {n}-th root of unity")
    num = fold_mod_cyclic(f.num, n)
    return _cyc_mul(num, den_inv, n, field)


def av_exact(f: RationalFunction | LaurentPolynomial, n: int) -> FieldElement:
    """Exact sum of f over all n-th roots of unity (trace of f at the
    cyclic-shift companion matrix of t^n - 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(f, LaurentPolynomial):
        f = RationalFunction.from_poly(f)
    residue = ratfun_mod_cyclic(f, n)
    return residue[0] * n


# ---------------------------------------------------------------------------
# Cyclic resultants
# ---------------------------------------------------------------------------

def _resultant(f: List[FieldElement], g: List[FieldElement], field: NumberField):
    """Resultant of dense polynomials over the field (Euclidean algorithm)."""
    f = _dense_trim(list(f))
    g = _dense_trim(list(g))
    if not f or not g:
        return field.zero()
    a, b = f, g
    acc = field.one()
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return acc * b[0] ** da
        _, r = _dense_divmod(a, b, field)
        dr = len(r) - 1
        if not r:
            return field.zero()
        sign = field.one() if (da * db) % 2 == 0 else -field.one()
        acc = acc * sign * b[-1] ** (da - dr)
        a, b = b, r


def cyclic_resultant(delta: LaurentPolynomial, n: int) -> FieldElement:
    """Exact product of delta over all n-th roots of unity."""
    if n < 1:
        raise ValueError("n must be >= 1")
    field = delta.field
    if delta.is_zero():
        return field.zero()
    coeffs, shift = delta.as_poly_coeffs()
    # t^n - 1 as dense list
    cyc = [field.zero()] * (n + 1)
    cyc[0] = -field.one()
    cyc[n] = field.one()
    res = _resultant(cyc, coeffs, field)
    # product over roots of t^shift: (prod of all n-th roots)^shift = (-1)^((n+1)*shift)
    if ((n + 1) * shift) % 2:
        res = -res
    return res


# ---------------------------------------------------------------------------
# Closed-form sums over poles: sum_{t^n=1} (1 - a t)^(-m)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def pole_sum_polynomials(m: int) -> Tuple[Tuple[Fraction, ...], ...]:
    """Universal polynomials beta_{m,i}(n) over Q with

        sum_{t^n=1} (1 - a t)^(-m) = sum_i beta_{m,i}(n) / (1 - a^n)^i.

    Entry [i] is the coefficient list of beta_{m,i} in n.  Derived from the
    geometric case m = 1 by repeatedly differentiating in the pole location;
    the recursion is independent of a.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        return ((Fraction(0),), (Fraction(0), Fraction(1)))  # 0 + n/(1-a^n)
    prev = pole_sum_polynomials(m - 1)
    k = m - 1
    out: List[List[Fraction]] = [[Fraction(0)] * (m + 2) for _ in range(m + 1)]

    def add(i: int, poly: Sequence[Fraction], scale: Fraction, shift: int):
        for j, c in enumerate(poly):
            out[i][j + shift] += c * scale

    for i in range(k + 1):
        add(i, prev[i], Fraction(1), 0)
        # + (n/k) * ((i-1)*beta_{k,i-1} - i*beta_{k,i}) at slot i
        add(i, prev[i], Fraction(-i, k), 1)
        if i + 1 <= m:
            add(i + 1, prev[i], Fraction(i, k), 1)
    return tuple(tuple(_trim_fractions(row)) for row in out[:m + 1])


def _trim_fractions(row):
    row = list(row)
    while row and row[-1] == 0:
        row.pop()
    return row or [Fraction(0)]


def _poly_at(poly: Sequence[Fraction], n: int) -> Fraction:
    acc = Fraction(0)
    for c in reversed(poly):
        acc = acc * n + c
    return acc


def pole_sum_closed(a: FieldElement, m: int, n: int) -> FieldElement:
    """Closed-form sum_{t^n=1} 1/(1 - a t)^m; requires a^n != 1."""
    an = a ** n
    one_minus = a.field.one() - an
    if one_minus.is_zero():
        raise RootOfUnityPole("a is an n-th root of unity")
    inv = one_minus.inverse()
    table = pole_sum_polynomials(m)
    acc = a.field.zero()
    power = a.field.one()
    for i in range(len(table)):
        coeff = _poly_at(table[i], n)
        if coeff:
            acc = acc + power * coeff
        if i < len(table) - 1:
            power = power * inv
    return acc


# ---------------------------------------------------------------------------
# Quadratic delta(t) = t - (lam + 1/lam) + 1/t power sums (exact, symbolic in n)
# ---------------------------------------------------------------------------

def _check_quadratic_root(lam: FieldElement):
    sq = lam * lam
    if (sq - 1).is_zero():
        raise ResonantRoot("lambda^2 = 1 is resonant")


@dataclass(frozen=True)
class XPoly:
    """Polynomial in x with FieldElement coefficients (dense list)."""
    field: NumberField
    coeffs: tuple

    @classmethod
    def build(cls, field, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        return cls(field, tuple(coeffs))

    def at(self, n) -> FieldElement:
        acc = self.field.zero()
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        m = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero()
        return XPoly.build(self.field, [
            (self.coeffs[i] if i < len(self.coeffs) else z)
            + (other.coeffs[i] if i < len(other.coeffs) else z) for i in range(m)])

    def scale(self, c) -> "XPoly":
        return XPoly.build(self.field, [a * c for a in self.coeffs])


def delta_power_sums(lam: FieldElement, k: int) -> List[List[XPoly]]:
    """Tables alpha_{j,i}(x) for j = 0..k with

        sum_{t^n=1} delta(t)^(-j)
            = alpha_{j,0}(n) + sum_{i>=1} alpha_{j,i}(n) / (1 - lam^n)^i

    where delta(t) = t - (lam + 1/lam) + 1/t.  Row j has j+1 entries.

    Built from the exact partial fraction decomposition of delta^(-j) and
    the universal pole-sum polynomials; the basis 1/(1 - lam^{-n})^i is
    rewritten through 1/(1 - lam^{-n}) = 1 - 1/(1 - lam^n).
    """
    _check_quadratic_root(lam)
    field = lam.field
    lam_inv = lam.inverse()
    rows: List[List[XPoly]] = [[XPoly.build(field, [field.one()])]]
    fac_lam = LaurentPolynomial(field, {0: 1, 1: -lam})
    fac_inv = LaurentPolynomial(field, {0: 1, 1: -lam_inv})
    for j in range(1, k + 1):
        # delta^(-j) = t^j / ((1-lam t)^j (1-lam^{-1} t)^j)
        num = LaurentPolynomial(field, {j: 1})
        f = RationalFunction(num, (fac_lam ** j) * (fac_inv ** j))
        poly_part, terms = partial_fractions(f, [(lam, j), (lam_inv, j)])
        row = [XPoly.build(field, []) for _ in range(j + 1)]
        if not poly_part.is_zero():
            # a Laurent monomial t^e sums to n*[e = 0 mod n]; for the proper
            # fractions handled here the polynomial part is always zero
            raise SingularError("unexpected polynomial part in delta power sum")
        for (root_idx, m), c in terms.items():
            if c.is_zero():
                continue
            table = pole_sum_polynomials(m)
            if root_idx == 0:
                # pole lam: basis 1/(1 - lam^n)^i directly
                for i in range(len(table)):
                    contrib = XPoly.build(field, [c * Fraction(q) for q in table[i]])
                    row[i] = row[i] + contrib
            else:
                # pole 1/lam: (1 - lam^{-n})^{-i} = (1 - u)^i with u = 1/(1-lam^n)
                for i in range(len(table)):
                    base = [c * Fraction(q) for q in table[i]]
                    # expand (1-u)^i into powers of u
                    binom = [Fraction(1)]
                    for _ in range(i):
                        binom = [a - b for a, b in
                                 zip(binom + [Fraction(0)], [Fraction(0)] + binom)]
                    for p_idx, bc in enumerate(binom):
                        if bc == 0:
                            continue
                        contrib = XPoly.build(field, [x * bc for x in base])
                        row[p_idx] = row[p_idx] + contrib
        rows.append(row)
    return rows


def delta_sum_value(lam: FieldElement, j: int, n: int) -> FieldElement:
    """Evaluate sum_{t^n=1} delta(t)^(-j) from the alpha table."""
    rows = delta_power_sums(lam, j)
    lam_n = lam ** n
    one_minus = lam.field.one() - lam_n
    if one_minus.is_zero():
        raise RootOfUnityPole("lambda is an n-th root of unity")
    u = one_minus.inverse()
    acc = lam.field.zero()
    upow = lam.field.one()
    for poly in rows[j]:
        acc = acc + upow * poly.at(n)
        upow = upow * u
    return acc


# ---------------------------------------------------------------------------
# Laurent polynomials in x over a field: used to invert the triangular
# power-sum tables, whose inverse entries are polynomials in 1/x.
# ---------------------------------------------------------------------------

class XLaurent:
    """Sparse Laurent polynomial in an abstract variable x over a field."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs: Dict[int, FieldElement]):
        self.field = field
        self.coeffs = {k: v for k, v in coeffs.items() if not v.is_zero()}

    @classmethod
    def from_xpoly(cls, p: XPoly) -> "XLaurent":
        return cls(p.field, {i: c for i, c in enumerate(p.coeffs)})

    @classmethod
    def constant(cls, field, c) -> "XLaurent":
        return cls(field, {0: field.element(c) if not isinstance(c, FieldElement) else c})

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, self.field.zero()) + v
        return XLaurent(self.field, out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, self.field.zero()) - v
        return XLaurent(self.field, out)

    def __mul__(self, other):
        out: Dict[int, FieldElement] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                prod = a * b
                out[k] = out[k] + prod if k in out else prod
        return XLaurent(self.field, out)

    def scale(self, c):
        return XLaurent(self.field, {k: v * c for k, v in self.coeffs.items()})

    def monomial_inverse(self) -> "XLaurent":
        if len(self.coeffs) != 1:
            raise ValueError("only monomials invert to Laurent polynomials")
        (k, c), = self.coeffs.items()
        return XLaurent(self.field, {-k: c.inverse()})

    def at(self, n) -> FieldElement:
        """Evaluate at x = n (n a nonzero integer or field element)."""
        acc = self.field.zero()
        npos = self.field.element(n) if not isinstance(n, FieldElement) else n
        for k, c in self.coeffs.items():
            acc = acc + c * npos ** k
        return acc

    def max_exp(self):
        return max(self.coeffs) if self.coeffs else 0

    def min_exp(self):
        return min(self.coeffs) if self.coeffs else 0


def delta_basis_inverse(lam: FieldElement, k: int) -> List[List[XLaurent]]:
    """Inverse beta of the lower-triangular alpha matrix of delta_power_sums.

    Row a of the result expresses 1/(1 - lam^n)^a as

        sum_i beta_{a,i}(1/n) * S_i(n),   S_0 = 1, S_i = sum_{t^n=1} delta(t)^(-i),

    with beta entries Laurent polynomials in x = n carrying only non-positive
    exponents (i.e. genuine polynomials in 1/n).
    """
    _check_quadratic_root(lam)
    field = lam.field
    rows = delta_power_sums(lam, k)
    # alpha as (k+1)x(k+1) lower-triangular XLaurent matrix: alpha[j][i]
    alpha = [[XLaurent(field, {}) for _ in range(k + 1)] for _ in range(k + 1)]
    for j in range(k + 1):
        for i, poly in enumerate(rows[j]):
            alpha[j][i] = XLaurent.from_xpoly(poly)
    beta = [[XLaurent(field, {}) for _ in range(k + 1)] for _ in range(k + 1)]
    for a in range(k + 1):
        # diagonal entries are monomials c * x^a
        diag = alpha[a][a]
        beta_aa = diag.monomial_inverse()
        beta[a][a] = beta_aa
        for j in range(a - 1, -1, -1):
            # solve sum_{i=j..a} beta[a][i] * alpha[i][j] = 0
            acc = XLaurent(field, {})
            for i in range(j + 1, a + 1):
                acc = acc + beta[a][i] * alpha[i][j]
            beta[a][j] = (XLaurent(field, {}) - acc) * alpha[j][j].monomial_inverse()
    for a in range(k + 1):
        for i in range(k + 1):
            if beta[a][i].coeffs and beta[a][i].max_exp() > 0:
                raise SingularError("basis inverse has positive powers of n")
    return beta


# ---------------------------------------------------------------------------
# Multivariate torus sums (geometric-expansion oracle)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TorusSumSpec:
    """Sum of T0 / prod_i (1 - c_i T_i) over the n-torus of roots of unity.

    T_i for i = 1..d must be the coordinate monomials t_i; the remaining
    monomials T_{d+1}..T_s may only use exponents 0, +1, -1.  T0 is an
    arbitrary integer monomial.
    """
    d: int
    t0: tuple
    monomials: tuple          # tuple of exponent tuples for T_1..T_s
    constants: tuple          # tuple of FieldElement c_1..c_s

    def __post_init__(self):
        if self.d < 0:
            raise ParseError("torus dimension must be >= 0")
        if len(self.monomials) != len(self.constants):
            raise ParseError("one constant per monomial required")
        if len(self.monomials) < self.d:
            raise ParseError("need at least d monomials")
        if len(self.t0) != self.d:
            raise ParseError("T0 exponent vector has wrong length")
        for i in range(self.d):
            expect = tuple(1 if j == i else 0 for j in range(self.d))
            if tuple(self.monomials[i]) != expect:
                raise ParseError(f"T_{i+1} must equal t_{i+1}")
        for mono in self.monomials[self.d:]:
            if len(mono) != self.d or any(e not in (-1, 0, 1) for e in mono):
                raise ParseError("tail monomial exponents must be in {0, +1, -1}")

    @property
    def s(self) -> int:
        return len(self.monomials)

    def to_json(self) -> dict:
        return {"d": self.d, "t0": list(self.t0),
                "monomials": [list(m) for m in self.monomials],
                "constants": [c.to_json() for c in self.constants]}

    @classmethod
    def from_json(cls, obj, field: NumberField) -> "TorusSumSpec":
        consts = tuple(FieldElement.from_json(c, field) for c in obj["constants"])
        return cls(int(obj["d"]), tuple(obj.get("t0", [0] * int(obj["d"]))),
                   tuple(tuple(m) for m in obj["monomials"]), consts)


def torus_sum_oracle(spec: TorusSumSpec, n: int) -> FieldElement:
    """Exact torus sum via the finite geometric expansion.

    Each factor 1/(1 - c_i T_i) expands to (sum_{k<n} (c_i T_i)^k)/(1 - c_i^n)
    on the torus; a monomial survives the sum iff all its exponents vanish
    mod n, contributing n^d.  Free tail indices determine the coordinate
    indices uniquely, so the cost is O(n^(s-d)).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    field = spec.constants[0].field if spec.constants else QQ
    one = field.one()
    d, s = spec.d, spec.s
    powers = []
    denom = one
    for c in spec.constants:
        cn = c ** n
        if (one - cn).is_zero():
            raise PoleOnTorus("some c_i is an n-th root of unity")
        denom = denom * (one - cn)
        row = [one]
        for _ in range(n - 1):
            row.append(row[-1] * c)
        powers.append(row)
    total = field.zero()
    tail = s - d
    idx = [0] * tail
    while True:
        # forced coordinate exponents: k_i = -(T0_i + sum_j e_{ji} k_j) mod n
        prod = one
        ok = True
        for i in range(d):
            e = spec.t0[i]
            for j in range(tail):
                e += spec.monomials[d + j][i] * idx[j]
            k_i = (-e) % n
            if k_i:
                prod = prod * powers[i][k_i]
        for j in range(tail):
            if idx[j]:
                prod = prod * powers[d + j][idx[j]]
        total = total + prod
        # odometer over the tail indices
        pos = 0
        while pos < tail:
            idx[pos] += 1
            if idx[pos] < n:
                break
            idx[pos] = 0
            pos += 1
        else:
            break
        if tail == 0:
            break
    scale = Fraction(n) ** d
    return total * denom.inverse() * scale


def torus_sum_numeric(spec: TorusSumSpec, n: int, precision_digits: int = 40):
    """Brute complex summation at the given precision (cross-check only)."""
    import mpmath
    with mpmath.workdps(precision_digits + 10):
        cs = [c.to_mpc(precision_digits + 10) for c in spec.constants]
        total = mpmath.mpc(0)
        idx = [0] * spec.d
        while True:
            ws = [mpmath.e ** (2j * mpmath.pi * k / n) for k in idx]
            t0 = mpmath.mpc(1)
            for i, e in enumerate(spec.t0):
                t0 *= ws[i] ** e
            denom = mpmath.mpc(1)
            for m, c in zip(spec.monomials, cs):
                tv = mpmath.mpc(1)
                for i, e in enumerate(m):
                    tv *= ws[i] ** e
                denom *= (1 - c * tv)
            total += t0 / denom
            pos = 0
            while pos < spec.d:
                idx[pos] += 1
                if idx[pos] < n:
                    break
                idx[pos] = 0
                pos += 1
            else:
                break
            if spec.d == 0:
                break
        return total


def fit_rational_shape(values, constants: Sequence[FieldElement], d: int,
                       y_degree: int):
    """Fit torus-sum values to n^d * p(1/(1-c_i^n), ..., n).

    p has x_i-degree at most 1 and y-degree at most y_degree.  `values` is a
    list of (n, FieldElement).  Returns a predictor callable n -> value.
    Raises SingularError when the values are inconsistent with the shape.
    """
    field = constants[0].field if constants else QQ
    one = field.one()
    s = len(constants)
    subsets = []
    for mask in range(1 << s):
        subsets.append([i for i in range(s) if mask & (1 << i)])
    basis = [(subset, beta) for subset in subsets for beta in range(y_degree + 1)]

    def basis_row(n: int):
        xs = []
        for c in constants:
            cn = c ** n
            diff = one - cn
            if diff.is_zero():
                raise PoleOnTorus("c_i^n = 1 inside fit window")
            xs.append(diff.inverse())
        row = []
        nd = Fraction(n) ** d
        for subset, beta in basis:
            v = field.element(nd * Fraction(n) ** beta)
            for i in subset:
                v = v * xs[i]
            row.append(v)
        return row

    from .linalg import solve_consistent
    A = [basis_row(n) for n, _ in values]
    b = [v for _, v in values]
    coeffs = solve_consistent(field, A, b)

    def predict(n: int) -> FieldElement:
        row = basis_row(n)
        acc = field.zero()
        for c, r in zip(coeffs, row):
            acc = acc + c * r
        return acc

    return predict
