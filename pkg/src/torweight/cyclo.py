"""Exact arithmetic in a cyclotomic field Q(zeta_N).

Elements are represented in the power basis 1, z, ..., z^(phi(N)-1) of
Q[x]/Phi_N(x).  One shared CycloField context carries the modulus and the
precomputed reduction table; all element operations are pure.
"""

from fractions import Fraction
from functools import lru_cache


class OrderMismatch(ValueError):
    pass


class NotRational(ArithmeticError):
    pass


def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_trim(out)


def _poly_divmod_exact(num, den):
    # integer polynomial division known to be exact
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        if c % den[-1] != 0:
            raise ArithmeticError("division not exact")
        c //= den[-1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num):
        raise ArithmeticError("division not exact")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Coefficients (ascending, ints) of Phi_n."""
    if n == 1:
        return (-1, 1)
    p = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            p = _poly_divmod_exact(p, list(cyclotomic_polynomial(d)))
    return tuple(p)


class CycloField:
    """The field Q(zeta_N) for a fixed N."""

    def __init__(self, order):
        if order < 1:
            raise ValueError("order must be positive")
        self.order = order
        mod = cyclotomic_polynomial(order)
        self.degree = len(mod) - 1
        self._mod = [Fraction(c) for c in mod]
        # reduction table for x^k, degree <= k <= 2*degree - 2
        self._red = {}
        cur = [Fraction(0)] * self.degree
        if self.degree > 0:
            # x^degree = -(lower part of modulus)
            base = [-c for c in self._mod[: self.degree]]
            cur = list(base)
            self._red[self.degree] = tuple(cur)
            for k in range(self.degree + 1, 2 * self.degree - 1):
                shifted = [Fraction(0)] + cur[:-1]
                if cur[-1] != 0:
                    shifted = [s + cur[-1] * b for s, b in zip(shifted, base)]
                cur = shifted
                self._red[k] = tuple(cur)

    def __repr__(self):
        return f"CycloField({self.order})"

    def __eq__(self, other):
        return isinstance(other, CycloField) and other.order == self.order

    def __hash__(self):
        return hash(("CycloField", self.order))

    def element(self, coeffs):
        c = [Fraction(x) for x in coeffs]
        if len(c) > self.degree:
            raise ValueError("too many coefficients")
        c += [Fraction(0)] * (self.degree - len(c))
        return CycloNumber(self, tuple(c))

    def from_rational(self, q):
        return self.element([Fraction(q)])

    @property
    def zero(self):
        return self.from_rational(0)

    @property
    def one(self):
        return self.from_rational(1)

    def zeta(self):
        return self.root_of_unity(1, self.order)

    def root_of_unity(self, k, m):
        """Image of e^(2 pi i k / m); requires m | N."""
        if m <= 0 or self.order % m != 0:
            raise OrderMismatch(f"{m} does not divide field order {self.order}")
        e = (k * (self.order // m)) % self.order
        # reduce x^e mod Phi_N
        if self.degree == 0:
            return self.from_rational(1)
        poly = [Fraction(0)] * e + [Fraction(1)]
        return CycloNumber(self, self._reduce(poly))

    def _reduce(self, poly):
        """Reduce a coefficient list mod Phi_N to length == degree."""
        poly = list(poly)
        while len(poly) > self.degree:
            k = len(poly) - 1
            c = poly.pop()
            if c == 0:
                continue
            if k in self._red:
                red = self._red[k]
                for i in range(self.degree):
                    poly[i] += c * red[i]
            else:
                # exponent beyond the cached table: x^k = x^(k-deg) * x^deg
                red = self._red[self.degree]
                for i, rc in enumerate(red):
                    if rc:
                        poly[k - self.degree + i] += c * rc
        poly += [Fraction(0)] * (self.degree - len(poly))
        return tuple(poly)


class CycloNumber:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    def __repr__(self):
        return f"Cyclo{self.field.order}{list(self.coeffs)}"

    def _coerce(self, other):
        if isinstance(other, CycloNumber):
            if other.field != self.field:
                raise OrderMismatch("mixed cyclotomic field contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.field.order, self.coeffs))

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycloNumber(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prod = [Fraction(0)] * (2 * self.field.degree - 1 or 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CycloNumber(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def invert(self):
        """Multiplicative inverse via extended Euclid against Phi_N."""
        if self.is_zero():
            raise ZeroDivisionError("inverting zero cyclotomic number")
        # gcd(self, Phi) = 1 since Phi is irreducible and self != 0
        a = list(self.field._mod)
        b = list(self.coeffs)
        _poly_trim(b)
        # Bezout: s*a + t*b = gcd; we need t mod Phi with t*b == 1
        s0, s1 = [Fraction(1)], []
        t0, t1 = [], [Fraction(1)]

        def padd(p, q):
            out = [Fraction(0)] * max(len(p), len(q))
            for i, x in enumerate(p):
                out[i] += x
            for i, x in enumerate(q):
                out[i] += x
            while out and out[-1] == 0:
                out.pop()
            return out

        def pscale(p, c):
            return [x * c for x in p]

        def pmul(p, q):
            if not p or not q:
                return []
            out = [Fraction(0)] * (len(p) + len(q) - 1)
            for i, x in enumerate(p):
                if x:
                    for j, y in enumerate(q):
                        out[i + j] += x * y
            while out and out[-1] == 0:
                out.pop()
            return out

        def pdivmod(num, den):
            num = list(num)
            q = []
            dn = len(den) - 1
            lead = den[-1]
            while len(num) - 1 >= dn and num:
                c = num[-1] / lead
                k = len(num) - 1 - dn
                qq = [Fraction(0)] * k + [c]
                q = padd(q, qq)
                sub = pmul(qq, den)
                num = padd(num, pscale(sub, -1))
                while num and num[-1] == 0:
                    num.pop()
            return q, num

        r0, r1 = a, b
        while r1:
            q, r = pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, padd(s0, pscale(pmul(q, s1), -1))
            t0, t1 = t1, padd(t0, pscale(pmul(q, t1), -1))
        # r0 = gcd (a constant), t0 * self == r0 mod Phi
        if len(r0) != 1:
            raise ArithmeticError("unexpected nonunit gcd in cyclotomic field")
        c = r0[0]
        inv = [x / c for x in t0]
        return CycloNumber(self.field, self.field._reduce(inv))

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def rational_part(self):
        """The value as a Fraction; raises NotRational when it is not."""
        if not self.is_rational():
            raise NotRational(f"{self!r} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)
