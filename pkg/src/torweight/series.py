"""Truncated multivariate Laurent series and degree-zero extraction.

Each factor is a univariate series in its own formal variable with
exponents >= -1 (a simple pole at most).  Products over pairwise-distinct
variables are pruned so that only monomials that can still reach total
degree zero survive.  Coefficients are Fractions or CycloNumbers.
"""

from fractions import Fraction
from functools import lru_cache

from .cyclo import CycloNumber


class InsufficientOrder(ArithmeticError):
    pass


class ZeroScale(ValueError):
    pass


@lru_cache(maxsize=None)
def bernoulli(n):
    """Bernoulli numbers in the convention t/(1-e^{-t}) = sum B_n t^n / n!

    (so B_1 = +1/2).
    """
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(1, 2)
    if n % 2 == 1:
        return Fraction(0)
    # standard recurrence for the B_1 = -1/2 convention; even values agree
    # sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1
    from math import comb

    b = [Fraction(1), Fraction(-1, 2)]
    for m in range(2, n + 1):
        if m % 2 == 1:
            b.append(Fraction(0))
            continue
        s = sum(Fraction(comb(m + 1, j)) * b[j] for j in range(m))
        b.append(-s / (m + 1))
    return b[n]


def _is_zero_coeff(c):
    if isinstance(c, CycloNumber):
        return c.is_zero()
    return c == 0


class LaurentSeries:
    """A truncated series in one or more variables.

    terms maps exponent tuples (aligned with `variables`) to coefficients;
    every exponent is >= -1 per variable, zero coefficients are dropped,
    and all terms of total degree <= order are exact.
    """

    def __init__(self, variables, terms, order):
        self.variables = tuple(variables)
        self.order = order
        clean = {}
        for e, c in terms.items():
            if not _is_zero_coeff(c) and sum(e) <= order:
                clean[tuple(e)] = c
        self.terms = clean

    def __repr__(self):
        return f"LaurentSeries({self.variables}, {len(self.terms)} terms, O({self.order + 1}))"

    def coefficient(self, expvec):
        return self.terms.get(tuple(expvec), Fraction(0))


def factor_series(a, c, variable, order, field=None):
    """Expansion of 1/(1 - a*e^{-c t}) through total degree `order`.

    `a` must be 1 or a root of unity (a CycloNumber, or -1 as an int); the
    series has a first-order pole exactly when a == 1, and otherwise is
    analytic with constant term 1/(1-a).
    """
    c = Fraction(c)
    if c == 0:
        raise ZeroScale("degenerate exponential factor: zero scale")
    is_one = (a == 1) if isinstance(a, (int, Fraction)) else (
        isinstance(a, CycloNumber) and a == a.field.one)
    terms = {}
    if is_one:
        # 1/(1-e^{-ct}) = sum_{k>=-1} B_{k+1} c^k t^k / (k+1)!
        for k in range(-1, order + 1):
            coeff = bernoulli(k + 1) * c**k / _factorial(k + 1)
            if coeff != 0:
                terms[(k,)] = coeff
        return LaurentSeries((variable,), terms, order)
    # analytic case: invert the power series (1-a) - a*sum_{n>=1} (-c)^n t^n/n!
    if isinstance(a, int):
        a = Fraction(a)
    den = [1 - a]
    for n in range(1, order + 1):
        den.append(-a * Fraction((-c) ** n, _factorial(n)))
    inv = _invert_power_series(den, order)
    for k, coeff in enumerate(inv):
        if not _is_zero_coeff(coeff):
            terms[(k,)] = coeff
    return LaurentSeries((variable,), terms, order)


def _factorial(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def _invert_power_series(den, order):
    """Coefficients of 1/den(t) through t^order; den[0] must be invertible."""
    c0 = den[0]
    if isinstance(c0, CycloNumber):
        if c0.is_zero():
            raise ZeroDivisionError("series has no constant term")
        inv0 = c0.invert()
    else:
        if c0 == 0:
            raise ZeroDivisionError("series has no constant term")
        inv0 = 1 / Fraction(c0)
    out = [inv0]
    for k in range(1, order + 1):
        s = None
        for j in range(1, k + 1):
            dj = den[j] if j < len(den) else 0
            if _is_zero_coeff(dj):
                continue
            term = dj * out[k - j]
            s = term if s is None else s + term
        if s is None:
            out.append(inv0 * 0 if isinstance(inv0, CycloNumber) else Fraction(0))
        else:
            out.append(-(inv0 * s))
    return out


def series_product(factors):
    """Product of univariate series in pairwise-distinct variables.

    Terms whose total degree can no longer come back to <= 0 (each not-yet
    multiplied factor contributes at least -1) are pruned as we go, so the
    result is exact in total degrees <= 0.
    """
    variables = []
    for f in factors:
        variables.extend(f.variables)
    if len(set(variables)) != len(variables):
        raise ValueError("factors must use pairwise-distinct variables")
    p = len(factors)
    acc = {(): Fraction(1)}
    for j, f in enumerate(factors):
        remaining = p - j - 1
        nxt = {}
        for e, c in acc.items():
            for (k,), fc in f.terms.items():
                tot = sum(e) + k
                if tot > remaining:
                    continue
                key = e + (k,)
                cur = nxt.get(key)
                val = c * fc
                nxt[key] = val if cur is None else cur + val
        acc = nxt
    return LaurentSeries(tuple(variables), acc, 0)


def degree_zero_term(factors, values):
    """Total-degree-zero part of prod(factors), with ratio monomials
    evaluated at `values` (a map variable -> nonzero Fraction).

    Returns a Fraction when all contributions are rational, otherwise a
    CycloNumber.
    """
    p = len(factors)
    for f in factors:
        if f.order < p - 1:
            raise InsufficientOrder(
                f"factor truncated at {f.order}, need {p - 1}")
    prod = series_product(factors)
    total = Fraction(0)
    for e, c in prod.terms.items():
        if sum(e) != 0:
            continue
        mono = Fraction(1)
        for var, k in zip(prod.variables, e):
            if k:
                v = Fraction(values[var])
                if v == 0:
                    raise ZeroDivisionError("zero substitution value")
                mono *= v**k
        total = total + c * mono
    return total
