"""Exact rational linear feasibility via Fourier-Motzkin elimination.

Systems are small (a handful of variables after equality elimination), so
elimination stays well within budget.  Strict inequalities are tracked
through combinations, which lets callers pose relative-interior queries.
"""

from fractions import Fraction

from . import linalg


def fm_feasible(ineqs, nvars):
    """Decide whether {t : c.t >= r (or > r)} is nonempty.

    ineqs is a list of (coeffs, rhs, strict) triples over nvars variables.
    """
    cons = []
    for coeffs, rhs, strict in ineqs:
        cons.append((tuple(Fraction(c) for c in coeffs), Fraction(rhs), bool(strict)))
    for var in range(nvars):
        lowers, uppers, rest = [], [], []
        for coeffs, rhs, strict in cons:
            c = coeffs[var]
            if c == 0:
                rest.append((coeffs, rhs, strict))
            elif c > 0:
                lowers.append((coeffs, rhs, strict))
            else:
                uppers.append((coeffs, rhs, strict))
        new = rest
        for lc, lr, ls in lowers:
            for uc, ur, us in uppers:
                # eliminate var: (1/lc_v)*L and (-1/uc_v)*U combine
                a = lc[var]
                b = -uc[var]
                coeffs = tuple(x / a + y / b for x, y in zip(lc, uc))
                rhs = lr / a + ur / b
                new.append((coeffs, rhs, ls or us))
        # dedupe exact duplicates to keep growth down
        cons = list({(c, r, s) for c, r, s in new})
    for coeffs, rhs, strict in cons:
        if strict:
            if not Fraction(0) > rhs:
                return False
        else:
            if not Fraction(0) >= rhs:
                return False
    return True


def nonneg_solutions_feasible(A, b, positive=()):
    """Exists z with A z = b, z >= 0 componentwise, z_i > 0 for i in positive?

    Equalities are eliminated first by rational parametrization, leaving a
    pure inequality system in the solution parameters.
    """
    if not A:
        return all(Fraction(x) == 0 for x in b)
    x0, kernel = linalg.solve_rational(A, b)
    if x0 is None:
        return False
    nvars = len(kernel)
    positive = set(positive)
    ineqs = []
    for i in range(len(x0)):
        coeffs = tuple(Fraction(k[i]) for k in kernel)
        ineqs.append((coeffs, -Fraction(x0[i]), i in positive))
    return fm_feasible(ineqs, nvars)


def polyhedron_dim(A, b):
    """Dimension of {z >= 0 : A z = b}, or None when empty.

    Computed from the set of implicitly-zero coordinates: the polyhedron's
    affine hull is the solution set of the equalities together with the
    forced-zero coordinates.
    """
    if not nonneg_solutions_feasible(A, b):
        return None
    m = len(A[0]) if A else 0
    free = []
    for i in range(m):
        if nonneg_solutions_feasible(A, b, positive=(i,)):
            free.append(i)
    if not free:
        return 0
    sub = [[row[i] for i in free] for row in A] if A else []
    return len(free) - linalg.rank(sub)
