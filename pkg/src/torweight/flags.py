"""Generic flags, t-coefficients, finite quotient groups with characters,
and the Riemann-Roch matrix with its inverse.

The matrix entry for a face pair (alpha, beta) is the exact coefficient of
the subvariety class of beta in the Riemann-Roch image of the structure
sheaf class of alpha: a character-group sum of degree-zero parts of
exponential factor products, divided by the relative multiplicity.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from . import fan as fanmod
from . import linalg
from .cyclo import CycloField
from .series import LaurentSeries, degree_zero_term, factor_series
from .seeds import rng


class DegenerateFlag(ValueError):
    pass


@dataclass(frozen=True)
class Flag:
    """A complete flag in N_Q, given by an ordered basis; F_i is the span
    of the first i vectors."""
    vectors: tuple
    seed: int | None = None

    @property
    def dim(self):
        return len(self.vectors)


def make_flag(vectors, seed=None):
    vecs = tuple(tuple(Fraction(x) for x in v) for v in vectors)
    if linalg.rank([list(v) for v in vecs]) != len(vecs):
        raise DegenerateFlag("flag vectors are linearly dependent")
    return Flag(vecs, seed)


def sample_flag(fan, seed, bound=10**4, max_tries=32):
    """Seeded generic flag; resamples until the genericity certificate
    (all t-coefficients defined and nonzero) passes."""
    for attempt in range(max_tries):
        r = rng(seed, "flag", attempt)
        vecs = [tuple(Fraction(r.randint(-bound, bound)) for _ in range(fan.dim))
                for _ in range(fan.dim)]
        try:
            flag = make_flag(vecs, seed)
            t_coefficients(fan, flag)
            return flag
        except DegenerateFlag:
            continue
    raise DegenerateFlag(f"no generic flag found from seed {seed}")


class TCoefficients:
    """t-values per (cone, ray): the flag line inside each cone written in
    the cone's ray basis, under a fixed determinant-based scaling."""

    def __init__(self, fan, flag, values):
        self.fan = fan
        self.flag = flag
        self.values = values

    def __getitem__(self, key):
        return self.values[key]


def t_coefficients(fan, flag):
    if flag.dim != fan.dim:
        raise DegenerateFlag("flag dimension does not match the fan")
    values = {}
    for cone in fan.cones:
        k = len(cone)
        if k == 0:
            continue
        if not fan.is_simplicial_cone(cone):
            raise fanmod.NotSimplicial(f"cone {cone} is not simplicial")
        if k == 1:
            values[(cone, cone[0])] = Fraction(1)
            continue
        for ray, t in _cone_t_values(fan, flag, cone).items():
            values[(cone, ray)] = t
    return TCoefficients(fan, flag, values)


def _cone_t_values(fan, flag, cone):
    n = fan.dim
    k = len(cone)
    normals = fanmod.dual_basis_of_cone(fan, cone)  # n-k rows
    m = n - k + 1
    fs = flag.vectors[:m]
    M = [[sum(u[i] * f[i] for i in range(n)) for f in fs] for u in normals]
    coeffs = []
    for i in range(m):
        minor = [[row[j] for j in range(m) if j != i] for row in M]
        c = linalg.det_fraction(minor)
        coeffs.append(c if i % 2 == 0 else -c)
    if all(c == 0 for c in coeffs):
        raise DegenerateFlag(f"flag meets cone {cone} degenerately")
    w = [sum(coeffs[j] * fs[j][i] for j in range(m)) for i in range(n)]
    rays = fan.ray_vectors(cone)
    A = [[v[i] for v in rays] for i in range(n)]
    t, _ = linalg.solve_rational(A, w)
    if t is None:
        raise DegenerateFlag(f"flag line escapes the span of cone {cone}")
    if any(x == 0 for x in t):
        raise DegenerateFlag(f"vanishing t-coefficient on cone {cone}")
    return {ray: t[i] for i, ray in enumerate(cone)}


@dataclass
class GroupData:
    """The finite quotient group attached to a face pair: each element is
    recorded by its character tuple on the added rays."""
    alpha: tuple
    beta: tuple
    added_rays: tuple
    order: int
    # per element: tuple of Fractions theta in [0,1), character e^(2 pi i theta)
    thetas: tuple


def character_data(fan, alpha, beta):
    alpha, beta = tuple(alpha), tuple(beta)
    added = tuple(r for r in beta if r not in alpha)
    if not added:
        return GroupData(alpha, beta, (), 1, ((),))
    star = fanmod.star_fan(fan, alpha)
    k = len(added)
    A = [[star.ray_images[r][0][j] for r in added] for j in range(star.dim)]
    U, S, V, _ = linalg.smith_with_vinv(A)
    ds = [S[i][i] for i in range(k)]
    if any(d == 0 for d in ds):
        raise fanmod.NotSimplicial(f"cone {beta} is not simplicial over {alpha}")
    order = 1
    for d in ds:
        order *= d
    elements = []

    def gen(i, cur):
        if i == k:
            elements.append(tuple(cur))
            return
        for c in range(ds[i]):
            gen(i + 1, cur + [c])

    gen(0, [])
    thetas = []
    for cs in elements:
        psi = [Fraction(c, d) for c, d in zip(cs, ds)]
        theta = []
        for row in range(k):
            val = sum(V[row][i] * psi[i] for i in range(k))
            theta.append(val - (val.numerator // val.denominator))
        thetas.append(tuple(theta))
    return GroupData(alpha, beta, added, order, tuple(thetas))


def group_characters(fan, alpha, beta, field=None):
    """Character tuples of the quotient group as cyclotomic roots of unity."""
    data = character_data(fan, alpha, beta)
    if field is None:
        n = 1
        for th in data.thetas:
            for q in th:
                n = lcm(n, q.denominator)
        field = CycloField(n)
    chars = []
    for th in data.thetas:
        chars.append(tuple(field.root_of_unity(q.numerator, q.denominator) for q in th))
    return data, chars, field


class RRMatrix:
    """Sparse face-indexed matrix pair (mu, nu) with mu unitriangular in
    the face order and nu its exact inverse."""

    def __init__(self, fan, flag, mu):
        self.fan = fan
        self.flag = flag
        self.mu = mu
        self.nu = None

    def mu_of(self, alpha, beta):
        if alpha == beta:
            return Fraction(1)
        return self.mu.get((tuple(alpha), tuple(beta)), Fraction(0))

    def nu_of(self, alpha, beta):
        if alpha == beta:
            return Fraction(1)
        return self.nu.get((tuple(alpha), tuple(beta)), Fraction(0))


def mu_matrix(fan, flag=None, tcoeffs=None, seed=0):
    """The Riemann-Roch matrix of a complete simplicial fan for a generic
    flag (sampled from `seed` when no flag is given)."""
    if not fan.is_complete:
        raise fanmod.NotComplete("fan must be complete")
    if not fan.is_simplicial:
        raise fanmod.NotSimplicial("fan must be simplicial")
    if flag is None:
        flag = sample_flag(fan, seed)
    if tcoeffs is None:
        tcoeffs = t_coefficients(fan, flag)

    # one shared cyclotomic context: lcm of all character orders in the fan
    char_cache = {}
    N = 1
    for beta in fan.cones:
        for alpha in fan.faces_of(beta):
            if alpha == beta:
                continue
            data = character_data(fan, alpha, beta)
            char_cache[(alpha, beta)] = data
            for th in data.thetas:
                for q in th:
                    N = lcm(N, q.denominator)
    field = CycloField(N) if N > 1 else None

    mu = {}
    series_cache = {}

    def factor(theta, p):
        key = (theta, p)
        if key not in series_cache:
            if theta == 0:
                a = 1
            else:
                a = field.root_of_unity(theta.numerator, theta.denominator)
            series_cache[key] = factor_series(a, 1, "_t", p)
        return series_cache[key]

    star_scale = {}
    for beta in fan.cones:
        for alpha in fan.faces_of(beta):
            if alpha == beta:
                mu[(alpha, beta)] = Fraction(1)
                continue
            data = char_cache[(alpha, beta)]
            added = data.added_rays
            p = len(added)
            if alpha not in star_scale:
                star = fanmod.star_fan(fan, alpha)
                star_scale[alpha] = {r: img[1] for r, img in star.ray_images.items()}
            scales = star_scale[alpha]
            values = {r: scales[r] * tcoeffs[(beta, r)] for r in added}
            total = Fraction(0)
            for th in data.thetas:
                factors = []
                for r, q in zip(added, th):
                    s = factor(q, p)
                    factors.append(LaurentSeries((r,), s.terms, s.order))
                term = degree_zero_term(factors, values)
                total = total + term
            if not isinstance(total, Fraction):
                total = total.rational_part()
            mu[(alpha, beta)] = total / data.order
    rr = RRMatrix(fan, flag, mu)
    nu_matrix(rr)
    return rr


def nu_matrix(rr):
    """Fill in the inverse matrix by back-substitution along the face
    order; nu_alpha(alpha) = 1 always."""
    fan = rr.fan
    nu = {}
    order = sorted(fan.cones, key=lambda c: (fan.cone_dim(c), c))
    for alpha in order:
        ups = sorted(fan.cones_containing(alpha), key=lambda c: (fan.cone_dim(c), c))
        for beta in ups:
            if beta == alpha:
                nu[(alpha, beta)] = Fraction(1)
                continue
            s = Fraction(0)
            for gamma in fan.cones_containing(alpha):
                if gamma == beta:
                    continue
                if set(gamma) <= set(beta):
                    s += nu[(alpha, gamma)] * rr.mu_of(gamma, beta)
            nu[(alpha, beta)] = -s
    rr.nu = {k: v for k, v in nu.items() if v != 0 or k[0] == k[1]}
    return rr


def divisor_monomial_expand(fan, tcoeffs, exponents):
    """Expand a monomial in invariant divisor classes (given by positive
    ray exponents) into subvariety classes; returns cone -> coefficient."""
    exps = {int(r): int(a) for r, a in exponents.items() if a}
    if any(a < 0 for a in exps.values()):
        raise ValueError("exponents must be positive")
    l = sum(exps.values())
    support = set(exps)
    out = {}
    for beta in fan.cones_of_dim(l):
        if not support <= set(beta):
            continue
        num = Fraction(1)
        for r, a in exps.items():
            num *= tcoeffs[(beta, r)] ** a
        den = Fraction(1)
        for r in beta:
            den *= tcoeffs[(beta, r)]
        out[beta] = num / den / fanmod.multiplicity(fan, beta)
    return out
