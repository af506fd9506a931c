"""Minkowski and Grothendieck weights: membership tests, the map between
them, lifts, filtration and functorial push/pull."""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from . import fan as fanmod
from . import linalg
from .flags import mu_matrix


class NotAWeight(ValueError):
    pass


class DimensionTooLarge(ValueError):
    pass


@dataclass
class MinkowskiWeight:
    """Integer function on the codimension-k cones, subject to the
    balancing condition at every codimension-(k+1) cone."""
    fan: object
    codim: int
    values: dict

    def __getitem__(self, cone):
        return self.values.get(tuple(cone), 0)


@dataclass
class GrothendieckWeight:
    """Function on all cones of a complete fan; integer-valued unless the
    `rational` flag is set."""
    fan: object
    values: dict
    rational: bool = False

    def __getitem__(self, cone):
        return self.values.get(tuple(cone), 0)

    def __eq__(self, other):
        if not isinstance(other, GrothendieckWeight):
            return NotImplemented
        return self.fan is other.fan and all(
            self[c] == other[c] for c in self.fan.cones)


def make_gw(fan, values, rational=False):
    vals = {}
    for c in fan.cones:
        v = values.get(tuple(c), 0)
        v = Fraction(v)
        if not rational and v.denominator != 1:
            raise NotAWeight(f"non-integer value {v} on cone {c} without rational flag")
        vals[tuple(c)] = v if rational else v.numerator
    return GrothendieckWeight(fan, vals, rational)


def constant_weight(fan, value=1):
    return make_gw(fan, {c: value for c in fan.cones})


def _cover_pairings(fan, alpha):
    """For each u in a basis of M_alpha, the integers <u, v_{beta,alpha}>
    over the covers beta of alpha."""
    star = fanmod.star_fan(fan, alpha)
    basis = fanmod.dual_basis_of_cone(fan, alpha)
    covers = fan.covers(alpha)
    out = []
    for u in basis:
        row = {}
        for beta in covers:
            v = star.primitive_cover_vector(beta)
            row[beta] = fanmod.pairing(u, star, v)
        out.append((u, row))
    return out


def minkowski_relation_rows(fan, k):
    """Balancing rows for codimension-k weights, one per (alpha, u)."""
    rows = []
    for alpha in fan.cones_of_codim(k + 1):
        for u, pair in _cover_pairings(fan, alpha):
            rows.append((alpha, u, pair))
    return rows


def is_minkowski_weight(fan, f):
    if isinstance(f, MinkowskiWeight):
        k, values = f.codim, f.values
    else:
        raise TypeError("expected a MinkowskiWeight")
    for alpha, u, pair in minkowski_relation_rows(fan, k):
        s = sum(c * values.get(beta, 0) for beta, c in pair.items())
        if s != 0:
            return False
    return True


def gw_relation_rows(fan, rr):
    """The balancing relations characterizing Grothendieck weights on a
    complete simplicial fan: for every cone alpha and dual vector u,
    sum over covers beta of <u, v_{beta,alpha}> * sum_{beta <= gamma}
    nu_beta(gamma) g(gamma) must vanish."""
    rows = []
    for alpha in fan.cones:
        if fan.cone_dim(alpha) == fan.dim:
            continue
        for u, pair in _cover_pairings(fan, alpha):
            row = {}
            for beta, c in pair.items():
                if c == 0:
                    continue
                for gamma in fan.cones_containing(beta):
                    coeff = rr.nu_of(beta, gamma)
                    if coeff != 0:
                        row[gamma] = row.get(gamma, Fraction(0)) + c * coeff
            rows.append((alpha, u, row))
    return rows


def is_grothendieck_weight(fan, g, rr=None, seed=0, return_violations=False):
    """Membership test for Grothendieck weights.

    Complete simplicial fans are tested directly against the balancing
    relations; non-simplicial fans are tested on a smooth refinement after
    pulling the function back."""
    if not fan.is_complete:
        raise fanmod.NotComplete("membership requires a complete fan")
    if not fan.is_simplicial:
        fine, cmap = fanmod.smooth_refine(fan)
        gg = pullback_refinement(g, fine, cmap)
        return is_grothendieck_weight(fine, gg, seed=seed,
                                      return_violations=return_violations)
    if rr is None:
        rr = mu_matrix(fan, seed=seed)
    violations = []
    for alpha, u, row in gw_relation_rows(fan, rr):
        s = sum(c * g[gamma] for gamma, c in row.items())
        if s != 0:
            violations.append((alpha, u, s))
    ok = not violations
    return (ok, violations) if return_violations else ok


def low_dim_criteria(fan, g):
    """Closed-form membership criteria for complete fans of dim <= 3."""
    n = fan.dim
    if n > 3:
        raise DimensionTooLarge("criteria only cover dimensions 1-3")
    if not fan.is_complete:
        raise fanmod.NotComplete("criteria require a complete fan")
    tops = fan.cones_of_dim(n)
    s = g[tops[0]]
    if any(g[t] != s for t in tops):
        return False
    if n == 1:
        return True
    if n == 2:
        total = [0] * n
        for (r,) in fan.cones_of_dim(1):
            c = g[(r,)] - s
            total = [t + c * x for t, x in zip(total, fan.rays[r])]
        return all(t == 0 for t in total)
    # n == 3
    for rho in fan.cones_of_dim(1):
        star = fanmod.star_fan(fan, rho)
        total = [0, 0]
        for beta in fan.covers(rho):
            v = star.primitive_cover_vector(beta)
            c = g[beta] - s
            total = [t + c * x for t, x in zip(total, v)]
        if any(t != 0 for t in total):
            return False
    lhs = [Fraction(0)] * 3
    rhs = [Fraction(0)] * 3
    for (r,) in fan.cones_of_dim(1):
        two = fan.covers((r,))
        coeff = g[(r,)] - sum(Fraction(g[a], 2) for a in two)
        const = 1 - Fraction(len(two), 2)
        lhs = [t + coeff * x for t, x in zip(lhs, fan.rays[r])]
        rhs = [t + const * x for t, x in zip(rhs, fan.rays[r])]
    return all(a == s * b for a, b in zip(lhs, rhs))


def rr_map_T(f, rr):
    """The induced map from Minkowski weights to rational Grothendieck
    weights: g(alpha) = sum over beta of mu_alpha(beta) f(beta)."""
    fan = rr.fan
    k = f.codim
    values = {}
    rational = False
    for alpha in fan.cones:
        s = Fraction(0)
        for beta in fan.cones_containing(alpha):
            if fan.codim(beta) == k:
                s += rr.mu_of(alpha, beta) * f[beta]
        values[alpha] = s
        if s.denominator != 1:
            rational = True
    if not rational:
        values = {c: v.numerator for c, v in values.items()}
    return GrothendieckWeight(fan, values, rational)


def chow_transform(g, rr):
    """h(gamma) = sum_{gamma <= zeta} nu_gamma(zeta) g(zeta): the class of
    g on the cycle side, one value per cone."""
    fan = rr.fan
    return {gamma: sum(rr.nu_of(gamma, zeta) * g[zeta]
                       for zeta in fan.cones_containing(gamma))
            for gamma in fan.cones}


def filtration_level(g):
    """Largest k with g vanishing on all cones of codimension < k; the
    zero weight sits at dim+1 by convention."""
    fan = g.fan
    for k in range(fan.dim + 1):
        if any(g[c] != 0 for c in fan.cones_of_codim(k)):
            return k
    return fan.dim + 1


def rr_inverse_image(g, rr, validate=True):
    """Peel g into Minkowski weights f_k with g = sum T(f_k)."""
    fan = rr.fan
    if validate and not is_grothendieck_weight(fan, g, rr=rr):
        raise NotAWeight("input fails the balancing relations")
    cur = {c: Fraction(g[c]) for c in fan.cones}
    comps = []
    while any(v != 0 for v in cur.values()):
        k = None
        for kk in range(fan.dim + 1):
            if any(cur[c] != 0 for c in fan.cones_of_codim(kk)):
                k = kk
                break
        level = {c: cur[c] for c in fan.cones_of_codim(k)}
        if any(v.denominator != 1 for v in level.values()):
            raise NotAWeight("non-integral component in the peeling")
        f = MinkowskiWeight(fan, k, {c: v.numerator for c, v in level.items()})
        if not is_minkowski_weight(fan, f):
            raise NotAWeight(f"level-{k} restriction is not balanced")
        comps.append(f)
        t = rr_map_T(f, rr)
        cur = {c: cur[c] - Fraction(t[c]) for c in fan.cones}
    return comps


def pullback_refinement(g, fine_fan, cone_map):
    """Pull a weight back along a subdivision: each new cone takes the
    value of the smallest old cone containing it."""
    values = {c: g[cone_map[c]] for c in fine_fan.cones}
    return GrothendieckWeight(fine_fan, values, getattr(g, "rational", False))


def pushforward_open(g, ambient):
    """Extend a weight on a subfan by zero into an ambient fan.

    Cones are matched through their ray vectors; every cone of the subfan
    must be a cone of the ambient fan."""
    sub = g.fan
    ray_map = {}
    for i, v in enumerate(sub.rays):
        if v not in ambient.rays:
            raise fanmod.FanError(f"subfan ray {v} missing from ambient fan")
        ray_map[i] = ambient.rays.index(v)
    values = {}
    for c in sub.cones:
        img = tuple(sorted(ray_map[i] for i in c))
        if not ambient.has_cone(img):
            raise fanmod.FanError(f"subfan cone {c} is not a cone of the ambient fan")
        values[img] = g[c]
    return make_gw(ambient, values, getattr(g, "rational", False))


def lift_minkowski(f, rr):
    """Search for an integer Grothendieck weight vanishing in codimension
    < k and restricting to f on codimension k.

    Returns (weight, None) on success and (None, obstruction) otherwise;
    the obstruction certifies integral non-solvability of the balancing
    system (it is always solvable rationally)."""
    fan = rr.fan
    k = f.codim
    fixed = {}
    for c in fan.cones:
        kk = fan.codim(c)
        if kk < k:
            fixed[c] = 0
        elif kk == k:
            fixed[c] = f[c]
    unknowns = [c for c in fan.cones if fan.codim(c) > k]
    rows = gw_relation_rows(fan, rr)
    A, b = [], []
    for _, _, row in rows:
        denom = 1
        for coeff in row.values():
            denom = lcm(denom, coeff.denominator)
        arow = [int(row.get(c, Fraction(0)) * denom) for c in unknowns]
        rhs = -sum(row.get(c, Fraction(0)) * v for c, v in fixed.items()) * denom
        assert rhs.denominator == 1
        A.append(arow)
        b.append(rhs.numerator)
    if not unknowns:
        ok = all(x == 0 for x in b)
        return (make_gw(fan, fixed), None) if ok else (None, ("rational", None))
    x, _, obstruction = linalg.integral_solve(A, b)
    if x is None:
        return None, obstruction
    values = dict(fixed)
    values.update({c: v for c, v in zip(unknowns, x)})
    return make_gw(fan, values), None
