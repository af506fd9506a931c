"""Fan displacement coefficients and products of weights.

The displacement coefficient of a cone pair is the lattice index
[N : N^gamma + N^eps] when gamma meets the translate eps + v, else zero;
genericity of v is validated by checking that every nonempty recorded
intersection is transversal (dimension dim gamma + dim eps - n)."""

from dataclasses import dataclass
from fractions import Fraction

from . import fan as fanmod
from . import linalg, lp
from .seeds import rng
from .weights import (GrothendieckWeight, MinkowskiWeight, chow_transform,
                      is_grothendieck_weight, make_gw, NotAWeight)


class NonGenericVector(ValueError):
    pass


def cone_meets_translate(fan, gamma, eps, v):
    """Exact feasibility of gamma meeting eps + v, with the dimension of
    the intersection when nonempty."""
    gv = fan.ray_vectors(gamma)
    ev = fan.ray_vectors(eps)
    n = fan.dim
    if not gv and not ev:
        ok = all(x == 0 for x in v)
        return ok, (0 if ok else None)
    A = [[vec[i] for vec in gv] + [-vec[i] for vec in ev] for i in range(n)]
    b = list(v)
    d = lp.polyhedron_dim(A, b)
    if d is None:
        return False, None
    return True, d


def _saturation_rows(fan, cone):
    if not cone:
        return []
    sat, _, _ = linalg.saturation_data([list(u) for u in fan.ray_vectors(cone)])
    return [list(r) for r in sat]


def _pair_index(fan, gamma, eps):
    rows = _saturation_rows(fan, gamma) + _saturation_rows(fan, eps)
    if linalg.rank(rows) != fan.dim:
        raise NonGenericVector(
            f"spans of {gamma} and {eps} do not fill the lattice")
    H, _ = linalg.hermite_normal_form(rows)
    H = [r for r in H if any(x != 0 for x in r)]
    return linalg.lattice_index(H)


def pairs_for_cone(fan, beta):
    """Cone pairs (gamma, eps) containing beta with complementary
    codimensions relative to beta."""
    target = fan.codim(beta)
    ups = fan.cones_containing(beta)
    out = []
    for gamma in ups:
        for eps in ups:
            if fan.codim(gamma) + fan.codim(eps) == target:
                out.append((gamma, eps))
    return out


@dataclass
class DisplacementData:
    fan: object
    v: tuple
    seed: object
    table: dict  # (gamma, eps) -> m, nonzero entries only

    def m(self, gamma, eps):
        return self.table.get((tuple(gamma), tuple(eps)), 0)


def displacement_table(fan, v, seed=None):
    """All displacement coefficients needed for products on this fan.

    Raises NonGenericVector when some nonempty intersection fails the
    transversality bound."""
    v = tuple(v)
    needed = set()
    for beta in fan.cones:
        needed.update(pairs_for_cone(fan, beta))
    table = {}
    n = fan.dim
    for gamma, eps in sorted(needed):
        meets, d = cone_meets_translate(fan, gamma, eps, v)
        if not meets:
            continue
        expected = fan.cone_dim(gamma) + fan.cone_dim(eps) - n
        if d != expected:
            raise NonGenericVector(
                f"{gamma} meets {eps}+v in dimension {d}, expected {expected}")
        table[(gamma, eps)] = _pair_index(fan, gamma, eps)
    return DisplacementData(fan, v, seed, table)


def fan_displacement_coeffs(fan, beta, v):
    """The per-cone coefficient table (gamma, eps) -> m for a fixed beta."""
    disp = displacement_table(fan, v) if not isinstance(v, DisplacementData) else v
    out = {}
    for gamma, eps in pairs_for_cone(fan, beta):
        m = disp.m(gamma, eps)
        if m:
            out[(gamma, eps)] = m
    return out


def sample_displacement(fan, seed, bound=101, max_tries=64):
    for attempt in range(max_tries):
        r = rng(seed, "displacement", attempt)
        v = tuple(r.randint(-bound, bound) for _ in range(fan.dim))
        if all(x == 0 for x in v):
            continue
        try:
            return displacement_table(fan, v, seed)
        except NonGenericVector:
            continue
    raise NonGenericVector(f"no generic displacement found from seed {seed}")


def gw_product(g1, g2, rr, disp, validate=True):
    """Product of Grothendieck weights by the displacement rule.

    g3(alpha) = sum_beta mu_alpha(beta) sum_{gamma,eps} m^beta_{gamma,eps}
                h1(gamma) h2(eps),
    where h is the cycle-side transform of each input."""
    fan = rr.fan
    if validate:
        for g in (g1, g2):
            if not is_grothendieck_weight(fan, g, rr=rr):
                raise NotAWeight("product input fails the balancing relations")
    h1 = chow_transform(g1, rr)
    h2 = chow_transform(g2, rr)
    inner = {}
    for beta in fan.cones:
        s = Fraction(0)
        for gamma, eps in pairs_for_cone(fan, beta):
            m = disp.m(gamma, eps)
            if m:
                s += m * h1[gamma] * h2[eps]
        inner[beta] = s
    values = {}
    rational = getattr(g1, "rational", False) or getattr(g2, "rational", False)
    for alpha in fan.cones:
        s = Fraction(0)
        for beta in fan.cones_containing(alpha):
            mu = rr.mu_of(alpha, beta)
            if mu != 0:
                s += mu * inner[beta]
        values[alpha] = s
    if not rational:
        for c, val in values.items():
            if val.denominator != 1:
                raise NotAWeight(f"non-integral product value {val} at {c}")
    return make_gw(fan, values, rational)


def gw_product_at(g1, g2, rr, disp, alpha):
    """Single value of the product weight at one cone (no global pass)."""
    fan = rr.fan
    h1 = chow_transform(g1, rr)
    h2 = chow_transform(g2, rr)
    s = Fraction(0)
    for beta in fan.cones_containing(alpha):
        mu = rr.mu_of(alpha, beta)
        if mu == 0:
            continue
        t = Fraction(0)
        for gamma, eps in pairs_for_cone(fan, beta):
            m = disp.m(gamma, eps)
            if m:
                t += m * h1[gamma] * h2[eps]
        s += mu * t
    return s


def mw_product(f1, f2, disp):
    """Cup product of Minkowski weights by the displacement rule."""
    fan = disp.fan
    k = f1.codim + f2.codim
    if k > fan.dim:
        return MinkowskiWeight(fan, k, {})
    values = {}
    for gamma in fan.cones_of_codim(k):
        s = 0
        for c1, c2 in pairs_for_cone(fan, gamma):
            if fan.codim(c1) != f1.codim or fan.codim(c2) != f2.codim:
                continue
            m = disp.m(c1, c2)
            if m:
                s += m * f1[c1] * f2[c2]
        values[gamma] = s
    return MinkowskiWeight(fan, k, values)
