"""Fans, cones, face lattices, multiplicities, star fans and resolutions.

Cones are identified by sorted tuples of ray indices; the empty tuple is
the zero cone.  Fans are immutable after validation and all queries are
pure.
"""

from fractions import Fraction
from itertools import combinations

from . import linalg, lp
from .seeds import rng


class FanError(ValueError):
    pass


class NotStronglyConvex(FanError):
    pass


class OverlappingCones(FanError):
    pass


class NotSimplicial(FanError):
    pass


class NotComplete(FanError):
    pass


class OutsideSupport(FanError):
    pass


class Fan:
    def __init__(self, dim, rays, cones, max_cones):
        self.dim = dim
        self.rays = tuple(tuple(v) for v in rays)
        self.cones = tuple(sorted(cones, key=lambda c: (len(c), c)))
        self.max_cones = tuple(sorted(max_cones))
        self._cone_set = frozenset(self.cones)
        self._dim_cache = {}
        self._mult_cache = {}
        self._flags = {}

    def __repr__(self):
        return (f"Fan(dim={self.dim}, rays={len(self.rays)}, "
                f"cones={len(self.cones)})")

    def ray_vectors(self, cone):
        return [self.rays[i] for i in cone]

    def has_cone(self, cone):
        return tuple(cone) in self._cone_set

    def cone_dim(self, cone):
        cone = tuple(cone)
        if cone not in self._dim_cache:
            self._dim_cache[cone] = linalg.rank([list(v) for v in self.ray_vectors(cone)])
        return self._dim_cache[cone]

    def codim(self, cone):
        return self.dim - self.cone_dim(cone)

    def cones_of_dim(self, d):
        return [c for c in self.cones if self.cone_dim(c) == d]

    def cones_of_codim(self, k):
        return self.cones_of_dim(self.dim - k)

    def faces_of(self, cone):
        cs = set(cone)
        return [c for c in self.cones if set(c) <= cs]

    def cones_containing(self, cone):
        cs = set(cone)
        return [c for c in self.cones if cs <= set(c)]

    def covers(self, cone):
        """Cones one dimension up containing `cone`."""
        d = self.cone_dim(cone)
        return [c for c in self.cones_containing(cone) if self.cone_dim(c) == d + 1]

    def is_simplicial_cone(self, cone):
        return self.cone_dim(cone) == len(cone)

    @property
    def is_simplicial(self):
        if "simplicial" not in self._flags:
            self._flags["simplicial"] = all(
                self.is_simplicial_cone(c) for c in self.max_cones)
        return self._flags["simplicial"]

    @property
    def is_smooth(self):
        if "smooth" not in self._flags:
            self._flags["smooth"] = self.is_simplicial and all(
                multiplicity(self, c) == 1 for c in self.max_cones)
        return self._flags["smooth"]

    @property
    def is_complete(self):
        if "complete" not in self._flags:
            self._flags["complete"] = self._completeness_check()
        return self._flags["complete"]

    def _completeness_check(self, samples=200, seed=0):
        top = self.cones_of_dim(self.dim)
        if not top:
            return False
        for c in self.cones_of_dim(self.dim - 1):
            if len([d for d in top if set(c) <= set(d)]) != 2:
                return False
        r = rng(seed, "completeness", self.rays)
        for _ in range(samples):
            p = [Fraction(r.randint(-10**6, 10**6), r.randint(1, 100)) for _ in range(self.dim)]
            try:
                containing_cone(self, p)
            except OutsideSupport:
                return False
        return True


def _cone_facets(ray_vectors):
    """Facets of cone(ray_vectors) as (normal, index subset) pairs.

    Brute-force over (d-1)-subsets of generators; adequate for cones with
    a handful of rays.
    """
    d = linalg.rank([list(v) for v in ray_vectors])
    n = len(ray_vectors[0])
    m = len(ray_vectors)
    if d == 0:
        return []
    facets = {}
    for subset in combinations(range(m), d - 1):
        sub = [list(ray_vectors[i]) for i in subset]
        if linalg.rank(sub) != d - 1:
            continue
        # forms vanishing on subset, restricted to span of the cone
        forms = linalg.rational_kernel(sub) if sub else [
            tuple(Fraction(1) if j == i else Fraction(0) for j in range(n)) for i in range(n)]
        # intersect with forms not vanishing identically on the cone span:
        for u in _facet_normal_candidates(forms, ray_vectors):
            vals = [sum(a * b for a, b in zip(u, v)) for v in ray_vectors]
            if all(x >= 0 for x in vals):
                pass
            elif all(x <= 0 for x in vals):
                u = tuple(-x for x in u)
                vals = [-x for x in vals]
            else:
                continue
            idx = frozenset(i for i, x in enumerate(vals) if x == 0)
            sub_rank = linalg.rank([list(ray_vectors[i]) for i in idx]) if idx else 0
            if sub_rank == d - 1:
                facets[idx] = u
    return [(u, idx) for idx, u in facets.items()]


def _facet_normal_candidates(forms, ray_vectors):
    # candidate normals: elements of the kernel space that do not vanish on
    # the whole cone; for a (d-1)-rank subset inside a d-dim span the
    # useful direction is unique modulo forms vanishing on all rays.
    out = []
    for u in forms:
        vals = [sum(a * b for a, b in zip(u, v)) for v in ray_vectors]
        if any(x != 0 for x in vals):
            out.append(tuple(u))
    return out


def _cone_face_index_sets(ray_vectors):
    """All faces of cone(ray_vectors), as frozensets of generator indices.

    Includes the cone itself and the empty face.
    """
    m = len(ray_vectors)
    full = frozenset(range(m))
    faces = {full, frozenset()}
    stack = [full]
    while stack:
        cur = stack.pop()
        cur_rays = [ray_vectors[i] for i in sorted(cur)]
        if not cur_rays:
            continue
        for u, idx_local in _cone_facets(cur_rays):
            idx = frozenset(sorted(cur)[i] for i in idx_local)
            if idx not in faces:
                faces.add(idx)
                stack.append(idx)
    return faces


def _contains_line(ray_vectors):
    A = [[v[i] for v in ray_vectors] for i in range(len(ray_vectors[0]))]
    for v in ray_vectors:
        target = [-x for x in v]
        if lp.nonneg_solutions_feasible(A, target):
            return True
    return False


def validate_fan(dim, rays, max_cones, *, seed=0, check_overlaps=True):
    """Build a Fan from rays and maximal cones.

    Face-closes the cone set, canonicalizes ray order and checks basic fan
    validity: rays primitive and distinct, cones strongly convex, pairwise
    intersections in common faces (exactly for simplicial pairs, by seeded
    sampling otherwise).
    """
    rays = [tuple(int(x) for x in v) for v in rays]
    for v in rays:
        if len(v) != dim:
            raise FanError(f"ray {v} has wrong dimension")
        if all(x == 0 for x in v):
            raise NotStronglyConvex("zero vector is not a ray")
        if linalg.primitivize(v) != v:
            raise FanError(f"ray {v} is not primitive")
    if len(set(rays)) != len(rays):
        raise NotStronglyConvex("duplicate rays")

    order = sorted(range(len(rays)), key=lambda i: rays[i])
    new_index = {old: new for new, old in enumerate(order)}
    sorted_rays = [rays[i] for i in order]
    maxes = [tuple(sorted(new_index[i] for i in c)) for c in max_cones]
    if len(set(maxes)) != len(maxes):
        raise FanError("duplicate maximal cones")

    cones = set()
    for c in maxes:
        vecs = [sorted_rays[i] for i in c]
        r = linalg.rank([list(v) for v in vecs])
        if r == len(vecs):
            for k in range(len(c) + 1):
                for sub in combinations(c, k):
                    cones.add(tuple(sub))
        else:
            if _contains_line(vecs):
                raise NotStronglyConvex(f"cone {c} contains a line")
            for idx in _cone_face_index_sets(vecs):
                cones.add(tuple(sorted(c[i] for i in idx)))

    used = {i for c in maxes for i in c}
    for i in range(len(sorted_rays)):
        if i not in used and (i,) not in cones:
            raise FanError(f"ray index {i} not used by any cone")

    fan = Fan(dim, sorted_rays, cones, maxes)
    if check_overlaps:
        _check_pairwise(fan, seed)
    return fan


def _check_pairwise(fan, seed):
    maxes = fan.max_cones
    for a, b in combinations(maxes, 2):
        shared = tuple(sorted(set(a) & set(b)))
        if not fan.has_cone(shared):
            raise OverlappingCones(f"{a} and {b} meet outside a common face")
        if fan.is_simplicial_cone(a) and fan.is_simplicial_cone(b):
            d = _intersection_dim(fan, a, b)
            if d != fan.cone_dim(shared):
                raise OverlappingCones(
                    f"cones {a} and {b} intersect in dimension {d}, "
                    f"shared face has dimension {fan.cone_dim(shared)}")
        else:
            _sampled_overlap_check(fan, a, b, shared, seed)


def _intersection_dim(fan, a, b):
    va = fan.ray_vectors(a)
    vb = fan.ray_vectors(b)
    n = fan.dim
    cols = len(va) + len(vb)
    A = [[va[j][i] for j in range(len(va))] + [-vb[j][i] for j in range(len(vb))]
         for i in range(n)]
    dim_pairs = lp.polyhedron_dim(A, [0] * n)
    if dim_pairs is None:
        return 0
    # (lam, mu) <-> x is injective on the solution set for simplicial cones
    return dim_pairs


def _sampled_overlap_check(fan, a, b, shared, seed, samples=40):
    r = rng(seed, "overlap", a, b)
    for cone in (a, b):
        other = b if cone is a else a
        vecs = fan.ray_vectors(cone)
        for _ in range(samples):
            coeffs = [Fraction(r.randint(1, 50), r.randint(1, 7)) for _ in vecs]
            p = [sum(c * v[i] for c, v in zip(coeffs, vecs)) for i in range(fan.dim)]
            if _point_in_cone(fan, other, p) and not _point_in_cone(fan, shared, p):
                raise OverlappingCones(f"{a} and {b} overlap beyond {shared}")


def _point_in_cone(fan, cone, p):
    if not cone:
        return all(x == 0 for x in p)
    vecs = fan.ray_vectors(cone)
    A = [[v[i] for v in vecs] for i in range(fan.dim)]
    if fan.is_simplicial_cone(cone):
        x, _ = linalg.solve_rational(A, p)
        return x is not None and all(c >= 0 for c in x)
    return lp.nonneg_solutions_feasible(A, p)


def multiplicity(fan, cone):
    """Index of the subgroup generated by the primitive ray generators in
    the lattice spanned by the cone; 1 means smooth."""
    cone = tuple(cone)
    if cone == ():
        return 1
    if cone not in fan._mult_cache:
        try:
            fan._mult_cache[cone] = linalg.lattice_index(
                [list(v) for v in fan.ray_vectors(cone)])
        except linalg.DependentRows:
            raise NotSimplicial(f"cone {cone} is not simplicial")
    return fan._mult_cache[cone]


def relative_multiplicity(fan, alpha, beta):
    """mult_alpha(beta) = mult(beta) * prod mult(alpha)/mult(alpha+rho)
    over the rays added between alpha and beta (statement for proper
    faces; for alpha == beta the value is 1)."""
    alpha, beta = tuple(alpha), tuple(beta)
    if not set(alpha) <= set(beta):
        raise FanError("alpha is not a face of beta")
    if alpha == beta:
        return Fraction(1)
    out = Fraction(multiplicity(fan, beta))
    ma = multiplicity(fan, alpha)
    for rho in beta:
        if rho not in alpha:
            out *= Fraction(ma, multiplicity(fan, tuple(sorted(alpha + (rho,)))))
    return out


def relative_multiplicity_direct(fan, alpha, beta):
    """Relative multiplicity computed in the quotient lattice (the oracle
    for the product formula above)."""
    star = star_fan(fan, alpha)
    imgs = [list(star.ray_images[r][0]) for r in beta if r not in alpha]
    if not imgs:
        return 1
    return linalg.lattice_index(imgs)


class StarFan:
    """Quotient data for the cones containing a fixed cone alpha.

    proj maps N to the quotient lattice N_alpha (x |-> x @ proj);
    ray_images[r] = (primitive image, scale) with proj(v_r) = scale * image.
    """

    def __init__(self, fan, alpha):
        self.base = fan
        self.alpha = tuple(alpha)
        n = fan.dim
        if self.alpha:
            rows = [list(fan.rays[i]) for i in self.alpha]
            sat, proj, lift = linalg.saturation_data(rows)
            self.dim = n - len(sat)
            self.proj = proj  # n x dim, acts on row vectors from the right
            self.lift = lift  # dim x n rows
        else:
            self.dim = n
            self.proj = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
            self.lift = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
        self.ray_images = {}
        for c in fan.cones_containing(self.alpha):
            for r in c:
                if r not in self.alpha and r not in self.ray_images:
                    img = self.project(fan.rays[r])
                    if all(x == 0 for x in img):
                        raise FanError("ray collapses in the quotient")
                    prim = linalg.primitivize(img)
                    scale = next(a // b for a, b in zip(img, prim) if b != 0)
                    self.ray_images[r] = (prim, scale)

    def project(self, vec):
        return tuple(sum(vec[i] * self.proj[i][j] for i in range(len(vec)))
                     for j in range(self.dim))

    def lift_vec(self, star_vec):
        n = self.base.dim
        return tuple(sum(star_vec[j] * self.lift[j][i] for j in range(self.dim))
                     for i in range(n))

    def primitive_cover_vector(self, beta):
        """v_{beta,alpha} for a cover beta of alpha (one added ray)."""
        added = [r for r in beta if r not in self.alpha]
        if len(added) != 1:
            raise FanError("not a cover")
        return self.ray_images[added[0]][0]

    def as_fan(self):
        """The star fan as a Fan in the quotient lattice, plus index maps."""
        ray_list = []
        ray_of_base = {}
        for r, (prim, _) in sorted(self.ray_images.items()):
            if prim not in ray_list:
                ray_list.append(prim)
            ray_of_base[r] = ray_list.index(prim)
        maxes = set()
        for c in self.base.cones_containing(self.alpha):
            if self.base.cone_dim(c) == self.base.dim:
                maxes.add(tuple(sorted({ray_of_base[r] for r in c if r not in self.alpha})))
        star = validate_fan(self.dim, ray_list, sorted(maxes), check_overlaps=False)
        # re-map indices after canonical ray sorting inside validate_fan
        remap = {i: star.rays.index(tuple(v)) for i, v in enumerate(ray_list)}
        ray_of_base = {r: remap[i] for r, i in ray_of_base.items()}
        return star, ray_of_base

    def image_cone(self, beta, ray_of_base):
        return tuple(sorted(ray_of_base[r] for r in beta if r not in self.alpha))


def star_fan(fan, alpha):
    return StarFan(fan, alpha)


def pairing(u, star, star_vec):
    """<u, v> for u in the dual lattice of alpha-perp and v in N_alpha."""
    lifted = star.lift_vec(star_vec)
    return sum(a * b for a, b in zip(u, lifted))


def dual_basis_of_cone(fan, alpha):
    """Integer basis of M_alpha = alpha-perp, HNF-reduced, pivots positive."""
    if not alpha:
        n = fan.dim
        return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    rows = [list(fan.rays[i]) for i in alpha]
    basis = linalg.integer_kernel(rows)
    if not basis:
        return []
    H, _ = linalg.hermite_normal_form([list(u) for u in basis])
    out = [tuple(r) for r in H if any(x != 0 for x in r)]
    return out


def containing_cone(fan, point):
    """Smallest cone whose relative interior contains the rational point."""
    p = [Fraction(x) for x in point]
    if all(x == 0 for x in p):
        return ()
    for sigma in fan.max_cones:
        vecs = fan.ray_vectors(sigma)
        A = [[v[i] for v in vecs] for i in range(fan.dim)]
        if fan.is_simplicial_cone(sigma):
            x, _ = linalg.solve_rational(A, p)
            if x is not None and all(c >= 0 for c in x):
                face = tuple(sorted(sigma[i] for i, c in enumerate(x) if c > 0))
                return face
        else:
            if lp.nonneg_solutions_feasible(A, p):
                # smallest face: restrict to faces and recurse
                best = sigma
                improved = True
                while improved:
                    improved = False
                    for f in fan.faces_of(best):
                        if f != best and len(f) < len(best) and _point_in_cone(fan, f, p):
                            best = f
                            improved = True
                            break
                return best
    raise OutsideSupport(f"point {point} lies outside the fan support")


def _fan_from_simplicial(dim, rays, max_cones):
    max_cones = sorted(set(tuple(c) for c in max_cones))
    cones = set()
    for c in max_cones:
        for k in range(len(c) + 1):
            cones.update(combinations(c, k))
    return Fan(dim, rays, cones, max_cones)


def parallelepiped_witness(fan, cone):
    """A primitive lattice point in the half-open parallelepiped of a
    non-unimodular simplicial cone, minimizing the coefficient sum."""
    vecs = [list(v) for v in fan.ray_vectors(cone)]
    k = len(vecs)
    sat, _, _ = linalg.saturation_data(vecs)
    # coordinates of the rays in the saturation basis
    M = []
    for v in vecs:
        coords, _ = linalg.solve_rational([list(col) for col in zip(*sat)], v)
        assert all(c.denominator == 1 for c in coords)
        M.append([c.numerator for c in coords])
    U, S, V, Vinv = linalg.smith_with_vinv(M)
    ds = [S[i][i] for i in range(k)]
    best = None
    def gen(i, cur):
        if i == k:
            yield tuple(cur)
            return
        for c in range(ds[i]):
            yield from gen(i + 1, cur + [c])
    A_rays = [[vecs[j][i] for j in range(k)] for i in range(fan.dim)]
    for coeffs in gen(0, []):
        if all(c == 0 for c in coeffs):
            continue
        g_sat = [sum(coeffs[i] * Vinv[i][j] for i in range(k)) for j in range(k)]
        x = [sum(g_sat[j] * sat[j][i] for j in range(k)) for i in range(fan.dim)]
        lam, _ = linalg.solve_rational(A_rays, x)
        frac = [l - (l.numerator // l.denominator) for l in lam]
        if all(f == 0 for f in frac):
            continue
        w = [int(x[i] - sum((lam[j] - frac[j]) * vecs[j][i] for j in range(k)))
             for i in range(fan.dim)]
        weight = sum(frac)
        key = (weight, tuple(w))
        if best is None or key < best[0]:
            best = (key, tuple(w))
    if best is None:
        return None
    return linalg.primitivize(best[1])


def stellar_subdivide(fan, w):
    """Subdivide every cone containing w at the new ray w (primitive)."""
    w = tuple(w)
    gamma = containing_cone(fan, w)
    if len(gamma) == 1 and fan.rays[gamma[0]] == w:
        return fan
    rays = list(fan.rays) + [w]
    widx = len(fan.rays)
    new_maxes = []
    for sigma in fan.max_cones:
        if not set(gamma) <= set(sigma):
            new_maxes.append(sigma)
            continue
        for g in gamma:
            new_maxes.append(tuple(sorted([r for r in sigma if r != g] + [widx])))
    return _fan_from_simplicial(fan.dim, rays, new_maxes)


def triangulate(fan):
    """Triangulation by pulling at the lexicographically-least ray of each
    non-simplicial cone; identity on simplicial fans.

    Returns (fan', cone_map) with cone_map sending each new cone to the
    smallest old cone containing it.
    """
    if fan.is_simplicial:
        return fan, {c: c for c in fan.cones}
    new_maxes = []
    for sigma in fan.max_cones:
        if fan.is_simplicial_cone(sigma):
            new_maxes.append(sigma)
        else:
            for simplex in _pulling_triangulation(fan, sigma):
                new_maxes.append(simplex)
    out = _fan_from_simplicial(fan.dim, fan.rays, sorted(set(new_maxes)))
    cmap = {}
    for c in out.cones:
        cmap[c] = _smallest_containing(fan, out, c)
    return out, cmap


def _pulling_triangulation(fan, cone):
    vecs = fan.ray_vectors(cone)
    local = _pull_simplices([tuple(v) for v in vecs])
    index_of = {tuple(v): i for i, v in zip(cone, vecs)}
    return [tuple(sorted(index_of[v] for v in simplex)) for simplex in local]


def _pull_simplices(vectors):
    d = linalg.rank([list(v) for v in vectors])
    if d == len(vectors):
        return [tuple(vectors)]
    pull = min(vectors)
    out = []
    for u, idx in _cone_facets(list(vectors)):
        fverts = [vectors[i] for i in sorted(idx)]
        if pull in fverts:
            continue
        for simplex in _pull_simplices(fverts):
            cand = tuple(sorted(set(simplex) | {pull}))
            if linalg.rank([list(v) for v in cand]) == len(cand):
                out.append(cand)
    return [tuple(s) for s in sorted(set(out))]


def _smallest_containing(coarse, fine, cone):
    if not cone:
        return ()
    vecs = fine.ray_vectors(cone)
    p = [sum(v[i] for v in vecs) for i in range(fine.dim)]
    return containing_cone(coarse, p)


def smooth_refine(fan):
    """Resolve to a smooth fan by repeated stellar subdivision.

    Non-simplicial fans are triangulated first.  Returns (fan', cone_map)
    where cone_map sends each new cone to the smallest original cone
    containing it.
    """
    original = fan
    work, _ = triangulate(fan)
    while True:
        bad = [c for c in work.max_cones if multiplicity(work, c) > 1]
        if not bad:
            break
        worst = max(bad, key=lambda c: (multiplicity(work, c), [-i for i in c]))
        w = parallelepiped_witness(work, worst)
        if w is None:
            raise FanError(f"no subdivision point found in {worst}")
        work = stellar_subdivide(work, w)
    cmap = {c: _smallest_containing(original, work, c) for c in work.cones}
    return work, cmap
