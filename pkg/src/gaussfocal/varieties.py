"""Example varieties: matrix rank loci, a line family in P^6, and the
27-coordinate cubic of 3x3 Hermitian matrices over split octonions.

A variety is presented by black-box generator programs plus a point
sampler.  Rank loci of symmetric/generic/skew matrices are cut out by
minors or sub-Pfaffians and sampled through explicit low-rank sums whose
summands are retained as witnesses.  Dimensions are always measured, not
assumed: the Jacobian of the generators at sampled smooth points.
"""

from __future__ import annotations

from itertools import combinations

from .fieldcore import DualFp, mat_rank
from .mpoly import ProgramBuilder, SparsePoly, restrict_to_line, up_roots


class RankDeficientSample(RuntimeError):
    """Sampler exhausted its retries without hitting the target stratum."""


class InconsistentDim(RuntimeError):
    """Jacobian-rank dimension probes disagreed across samples."""


class DegenerateSurface(RuntimeError):
    """Random surfaces for the line family failed the genericity check."""


class MatrixShape:
    """Coordinate layout for symmetric / generic / skew matrices of variables."""

    __slots__ = ("kind", "nrows", "ncols")

    def __init__(self, kind: str, nrows: int, ncols: int):
        self.kind = kind
        self.nrows = nrows
        self.ncols = ncols

    @classmethod
    def symmetric(cls, n: int) -> "MatrixShape":
        return cls("symmetric", n, n)

    @classmethod
    def generic(cls, nrows: int, ncols: int) -> "MatrixShape":
        return cls("generic", nrows, ncols)

    @classmethod
    def skew(cls, n: int) -> "MatrixShape":
        return cls("skew", n, n)

    @property
    def num_vars(self) -> int:
        n = self.nrows
        if self.kind == "symmetric":
            return n * (n + 1) // 2
        if self.kind == "skew":
            return n * (n - 1) // 2
        return self.nrows * self.ncols

    @property
    def ambient_dim(self) -> int:
        return self.num_vars - 1

    def var_index(self, i: int, j: int) -> int:
        """Flat coordinate index of entry (i, j); canonical upper half for
        symmetric/skew."""
        n = self.nrows
        if self.kind == "generic":
            return i * self.ncols + j
        if self.kind == "symmetric":
            if i > j:
                i, j = j, i
            return i * n - i * (i - 1) // 2 + (j - i)
        if i > j:
            i, j = j, i
        return i * n - i * (i + 1) // 2 + (j - i - 1)

    def entry_expr(self, b: ProgramBuilder, i: int, j: int):
        if self.kind == "skew":
            if i == j:
                return b.c(0)
            if i > j:
                return -b.x(self.var_index(i, j))
        return b.x(self.var_index(i, j))

    def to_matrix(self, coords, p: int):
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i in range(self.nrows):
            for j in range(self.ncols):
                if self.kind == "skew":
                    if i == j:
                        continue
                    v = coords[self.var_index(i, j)]
                    out[i][j] = v if i < j else -v % p
                else:
                    out[i][j] = coords[self.var_index(i, j)]
        return out

    def from_matrix(self, mat, p: int):
        coords = [0] * self.num_vars
        for i in range(self.nrows):
            for j in range(self.ncols):
                if self.kind == "generic" or (self.kind == "symmetric" and i <= j) \
                        or (self.kind == "skew" and i < j):
                    coords[self.var_index(i, j)] = mat[i][j] % p
        return coords


def rank_locus_generators(shape: MatrixShape, rank_bound: int):
    """Programs cutting out {rank <= rank_bound}: minors of order
    rank_bound+1, or sub-Pfaffians of the next even order for skew."""
    if rank_bound < 1:
        raise ValueError("rank bound must be at least 1")
    progs = []
    if shape.kind == "skew":
        size = rank_bound + 2 + (rank_bound % 2)
        if size > shape.nrows:
            return []
        for sub in combinations(range(shape.nrows), size):
            b = ProgramBuilder(shape.num_vars)
            upper = [[shape.entry_expr(b, sub[i], sub[j])
                      for j in range(i + 1, size)] for i in range(size - 1)]
            progs.append(b.build(b.pf(upper)))
        return progs
    size = rank_bound + 1
    if size > min(shape.nrows, shape.ncols):
        return []
    rows_iter = list(combinations(range(shape.nrows), size))
    cols_iter = list(combinations(range(shape.ncols), size))
    for ri in rows_iter:
        for ci in cols_iter:
            if shape.kind == "symmetric" and ri > ci:
                continue  # minor(I,J) = minor(J,I)
            b = ProgramBuilder(shape.num_vars)
            grid = [[shape.entry_expr(b, i, j) for j in ci] for i in ri]
            progs.append(b.build(b.det(grid)))
    return progs


class WitnessPoint:
    __slots__ = ("coords", "witnesses")

    def __init__(self, coords, witnesses=None):
        self.coords = coords
        self.witnesses = witnesses


def sample_rank_point(shape: MatrixShape, rank_bound: int, rng, fp) -> WitnessPoint:
    """A random matrix of exact rank ``rank_bound`` as a sum of rank-one
    (or rank-two, skew) summands; the summand coordinates are kept."""
    p = fp.p
    n, m = shape.nrows, shape.ncols
    if shape.kind == "skew" and rank_bound % 2:
        raise ValueError("skew matrices have even rank")
    for _ in range(16):
        summands = []
        if shape.kind == "symmetric":
            for _ in range(rank_bound):
                v = [rng.field(p) for _ in range(n)]
                summands.append([[v[i] * v[j] % p for j in range(n)] for i in range(n)])
        elif shape.kind == "generic":
            for _ in range(rank_bound):
                u = [rng.field(p) for _ in range(n)]
                v = [rng.field(p) for _ in range(m)]
                summands.append([[u[i] * v[j] % p for j in range(m)] for i in range(n)])
        else:
            for _ in range(rank_bound // 2):
                u = [rng.field(p) for _ in range(n)]
                v = [rng.field(p) for _ in range(n)]
                summands.append([[(u[i] * v[j] - v[i] * u[j]) % p
                                  for j in range(n)] for i in range(n)])
        total = [[0] * m for _ in range(n)]
        for s in summands:
            for i in range(n):
                for j in range(m):
                    total[i][j] = (total[i][j] + s[i][j]) % p
        if mat_rank(total, fp) != rank_bound:
            continue
        coords = shape.from_matrix(total, p)
        if any(coords):
            return WitnessPoint(coords, [shape.from_matrix(s, p) for s in summands])
    raise RankDeficientSample(
        f"no exact rank-{rank_bound} sample for {shape.kind}({n},{m})")


class VarietySpec:
    """A variety given by generator programs, with an optional descriptor
    of its singular locus (itself a VarietySpec) and a smooth-point sampler."""

    __slots__ = ("name", "ambient_dim", "generators", "singular", "sampler")

    def __init__(self, name, ambient_dim, generators, singular, sampler):
        self.name = name
        self.ambient_dim = ambient_dim
        self.generators = generators
        self.singular = singular
        self.sampler = sampler


def rank_locus_spec(shape: MatrixShape, rank_bound: int, name=None) -> VarietySpec:
    gens = rank_locus_generators(shape, rank_bound)
    if not gens:
        raise ValueError("rank bound does not constrain this shape")
    # the singular locus of a rank locus is the next-lower rank stratum;
    # skew ranks are even, so "next lower" drops by two there
    sing_rb = rank_bound - (2 if shape.kind == "skew" else 1)
    singular = rank_locus_spec(shape, sing_rb) if sing_rb >= 1 else None
    if name is None:
        name = f"{shape.kind}-{shape.nrows}x{shape.ncols}-rank{rank_bound}"

    def sampler(rng, fp):
        return sample_rank_point(shape, rank_bound, rng, fp)

    return VarietySpec(name, shape.ambient_dim, gens, singular, sampler)


def variety_dim(spec: VarietySpec, fp, rng, trials: int = 5) -> int:
    """Projective dimension via Jacobian rank at sampled points; all
    trials must agree."""
    dims = set()
    for _ in range(trials):
        pt = spec.sampler(rng, fp)
        jac = [g.grad(pt.coords, fp) for g in spec.generators]
        dims.add(spec.ambient_dim - mat_rank(jac, fp))
    if len(dims) != 1:
        raise InconsistentDim(f"{spec.name}: dimension probes gave {sorted(dims)}")
    return dims.pop()


# --- a 4-parameter family of lines in P^6 --------------------------------------


class HyperbandFamily:
    """Lines spanned by a moving surface point and a direction inside the
    3-space spanned by its tangent plane and a second surface point.

    Parameters: (a, b) locate the point on the first surface (affine chart
    of the plane), (v1, v2) pick the direction.  Everything evaluates over
    dual rings, so the family differentiates exactly.
    """

    __slots__ = ("quads_x", "quads_s", "dx1", "dx2", "center", "fp")

    def __init__(self, quads_x, quads_s, center, fp):
        self.quads_x = quads_x
        self.quads_s = quads_s
        self.dx1 = [q.partial(0) for q in quads_x]
        self.dx2 = [q.partial(1) for q in quads_x]
        self.center = center
        self.fp = fp

    def surface_point(self, a, b, ring):
        u = (a, b, ring.one)
        return [q.eval(u, ring) for q in self.quads_x]

    def span_frame(self, uparams, ring):
        a, b = uparams
        u = (a, b, ring.one)
        x = [q.eval(u, ring) for q in self.quads_x]
        d1 = [q.eval(u, ring) for q in self.dx1]
        d2 = [q.eval(u, ring) for q in self.dx2]
        s = [q.eval(u, ring) for q in self.quads_s]
        return [x, d1, d2, s]

    def chart_matrix(self, params, ring):
        a, b, v1, v2 = params
        x, d1, d2, s = self.span_frame((a, b), ring)
        row2 = [ring.add(ring.add(c1, ring.mul(v1, c2)), ring.mul(v2, c3))
                for c1, c2, c3 in zip(d1, d2, s)]
        return [x, row2]

    def predictor(self):
        """The marked surface point of the center line (the expected focus)."""
        a, b = self.center[:2]
        return self.surface_point(a, b, self.fp)


def _random_quadric(rng, p):
    exps = [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]
    return SparsePoly(3, {e: rng.field(p) for e in exps})


def hyperband_family(rng, fp) -> HyperbandFamily:
    for _ in range(16):
        quads_x = [_random_quadric(rng, fp.p) for _ in range(7)]
        quads_s = [_random_quadric(rng, fp.p) for _ in range(7)]
        center = tuple(rng.field(fp.p) for _ in range(4))
        fam = HyperbandFamily(quads_x, quads_s, center, fp)
        if mat_rank(fam.span_frame(center[:2], fp), fp) != 4:
            continue
        if mat_rank(fam.chart_matrix(center, fp), fp) != 2:
            continue
        return fam
    raise DegenerateSurface("random quadric surfaces kept failing the span check")


def _map_jacobian_rank(func, arity, fp, rng):
    """Rank of the Jacobian of  func: F_p^arity -> F_p^out  at a random point."""
    ring = DualFp(fp.p)
    base = [rng.field(fp.p) for _ in range(arity)]
    rows = []
    for i in range(arity):
        pt = [ring.make(v, 1 if t == i else 0) for t, v in enumerate(base)]
        rows.append([s for _, s in func(pt, ring)])
    return mat_rank(rows, fp)


def hyperband_dims(fam: HyperbandFamily, fp, rng, trials: int = 3):
    """(dim of the swept 4-fold's ambient closure, dim of the base surface),
    measured as parametrization Jacobian ranks."""

    def sweep(args, ring):
        l0, l1, a, b, v1, v2 = args
        r0, r1 = fam.chart_matrix((a, b, v1, v2), ring)
        return [ring.add(ring.mul(l0, c0), ring.mul(l1, c1))
                for c0, c1 in zip(r0, r1)]

    def cone(args, ring):
        lam, a, b = args
        return [ring.mul(lam, c) for c in fam.surface_point(a, b, ring)]

    dims_x, dims_f = set(), set()
    for _ in range(trials):
        dims_x.add(_map_jacobian_rank(sweep, 6, fp, rng) - 1)
        dims_f.add(_map_jacobian_rank(cone, 3, fp, rng) - 1)
    if len(dims_x) != 1 or len(dims_f) != 1:
        raise InconsistentDim("family sweep ranks varied across probes")
    return dims_x.pop(), dims_f.pop()


# --- split octonions and the 27-coordinate cubic --------------------------------
#
# Octonions are held as 8 expressions (alpha, u1, u2, u3, beta, v1, v2, v3)
# in vector-matrix form; the product is the classical one with two cross
# products, giving a division-free integer formula.


def _cross(p, q):
    return [p[1] * q[2] - p[2] * q[1],
            p[2] * q[0] - p[0] * q[2],
            p[0] * q[1] - p[1] * q[0]]


def _oct_mul(z, w):
    za, zu, zb, zv = z[0], z[1:4], z[4], z[5:8]
    wa, wu, wb, wv = w[0], w[1:4], w[4], w[5:8]
    cross_v = _cross(zv, wv)
    cross_u = _cross(zu, wu)
    alpha = za * wa + zu[0] * wv[0] + zu[1] * wv[1] + zu[2] * wv[2]
    beta = zb * wb + zv[0] * wu[0] + zv[1] * wu[1] + zv[2] * wu[2]
    u = [za * wu[i] + wb * zu[i] - cross_v[i] for i in range(3)]
    v = [wa * zv[i] + zb * wv[i] + cross_u[i] for i in range(3)]
    return [alpha] + u + [beta] + v


def _oct_conj(z):
    return [z[4], -z[1], -z[2], -z[3], z[0], -z[5], -z[6], -z[7]]


def _oct_norm(z):
    return z[0] * z[4] - z[1] * z[5] - z[2] * z[6] - z[3] * z[7]


def _oct_trace(z):
    return z[0] + z[4]


def _hermitian_slots(b: ProgramBuilder):
    a, bb, c = b.x(0), b.x(1), b.x(2)
    x1 = [b.x(3 + i) for i in range(8)]
    x2 = [b.x(11 + i) for i in range(8)]
    x3 = [b.x(19 + i) for i in range(8)]
    return a, bb, c, x1, x2, x3


def _albert_norm_program():
    b = ProgramBuilder(27)
    a, bb, c, x1, x2, x3 = _hermitian_slots(b)
    t123 = _oct_trace(_oct_mul(_oct_mul(x1, x2), x3))
    n = (a * bb * c - a * _oct_norm(x1) - bb * _oct_norm(x2)
         - c * _oct_norm(x3) + t123)
    return b.build(n)


def _albert_adjoint_programs():
    """27 quadratic programs: the adjoint of a Hermitian 3x3 matrix, whose
    vanishing defines the 16-dimensional singular locus."""
    exprs = []
    b = ProgramBuilder(27)
    a, bb, c, x1, x2, x3 = _hermitian_slots(b)
    exprs.append(bb * c - _oct_norm(x1))
    exprs.append(c * a - _oct_norm(x2))
    exprs.append(a * bb - _oct_norm(x3))
    y1 = [t - a * s for t, s in zip(_oct_mul(_oct_conj(x3), _oct_conj(x2)), x1)]
    y2 = [t - bb * s for t, s in zip(_oct_mul(_oct_conj(x1), _oct_conj(x3)), x2)]
    y3 = [t - c * s for t, s in zip(_oct_mul(_oct_conj(x2), _oct_conj(x1)), x3)]
    exprs.extend(y1)
    exprs.extend(y2)
    exprs.extend(y3)
    return [b.build(e) for e in exprs]


def albert_cubic(name: str = "hermitian-octonion-cubic") -> VarietySpec:
    norm = _albert_norm_program()
    adj = _albert_adjoint_programs()

    def adjoint_coords(coords, fp):
        return [g.eval(coords, fp) for g in adj]

    def sample_singular(rng, fp):
        # a pencil meets the cubic in a root over F_p about 2/3 of the
        # time; the adjoint of the hit is a point of the singular locus
        for _ in range(32):
            a = [rng.field(fp.p) for _ in range(27)]
            d = [rng.field(fp.p) for _ in range(27)]
            roots = up_roots(restrict_to_line(norm, a, d, fp), fp, rng)
            if not roots:
                continue
            t = roots[0]
            x0 = [(av + t * dv) % fp.p for av, dv in zip(a, d)]
            e = adjoint_coords(x0, fp)
            if any(e):
                return e
        raise RankDeficientSample("no pencil root on the cubic")

    def sampler(rng, fp):
        for _ in range(16):
            e1 = sample_singular(rng, fp)
            e2 = sample_singular(rng, fp)
            coords = [(u + v) % fp.p for u, v in zip(e1, e2)]
            if not any(coords) or norm.eval(coords, fp) != 0:
                continue
            if any(norm.grad(coords, fp)):
                return WitnessPoint(coords, [e1, e2])
        raise RankDeficientSample("no smooth two-term sample on the cubic")

    singular = VarietySpec(name + "-singular", 26, adj, None,
                           lambda rng, fp: WitnessPoint(sample_singular(rng, fp)))
    return VarietySpec(name, 26, [norm], singular, sampler)
