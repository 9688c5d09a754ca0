"""Exact arithmetic kernels: prime fields, dual numbers, and linear algebra.

Everything downstream works over F_p for a word-size prime p (default
range [2^60, 2^62)), or over the dual extension F_p[eps]/(eps^2) used for
exact first-order derivatives.  Field elements are plain Python integers
in [0, p); dual elements are tuples of integers.  The ring objects below
only hold the modulus and expose the operations, so vectors and matrices
stay ordinary lists and the hot loops avoid per-element object overhead.

Matrix routines use reduced row echelon form with unit pivots.  Over a
field every nonzero entry is a unit; over a dual ring a pivot must have a
nonzero unit part, and inputs whose rank drops on the unit parts raise
``DegeneratePivot`` so callers can resample.
"""

from __future__ import annotations


class ZeroInverse(ZeroDivisionError):
    """Inversion of zero (or of a non-unit dual number)."""


class DegeneratePivot(ArithmeticError):
    """Row reduction over a non-field ring hit a column with no unit pivot."""


class Infeasible(ValueError):
    """Right-hand side outside the column span of the system matrix."""


class DuplicateAbscissa(ValueError):
    """Interpolation nodes must be pairwise distinct."""


_M64 = (1 << 64) - 1


class Rng:
    """Deterministic 64-bit generator (splitmix64).

    A tiny explicit stream keeps runs byte-reproducible across Python
    versions, which the reporting layer relies on.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _M64

    def u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _M64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
        return (z ^ (z >> 31)) & _M64

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) without modulo bias."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        lim = _M64 + 1 - (_M64 + 1) % n
        while True:
            v = self.u64()
            if v < lim:
                return v % n

    def field(self, p: int) -> int:
        return self.below(p)

    def nonzero(self, p: int) -> int:
        return 1 + self.below(p - 1)

    def fork(self) -> "Rng":
        return Rng(self.u64() ^ 0x6A09E667F3BCC909)


def derive_seed(base: int, *indices: int) -> int:
    """Stable seed derivation; order-sensitive in the indices."""
    z = (base ^ 0xA5A5A5A55A5A5A5A) & _M64
    for v in indices:
        z = (z + 0x9E3779B97F4A7C15 * (v + 1)) & _M64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
        z ^= z >> 31
    return z & _M64


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; the fixed base set is deterministic below 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(rng: Rng, lo: int = 1 << 60, hi: int = 1 << 62) -> int:
    while True:
        n = lo + rng.below(hi - lo)
        n |= 1
        if n < hi and is_probable_prime(n):
            return n


class Fp:
    """The prime field F_p on plain integer residues."""

    __slots__ = ("p",)
    zero = 0
    one = 1

    def __init__(self, p: int):
        self.p = p

    def lift(self, a: int) -> int:
        return a % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroInverse("division by zero in F_p")
        return pow(a, -1, self.p)

    def is_zero(self, a) -> bool:
        return a == 0

    def is_unit(self, a) -> bool:
        return a != 0

    def unit_part(self, a) -> int:
        return a


class DualFp:
    """F_p[eps]/(eps^2) on integer pairs (unit, slope)."""

    __slots__ = ("p",)
    zero = (0, 0)
    one = (1, 0)
    eps = (0, 1)

    def __init__(self, p: int):
        self.p = p

    def one_plus_eps(self):
        return (1, 1)

    def lift(self, a: int):
        return (a % self.p, 0)

    def make(self, unit: int, slope: int):
        return (unit % self.p, slope % self.p)

    def add(self, a, b):
        p = self.p
        return ((a[0] + b[0]) % p, (a[1] + b[1]) % p)

    def sub(self, a, b):
        p = self.p
        return ((a[0] - b[0]) % p, (a[1] - b[1]) % p)

    def mul(self, a, b):
        p = self.p
        return (a[0] * b[0] % p, (a[0] * b[1] + a[1] * b[0]) % p)

    def neg(self, a):
        p = self.p
        return (-a[0] % p, -a[1] % p)

    def inv(self, a):
        if a[0] == 0:
            raise ZeroInverse("non-unit dual number")
        p = self.p
        i = pow(a[0], -1, p)
        return (i, -(i * i % p) * a[1] % p)

    def is_zero(self, a) -> bool:
        return a == (0, 0)

    def is_unit(self, a) -> bool:
        return a[0] != 0

    def unit_part(self, a) -> int:
        return a[0]


class Dual2Fp:
    """Second-order ring F_p[d, e]/(d^2, e^2) on flat 4-tuples.

    Element (a, b, c, t) stands for a + b*d + c*e + t*d*e.  This is the
    dual of the dual ring with both layers flattened; it carries the
    derivative-of-a-deformed-quantity computations in the chart builder.
    """

    __slots__ = ("p",)
    zero = (0, 0, 0, 0)
    one = (1, 0, 0, 0)
    eps = (0, 0, 1, 0)  # the *new* (inner) infinitesimal e

    def __init__(self, p: int):
        self.p = p

    def lift(self, a: int):
        return (a % self.p, 0, 0, 0)

    def from_dual(self, a):
        """Embed (unit, slope) from DualFp along the d-direction."""
        return (a[0], a[1], 0, 0)

    def to_dual_parts(self, a):
        """Split into unit and e-slope, both DualFp elements."""
        return (a[0], a[1]), (a[2], a[3])

    def add(self, a, b):
        p = self.p
        return ((a[0] + b[0]) % p, (a[1] + b[1]) % p,
                (a[2] + b[2]) % p, (a[3] + b[3]) % p)

    def sub(self, a, b):
        p = self.p
        return ((a[0] - b[0]) % p, (a[1] - b[1]) % p,
                (a[2] - b[2]) % p, (a[3] - b[3]) % p)

    def mul(self, a, b):
        p = self.p
        a0, a1, a2, a3 = a
        b0, b1, b2, b3 = b
        return (a0 * b0 % p,
                (a0 * b1 + a1 * b0) % p,
                (a0 * b2 + a2 * b0) % p,
                (a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0) % p)

    def neg(self, a):
        p = self.p
        return (-a[0] % p, -a[1] % p, -a[2] % p, -a[3] % p)

    def inv(self, a):
        if a[0] == 0:
            raise ZeroInverse("non-unit element")
        p = self.p
        a0, a1, a2, a3 = a
        i = pow(a0, -1, p)
        i2 = i * i % p
        return (i, -i2 * a1 % p, -i2 * a2 % p,
                (2 * a1 * a2 % p * i - a3) % p * i2 % p)

    def is_zero(self, a) -> bool:
        return a == (0, 0, 0, 0)

    def is_unit(self, a) -> bool:
        return a[0] != 0

    def unit_part(self, a) -> int:
        return a[0]


class DualRing:
    """Generic dual extension R[eps]/(eps^2) over an arbitrary base ring.

    Slower than the flattened rings above; kept as the reference
    implementation and for nesting depths the fast paths do not cover.
    """

    __slots__ = ("base", "zero", "one", "eps", "p")

    def __init__(self, base):
        self.base = base
        self.zero = (base.zero, base.zero)
        self.one = (base.one, base.zero)
        self.eps = (base.zero, base.one)
        self.p = base.p

    def lift(self, a: int):
        return (self.base.lift(a), self.base.zero)

    def add(self, a, b):
        return (self.base.add(a[0], b[0]), self.base.add(a[1], b[1]))

    def sub(self, a, b):
        return (self.base.sub(a[0], b[0]), self.base.sub(a[1], b[1]))

    def mul(self, a, b):
        bb = self.base
        return (bb.mul(a[0], b[0]),
                bb.add(bb.mul(a[0], b[1]), bb.mul(a[1], b[0])))

    def neg(self, a):
        return (self.base.neg(a[0]), self.base.neg(a[1]))

    def inv(self, a):
        bb = self.base
        i = bb.inv(a[0])
        return (i, bb.neg(bb.mul(bb.mul(i, i), a[1])))

    def is_zero(self, a) -> bool:
        return self.base.is_zero(a[0]) and self.base.is_zero(a[1])

    def is_unit(self, a) -> bool:
        return self.base.is_unit(a[0])

    def unit_part(self, a):
        return self.base.unit_part(a[0])


def dual_over(ring):
    """The dual extension of ``ring``, flattened where a fast path exists."""
    if isinstance(ring, Fp):
        return DualFp(ring.p)
    if isinstance(ring, DualFp):
        return Dual2Fp(ring.p)
    return DualRing(ring)


def dual_embed(ring, dual_ring, a):
    """Lift an element of ``ring`` into ``dual_ring`` with zero slope."""
    if isinstance(ring, Fp):
        return (a, 0)
    if isinstance(ring, DualFp):
        return (a[0], a[1], 0, 0)
    return (a, ring.zero)


def dual_parts(ring, a):
    """Split an element of dual_over(ring) into (unit, slope) over ring."""
    if isinstance(ring, Fp):
        return a[0], a[1]
    if isinstance(ring, DualFp):
        return (a[0], a[1]), (a[2], a[3])
    return a[0], a[1]


# --- vectors and matrices ---------------------------------------------------


def dot(u, v, ring):
    acc = ring.zero
    for a, b in zip(u, v):
        acc = ring.add(acc, ring.mul(a, b))
    return acc


def matvec(mat, v, ring):
    return [dot(row, v, ring) for row in mat]


def vecmat(v, mat, ring):
    ncols = len(mat[0])
    out = [ring.zero] * ncols
    for a, row in zip(v, mat):
        if ring.is_zero(a):
            continue
        for j in range(ncols):
            out[j] = ring.add(out[j], ring.mul(a, row[j]))
    return out


def matmul(a, b, ring):
    return [vecmat(row, b, ring) for row in a]


def rref(mat, ring, pivot_cols=None):
    """Reduced row echelon form with unit pivots.

    Returns ``(rows, pivots)``.  With ``pivot_cols`` the reduction is
    forced to use exactly those columns in order (used to align a dual
    matrix with the echelon form of its unit part).  Raises
    ``DegeneratePivot`` when a non-field ring leaves a nonzero row that
    no unit pivot can clear.
    """
    rows = [list(r) for r in mat]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    is_unit, is_zero = ring.is_unit, ring.is_zero
    mul, sub, inv = ring.mul, ring.sub, ring.inv
    pivots = []
    r = 0
    columns = pivot_cols if pivot_cols is not None else range(ncols)
    for c in columns:
        if r == nrows:
            if pivot_cols is not None:
                raise DegeneratePivot("prescribed pivot beyond row count")
            break
        pr = None
        for i in range(r, nrows):
            if is_unit(rows[i][c]):
                pr = i
                break
        if pr is None:
            if pivot_cols is not None:
                raise DegeneratePivot(f"no unit pivot in column {c}")
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = inv(rows[r][c])
        rows[r] = [mul(piv, v) for v in rows[r]]
        lead = rows[r]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if not is_zero(f):
                ri = rows[i]
                rows[i] = [sub(a, mul(f, b)) for a, b in zip(ri, lead)]
        pivots.append(c)
        r += 1
    for i in range(r, nrows):
        if any(not is_zero(v) for v in rows[i]):
            raise DegeneratePivot("nonzero residual row without unit pivot")
    return rows[:r], pivots


def kernel_basis(rows, pivots, ncols, ring):
    """Canonical right-kernel basis from an RREF; one vector per free column."""
    pivset = set(pivots)
    kernel = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ring.zero] * ncols
        v[f] = ring.one
        for i, pc in enumerate(pivots):
            v[pc] = ring.neg(rows[i][f])
        kernel.append(v)
    return kernel


def rank_and_kernel(mat, ring):
    """Rank and a right-kernel basis; rank + len(kernel) == #columns."""
    if not mat:
        return 0, []
    ncols = len(mat[0])
    rows, pivots = rref(mat, ring)
    return len(pivots), kernel_basis(rows, pivots, ncols, ring)


def mat_rank(mat, ring) -> int:
    if not mat:
        return 0
    _, pivots = rref(mat, ring)
    return len(pivots)


def dual_rank_kernel(mat, dual_ring):
    """Right kernel over a dual ring; DegeneratePivot if unit rank drops."""
    _, kernel = rank_and_kernel(mat, dual_ring)
    return kernel


def solve_affine(mat, b, ring):
    """Particular solution plus kernel basis of ``mat @ x = b``.

    Raises ``Infeasible`` when b lies outside the column span.
    """
    ncols = len(mat[0]) if mat else 0
    aug = [list(row) + [bv] for row, bv in zip(mat, b)]
    rows, pivots = _rref_cols(aug, ring, ncols)
    part = [ring.zero] * ncols
    for i, pc in enumerate(pivots):
        part[pc] = rows[i][ncols]
    kernel = []
    pivset = set(pivots)
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ring.zero] * ncols
        v[f] = ring.one
        for i, pc in enumerate(pivots):
            v[pc] = ring.neg(rows[i][f])
        kernel.append(v)
    return part, kernel


def _rref_cols(aug, ring, ncols):
    """RREF restricted to the first ``ncols`` columns of an augmented matrix."""
    rows = [list(r) for r in aug]
    nrows = len(rows)
    is_unit, is_zero = ring.is_unit, ring.is_zero
    mul, sub, inv = ring.mul, ring.sub, ring.inv
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if is_unit(rows[i][c]):
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        piv = inv(rows[r][c])
        rows[r] = [mul(piv, v) for v in rows[r]]
        lead = rows[r]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if not is_zero(f):
                ri = rows[i]
                rows[i] = [sub(a, mul(f, b)) for a, b in zip(ri, lead)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if not is_zero(rows[i][ncols]):
            raise Infeasible("right-hand side outside column span")
    return rows, pivots


def lagrange_interpolate(points, degree_bound, fp):
    """Coefficients (ascending) of the unique poly of degree <= bound.

    Uses Newton divided differences on the first ``degree_bound + 1``
    nodes and checks the remaining points exactly.
    """
    xs = [x for x, _ in points]
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissa("repeated interpolation node")
    if len(points) < degree_bound + 1:
        raise ValueError("need at least degree_bound + 1 points")
    head = points[: degree_bound + 1]
    hx = [fp.lift(x) for x, _ in head]
    coef = [fp.lift(y) for _, y in head]
    n = len(head)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            num = fp.sub(coef[i], coef[i - 1])
            den = fp.sub(hx[i], hx[i - j])
            coef[i] = fp.mul(num, fp.inv(den))
    # expand the Newton form into monomial coefficients
    poly = [0] * n
    basis = [1]
    for i in range(n):
        for k, bv in enumerate(basis):
            poly[k] = fp.add(poly[k], fp.mul(coef[i], bv))
        if i + 1 < n:
            shifted = [0] + basis
            scaled = [fp.mul(fp.neg(hx[i]), bv) for bv in basis] + [0]
            basis = [fp.add(a, b) for a, b in zip(shifted, scaled)]
    while poly and poly[-1] == 0:
        poly.pop()
    # verify any surplus points
    for x, y in points[degree_bound + 1:]:
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % fp.p
        if acc != fp.lift(y):
            raise ValueError("surplus point off the interpolated polynomial")
    return poly
