"""Focal divisors of first-order families of linear spaces.

A family chart holds a center space Λ (rows of A) together with matrices
B_j describing how Λ moves to first order along r directions; the
characteristic matrix collects, entry by entry, the linear forms in the
Λ-coordinates t that measure this motion transversally to Λ.  Its
determinant is the focal form: a degree-r hypersurface in Λ whose
multiplicity structure, reduced equation, quadric rank and containment
in the singular locus are what the rest of the package reports on.

Everything here is exact arithmetic over F_p: derivatives come from dual
numbers, multiplicities from univariate squarefree decomposition along
lines, and the reduced form from either a linear system in its
coefficients or dense interpolation of normalized root data.
"""

from __future__ import annotations

from itertools import combinations, product
from math import comb

from .fieldcore import (
    DegeneratePivot,
    Infeasible,
    dot,
    dual_over,
    dual_parts,
    kernel_basis,
    lagrange_interpolate,
    mat_rank,
    rank_and_kernel,
    rref,
    solve_affine,
    vecmat,
)
from .gaussmap import fiber_system
from .mpoly import (
    CharTooSmall,
    SparsePoly,
    adjugate_ring,
    det_ring,
    squarefree_profile,
    up_deg,
    up_deriv,
    up_divmod,
    up_eval,
    up_gcd,
    up_mul,
    up_roots,
    up_trim,
)


class NotDegenerate(RuntimeError):
    """The fibres are points; there is no family to take a chart of."""


class ChartFailed(RuntimeError):
    """All retries at drawing transversal deformation directions failed."""


class NonVanishingTransversalComponent(RuntimeError):
    """A deformation row left the tangent space: bad chart or bad center."""


class DegenerateLines(RuntimeError):
    """Line sampling kept hitting degree drops in the focal form."""


class ProfileDisagreement(RuntimeError):
    """Non-degenerate lines produced different multiplicity patterns."""


class ExtractionFailed(RuntimeError):
    """The focal form is not a perfect power of a single reduced form."""


class ContainmentFailed(RuntimeError):
    """A focal point escaped the singular locus (or a witness missed it)."""


# --- family charts -----------------------------------------------------------


class FamilyChart:
    """First-order family of linear spaces: Λ(ε) = rowspan(A + ε B_j)."""

    __slots__ = ("basis", "bmats", "dirs", "k", "r")

    def __init__(self, basis, bmats, dirs=None):
        self.basis = basis
        self.bmats = bmats
        self.dirs = dirs
        self.k = len(basis) - 1
        self.r = len(bmats)


def _tangent_combination(tangent, fp, rng):
    v = [0] * len(tangent[0])
    for row in tangent:
        c = rng.field(fp.p)
        v = [fp.add(a, fp.mul(c, b)) for a, b in zip(v, row)]
    return v


def _first_order_fiber(fiber, w, dring, fp):
    """B matrix of the fibre at x + εw, aligned with the center fibre.

    Re-runs the tangent and second-fundamental-form eliminations over the
    dual ring with the center's pivot columns imposed, so the unit parts
    reproduce the center basis exactly and the slopes are the deformation.
    """
    frame = fiber.frame
    x_eps = [dring.make(xi, wi) for xi, wi in zip(frame.x, w)]
    jac = [g.grad(x_eps, dring) for g in frame.gens]
    rows, piv = rref(jac, dring, pivot_cols=frame.tan_pivots)
    tangent_eps = kernel_basis(rows, piv, len(frame.x), dring)
    sys_rows = fiber_system(frame, fp, ring=dring, point=x_eps,
                            tangent=tangent_eps)
    srows, spiv = rref(sys_rows, dring, pivot_cols=fiber.sys_pivots)
    ckernel = kernel_basis(srows, spiv, len(tangent_eps), dring)
    bmat = []
    for coeffs, center_row in zip(ckernel, fiber.basis):
        dual_row = vecmat(coeffs, tangent_eps, dring)
        parts = [dual_parts(fp, v) for v in dual_row]
        if [u for u, _ in parts] != center_row:
            raise DegeneratePivot("first-order fibre drifted off its center")
        bmat.append([s for _, s in parts])
    return bmat


def fiber_family_chart(fiber, fp, rng) -> FamilyChart:
    """Chart of the fibre family at ``fiber``: r transversal directions
    w_j and the corresponding first-order deformations of the fibre."""
    if fiber.k == 0:
        raise NotDegenerate("point fibres admit no focal geometry")
    frame = fiber.frame
    dring = dual_over(fp)
    for _ in range(16):
        dirs = [_tangent_combination(frame.tangent, fp, rng)
                for _ in range(fiber.r)]
        if mat_rank(fiber.basis + dirs, fp) != fiber.k + 1 + fiber.r:
            continue
        try:
            bmats = [_first_order_fiber(fiber, w, dring, fp) for w in dirs]
        except DegeneratePivot:
            continue
        return FamilyChart(fiber.basis, bmats, dirs)
    raise ChartFailed("no transversal direction set survived 16 draws")


def hyperband_chart(fam, fp) -> FamilyChart:
    """Chart of an explicitly parametrized line family: differentiate the
    2×(N+1) chart matrix in each parameter with dual numbers."""
    dring = dual_over(fp)
    center = list(fam.center)
    basis = fam.chart_matrix(center, fp)
    bmats = []
    for j in range(len(center)):
        params = [dring.make(v, 1 if i == j else 0)
                  for i, v in enumerate(center)]
        dual_rows = fam.chart_matrix(params, dring)
        parts = [[dual_parts(fp, v) for v in row] for row in dual_rows]
        if [[u for u, _ in row] for row in parts] != basis:
            raise ChartFailed("family chart drifted at its own center")
        bmats.append([[s for _, s in row] for row in parts])
    return FamilyChart(basis, bmats)


# --- characteristic matrices --------------------------------------------------


class CharMatrix:
    """Matrix of homogeneous linear forms on Λ.

    ``entries[j][l]`` is the coefficient vector (length k+1) of the form
    in row j, column l; ``value`` instantiates the matrix at a point t.
    """

    __slots__ = ("entries", "r", "k", "s", "square")

    def __init__(self, entries, k):
        self.entries = entries
        self.r = len(entries)
        self.s = len(entries[0])
        self.k = k
        self.square = self.r == self.s

    @property
    def shape(self):
        return (self.r, self.s)

    def value(self, t, fp):
        return [[dot(e, t, fp) for e in row] for row in self.entries]

    def det_at(self, t, fp):
        return det_ring(self.value(t, fp), fp)

    def coeff_slice(self, i):
        """Constant matrix of the t_i coefficients (the i-th partial)."""
        return [[e[i] for e in row] for row in self.entries]


def _transpose(mat):
    return [list(col) for col in zip(*mat)]


def characteristic_matrix(chart: FamilyChart, frame, fp) -> CharMatrix:
    """The matrix of linear forms t ↦ (t·B_j mod Λ).

    With a tangent ``frame`` the motion is expressed in the transversal
    directions w_1..w_r themselves, giving an r×r matrix; rows that fail
    to decompose over [Λ; w] raise NonVanishingTransversalComponent.
    Without a frame the full quotient modulo Λ is used and the matrix is
    cut down to square when the common image span has dimension r.
    """
    if frame is not None:
        return _char_matrix_framed(chart, fp)
    return _char_matrix_general(chart, fp)


def _char_matrix_framed(chart, fp):
    k1, r = chart.k + 1, chart.r
    stacked_t = _transpose(list(chart.basis) + list(chart.dirs))
    entries = [[[0] * k1 for _ in range(r)] for _ in range(r)]
    for j, bmat in enumerate(chart.bmats):
        for i, row in enumerate(bmat):
            try:
                coeffs, _ = solve_affine(stacked_t, row, fp)
            except Infeasible as exc:
                raise NonVanishingTransversalComponent(
                    "a deformation row left the tangent space") from exc
            for l in range(r):
                entries[j][l][i] = coeffs[k1 + l]
    return CharMatrix(entries, chart.k)


def _char_matrix_general(chart, fp):
    k1, r = chart.k + 1, chart.r
    arr, apiv = rref(chart.basis, fp)
    if len(apiv) != k1:
        raise ValueError("family basis rows are dependent")
    ncols = len(chart.basis[0])
    free = [c for c in range(ncols) if c not in set(apiv)]
    raw = []
    for bmat in chart.bmats:
        rows = []
        for row in bmat:
            red = list(row)
            for t, pc in enumerate(apiv):
                c = red[pc]
                if c:
                    red = [fp.sub(a, fp.mul(c, b)) for a, b in zip(red, arr[t])]
            rows.append([red[c] for c in free])
        raw.append(rows)  # (k+1) × (N−k) coefficient block for this j
    span = [row for block in raw for row in block]
    _, vpiv = rref(span, fp)
    cols = list(vpiv) if len(vpiv) == r else list(range(len(free)))
    entries = [[[block[i][l] for i in range(k1)] for l in cols]
               for block in raw]
    return CharMatrix(entries, chart.k)


# --- focal profiles -----------------------------------------------------------


def _line_poly(charm, a, d, fp):
    """The focal form restricted to the line a + s·d, as coefficients."""
    r = charm.r
    if charm.square:
        pts = []
        for s in range(r + 2):
            t = [(av + s * dv) % fp.p for av, dv in zip(a, d)]
            pts.append((s, charm.det_at(t, fp)))
        return up_trim(lagrange_interpolate(pts, r, fp))
    g = None
    for cols in combinations(range(charm.s), r):
        pts = []
        for s in range(r + 2):
            t = [(av + s * dv) % fp.p for av, dv in zip(a, d)]
            m = charm.value(t, fp)
            pts.append((s, det_ring([[m[i][c] for c in cols]
                                     for i in range(r)], fp)))
        minor = up_trim(lagrange_interpolate(pts, r, fp))
        if not minor:
            continue
        g = minor if g is None else up_gcd(g, minor, fp)
        if up_deg(g) == 0:
            break
    return g if g is not None else []


def focal_profile(charm: CharMatrix, fp, rng, lines: int = 8):
    """Consensus multiplicity profile over random lines in Λ.

    Returns (profile, total degree) where the profile is a tuple of
    (multiplicity, class degree) pairs.  Degree-dropped lines are thrown
    away and redrawn; surviving lines must agree exactly.
    """
    consensus, total = None, None
    for _ in range(lines):
        prof = None
        for _attempt in range(16):
            a = [rng.field(fp.p) for _ in range(charm.k + 1)]
            d = [rng.field(fp.p) for _ in range(charm.k + 1)]
            poly = _line_poly(charm, a, d, fp)
            deg = up_deg(poly)
            if (charm.square and deg != charm.r) or deg < 1:
                continue
            prof = tuple(squarefree_profile(poly, fp))
            break
        if prof is None:
            raise DegenerateLines("the focal form kept dropping degree")
        if consensus is None:
            consensus = prof
            total = sum(m * d_ for m, d_ in prof)
        elif prof != consensus:
            raise ProfileDisagreement(f"line profiles differ: "
                                      f"{consensus} vs {prof}")
    return consensus, total


# --- reduced-form extraction ---------------------------------------------------


def _mat_inverse(mat, fp):
    n = len(mat)
    cols = []
    for j in range(n):
        e = [1 if i == j else 0 for i in range(n)]
        cols.append(solve_affine(mat, e, fp)[0])
    return [[cols[j][i] for j in range(n)] for i in range(n)]


class ReducedForm:
    """A form on Λ, possibly written in a private basis of Λ-coordinates.

    ``value(t, fp)`` always takes native fibre coordinates; the basis
    change (if any) is internal, so consumers stay basis-agnostic.
    """

    __slots__ = ("poly", "basis", "_binv")

    def __init__(self, poly: SparsePoly, basis=None, fp=None):
        self.poly = poly
        self.basis = basis
        self._binv = _mat_inverse(basis, fp) if basis is not None else None

    def degree(self) -> int:
        return self.poly.degree()

    def value(self, t, fp):
        y = vecmat(t, self._binv, fp) if self._binv is not None else t
        return self.poly.eval(y, fp)


def _degree_monomials(nvars, d):
    out = set()
    for combo in product(range(d + 1), repeat=nvars):
        if sum(combo) == d:
            out.add(combo)
    return sorted(out)


def _char_gradient(charm, t, fp):
    """(f(t), [∂_i f(t)]) of the focal determinant via the adjugate."""
    m = charm.value(t, fp)
    f = det_ring(m, fp)
    adj = adjugate_ring(m, fp)
    grads = []
    for i in range(charm.k + 1):
        ci = charm.coeff_slice(i)
        acc = 0
        for a in range(charm.r):
            row = ci[a]
            acc += sum(adj[b][a] * row[b] for b in range(charm.r))
        grads.append(acc % fp.p)
    return f, grads


def _add_pde_rows(charm, mu, exps, t, fp, rows):
    nv = charm.k + 1
    f, grads = _char_gradient(charm, t, fp)
    mono = {e: SparsePoly(nv, {e: 1}).eval(t, fp) for e in exps}
    low = {}
    for e in exps:
        for i in range(nv):
            if e[i]:
                el = e[:i] + (e[i] - 1,) + e[i + 1:]
                if el not in low:
                    low[el] = SparsePoly(nv, {el: 1}).eval(t, fp)
    for i in range(nv):
        row = []
        for e in exps:
            v = mono[e] * grads[i]
            if e[i]:
                el = e[:i] + (e[i] - 1,) + e[i + 1:]
                v -= mu * f * e[i] * low[el]
            row.append(v % fp.p)
        rows.append(row)


def _extract_linear_system(charm, mu, d, fp, rng):
    """Coefficients of q from  q·∂_i f − μ·f·∂_i q = 0  at random points.

    Each sample point yields nv rows but never nv independent ones (the
    Euler relation ties them together, and structured determinants give
    fewer still), so keep sampling until the solution space settles at a
    single line rather than trusting a fixed point count.
    """
    nv = charm.k + 1
    exps = _degree_monomials(nv, d)
    ncoef = len(exps)
    npts = -(-ncoef // max(nv - 1, 1)) + 2
    rows = []
    kern = []
    for _ in range(5):
        while len(rows) < npts * nv:
            t = [rng.field(fp.p) for _ in range(nv)]
            _add_pde_rows(charm, mu, exps, t, fp, rows)
        _, kern = rank_and_kernel(rows, fp)
        if len(kern) <= 1:
            break
        npts += -(-npts // 2)
    if len(kern) != 1:
        raise ExtractionFailed(
            f"coefficient solution space has dimension {len(kern)}")
    q = SparsePoly(nv, {e: c for e, c in zip(exps, kern[0]) if c})
    return ReducedForm(q)


def _simplex_nodes(k, d):
    if k == 0:
        return [()]
    out = []
    for head in range(d + 1):
        for rest in _simplex_nodes(k - 1, d - head):
            out.append((head,) + rest)
    return out


def _falling_coeffs(m, fp):
    poly = [1]
    for j in range(m):
        poly = up_mul(poly, [-j % fp.p, 1], fp)
    return poly


def _normalized_root_values(charm, basis, d, fp):
    """Values q(node)/q(t*) on the simplex grid through t* = basis[0].

    Each value is read off the squarefree part of the focal form on the
    line from t* to the node; returns None when any line degenerates.
    """
    p, r = fp.p, charm.r
    tstar = basis[0]
    vals = {}
    for node in _simplex_nodes(len(basis) - 1, d):
        if not any(node):
            vals[node] = 1
            continue
        t = list(tstar)
        for i, c in enumerate(node):
            if c:
                t = [(a + c * b) % p for a, b in zip(t, basis[i + 1])]
        dirv = [(a - b) % p for a, b in zip(t, tstar)]
        pts = []
        for s in range(r + 2):
            x = [(a + s * b) % p for a, b in zip(tstar, dirv)]
            pts.append((s, charm.det_at(x, fp)))
        f = up_trim(lagrange_interpolate(pts, r, fp))
        if up_deg(f) != r:
            return None
        sf = up_divmod(f, up_gcd(f, up_deriv(f, fp), fp), fp)[0]
        if up_deg(sf) != d:
            return None
        s0 = up_eval(sf, 0, fp)
        if s0 == 0:
            return None
        vals[node] = up_eval(sf, 1, fp) * fp.inv(s0) % p
    return vals


def _newton_simplex(vals, k, d, fp):
    """Monomial coefficients of the degree-≤d interpolant of ``vals`` on
    the integer simplex grid, by forward differences."""
    p = fp.p
    inv_fact = [1] * (d + 1)
    for m in range(2, d + 1):
        inv_fact[m] = inv_fact[m - 1] * fp.inv(m) % p
    ffs = [_falling_coeffs(m, fp) for m in range(d + 1)]
    terms = {}
    for e in _simplex_nodes(k, d):
        acc = 0
        for a in product(*(range(ei + 1) for ei in e)):
            w = 1
            for ei, ai in zip(e, a):
                w *= comb(ei, ai)
            if (sum(e) - sum(a)) % 2:
                w = -w
            acc += w * vals[a]
        cf = acc % p
        for ei in e:
            cf = cf * inv_fact[ei] % p
        if cf == 0:
            continue
        expansion = {(0,) * k: cf}
        for i, ei in enumerate(e):
            if not ei:
                continue
            nxt = {}
            for ex, c in expansion.items():
                for deg_i, fc in enumerate(ffs[ei]):
                    if fc:
                        ne = ex[:i] + (ex[i] + deg_i,) + ex[i + 1:]
                        nxt[ne] = (nxt.get(ne, 0) + c * fc) % p
            expansion = nxt
        for ex, c in expansion.items():
            terms[ex] = (terms.get(ex, 0) + c) % p
    return {e: c for e, c in terms.items() if c}


def _extract_interpolation(charm, mu, d, fp, rng):
    nv = charm.k + 1
    for _ in range(8):
        basis = [[rng.field(fp.p) for _ in range(nv)] for _ in range(nv)]
        if mat_rank(basis, fp) != nv:
            continue
        if charm.det_at(basis[0], fp) == 0:
            continue
        vals = _normalized_root_values(charm, basis, d, fp)
        if vals is None:
            continue
        affine = _newton_simplex(vals, nv - 1, d, fp)
        terms = {(d - sum(e),) + e: c for e, c in affine.items()}
        return ReducedForm(SparsePoly(nv, terms), basis, fp)
    raise ExtractionFailed("no interpolation basis survived the line checks")


def _verify_power(charm, form, mu, fp, rng):
    base, done = None, 0
    for _ in range(64):
        if done == 10:
            return
        t = [rng.field(fp.p) for _ in range(charm.k + 1)]
        fv = charm.det_at(t, fp)
        qv = form.value(t, fp)
        if base is None:
            if fv == 0 or qv == 0:
                continue
            base = (fv, pow(qv, mu, fp.p))
        elif fv * base[1] % fp.p != base[0] * pow(qv, mu, fp.p) % fp.p:
            raise ExtractionFailed("power identity failed at a fresh point")
        done += 1
    raise ExtractionFailed("could not verify the power identity")


def extract_reduced_power(charm: CharMatrix, mu: int, reduced_degree: int,
                          fp, rng, max_pde_coeffs: int = 220) -> ReducedForm:
    """The form q with det M = c·q^μ, verified at 10 fresh points.

    Small coefficient counts go through the exact linear system in the
    coefficients of q; large ones through dense interpolation of
    normalized squarefree root data in a random coordinate basis.
    """
    if not charm.square:
        raise ExtractionFailed("extraction needs a square matrix")
    if mu * reduced_degree != charm.r:
        raise ExtractionFailed("multiplicity times reduced degree "
                               "must equal the focal degree")
    if fp.p <= charm.r:
        raise CharTooSmall("field too small for the focal degree")
    ncoef = comb(charm.k + reduced_degree, reduced_degree)
    if ncoef <= max_pde_coeffs:
        form = _extract_linear_system(charm, mu, reduced_degree, fp, rng)
    else:
        form = _extract_interpolation(charm, mu, reduced_degree, fp, rng)
    _verify_power(charm, form, mu, fp, rng)
    return form


# --- reduced-form consumers ----------------------------------------------------


def quadric_rank(q: SparsePoly, fp) -> int:
    """Rank of the symmetric matrix of a homogeneous quadric (char ≠ 2)."""
    n = q.nvars
    gram = [[0] * n for _ in range(n)]
    for e, c in q.terms.items():
        idx = [i for i, ei in enumerate(e) for _ in range(ei)]
        if len(idx) != 2:
            raise ValueError("quadric rank of a non-quadratic form")
        i, j = idx
        if i == j:
            gram[i][i] = 2 * c % fp.p
        else:
            gram[i][j] = gram[j][i] = c % fp.p
    return mat_rank(gram, fp)


def _form_on_line(form, a, d, fp):
    deg = form.degree()
    pts = []
    for s in range(deg + 2):
        t = [(av + s * dv) % fp.p for av, dv in zip(a, d)]
        pts.append((s, form.value(t, fp)))
    return up_trim(lagrange_interpolate(pts, deg, fp))


def form_zero_point(form: ReducedForm, fp, rng, attempts: int = 32):
    """A point of {form = 0} in fibre coordinates, via random lines."""
    nv = form.poly.nvars
    for _ in range(attempts):
        a = [rng.field(fp.p) for _ in range(nv)]
        d = [rng.field(fp.p) for _ in range(nv)]
        poly = _form_on_line(form, a, d, fp)
        if up_deg(poly) < 1:
            continue
        roots = up_roots(poly, fp, rng)
        if not roots:
            continue
        s = sorted(roots)[0]
        return [(av + s * dv) % fp.p for av, dv in zip(a, d)]
    return None


class Containment:
    __slots__ = ("status", "zeros", "witnesses")

    def __init__(self, status, zeros, witnesses):
        self.status = status
        self.zeros = zeros
        self.witnesses = witnesses


def sing_containment(spec, fiber, form: ReducedForm, fp, rng,
                     witnesses=None) -> Containment:
    """Checks that the reduced focal form lands in the singular locus.

    Zeros of the form (sampled through random lines in Λ) must satisfy
    every singular-locus generator; rank-decomposition witnesses of the
    center point must lie on Λ and on the form.  Violations raise
    ContainmentFailed; with nothing to check the verdict is Skipped.
    """
    zeros = 0
    if spec.singular is not None:
        lines, attempts = 0, 0
        while lines < 5 and attempts < 32:
            attempts += 1
            a = [rng.field(fp.p) for _ in range(form.poly.nvars)]
            d = [rng.field(fp.p) for _ in range(form.poly.nvars)]
            poly = _form_on_line(form, a, d, fp)
            if up_deg(poly) < 1:
                continue
            roots = up_roots(poly, fp, rng)
            if not roots:
                continue
            lines += 1
            for root in sorted(roots):
                t = [(av + root * dv) % fp.p for av, dv in zip(a, d)]
                z = vecmat(t, fiber.basis, fp)
                for g in spec.singular.generators:
                    if not fp.is_zero(g.eval(z, fp)):
                        raise ContainmentFailed(
                            f"focal zero escapes the singular locus: {z}")
                zeros += 1
    checked = 0
    if witnesses:
        at = _transpose(fiber.basis)
        for w in witnesses:
            try:
                tco, _ = solve_affine(at, w, fp)
            except Infeasible as exc:
                raise ContainmentFailed(
                    "a witness point lies outside the fibre") from exc
            if not fp.is_zero(form.value(tco, fp)):
                raise ContainmentFailed(
                    "a witness point misses the reduced focal form")
            checked += 1
    status = "Pass" if (zeros or checked) else "Skipped"
    return Containment(status, zeros, checked)


def char_kernel_at_point(charm: CharMatrix, t, fp) -> int:
    """Kernel dimension of the characteristic matrix at a point of Λ."""
    return charm.r - mat_rank(charm.value(t, fp), fp)


# --- reports and bound checks ---------------------------------------------------


class BoundCheck:
    __slots__ = ("name", "status", "detail")

    def __init__(self, name, status, detail):
        self.name = name
        self.status = status
        self.detail = detail

    def __repr__(self):
        return f"BoundCheck({self.name}: {self.status}, {self.detail})"


class FocalReport:
    """Everything measured about one focal divisor."""

    __slots__ = ("r", "degree", "profile", "mu", "reduced_degree",
                 "reduced_form", "q_rank", "containment", "kernel_at_focus",
                 "c", "bounds", "extraction_error")

    def __init__(self, r=None, degree=None, profile=None, mu=None,
                 reduced_degree=None, reduced_form=None, q_rank=None,
                 containment=None, kernel_at_focus=None, c=None,
                 bounds=None, extraction_error=None):
        self.r = r
        self.degree = degree
        self.profile = profile
        self.mu = mu
        self.reduced_degree = reduced_degree
        self.reduced_form = reduced_form
        self.q_rank = q_rank
        self.containment = containment
        self.kernel_at_focus = kernel_at_focus
        self.c = c
        self.bounds = bounds
        self.extraction_error = extraction_error


def check_bounds(report: FocalReport):
    """The inequality battery; each item is Pass, Fail or Skipped."""
    c, mu, r = report.c, report.mu, report.r
    red = report.reduced_degree
    out = []

    def put(name, ok, detail):
        out.append(BoundCheck(name, "Pass" if ok else "Fail", detail))

    def skip(name, why):
        out.append(BoundCheck(name, "Skipped", why))

    if c is None or mu is None:
        skip("mu_ge_c_minus_1", "needs both mu and c")
    else:
        put("mu_ge_c_minus_1", mu >= c - 1, f"mu={mu} c={c}")
    if c is None or r is None:
        skip("c_le_r_plus_1", "needs c and the focal degree")
    else:
        put("c_le_r_plus_1", c <= r + 1, f"c={c} r={r}")
    if c is None or r is None or red is None or red < 2:
        skip("nonlinear_c_bound", "needs c and a nonlinear reduced form")
    else:
        put("nonlinear_c_bound", 2 * c <= r + 2, f"c={c} r={r}")
    if c is None or r is None or 2 * c != r + 2:
        skip("extremal_pattern", "only applies when c = r/2 + 1")
    elif mu is None or red is None:
        skip("extremal_pattern", "needs mu and the reduced degree")
    else:
        ok = (mu >= c and red == 1) or (mu == r // 2 and red == 2)
        put("extremal_pattern", ok, f"mu={mu} reduced_degree={red} c={c}")
    return out


def focal_report(spec, fiber, charm: CharMatrix, fp, rng, c=None,
                 witnesses=None, lines: int = 8) -> FocalReport:
    """Profile, extraction, containment, focus diagnostics and bounds for
    one characteristic matrix, rolled into a report."""
    profile, degree = focal_profile(charm, fp, rng, lines=lines)
    rep = FocalReport(r=charm.r, degree=degree, profile=profile, c=c)
    if len(profile) == 1:
        rep.mu, rep.reduced_degree = profile[0]
        try:
            rep.reduced_form = extract_reduced_power(
                charm, rep.mu, rep.reduced_degree, fp, rng)
        except ExtractionFailed as exc:
            rep.extraction_error = str(exc)
    form = rep.reduced_form
    if form is not None:
        if rep.reduced_degree == 2:
            rep.q_rank = quadric_rank(form.poly, fp)
        rep.containment = sing_containment(spec, fiber, form, fp, rng,
                                           witnesses)
        t0 = form_zero_point(form, fp, rng)
        if t0 is not None:
            rep.kernel_at_focus = char_kernel_at_point(charm, t0, fp)
    rep.bounds = check_bounds(rep)
    return rep


def chart_independence(fiber, frame, fp, rng, points: int = 5) -> bool:
    """Two independently drawn charts must give proportional focal forms."""
    m1 = characteristic_matrix(fiber_family_chart(fiber, fp, rng), frame, fp)
    m2 = characteristic_matrix(fiber_family_chart(fiber, fp, rng), frame, fp)
    base = None
    trials = 0
    while points > 0 and trials < 64:
        trials += 1
        t = [rng.field(fp.p) for _ in range(fiber.k + 1)]
        f1, f2 = m1.det_at(t, fp), m2.det_at(t, fp)
        if base is None:
            if f1 == 0 or f2 == 0:
                if (f1 == 0) != (f2 == 0):
                    return False
                continue
            base = (f1, f2)
        elif f1 * base[1] % fp.p != f2 * base[0] % fp.p:
            return False
        points -= 1
    return points == 0
