"""Tangent spaces and the linear fibres along which they stay constant.

All linear algebra happens on the affine cone: points are coordinate
vectors of length N+1 and the tangent space at a smooth point is the
kernel of the Jacobian of a transversal subset of the generators.  The
fibre through a point collects the tangent directions v with
t^T H(g) v = 0 for every tangent t and every generator g of the subset;
its correctness is then re-checked against the full generator list.
"""

from __future__ import annotations

from .fieldcore import dot, kernel_basis, mat_rank, rref, vecmat
from .varieties import variety_dim


class SingularSamplePoint(RuntimeError):
    """Jacobian rank at the sampled point differs from the codimension."""


class FiberVerificationFailed(RuntimeError):
    """A computed fibre failed one of its a-posteriori checks."""


class TangentFrame:
    """A smooth point together with a transversal generating subset.

    ``gens`` are the generators whose gradients at ``x`` already span the
    full conormal space, ``tangent`` is the canonical kernel basis of
    their Jacobian, and ``tan_pivots`` records which coordinate columns
    carried the pivots so the same echelon shape can be re-imposed over
    dual rings later.
    """

    __slots__ = ("x", "gens", "jac", "tan_pivots", "tangent", "n", "codim")

    def __init__(self, x, gens, jac, tan_pivots, tangent, n, codim):
        self.x = x
        self.gens = gens
        self.jac = jac
        self.tan_pivots = tan_pivots
        self.tangent = tangent
        self.n = n
        self.codim = codim


def _reduce_row(row, echelon, ring):
    row = list(row)
    for piv, base in echelon:
        c = row[piv]
        if not ring.is_zero(c):
            row = [ring.sub(a, ring.mul(c, b)) for a, b in zip(row, base)]
    return row


def tangent_space(spec, coords, fp, expected_dim: int) -> TangentFrame:
    """Tangent frame at ``coords``, or ``SingularSamplePoint`` when the
    Jacobian rank of the generators is not ``ambient_dim - expected_dim``."""
    codim = spec.ambient_dim - expected_dim
    if codim <= 0:
        raise ValueError("expected dimension must be below the ambient one")
    for g in spec.generators:
        if not fp.is_zero(g.eval(coords, fp)):
            raise ValueError(f"{spec.name}: point is not on the variety")
    picked, jac = [], []
    echelon = []  # (pivot column, unit-pivot reduced row)
    for g in spec.generators:
        grad = g.grad(coords, fp)
        red = _reduce_row(grad, echelon, fp)
        piv = next((j for j, c in enumerate(red) if not fp.is_zero(c)), None)
        if piv is None:
            continue
        if len(picked) == codim:
            raise SingularSamplePoint(
                f"{spec.name}: Jacobian rank exceeds codimension {codim}")
        inv = fp.inv(red[piv])
        echelon.append((piv, [fp.mul(inv, c) for c in red]))
        picked.append(g)
        jac.append(grad)
    if len(picked) < codim:
        raise SingularSamplePoint(
            f"{spec.name}: Jacobian rank {len(picked)} below codimension {codim}")
    rows, pivots = rref(jac, fp)
    tangent = kernel_basis(rows, pivots, spec.ambient_dim + 1, fp)
    return TangentFrame(list(coords), picked, jac, pivots, tangent,
                        expected_dim, codim)


class GaussFiber:
    """Linear fibre through ``frame.x``: basis rows span it, ``k`` is its
    projective dimension and ``r = n - k`` the tangent-map rank."""

    __slots__ = ("frame", "basis", "k", "r", "coeff_kernel", "sys_pivots")

    def __init__(self, frame, basis, k, r, coeff_kernel, sys_pivots):
        self.frame = frame
        self.basis = basis
        self.k = k
        self.r = r
        self.coeff_kernel = coeff_kernel
        self.sys_pivots = sys_pivots


def fiber_system(frame, fp, ring=None, point=None, tangent=None):
    """Rows of the bilinear system cutting the fibre out of the tangent
    space: one row per (generator, tangent direction) pair, in the
    coordinates of the tangent basis.  ``ring``/``point``/``tangent``
    default to the frame's own, but may be dual-ring replacements."""
    ring = fp if ring is None else ring
    x = frame.x if point is None else point
    tan = frame.tangent if tangent is None else tangent
    rows = []
    for g in frame.gens:
        images = [g.hess_vec(x, t, ring) for t in tan]
        for t in tan:
            rows.append([dot(t, img, ring) for img in images])
    return rows


def gauss_fiber(spec, frame, fp, rng) -> GaussFiber:
    """Fibre of the tangent map through ``frame.x``.

    The system only involves the frame's transversal subset; membership
    of the resulting linear space in the variety is then re-checked
    against the full ``spec.generators`` list at random points.
    """
    tan = frame.tangent
    m = len(tan)
    rows, sys_pivots = rref(fiber_system(frame, fp), fp)
    coeff_kernel = kernel_basis(rows, sys_pivots, m, fp)
    basis = [vecmat(c, tan, fp) for c in coeff_kernel]
    if not basis:
        raise FiberVerificationFailed("fibre lost the base point itself")
    k = len(basis) - 1
    fiber = GaussFiber(frame, basis, k, frame.n - k, coeff_kernel, sys_pivots)
    _verify_fiber(fiber, fp, rng, spec.generators)
    return fiber


def _random_combination(basis, fp, rng):
    y = [0] * len(basis[0])
    for row in basis:
        c = rng.field(fp.p)
        y = [fp.add(a, fp.mul(c, b)) for a, b in zip(y, row)]
    return y


def _verify_fiber(fiber, fp, rng, generators):
    frame = fiber.frame
    if mat_rank(fiber.basis + [frame.x], fp) != len(fiber.basis):
        raise FiberVerificationFailed("base point is outside the fibre span")
    for _ in range(10):
        y = _random_combination(fiber.basis, fp, rng)
        for g in generators:
            if not fp.is_zero(g.eval(y, fp)):
                raise FiberVerificationFailed(
                    "a fibre point misses the variety")
    for _ in range(5):
        y = _random_combination(fiber.basis, fp, rng)
        jac_y = [g.grad(y, fp) for g in frame.gens]
        if mat_rank(jac_y, fp) != frame.codim:
            raise FiberVerificationFailed(
                "tangent space degenerates along the fibre")
        for row in jac_y:
            for t in frame.tangent:
                if not fp.is_zero(dot(row, t, fp)):
                    raise FiberVerificationFailed(
                        "tangent space moves along the fibre")


def fiber_codim_data(spec, dim_x: int, fp, rng):
    """Codimension of the singular locus inside the variety, measured by
    Jacobian probes on the singular stratum; ``None`` when the variety
    carries no singular-locus description."""
    if spec.singular is None or spec.singular.sampler is None:
        return None
    return dim_x - variety_dim(spec.singular, fp, rng)
