"""Matrix rank loci, their samplers, the line-family construction, and the
27-coordinate cubic."""

import pytest

from gaussfocal.fieldcore import DualFp, Fp, Rng, mat_rank
from gaussfocal.mpoly import restrict_to_line, up_deg
from gaussfocal.varieties import (
    DegenerateSurface,
    InconsistentDim,
    MatrixShape,
    RankDeficientSample,
    albert_cubic,
    hyperband_dims,
    hyperband_family,
    rank_locus_generators,
    rank_locus_spec,
    sample_rank_point,
    variety_dim,
)

P = (1 << 61) - 1  # convenient large prime
FP = Fp(P)


# --- shapes -------------------------------------------------------------------


def test_shape_coordinate_counts():
    assert MatrixShape.symmetric(3).num_vars == 6
    assert MatrixShape.generic(3, 4).num_vars == 12
    assert MatrixShape.skew(6).num_vars == 15
    assert MatrixShape.symmetric(3).ambient_dim == 5
    assert MatrixShape.skew(8).ambient_dim == 27


def test_shape_matrix_roundtrip():
    rng = Rng(3)
    for shape in (MatrixShape.symmetric(4), MatrixShape.generic(3, 5),
                  MatrixShape.skew(6)):
        coords = [rng.field(P) for _ in range(shape.num_vars)]
        mat = shape.to_matrix(coords, P)
        assert len(mat) == shape.nrows and len(mat[0]) == shape.ncols
        assert shape.from_matrix(mat, P) == coords
        if shape.kind == "symmetric":
            assert all(mat[i][j] == mat[j][i] for i in range(4) for j in range(4))
        if shape.kind == "skew":
            assert all(mat[i][j] == (-mat[j][i]) % P for i in range(6) for j in range(6))


# --- rank locus generators ------------------------------------------------------


def test_generator_counts():
    assert len(rank_locus_generators(MatrixShape.symmetric(3), 1)) == 6
    assert len(rank_locus_generators(MatrixShape.symmetric(3), 2)) == 1
    assert len(rank_locus_generators(MatrixShape.generic(3, 3), 2)) == 1
    assert len(rank_locus_generators(MatrixShape.generic(3, 4), 2)) == 4
    assert len(rank_locus_generators(MatrixShape.skew(6), 2)) == 15
    assert len(rank_locus_generators(MatrixShape.skew(6), 4)) == 1
    assert len(rank_locus_generators(MatrixShape.skew(8), 4)) == 28
    assert len(rank_locus_generators(MatrixShape.skew(7), 4)) == 7


def test_generator_degrees():
    for g in rank_locus_generators(MatrixShape.symmetric(4), 2):
        assert g.degree == 3
    for g in rank_locus_generators(MatrixShape.skew(8), 4):
        assert g.degree == 3  # Pfaffians of 6x6 blocks


@pytest.mark.parametrize("shape,rb", [
    (MatrixShape.symmetric(4), 2),
    (MatrixShape.generic(3, 3), 2),
    (MatrixShape.skew(6), 4),
    (MatrixShape.skew(8), 4),
    (MatrixShape.generic(4, 5), 3),
])
def test_sample_and_vanish(shape, rb):
    gens = rank_locus_generators(shape, rb)
    rng = Rng(11)
    for _ in range(10):
        pt = sample_rank_point(shape, rb, rng, FP)
        assert any(v for v in pt.coords)
        mat = shape.to_matrix(pt.coords, P)
        assert mat_rank(mat, FP) == rb
        for g in gens:
            assert g.eval(pt.coords, FP) == 0


def test_witnesses_on_base_variety():
    shape = MatrixShape.symmetric(4)
    base = rank_locus_generators(shape, 1)
    rng = Rng(13)
    pt = sample_rank_point(shape, 2, rng, FP)
    assert pt.witnesses and len(pt.witnesses) == 2
    total = [0] * shape.num_vars
    for w in pt.witnesses:
        for g in base:
            assert g.eval(w, FP) == 0
        total = [(a + b) % P for a, b in zip(total, w)]
    assert total == pt.coords

    shape = MatrixShape.skew(8)
    base = rank_locus_generators(shape, 2)
    pt = sample_rank_point(shape, 4, rng, FP)
    assert pt.witnesses and len(pt.witnesses) == 2
    for w in pt.witnesses:
        for g in base:
            assert g.eval(w, FP) == 0


def test_hypersurface_line_degree():
    rng = Rng(17)
    det3 = rank_locus_generators(MatrixShape.symmetric(3), 2)[0]
    pf6 = rank_locus_generators(MatrixShape.skew(6), 4)[0]
    det4 = rank_locus_generators(MatrixShape.generic(4, 4), 3)[0]
    for prog, want in ((det3, 3), (pf6, 3), (det4, 4)):
        for _ in range(5):
            a = [rng.field(P) for _ in range(prog.arity)]
            b = [rng.field(P) for _ in range(prog.arity)]
            assert up_deg(restrict_to_line(prog, a, b, FP)) == want


# --- dimensions ----------------------------------------------------------------


@pytest.mark.parametrize("shape,rb,dim", [
    (MatrixShape.symmetric(3), 2, 4),
    (MatrixShape.symmetric(3), 1, 2),
    (MatrixShape.symmetric(4), 2, 6),
    (MatrixShape.generic(3, 3), 2, 7),
    (MatrixShape.generic(3, 3), 1, 4),
    (MatrixShape.generic(4, 4), 2, 11),
    (MatrixShape.skew(6), 4, 13),
    (MatrixShape.skew(6), 2, 8),
    (MatrixShape.skew(8), 4, 21),
    (MatrixShape.generic(4, 5), 3, 17),
    (MatrixShape.skew(7), 4, 17),
])
def test_variety_dim(shape, rb, dim):
    spec = rank_locus_spec(shape, rb)
    assert variety_dim(spec, FP, Rng(19)) == dim


def test_rank_locus_spec_descriptors():
    spec = rank_locus_spec(MatrixShape.symmetric(3), 2)
    assert spec.ambient_dim == 5
    assert len(spec.generators) == 1
    assert spec.singular is not None
    assert len(spec.singular.generators) == 6
    assert variety_dim(spec.singular, FP, Rng(59)) == 2
    # skew singular stratum drops the rank bound by two
    spec = rank_locus_spec(MatrixShape.skew(6), 4)
    assert len(spec.singular.generators) == 15
    assert variety_dim(spec.singular, FP, Rng(61)) == 8
    spec = rank_locus_spec(MatrixShape.symmetric(3), 1)
    assert spec.singular is None


# --- the line family in P^6 -----------------------------------------------------


def test_hyperband_chart_center():
    fam = hyperband_family(Rng(23), FP)
    a = fam.chart_matrix(fam.center, FP)
    assert len(a) == 2 and len(a[0]) == 7
    assert mat_rank(a, FP) == 2
    # first chart row is the marked surface point, which is the predicted focus
    assert a[0] == fam.predictor()
    # the enveloping span (point, two tangent partials, second surface) is 3-dim
    assert mat_rank(fam.span_frame(fam.center[:2], FP), FP) == 4


def test_hyperband_chart_dual_evaluation():
    fam = hyperband_family(Rng(29), FP)
    ring = DualFp(P)
    params = [ring.make(c, s) for c, s in zip(fam.center, (1, 2, 3, 4))]
    mat = fam.chart_matrix(params, ring)
    center = fam.chart_matrix(fam.center, FP)
    assert [[u for u, _ in row] for row in mat] == center
    # some slope must be nonzero, the family is not constant
    assert any(s for row in mat for _, s in row)


def test_hyperband_dims():
    fam = hyperband_family(Rng(31), FP)
    dim_x, dim_f = hyperband_dims(fam, FP, Rng(37))
    assert (dim_x, dim_f) == (5, 2)


# --- the 27-variable cubic -------------------------------------------------------


def diag_coords(a, b, c):
    v = [0] * 27
    v[0], v[1], v[2] = a, b, c
    return v


def test_cubic_on_diagonal():
    spec = albert_cubic()
    f = spec.generators[0]
    assert f.degree == 3
    assert f.eval(diag_coords(2, 3, 5), FP) == 30
    # adjoint of a diagonal is the diagonal of 2x2 complementary products
    adj = [g.eval(diag_coords(2, 3, 5), FP) for g in spec.singular.generators]
    assert adj[:3] == [15, 10, 6]
    assert all(v == 0 for v in adj[3:])


def test_cubic_homogeneity():
    f = albert_cubic().generators[0]
    rng = Rng(41)
    for _ in range(10):
        x = [rng.field(P) for _ in range(27)]
        lam = rng.nonzero(P)
        lx = [v * lam % P for v in x]
        assert f.eval(lx, FP) == pow(lam, 3, P) * f.eval(x, FP) % P


def test_adjoint_of_adjoint_is_norm_times_identity():
    spec = albert_cubic()
    f = spec.generators[0]
    adj_progs = spec.singular.generators
    rng = Rng(43)
    for _ in range(10):
        x = [rng.field(P) for _ in range(27)]
        ax = [g.eval(x, FP) for g in adj_progs]
        aax = [g.eval(ax, FP) for g in adj_progs]
        n = f.eval(x, FP)
        assert aax == [n * v % P for v in x]


def test_cubic_sampler():
    spec = albert_cubic()
    f = spec.generators[0]
    rng = Rng(47)
    for _ in range(5):
        pt = spec.sampler(rng, FP)
        assert f.eval(pt.coords, FP) == 0
        assert any(v for v in f.grad(pt.coords, FP))
        assert pt.witnesses and len(pt.witnesses) == 2
        for w in pt.witnesses:
            # each witness is a singular point: the cubic and all 27
            # adjoint quadrics vanish there
            assert f.eval(w, FP) == 0
            assert all(g.eval(w, FP) == 0 for g in spec.singular.generators)


def test_cubic_dim():
    spec = albert_cubic()
    assert variety_dim(spec, FP, Rng(53)) == 25
    assert variety_dim(spec.singular, FP, Rng(55)) == 16
