"""Characteristic matrices of first-order fibre families, focal divisors,
multiplicity profiles, reduced-form extraction and the bound battery."""

import pytest

from gaussfocal.fieldcore import Fp, Rng, dot, mat_rank, vecmat
from gaussfocal.focal import (
    ContainmentFailed,
    FocalReport,
    NotDegenerate,
    ReducedForm,
    char_kernel_at_point,
    characteristic_matrix,
    chart_independence,
    check_bounds,
    extract_reduced_power,
    fiber_family_chart,
    focal_profile,
    focal_report,
    form_zero_point,
    hyperband_chart,
    quadric_rank,
    sing_containment,
)
from gaussfocal.gaussmap import fiber_codim_data, gauss_fiber, tangent_space
from gaussfocal.mpoly import ProgramBuilder, SparsePoly
from gaussfocal.varieties import (
    MatrixShape,
    VarietySpec,
    WitnessPoint,
    hyperband_family,
    rank_locus_spec,
)

P = (1 << 61) - 1
FP = Fp(P)


def pipeline(spec, dim, seed):
    rng = Rng(seed)
    pt = spec.sampler(rng, FP)
    frame = tangent_space(spec, pt.coords, FP, expected_dim=dim)
    fib = gauss_fiber(spec, frame, FP, rng)
    return pt, frame, fib, rng


def quadric_spec():
    b = ProgramBuilder(4)
    prog = b.build(b.x(0) * b.x(3) - b.x(1) * b.x(2))

    def sampler(rng, fp):
        a, c = rng.field(fp.p), rng.field(fp.p)
        return WitnessPoint([1, a, c, a * c % fp.p])

    return VarietySpec("smooth-quadric-3", 3, [prog], None, sampler)


def cone_spec():
    b = ProgramBuilder(4)
    prog = b.build(b.x(1) ** 2 - b.x(0) * b.x(2))

    def sampler(rng, fp):
        s, t, u = (rng.field(fp.p) for _ in range(3))
        return WitnessPoint([s * s % fp.p, s * t % fp.p, t * t % fp.p, u])

    return VarietySpec("conic-cone", 3, [prog], None, sampler)


def test_chart_first_order_data():
    spec = rank_locus_spec(MatrixShape.symmetric(3), 2)
    pt, frame, fib, rng = pipeline(spec, 4, 101)
    chart = fiber_family_chart(fib, FP, rng)
    assert (chart.k, chart.r) == (2, 2)
    assert len(chart.bmats) == 2
    assert all(len(B) == 3 and len(B[0]) == 6 for B in chart.bmats)
    # deformation rows stay inside the frozen tangent space
    for B in chart.bmats:
        for row in B:
            assert all(dot(row, g, FP) == 0 for g in frame.jac)
    # the chosen directions really are transversal to the fibre
    assert mat_rank(fib.basis + chart.dirs, FP) == 5


def test_chart_rejects_point_fibers():
    spec = quadric_spec()
    pt, frame, fib, rng = pipeline(spec, 2, 7)
    assert fib.k == 0
    with pytest.raises(NotDegenerate):
        fiber_family_chart(fib, FP, rng)


def test_char_matrix_is_linear_in_fibre_coords():
    spec = rank_locus_spec(MatrixShape.symmetric(3), 2)
    pt, frame, fib, rng = pipeline(spec, 4, 103)
    chart = fiber_family_chart(fib, FP, rng)
    charm = characteristic_matrix(chart, frame, FP)
    assert charm.shape == (2, 2) and charm.square
    t1 = [rng.field(P) for _ in range(3)]
    t2 = [rng.field(P) for _ in range(3)]
    c = rng.field(P)
    m1, m2 = charm.value(t1, FP), charm.value(t2, FP)
    msum = charm.value([(a + b) % P for a, b in zip(t1, t2)], FP)
    mscaled = charm.value([c * a % P for a in t1], FP)
    for j in range(2):
        for l in range(2):
            assert msum[j][l] == (m1[j][l] + m2[j][l]) % P
            assert mscaled[j][l] == c * m1[j][l] % P


def test_severi2_full_report():
    spec = rank_locus_spec(MatrixShape.symmetric(3), 2)
    pt, frame, fib, rng = pipeline(spec, 4, 105)
    chart = fiber_family_chart(fib, FP, rng)
    charm = characteristic_matrix(chart, frame, FP)
    c = fiber_codim_data(spec, 4, FP, rng)
    assert c == 2
    rep = focal_report(spec, fib, charm, FP, rng, c=c, witnesses=pt.witnesses)
    assert rep.r == 2 and rep.degree == 2
    assert rep.profile == ((1, 2),)
    assert (rep.mu, rep.reduced_degree) == (1, 2)
    assert rep.q_rank == 3
    assert rep.containment.status == "Pass"
    assert rep.containment.witnesses == 2 and rep.containment.zeros > 0
    assert rep.kernel_at_focus == 1
    assert [b.status for b in rep.bounds] == ["Pass"] * 4
    while True:
        t = [rng.field(P) for _ in range(3)]
        if charm.det_at(t, FP):
            break
    assert char_kernel_at_point(charm, t, FP) == 0


def test_scorza_sym_m3_report():
    spec = rank_locus_spec(MatrixShape.symmetric(4), 2)
    pt, frame, fib, rng = pipeline(spec, 6, 107)
    chart = fiber_family_chart(fib, FP, rng)
    charm = characteristic_matrix(chart, frame, FP)
    c = fiber_codim_data(spec, 6, FP, rng)
    assert c == 3
    rep = focal_report(spec, fib, charm, FP, rng, c=c, witnesses=pt.witnesses)
    assert rep.degree == 4
    assert rep.profile == ((2, 2),)
    assert (rep.mu, rep.reduced_degree) == (2, 2)
    assert rep.q_rank == 3
    assert rep.containment.status == "Pass"
    assert [b.status for b in rep.bounds] == ["Pass"] * 4


def test_severi8_skew_report():
    spec = rank_locus_spec(MatrixShape.skew(6), 4)
    pt, frame, fib, rng = pipeline(spec, 13, 109)
    assert (fib.k, fib.r) == (5, 8)
    chart = fiber_family_chart(fib, FP, rng)
    charm = characteristic_matrix(chart, frame, FP)
    c = fiber_codim_data(spec, 13, FP, rng)
    assert c == 5
    rep = focal_report(spec, fib, charm, FP, rng, c=c, witnesses=pt.witnesses)
    assert rep.degree == 8
    assert rep.profile == ((4, 2),)
    assert (rep.mu, rep.reduced_degree) == (4, 2)
    assert rep.q_rank == 6
    assert rep.containment.status == "Pass"
    assert rep.containment.witnesses == 2
    assert [b.status for b in rep.bounds] == ["Pass"] * 4


def test_cone_focus_is_the_vertex():
    spec = cone_spec()
    pt, frame, fib, rng = pipeline(spec, 2, 11)
    assert (fib.k, fib.r) == (1, 1)
    chart = fiber_family_chart(fib, FP, rng)
    charm = characteristic_matrix(chart, frame, FP)
    profile, degree = focal_profile(charm, FP, rng)
    assert profile == ((1, 1),) and degree == 1
    rf = extract_reduced_power(charm, 1, 1, FP, rng)
    t0 = form_zero_point(rf, FP, rng)
    focus = vecmat(t0, chart.basis, FP)
    assert mat_rank([focus, [0, 0, 0, 1]], FP) == 1
    assert char_kernel_at_point(charm, t0, FP) == 1
    rep = focal_report(spec, fib, charm, FP, rng, c=2)
    assert (rep.mu, rep.reduced_degree) == (1, 1)
    assert rep.containment.status == "Skipped"
    assert [b.status for b in rep.bounds] == ["Pass", "Pass", "Skipped", "Skipped"]


def test_interpolation_path_matches_linear_system():
    spec = rank_locus_spec(MatrixShape.symmetric(4), 2)
    pt, frame, fib, rng = pipeline(spec, 6, 113)
    chart = fiber_family_chart(fib, FP, rng)
    charm = characteristic_matrix(chart, frame, FP)
    rf1 = extract_reduced_power(charm, 2, 2, FP, rng)
    rf2 = extract_reduced_power(charm, 2, 2, FP, rng, max_pde_coeffs=1)
    base = None
    for _ in range(5):
        t = [rng.field(P) for _ in range(3)]
        v1, v2 = rf1.value(t, FP), rf2.value(t, FP)
        if base is None:
            assert v1 and v2
            base = (v1, v2)
            continue
        assert v1 * base[1] % P == v2 * base[0] % P


def test_perturbed_form_fails_containment():
    spec = rank_locus_spec(MatrixShape.symmetric(3), 2)
    pt, frame, fib, rng = pipeline(spec, 4, 115)
    chart = fiber_family_chart(fib, FP, rng)
    charm = characteristic_matrix(chart, frame, FP)
    rf = extract_reduced_power(charm, 1, 2, FP, rng)
    bad = dict(rf.poly.terms)
    bad[(2, 0, 0)] = (bad.get((2, 0, 0), 0) + 1) % P
    with pytest.raises(ContainmentFailed):
        sing_containment(spec, fib, ReducedForm(SparsePoly(3, bad)), FP, rng,
                         witnesses=pt.witnesses)


def test_chart_independence():
    spec = rank_locus_spec(MatrixShape.symmetric(3), 2)
    pt, frame, fib, rng = pipeline(spec, 4, 117)
    assert chart_independence(fib, frame, FP, rng)


def test_quadric_rank_small_cases():
    conic = SparsePoly(3, {(1, 0, 1): 1, (0, 2, 0): -1})
    assert quadric_rank(conic, FP) == 3
    assert quadric_rank(SparsePoly(3, {(2, 0, 0): 1}), FP) == 1
    assert quadric_rank(SparsePoly(3, {(1, 1, 0): 1}), FP) == 2


def test_check_bounds_fail_and_skip():
    rep = FocalReport(r=2, c=4, mu=1, reduced_degree=1)
    assert [b.status for b in check_bounds(rep)] == \
        ["Fail", "Fail", "Skipped", "Skipped"]
    rep = FocalReport(r=8, c=5, mu=4, reduced_degree=2)
    assert [b.status for b in check_bounds(rep)] == ["Pass"] * 4
    rep = FocalReport(r=4, c=None, mu=4, reduced_degree=1)
    assert [b.status for b in check_bounds(rep)] == ["Skipped"] * 4


def test_hyperband_general_chart():
    rng = Rng(31)
    fam = hyperband_family(rng, FP)
    chart = hyperband_chart(fam, FP)
    assert (chart.k, chart.r) == (1, 4)
    charm = characteristic_matrix(chart, None, FP)
    assert charm.shape == (4, 4)  # the image span collapsed from 5 columns
    profile, degree = focal_profile(charm, FP, rng)
    assert profile == ((4, 1),) and degree == 4
    rf = extract_reduced_power(charm, 4, 1, FP, rng)
    t0 = form_zero_point(rf, FP, rng)
    assert char_kernel_at_point(charm, t0, FP) == 2
    focus = vecmat(t0, chart.basis, FP)
    assert mat_rank([focus, fam.predictor()], FP) == 1
