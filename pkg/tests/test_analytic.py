"""Analytic representations, the auxiliary multiplier, bounds, continuity."""


import numpy as np
import pytest

from bcinv import (
        ConvergenceFailure,
    CornerFrame,
    PreconditionFailed,
    RingDescriptor,
    SequenceSpec,
    SpectralPreconditionFailed,
    bc_inverse,
    build_H,
    build_H_right,
    build_v,
    choose_beta,
    continuity_experiment,
    difference_identity,
    group_inverse,
    integral_representation,
    limit_representation,
    perturbation_bound,
    series_representation,
    spectrum,
)
from helpers import random_frame_instance, rel_err

R2 = RingDescriptor.float_matrices(2)
E11 = R2.unit_matrix(0, 0)
DIAG23 = R2.element(np.diag([2.0, 3.0]))
FRAME_E11 = CornerFrame.from_idempotents(E11, E11)


def test_spectrum_examples():
    rep = spectrum(DIAG23)
    assert np.allclose(sorted(rep.eigenvalues.real), [2.0, 3.0])
    assert rep.spectral_radius == pytest.approx(3.0)
    assert rep.min_real_nonzero == pytest.approx(2.0)
    assert rep.group_projection is not None
    nil = spectrum(R2.element([[0.0, 1.0], [0.0, 0.0]]))
    assert np.allclose(nil.eigenvalues, 0.0)
    assert nil.group_projection is None
    rot = spectrum(R2.element([[0.0, -1.0], [1.0, 0.0]]))
    assert np.allclose(sorted(rot.eigenvalues.imag), [-1.0, 1.0])


def test_integral_examples():
    v = build_v(FRAME_E11)
    y = integral_representation(DIAG23, v)
    # closed form: integral of e^{-2t} over [0, inf) in the corner slot
    assert rel_err(y.payload, 0.5 * E11.payload) <= 1e-8
    a = R2.element([[3.0, 1.0], [0.0, 2.0]])
    y = integral_representation(a, R2.one())
    assert rel_err(y.payload, np.linalg.inv(a.payload)) <= 1e-8
    with pytest.raises(SpectralPreconditionFailed):
        integral_representation(R2.element([[0.0, -1.0], [1.0, 0.0]]), R2.one())


def test_series_examples():
    v = build_v(FRAME_E11)
    y = series_representation(DIAG23, v, 0.5)
    assert rel_err(y.payload, 0.5 * E11.payload) <= 1e-10
    one = R2.one()
    assert rel_err(series_representation(one, one, 1.0).payload, np.eye(2)) <= 1e-10
    with pytest.raises(PreconditionFailed):
        series_representation(DIAG23, v, 2.0)   # |p - 2 v a| = 3


def test_choose_beta():
    v = build_v(FRAME_E11)
    beta = choose_beta(DIAG23, v)
    # v a = 2 E11, projection E11: |E11 - 2 beta E11| minimized at beta = 1/2
    assert beta == pytest.approx(0.5, abs=1e-6)
    y = series_representation(DIAG23, v, beta)
    assert rel_err(y.payload, 0.5 * E11.payload) <= 1e-10
    rot = R2.element([[0.0, -1.0], [1.0, 0.0]])
    with pytest.raises(PreconditionFailed):
        choose_beta(rot, R2.one())              # spectrum {i, -i}: no real contraction


def test_limit_examples():
    v = build_v(FRAME_E11)
    y = limit_representation(DIAG23, v)
    assert rel_err(y.payload, 0.5 * E11.payload) <= 1e-8
    a = R2.element([[2.0, 1.0], [1.0, 3.0]])
    y = limit_representation(a, R2.one())
    assert rel_err(y.payload, np.linalg.inv(a.payload)) <= 1e-8
    with pytest.raises(ConvergenceFailure):
        limit_representation(R2.element([[0.0, 1.0], [1.0, 0.0]]), E11)


def test_build_H_examples():
    v = build_v(FRAME_E11)
    w, norm = build_H(DIAG23, v, FRAME_E11)
    assert np.allclose(w.payload, E11.payload)
    assert norm == pytest.approx(1.0)
    sharp = group_inverse(DIAG23 * v)
    assert np.allclose((w * bc_inverse(DIAG23, FRAME_E11)).payload, sharp.payload)
    one_frame = CornerFrame.from_idempotents(R2.one(), R2.one())
    w, norm = build_H(R2.one(), R2.one(), one_frame)
    assert np.allclose(w.payload, np.eye(2)) and norm == pytest.approx(1.0)
    a45 = R2.element(np.diag([4.0, 5.0]))
    w, norm = build_H(a45, build_v(FRAME_E11), FRAME_E11)
    assert np.allclose(w.payload, E11.payload) and norm == pytest.approx(1.0)
    wr, norm_r = build_H_right(DIAG23, v, FRAME_E11)
    assert np.allclose(wr.payload, E11.payload) and norm_r == pytest.approx(1.0)


def test_build_H_certification_random():
    rng = np.random.default_rng(61)
    for _ in range(10):
        n, r = 5, int(rng.integers(1, 5))
        a, frame = random_frame_instance(rng, n, r)
        v = build_v(frame)
        w, norm = build_H(a, v, frame)
        one = np.eye(n)
        assert np.linalg.norm(w.payload @ (one - frame.p.payload)) <= 1e-8 * (1 + norm)
        # the induced norm of left multiplication equals |w|: attained at the
        # top singular pair, never exceeded on random unit-norm arguments
        U, s, Vh = np.linalg.svd(w.payload)
        attained = np.linalg.norm(w.payload @ (Vh[0:1, :].T @ U[0:1, :]), 2)
        assert attained == pytest.approx(norm, rel=1e-9)
        for _ in range(5):
            z = rng.standard_normal((n, n))
            z /= np.linalg.norm(z, 2)
            assert np.linalg.norm(w.payload @ z, 2) <= norm * (1 + 1e-9)


def test_perturbation_bound_hand_values():
    v = build_v(FRAME_E11)
    rep = perturbation_bound(DIAG23, v, FRAME_E11, 0.1)
    assert rep.measured == pytest.approx(1.0 / 2.0 - 1.0 / 2.1, abs=1e-12)
    assert rep.bound == pytest.approx(0.0375 / 0.925, abs=1e-12)
    assert rep.measured <= rep.bound
    assert rep.norm_a == pytest.approx(3.0)
    assert rep.norm_inverse == pytest.approx(0.5)
    assert rep.norm_h == pytest.approx(1.0)
    assert rep.measured_right == pytest.approx(rep.measured, abs=1e-12)


def test_perturbation_bound_lambda_zero_and_radius():
    a = R2.element([[2.0, 1.0], [0.0, 3.0]])
    one_frame = CornerFrame.from_idempotents(R2.one(), R2.one())
    rep = perturbation_bound(a, R2.one(), one_frame, 0.0)
    assert rep.measured <= 1e-12 and rep.bound == 0.0
    v = build_v(FRAME_E11)
    with pytest.raises(PreconditionFailed):
        perturbation_bound(DIAG23, v, FRAME_E11, 2.0)   # radius is 4/3


def test_perturbation_bound_random_admissible():
    rng = np.random.default_rng(62)
    for _ in range(10):
        n, r = 4, int(rng.integers(1, 4))
        a, frame = random_frame_instance(rng, n, r)
        v = build_v(frame)
        y = bc_inverse(a, frame)
        _, nH = build_H(a, v, frame)
        radius = 1.0 / (a.norm() * y.norm() ** 2 * nH)
        bounds = []
        for lam in np.linspace(0.05, 0.9, 5) * radius:
            rep = perturbation_bound(a, v, frame, float(lam))
            assert rep.measured <= rep.bound * (1 + 1e-9) + 1e-15
            bounds.append(rep.bound)
        # the bound shrinks to zero with lambda
        assert bounds == sorted(bounds)
        tiny = perturbation_bound(a, v, frame, 1e-9 * radius)
        assert tiny.bound <= 1e-7 * bounds[0]


def test_difference_identity_mixed_frames_hand_case():
    # frames E11 vs E22 on diagonals: y1 = E11/2, y2 = E22/5, and the middle
    # term contributes exactly -(1/2)E11, which pins the sign of the identity
    frame2 = CornerFrame.from_idempotents(R2.unit_matrix(1, 1), R2.unit_matrix(1, 1))
    a2 = R2.element(np.diag([4.0, 5.0]))
    y1 = bc_inverse(DIAG23, FRAME_E11).payload
    y2 = bc_inverse(a2, frame2).payload
    one = np.eye(2)
    middle = (one - y2 @ a2.payload) @ (frame2.p.payload - FRAME_E11.p.payload) @ y1
    assert np.allclose(middle, -0.5 * E11.payload)
    assert np.allclose(y2 - y1, np.diag([-0.5, 0.2]))
    assert difference_identity(DIAG23, FRAME_E11, a2, frame2) <= 1e-14


def test_difference_identity_examples():
    assert difference_identity(DIAG23, FRAME_E11, DIAG23, FRAME_E11) <= 1e-14
    a2 = R2.element(np.diag([4.0, 5.0]))
    res = difference_identity(DIAG23, FRAME_E11, a2, FRAME_E11)
    assert res <= 1e-12 * (1 + 3.0)
    rng = np.random.default_rng(63)
    for _ in range(5):
        r = int(rng.integers(1, 5))
        a1, frame1 = random_frame_instance(rng, 5, r)
        a2, frame2 = random_frame_instance(rng, 5, r)
        res = difference_identity(a1, frame1, a2, frame2, tol=1e-10)
        # independent re-evaluation of both sides
        y1 = bc_inverse(a1, frame1).payload
        y2 = bc_inverse(a2, frame2).payload
        one = np.eye(5)
        lhs = y2 - y1
        rhs = (y2 @ (frame2.q.payload - frame1.q.payload) @ (one - a1.payload @ y1)
               + (one - y2 @ a2.payload) @ (frame2.p.payload - frame1.p.payload) @ y1
               + y2 @ (a1.payload - a2.payload) @ y1)
        assert res == pytest.approx(np.linalg.norm(lhs - rhs, 2), abs=1e-12)


def test_annihilation_and_spectral_symmetry():
    rng = np.random.default_rng(64)
    for _ in range(10):
        n, r = 5, int(rng.integers(1, 5))
        a, frame = random_frame_instance(rng, n, r)
        v = build_v(frame)
        va = v.payload @ a.payload
        av = a.payload @ v.payload
        p_va = va @ group_inverse(a.ring.element(va)).payload
        p_av = av @ group_inverse(a.ring.element(av)).payload
        scale = 1 + np.linalg.norm(v.payload)
        assert np.linalg.norm((np.eye(n) - p_va) @ v.payload) <= 1e-10 * scale
        assert np.linalg.norm(v.payload @ (np.eye(n) - p_av)) <= 1e-10 * scale
        # nonzero spectra of a v and v a coincide as multisets
        e1 = np.sort_complex(np.linalg.eigvals(av))
        e2 = np.sort_complex(np.linalg.eigvals(va))
        big1 = np.sort_complex([z for z in e1 if abs(z) > 1e-8])
        big2 = np.sort_complex([z for z in e2 if abs(z) > 1e-8])
        assert len(big1) == len(big2)
        assert np.allclose(big1, big2, atol=1e-6)


def test_group_route_identity():
    rng = np.random.default_rng(65)
    for _ in range(10):
        n, r = 4, int(rng.integers(1, 4))
        a, frame = random_frame_instance(rng, n, r)
        v = build_v(frame)
        left = group_inverse(a.ring.element(v.payload @ a.payload)).payload @ v.payload
        right = v.payload @ group_inverse(a.ring.element(a.payload @ v.payload)).payload
        assert rel_err(left, right) <= 1e-9
        assert rel_err(left, bc_inverse(a, frame).payload) <= 1e-8


def test_continuity_bounded_family():
    ns = list(range(1, 200))
    spec = SequenceSpec(
        terms=lambda n: (R2.element(np.diag([2.0 + 1.0 / n, 3.0])), FRAME_E11),
        limit=(DIAG23, FRAME_E11),
        indices=ns,
    )
    rep = continuity_experiment(spec, tol=1e-2)
    assert rep.classification == "convergent"
    assert rep.bounded and rep.converged and rep.limit_exists
    assert max(rep.norms) <= 0.5 + 1e-12
    diffs = np.diff(rep.deviations)
    assert np.all(diffs <= 1e-15)            # monotone decreasing
    # closed form: deviation(n) = 1/(4n + 2)
    for n, d in zip(rep.indices, rep.deviations):
        assert d == pytest.approx(1.0 / (4.0 * n + 2.0), rel=1e-9)


def test_continuity_unbounded_family():
    ns = [1, 2, 5, 10, 20, 50, 100, 200, 500, 1000]
    spec = SequenceSpec(
        terms=lambda n: (R2.element(np.diag([1.0 / n, 3.0])), FRAME_E11),
        limit=(R2.element(np.diag([0.0, 3.0])), FRAME_E11),
        indices=ns,
    )
    rep = continuity_experiment(spec)
    assert rep.classification == "divergent"
    assert not rep.limit_exists
    assert rep.growth_exponent == pytest.approx(1.0, abs=0.05)
    for n, v in zip(ns, rep.norms):
        assert v == pytest.approx(float(n), rel=1e-9)


def test_continuity_constant_family():
    spec = SequenceSpec(
        terms=lambda n: (DIAG23, FRAME_E11),
        limit=(DIAG23, FRAME_E11),
        indices=[1, 2, 3, 4, 5],
    )
    rep = continuity_experiment(spec)
    assert rep.classification == "convergent"
    assert all(d == 0.0 for d in rep.deviations)


def test_cross_route_agreement_smoke():
    rng = np.random.default_rng(66)
    checked_series = checked_integral = 0
    for _ in range(12):
        n, r = 4, int(rng.integers(1, 4))
        a, frame = random_frame_instance(rng, n, r)
        v = build_v(frame)
        direct = bc_inverse(a, frame)
        lim = limit_representation(a, v)
        assert rel_err(lim.payload, direct.payload) <= 1e-6
        try:
            beta = choose_beta(a, v)
            ser = series_representation(a, v, beta)
            assert rel_err(ser.payload, direct.payload) <= 1e-6
            checked_series += 1
        except PreconditionFailed:
            pass
        try:
            intg = integral_representation(a, v)
            assert rel_err(intg.payload, direct.payload) <= 1e-6
            checked_integral += 1
        except SpectralPreconditionFailed:
            pass
    assert checked_series >= 1
    assert checked_integral >= 1
