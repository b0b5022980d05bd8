"""Analytic machinery on the float matrix backend.

Spectral data, the integral / series / limit representations of the
(b,c)-inverse, the multiplier realization of the auxiliary operator used in
the resolvent perturbation bound, the three-term difference identity, and a
sequence-continuity experiment.

Everything here takes float-backend ring values; internal numerics run on
the raw arrays with the spectral norm, which makes one-sided multiplication
operators carry exactly the norm of their multiplier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import expm
from scipy.optimize import minimize_scalar

from .errors import (
    BcinvError,
    ConvergenceFailure,
    InverseAbsent,
    PreconditionFailed,
    SpectralPreconditionFailed,
)
from .inverses import CornerFrame, bc_inverse, group_inverse
from .rings import FLOAT_MATRIX, RingValue

AGREE_TOL = 1e-8


def _require_float(*values: RingValue) -> None:
    for v in values:
        if v.ring.kind != FLOAT_MATRIX:
            raise PreconditionFailed("analytic operations need the float backend")


def _spectral_norm(arr: np.ndarray) -> float:
    return float(np.linalg.norm(arr, 2)) if arr.size else 0.0


def _nonzero_eigs(ring, eigs: np.ndarray) -> np.ndarray:
    if eigs.size == 0:
        return eigs
    threshold = ring.rank_tol * max(1.0, float(np.max(np.abs(eigs))))
    return eigs[np.abs(eigs) > threshold]


@dataclass
class SpectralReport:
    eigenvalues: np.ndarray
    spectral_radius: float
    group_projection: RingValue | None
    min_real_nonzero: float | None


def spectrum(x: RingValue) -> SpectralReport:
    """Eigenvalue data plus the group projection x*x^# when it exists."""
    _require_float(x)
    eigs = np.linalg.eigvals(x.payload)
    order = np.lexsort((eigs.imag, eigs.real))
    eigs = eigs[order]
    radius = float(np.max(np.abs(eigs))) if eigs.size else 0.0
    try:
        proj = x * group_inverse(x)
    except InverseAbsent:
        proj = None
    nz = _nonzero_eigs(x.ring, eigs)
    min_real = float(np.min(nz.real)) if nz.size else None
    return SpectralReport(eigs, radius, proj, min_real)


def integral_representation(a: RingValue, v: RingValue, tol: float = 1e-10,
                            panel_order: int = 16, min_panels: int = 4,
                            max_doublings: int = 8) -> RingValue:
    """Inverse as the integral of v*exp(-(a v)t) over the positive half-line.

    Requires every nonzero eigenvalue of a*v to have strictly positive real
    part; a purely imaginary or negative point makes the integral diverge,
    so the nominally admissible boundary Re = 0 is rejected.  The mirrored
    integrand exp(-(v a)t)*v is evaluated with the same panels and must
    agree, which guards the quadrature itself.
    """
    _require_float(a, v)
    ring = a.ring
    vP = v.payload
    if _spectral_norm(vP) == 0.0:
        return ring.zero()
    av = a.payload @ vP
    va = vP @ a.payload
    eigs = np.linalg.eigvals(av)
    nz = _nonzero_eigs(ring, eigs)
    if nz.size == 0:
        raise SpectralPreconditionFailed(
            "a*v has no nonzero spectrum but v is nonzero: the integrand cannot decay")
    rho = float(np.min(nz.real))
    if rho <= 0.0:
        raise SpectralPreconditionFailed(
            f"nonzero spectrum of a*v reaches Re = {rho:.3e} <= 0; the integral "
            "needs strictly positive real parts (Re = 0 is excluded here because "
            "the integrand does not decay at a purely imaginary eigenvalue)")
    # Truncation point from the exponential tail estimate |v| e^{-rho T}/rho.
    nv = _spectral_norm(vP)
    T = math.log(10.0 * max(nv, 1.0) / (tol * rho)) / rho
    T = max(T, 1.0 / rho)
    nodes, weights = leggauss(panel_order)

    def composite(kernel: Callable[[float], np.ndarray], panels: int) -> np.ndarray:
        total = np.zeros_like(vP)
        edges = np.linspace(0.0, T, panels + 1)
        for left, right in zip(edges[:-1], edges[1:]):
            half = 0.5 * (right - left)
            mid = 0.5 * (right + left)
            for xi, wi in zip(nodes, weights):
                total = total + (half * wi) * kernel(mid + half * xi)
        return total

    panels = min_panels
    previous = None
    result = None
    for _ in range(max_doublings):
        result = composite(lambda s: vP @ expm(-av * s), panels)
        if previous is not None:
            if _spectral_norm(result - previous) <= tol * (1.0 + _spectral_norm(result)):
                break
        previous = result
        panels *= 2
    else:
        raise ConvergenceFailure("quadrature did not stabilize under panel doubling")
    mirrored = composite(lambda s: expm(-va * s) @ vP, panels)
    if _spectral_norm(result - mirrored) > AGREE_TOL * (1.0 + _spectral_norm(result)):
        raise ConvergenceFailure("left and right integral forms disagree")
    return ring.element(result)


def _group_projection(x: np.ndarray, ring) -> tuple[np.ndarray, np.ndarray]:
    value = ring.element(x)
    sharp = group_inverse(value)          # raises InverseAbsent when missing
    return x @ sharp.payload, sharp.payload


def series_representation(a: RingValue, v: RingValue, beta: float,
                          tol: float = 1e-12, max_terms: int = 100000) -> RingValue:
    """Inverse as beta * sum of (1 - beta v a)^n v.

    Convergence needs |p - beta v a| < 1 where p is the group projection of
    v*a.  The partial sums are accumulated through (p - beta v a)^n v, which
    equals (1 - beta v a)^n v because the complement of p annihilates v;
    that keeps the iteration a strict contraction.
    """
    _require_float(a, v)
    ring = a.ring
    vP, aP = v.payload, a.payload
    va = vP @ aP
    av = aP @ vP
    try:
        p_va, _ = _group_projection(va, ring)
        p_av, _ = _group_projection(av, ring)
    except InverseAbsent as exc:
        raise PreconditionFailed(f"one-sided product is not group invertible: {exc}")
    M = p_va - beta * va
    ratio = _spectral_norm(M)
    if ratio >= 1.0:
        raise PreconditionFailed(
            f"|p - beta*v*a| = {ratio:.6f} >= 1: the series cannot converge")
    term = vP.copy()
    total = vP.copy()
    n = 0
    while abs(beta) * _spectral_norm(term) * ratio / (1.0 - ratio) > tol:
        term = M @ term
        total = total + term
        n += 1
        if n > max_terms:
            raise ConvergenceFailure("series tail bound did not reach tolerance")
    left = beta * total
    # Mirrored form through the other one-sided product.
    M2 = p_av - beta * av
    term = vP.copy()
    total = vP.copy()
    n = 0
    while abs(beta) * _spectral_norm(term) * ratio / (1.0 - ratio) > tol:
        term = term @ M2
        total = total + term
        n += 1
        if n > max_terms:
            raise ConvergenceFailure("mirrored series did not reach tolerance")
    right = beta * total
    if _spectral_norm(left - right) > AGREE_TOL * (1.0 + _spectral_norm(left)):
        raise ConvergenceFailure("left and right series forms disagree")
    return ring.element(left)


def choose_beta(a: RingValue, v: RingValue) -> float:
    """Real coefficient minimizing |p - beta v a|; fails if the minimum is >= 1."""
    _require_float(a, v)
    ring = a.ring
    va = v.payload @ a.payload
    scale = _spectral_norm(va)
    if scale == 0.0:
        return 1.0
    try:
        p_va, _ = _group_projection(va, ring)
    except InverseAbsent as exc:
        raise PreconditionFailed(f"v*a is not group invertible: {exc}")

    def objective(beta: float) -> float:
        return _spectral_norm(p_va - beta * va)

    res = minimize_scalar(objective, bounds=(-8.0 / scale, 8.0 / scale),
                          method="bounded", options={"xatol": 1e-12 / scale})
    best = float(res.x)
    if objective(best) >= 1.0:
        raise PreconditionFailed("no real coefficient makes the series contract")
    return best


def limit_representation(a: RingValue, v: RingValue, lambda0: float | None = None,
                         tol: float = 1e-10, max_steps: int = 80,
                         blowup: float = 1e14, floor_tol: float = 1e-5) -> RingValue:
    """Inverse as the limit of v (lambda + a v)^{-1} along a geometric schedule.

    The schedule starts at min(1, rho/2) with rho the isolation radius of 0
    in the spectrum of a*v, halves each step, and skips points that collide
    with the spectrum of -(a*v).  Iteration stops when successive iterates
    differ below tolerance; once the resolvent conditioning floor makes the
    differences turn upward, the best iterate so far is accepted provided it
    already reached floor_tol.  Divergent resolvent growth is a failure.
    """
    _require_float(a, v)
    ring = a.ring
    vP, aP = v.payload, a.payload
    av = aP @ vP
    va = vP @ aP
    eye = np.eye(ring.k)
    eigs = np.linalg.eigvals(av)
    nz = _nonzero_eigs(ring, eigs)
    if lambda0 is None:
        iso = float(np.min(np.abs(nz))) if nz.size else 1.0
        lam = min(1.0, iso / 2.0)
    else:
        lam = float(lambda0)

    def admissible(l: float) -> bool:
        return bool(np.all(np.abs(l + eigs) > 1e-12 * (1.0 + np.abs(eigs))))

    previous = None
    best = None
    best_diff = math.inf
    mirror_checked = False
    for _ in range(max_steps):
        if not admissible(lam):
            lam *= 0.5
            continue
        current = np.linalg.solve((lam * eye + av).T, vP.T).T
        if not mirror_checked:
            # The two-sided identity holds at every admissible lambda; assert
            # it here where the resolvent is still well conditioned.
            mirrored = np.linalg.solve(lam * eye + va, vP)
            if _spectral_norm(current - mirrored) > AGREE_TOL * (1.0 + _spectral_norm(current)):
                raise ConvergenceFailure("left and right limit forms disagree")
            mirror_checked = True
        if _spectral_norm(current) > blowup * (1.0 + _spectral_norm(vP)):
            raise ConvergenceFailure("resolvent iterates diverge as lambda -> 0")
        if previous is not None:
            diff = _spectral_norm(current - previous) / (1.0 + _spectral_norm(current))
            if diff <= tol:
                return ring.element(current)
            if diff < best_diff:
                best_diff = diff
                best = current
            elif diff > 4.0 * best_diff and best_diff <= floor_tol:
                return ring.element(best)
        previous = current
        lam *= 0.5
    if best is not None and best_diff <= floor_tol:
        return ring.element(best)
    raise ConvergenceFailure("limit iterates did not stabilize")


def build_H(a: RingValue, v: RingValue, frame: CornerFrame,
            ctol: float = 1e-8) -> tuple[RingValue, float]:
    """Left-multiplier w = (a v)^# a p realizing the auxiliary operator.

    Certified properties: w annihilates the complement range (1-p), and
    w applied to the inverse recovers the group inverse of a*v.  The
    returned norm is the spectral norm of w, which equals the induced norm
    of left multiplication by w.
    """
    _require_float(a, v)
    ring = a.ring
    try:
        sharp = group_inverse(a * v)
    except InverseAbsent as exc:
        raise PreconditionFailed(f"a*v is not group invertible: {exc}")
    w = sharp.payload @ a.payload @ frame.p.payload
    scale = 1.0 + _spectral_norm(w) + _spectral_norm(sharp.payload)
    y = bc_inverse(a, frame)
    one = np.eye(ring.k)
    if _spectral_norm(w @ (one - frame.p.payload)) > ctol * scale:
        raise PreconditionFailed("multiplier fails to annihilate the complement")
    if _spectral_norm(w @ y.payload - sharp.payload) > ctol * scale:
        raise PreconditionFailed("multiplier does not map the inverse to the group inverse")
    return ring.element(w), _spectral_norm(w)


def build_H_right(a: RingValue, v: RingValue, frame: CornerFrame,
                  ctol: float = 1e-8) -> tuple[RingValue, float]:
    """Right-multiplier counterpart q a (v a)^#, by the transpose duality."""
    _require_float(a, v)
    ring = a.ring
    try:
        sharp = group_inverse(ring.element(v.payload @ a.payload))
    except InverseAbsent as exc:
        raise PreconditionFailed(f"v*a is not group invertible: {exc}")
    w = frame.q.payload @ a.payload @ sharp.payload
    scale = 1.0 + _spectral_norm(w) + _spectral_norm(sharp.payload)
    y = bc_inverse(a, frame)
    one = np.eye(ring.k)
    if _spectral_norm((one - frame.q.payload) @ w) > ctol * scale:
        raise PreconditionFailed("right multiplier escapes the corner column space")
    if _spectral_norm(y.payload @ w - sharp.payload) > ctol * scale:
        raise PreconditionFailed("right multiplier does not recover the group inverse")
    return ring.element(w), _spectral_norm(w)


@dataclass
class BoundReport:
    lam: float
    measured: float
    bound: float
    margin: float
    norm_a: float
    norm_v: float
    norm_inverse: float
    norm_h: float
    measured_right: float | None = None
    bound_right: float | None = None
    margin_right: float | None = None
    norm_h_right: float | None = None


def perturbation_bound(a: RingValue, v: RingValue, frame: CornerFrame,
                       lam: float) -> BoundReport:
    """Resolvent deviation |y - v(lam + a v)^{-1}| against its a-priori bound.

    Admissible: lam outside the spectrum of -(a v) with
    |lam| < 1 / (|a| |y|^2 |H|).  Degenerate data (|a| |y| |H| = 0) means
    the deviation is identically zero and no bound is needed.
    """
    _require_float(a, v)
    ring = a.ring
    y = bc_inverse(a, frame)
    na, nv, ny = a.norm(), v.norm(), y.norm()
    av = a.payload @ v.payload
    eye = np.eye(ring.k)
    if na * ny == 0.0:
        return BoundReport(lam, 0.0, 0.0, math.inf, na, nv, ny, 0.0,
                           0.0, 0.0, math.inf, 0.0)
    _, nH = build_H(a, v, frame)
    if nH == 0.0:
        return BoundReport(lam, 0.0, 0.0, math.inf, na, nv, ny, 0.0,
                           0.0, 0.0, math.inf, 0.0)
    eigs = np.linalg.eigvals(av)
    if not np.all(np.abs(lam + eigs) > 1e-12 * (1.0 + np.abs(eigs))):
        raise PreconditionFailed(f"lambda = {lam} lies in the spectrum of -(a v)")
    radius = 1.0 / (na * ny * ny * nH)
    margin = radius - abs(lam)
    if margin <= 0.0:
        raise PreconditionFailed(
            f"|lambda| = {abs(lam):.6g} is not below the admissible radius {radius:.6g}")
    resolvent = np.linalg.solve((lam * eye + av).T, v.payload.T).T
    measured = _spectral_norm(y.payload - resolvent)
    bound = (abs(lam) * nv * na * ny ** 3 * nH ** 2) / (1.0 - abs(lam) * na * ny * ny * nH)
    # The resolvent solve carries backward error ~ eps |av| / |lambda|, which
    # dominates the true deviation once lambda is tiny; allow for it.
    conditioning = 1.0 + (_spectral_norm(av) / abs(lam) if lam != 0.0 else 0.0)
    noise = 1e-13 * (1.0 + nv) * conditioning
    if measured > bound * (1.0 + 1e-9) + noise:
        raise BcinvError(
            f"measured deviation {measured:.3e} exceeds the bound {bound:.3e}")
    report = BoundReport(lam, measured, bound, margin, na, nv, ny, nH)
    _, nHr = build_H_right(a, v, frame)
    radius_r = math.inf if nHr == 0.0 else 1.0 / (na * ny * ny * nHr)
    if abs(lam) < radius_r:
        va = v.payload @ a.payload
        resolvent_r = np.linalg.solve(lam * eye + va, v.payload)
        measured_r = _spectral_norm(y.payload - resolvent_r)
        if nHr == 0.0:
            bound_r = 0.0
        else:
            bound_r = ((abs(lam) * nv * na * ny ** 3 * nHr ** 2)
                       / (1.0 - abs(lam) * na * ny * ny * nHr))
        if measured_r > bound_r * (1.0 + 1e-9) + noise:
            raise BcinvError("right-sided deviation exceeds its bound")
        report.measured_right = measured_r
        report.bound_right = bound_r
        report.margin_right = radius_r - abs(lam)
        report.norm_h_right = nHr
    return report


def difference_identity(a1: RingValue, frame1: CornerFrame,
                        a2: RingValue, frame2: CornerFrame,
                        tol: float = 1e-8) -> float:
    """Residual of the three-term identity for the difference of two inverses.

    y2 - y1 = y2 (q2 - q1)(1 - a1 y1) + (1 - y2 a2)(p2 - p1) y1
              + y2 (a1 - a2) y1

    The middle term enters with a plus: its building block is
    y2 a2 y1 - y1 = (1 - y2 a2)(p2 - p1) y1, which follows from
    y1 = p1 y1 and (1 - y2 a2) p2 = 0.
    """
    _require_float(a1, a2)
    try:
        y1 = bc_inverse(a1, frame1)
        y2 = bc_inverse(a2, frame2)
    except InverseAbsent as exc:
        raise PreconditionFailed(f"a constituent inverse is missing: {exc}")
    one = np.eye(a1.ring.k)
    y1P, y2P = y1.payload, y2.payload
    p1, q1 = frame1.p.payload, frame1.q.payload
    p2, q2 = frame2.p.payload, frame2.q.payload
    lhs = y2P - y1P
    rhs = (y2P @ (q2 - q1) @ (one - a1.payload @ y1P)
           + (one - y2P @ a2.payload) @ (p2 - p1) @ y1P
           + y2P @ (a1.payload - a2.payload) @ y1P)
    residual = _spectral_norm(lhs - rhs)
    scale = ((1.0 + _spectral_norm(y1P)) * (1.0 + _spectral_norm(y2P))
             * (1.0 + max(a1.norm(), a2.norm())))
    if residual > tol * scale:
        raise BcinvError(f"difference identity residual {residual:.3e} beyond tolerance")
    return residual


@dataclass
class SequenceSpec:
    """Sequence of (element, frame) pairs converging to a limit pair."""

    terms: Callable[[int], tuple[RingValue, CornerFrame]]
    limit: tuple[RingValue, CornerFrame]
    indices: Sequence[int]


@dataclass
class ContinuityReport:
    indices: list[int]
    norms: list[float]
    deviations: list[float] | None
    limit_exists: bool
    bounded: bool
    converged: bool
    growth_exponent: float
    classification: str


def continuity_experiment(seq: SequenceSpec, tol: float = 1e-6) -> ContinuityReport:
    """Inverse norms and deviations along the sequence, with a verdict.

    Bounded inverse norms and convergence of the inverses are equivalent
    (the forward direction by the difference identity, the converse because
    convergent sequences are bounded); a violation of either direction is
    an error, divergence itself is just a reported outcome.
    """
    a_lim, frame_lim = seq.limit
    _require_float(a_lim)
    try:
        y_lim = bc_inverse(a_lim, frame_lim)
    except InverseAbsent:
        y_lim = None
    indices = list(seq.indices)
    norms: list[float] = []
    deviations: list[float] | None = [] if y_lim is not None else None
    absent = 0
    for n in indices:
        a_n, frame_n = seq.terms(n)
        try:
            y_n = bc_inverse(a_n, frame_n)
        except InverseAbsent:
            absent += 1
            norms.append(math.inf)
            if deviations is not None:
                deviations.append(math.inf)
            continue
        norms.append(y_n.norm())
        if deviations is not None:
            deviations.append(_spectral_norm(y_n.payload - y_lim.payload))
    finite = [v for v in norms if math.isfinite(v) and v > 0.0]
    if len(finite) >= 2 and len(finite) == len(norms):
        logs_n = np.log(np.asarray(indices, dtype=float))
        logs_v = np.log(np.asarray(norms))
        growth = float(np.polyfit(logs_n, logs_v, 1)[0]) if len(indices) > 1 else 0.0
    else:
        growth = math.inf if absent or math.inf in norms else 0.0
    bounded = math.isfinite(max(norms)) and growth < 0.25
    scale = 1.0 + (y_lim.norm() if y_lim is not None else 0.0)
    converged = (deviations is not None and len(deviations) > 0
                 and math.isfinite(deviations[-1]) and deviations[-1] <= tol * scale)
    if bounded and y_lim is not None and not converged:
        # Bounded norms force convergence; tolerate sequences sampled too
        # early by accepting a clearly shrinking deviation instead.
        peak = max(deviations) if deviations else 0.0
        if not (deviations and deviations[-1] <= 0.6 * peak + tol * scale):
            raise BcinvError("bounded inverse norms without convergence to the limit inverse")
    if converged and not bounded:
        raise BcinvError("convergent inverses cannot have unbounded norms")
    if converged:
        classification = "convergent"
    elif not bounded:
        classification = "divergent"
    else:
        classification = "inconclusive"
    return ContinuityReport(indices, norms, deviations, y_lim is not None,
                            bounded, converged, growth, classification)
