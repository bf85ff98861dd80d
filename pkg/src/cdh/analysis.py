"""Certification harness: scaled sup-norm convergence, rate fitting,
conservation drift, contraction/comparison checks, the non-radial gap and
origin behavior.

Sup norms are taken over a time-adaptive window |y| <= 8 sqrt(t) + a in log
coordinates (the profiles' natural scale), and the Gaussian tail bound beyond
the window is added to the reported error, so a reported sup is an upper bound
for the sup over all of space, not just over the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .profiles import AngularRange, Dimension, erfc_fn, gaussian_kernel
from .quadrature import integrate
from .solver import SolutionTrajectory, heat1d_solve
from .transforms import (InitialDatum, LineField, RadialField, line_mass,
                         sphere_area, to_log_coords, weighted_mass)

__all__ = [
    "ErrorSeries",
    "RateFit",
    "ContractionReport",
    "ComparisonReport",
    "PositivityReport",
    "convergence_error",
    "two_branch_convergence",
    "fit_rate",
    "conservation_drift",
    "contraction_check",
    "comparison_check",
    "counterexample_gap",
    "counterexample_gap_analytic",
    "positivity_check",
]


@dataclass(frozen=True)
class ErrorSeries:
    """Samples (t, t^s * sup-error) feeding the rate fitter."""

    times: np.ndarray
    errors: np.ndarray
    scaling_exponent: float

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        e = np.asarray(self.errors, dtype=float)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "errors", e)
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        if e.shape != t.shape or not np.all(np.isfinite(e)) or np.any(e < 0):
            raise ValueError("errors must be finite, nonnegative, matching times")

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.times.tolist(), self.errors.tolist()))


@dataclass(frozen=True)
class RateFit:
    """Least-squares power law e ~ exp(intercept) * t^exponent on log-log axes."""

    exponent: float
    intercept: float
    r_squared: float
    window: tuple[float, float]
    n_used: int


def _eval_grid(t: float, pad: float, points: int, span_factor: float) -> np.ndarray:
    reach = span_factor * math.sqrt(t) + pad
    return np.linspace(-reach, reach, points)


def convergence_error(u0: InitialDatum, times, dim: Dimension | None = None, *,
                      profile: str = "F", s: float = 0.5,
                      span_factor: float = 8.0, points: int = 4097
                      ) -> ErrorSeries:
    """Scaled sup-norm distance t^s * sup |u(., t) - profile(., t)|.

    For an F-profile the multiple of F is the conserved weighted mass divided
    by the sphere area (computed from the datum, not fitted); for an E-profile
    the level is the datum's origin value.  The comparison runs entirely in
    log coordinates, where it is exactly equivalent to the radial sup norm.
    """
    d = dim or u0.dim
    v0 = to_log_coords(u0, 0.0, d)
    wlo, whi = u0.window()
    pad = max(abs(wlo), abs(whi)) + 2.0

    if profile == "F":
        if u0.origin_value > 0:
            raise ValueError("F-profile comparison requires a datum vanishing "
                             "at the origin")
        coeff = weighted_mass(u0).value / sphere_area(d)
        if not math.isfinite(coeff):
            raise ValueError("F-profile comparison requires finite weighted mass")
        target = lambda y, t: coeff * gaussian_kernel(y, t)
        tail = lambda t: 2.0 * coeff * gaussian_kernel(span_factor * math.sqrt(t), t)
    elif profile == "E":
        level = u0.origin_value
        if level <= 0:
            raise ValueError("E-profile comparison requires a positive origin value")
        target = lambda y, t: 0.5 * level * np.asarray(erfc_fn(y / (2.0 * math.sqrt(t))))
        tail = lambda t: level * float(erfc_fn(span_factor))
    else:
        raise ValueError(f"unknown profile kind {profile!r}")

    errs = []
    for t in times:
        grid = _eval_grid(t, pad, points, span_factor)
        v = heat1d_solve(v0, t, grid=grid)
        sup = float(np.max(np.abs(v.values - target(grid, t))))
        errs.append(t**s * (sup + tail(t) + v.err_bound))
    return ErrorSeries(np.asarray(list(times), dtype=float), np.asarray(errs), s)


def two_branch_convergence(minus: InitialDatum, plus: InitialDatum, times, *,
                           s: float = 0.5, span_factor: float = 8.0,
                           points: int = 4097) -> ErrorSeries:
    """Convergence of a two-branch dimension-one solution to its two-branch profile.

    The singular point disconnects the real line, so each half-line evolves
    independently toward its own Gaussian multiple; the reported error is the
    worse of the two branches, i.e. the sup over the whole line against the
    branch-weighted profile.
    """
    one = Dimension(1)
    branch_errs = []
    for branch in (minus, plus):
        if branch.dim.n != 1:
            raise ValueError("two-branch data live in dimension 1")
        coeff = line_mass(branch).value / sphere_area(one)
        series = convergence_error(branch, times, one, profile="F", s=s,
                                   span_factor=span_factor, points=points)
        branch_errs.append(series.errors)
    return ErrorSeries(np.asarray(list(times), dtype=float),
                       np.maximum(*branch_errs), s)


def fit_rate(series: ErrorSeries, window: tuple[float, float] | None = None
             ) -> RateFit:
    """Ordinary least squares of log error against log time.

    Zero errors are excluded (they carry no rate information); fewer than 5
    usable samples is an error, not a silent fit.
    """
    t, e = series.times, series.errors
    lo, hi = window if window else (float(t[0]), float(t[-1]))
    keep = (t >= lo) & (t <= hi) & (e > 0)
    if int(np.sum(keep)) < 5:
        raise ValueError(f"need >= 5 positive samples in the window, "
                         f"got {int(np.sum(keep))}")
    x, y = np.log(t[keep]), np.log(e[keep])
    design = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ [slope, intercept]
    total = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if total == 0.0 else 1.0 - float(np.sum(resid**2)) / total
    return RateFit(float(slope), float(intercept), r2, (lo, hi), int(np.sum(keep)))


# ---------------------------------------------------------------------------
# conservation / contraction / comparison
# ---------------------------------------------------------------------------

def _snapshot_line_mass(f: LineField) -> float:
    if f.tail_left != 0.0 or f.tail_right != 0.0:
        raise ValueError("mass integral requires an integrable (zero-tail) field")
    if f.sampler is not None:
        lo, hi = f.window if f.window is not None else f.span
        return integrate(f.at, lo, hi, breakpoints=f.breakpoints,
                         max_width=0.5).value
    return float(simpson(f.values, x=f.grid))


def _snapshot_mass(field) -> float:
    if isinstance(field, LineField):
        return _snapshot_line_mass(field)
    if isinstance(field, RadialField):
        if field.origin_value > 0:
            raise ValueError("mass integral requires a field vanishing at the origin")
        return float(simpson(field.values, x=np.log(field.radii)))
    raise ValueError("unsupported snapshot type")


def conservation_drift(traj: SolutionTrajectory) -> float:
    """Largest relative drift of the weighted mass across the trajectory.

    The mass against |x|^-N equals the plain line integral of v (times the
    sphere area, which cancels in the ratio).  Returns absolute drift when the
    initial mass vanishes.
    """
    masses = [_snapshot_mass(f) for _, f in traj.snapshots]
    m0 = masses[0]
    dev = max(abs(m - m0) for m in masses)
    return dev / abs(m0) if m0 != 0.0 else dev


@dataclass(frozen=True)
class ContractionReport:
    times: np.ndarray
    series: np.ndarray
    max_increase: float
    ok: bool


def _positive_part_weighted_integral(f1: LineField, f2: LineField, drift: int,
                                     t: float) -> float:
    """int e^{drift (y - drift t)} [f1 - f2]_+ dy with crossings located exactly.

    This is the |x|^-2 integral expressed in the drifted log coordinate; the
    weight peaks near y = 2 drift t (far outside the solution scale), so the
    window is extended to cover it, and the e^{-drift^2 t} prefactor is folded
    into the exponent to keep everything in floating-point range.  Kernel
    fields carry exact samplers, so sign changes of the smooth difference are
    bisected to machine precision and each positive segment is integrated as a
    smooth piece: no quadrature kink error enters the monotonicity check.
    """
    if f1.tail_right != 0.0 or f2.tail_right != 0.0:
        raise ValueError("contraction integral needs decaying right tails")
    diff = lambda y: f1.at(y) - f2.at(y)
    lo = min(float(f1.grid[0]), -8.0 * math.sqrt(t) - 2.0)
    hi = max(float(f1.grid[-1]), 2.0 * drift * t + 8.0 * math.sqrt(t) + 2.0)
    probe = np.linspace(lo, hi, 8193)
    weight = lambda y: np.exp(drift * (y - drift * t))

    d = diff(probe)
    sign = np.sign(d)
    crossings = []
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        a, b = probe[i], probe[i + 1]
        fa = float(d[i])
        for _ in range(60):
            m = 0.5 * (a + b)
            fm = float(diff(np.array([m]))[0])
            if fa * fm <= 0:
                b = m
            else:
                a, fa = m, fm
        crossings.append(0.5 * (a + b))
    edges = [lo, *crossings, hi]
    width = max(min(1.0, 2.0 * math.sqrt(t)), (hi - lo) / 256.0)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (a + b)
        if float(diff(np.array([mid]))[0]) <= 0:
            continue
        piece = integrate(lambda y: weight(y) * np.maximum(diff(y), 0.0),
                          a, b, max_width=width)
        total += piece.value
    # left tails: a positive constant gap contributes analytically
    gap = f1.tail_left - f2.tail_left
    if gap > 0 and drift > 0:
        total += gap * math.exp(drift * (lo - drift * t)) / drift
    elif gap > 0:
        raise ValueError("positive left-tail gap is not integrable for n <= 2")
    return total


def contraction_check(traj1: SolutionTrajectory, traj2: SolutionTrajectory, *,
                      tol: float = 1e-8) -> ContractionReport:
    """Series of the weighted positive-part integral int |x|^-2 [u1 - u2]_+ dx.

    For two solutions this is nonincreasing in time; any increase beyond tol
    is flagged.  Snapshot times and grids must match between the trajectories.
    """
    t1, t2 = traj1.times, traj2.times
    if t1.shape != t2.shape or not np.allclose(t1, t2):
        raise ValueError("trajectories must share snapshot times")
    if traj1.dim != traj2.dim:
        raise ValueError("trajectories must share the dimension")
    drift = traj1.dim.drift
    w1 = sphere_area(traj1.dim)
    out = []
    for (t, f1), (_, f2) in zip(traj1.snapshots, traj2.snapshots):
        if isinstance(f1, LineField) and isinstance(f2, LineField):
            if f1.grid.shape != f2.grid.shape or not np.allclose(f1.grid, f2.grid):
                raise ValueError("snapshot grids must match")
            out.append(w1 * _positive_part_weighted_integral(f1, f2, drift, t))
        elif isinstance(f1, RadialField) and isinstance(f2, RadialField):
            if not np.allclose(f1.radii, f2.radii):
                raise ValueError("snapshot grids must match")
            y = np.log(f1.radii)
            integrand = np.exp(drift * y) * np.maximum(f1.values - f2.values, 0.0)
            out.append(w1 * float(simpson(integrand, x=y)))
        else:
            raise ValueError("snapshot types must match")
    series = np.asarray(out)
    inc = float(np.max(np.diff(series))) if series.size > 1 else 0.0
    return ContractionReport(t1, series, inc, inc <= tol)


@dataclass(frozen=True)
class ComparisonReport:
    times: np.ndarray
    max_violation: float
    ok: bool


def comparison_check(traj1: SolutionTrajectory, traj2: SolutionTrajectory, *,
                     tol: float = 1e-10) -> ComparisonReport:
    """Pointwise ordering u1 <= u2 at every snapshot, given ordered data."""
    t1, t2 = traj1.times, traj2.times
    if t1.shape != t2.shape or not np.allclose(t1, t2):
        raise ValueError("trajectories must share snapshot times")
    first1 = traj1.snapshots[0][1]
    first2 = traj2.snapshots[0][1]
    if float(np.max(first1.values - first2.values)) > tol:
        raise ValueError("initial data are not ordered; comparison premise fails")
    worst = -math.inf
    for (_, f1), (_, f2) in zip(traj1.snapshots, traj2.snapshots):
        worst = max(worst, float(np.max(f1.values - f2.values)))
    return ComparisonReport(t1, worst, worst <= tol)


# ---------------------------------------------------------------------------
# counterexample gap and origin behavior
# ---------------------------------------------------------------------------

def counterexample_gap_analytic(angular: AngularRange) -> float:
    """Closed form of the gap: half the angular width times sup_t sqrt(t) F."""
    return 0.5 * angular.width / math.sqrt(4.0 * math.pi)


def counterexample_gap(t: float, dim: Dimension,
                       angular: AngularRange = AngularRange(), *,
                       ny: int = 4096, ntheta: int = 2049,
                       span_factor: float = 8.0) -> float:
    """Distance of the product solution theta*F from the radial multiples of F.

    g(t) = min_c sqrt(t) sup_{r, theta} |theta F - c F|, evaluated on grids
    with a ternary search over the constant.  The minimum stays bounded away
    from zero (half-width / sqrt(4 pi), independent of t): no radial multiple
    of F attracts the product solution.
    """
    if not t > 0:
        raise ValueError("time must be positive")
    y = np.linspace(-span_factor * math.sqrt(t), span_factor * math.sqrt(t), ny)
    sup_f = math.sqrt(t) * float(np.max(gaussian_kernel(y, t)))
    theta = np.linspace(angular.theta_min, angular.theta_max, ntheta)

    def objective(c: float) -> float:
        return sup_f * float(np.max(np.abs(theta - c)))

    lo, hi = angular.theta_min, angular.theta_max
    for _ in range(200):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if objective(m1) <= objective(m2):
            hi = m2
        else:
            lo = m1
    return objective(0.5 * (lo + hi))


@dataclass(frozen=True)
class PositivityReport:
    times: np.ndarray
    min_values: np.ndarray
    tail_left: float
    left_tail_monotone: bool
    vacuous: bool
    ok: bool


def positivity_check(u0: InitialDatum, times, r0: float | None = None,
                     dim: Dimension | None = None, *,
                     points: int = 4097) -> PositivityReport:
    """Instant positivity away from the origin, with the origin pinned at zero.

    The datum must vanish on a ball r < r0; the solution is then positive at
    every interior grid point for every t > 0, while the log-coordinate left
    tail stays exactly 0, i.e. u(0, t) = 0 for all time.
    """
    d = dim or u0.dim
    v0 = to_log_coords(u0, 0.0, d)
    wlo, _ = u0.window()
    if r0 is not None and math.log(r0) > wlo + 1e-12:
        raise ValueError(f"datum does not vanish on r < {r0}")
    if u0.origin_value != 0.0:
        raise ValueError("datum must vanish near the origin")
    mass = line_mass(u0).value
    if mass == 0.0:
        empty = np.asarray(list(times), dtype=float)
        return PositivityReport(empty, np.zeros_like(empty), 0.0, True, True, True)

    mins, monotone = [], True
    for t in times:
        v = heat1d_solve(v0, t, points=points)
        mins.append(float(np.min(v.values)))
        head = v.values[: points // 8]
        monotone = monotone and bool(np.all(np.diff(head) >= -1e-300))
    mins_arr = np.asarray(mins)
    ok = bool(np.all(mins_arr > 0.0)) and monotone and v0.tail_left == 0.0
    return PositivityReport(np.asarray(list(times), dtype=float), mins_arr,
                            v0.tail_left, monotone, False, ok)
