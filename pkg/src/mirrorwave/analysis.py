"""Density profiles, fringe extraction, visibility, and universal curves.

The fringe machinery works on sampled density profiles.  Extrema are
located by a three-point discrete test and refined by parabolic
interpolation, which is accurate to O(h**2) of the fringe scale
sqrt(pi hbar t / m) provided the grid resolves the fringes (spacing of
1/20 of the fringe width or finer near the front).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .physics import MirrorKind, PhysicalContext, Scenario
from .specialfn import fresnel
from .waves import (
    critical_points,
    initial_state,
    psi_moving,
    psi_sudden,
    WaveComponents,
)


class AnalysisError(RuntimeError):
    """Raised when a profile carries no resolvable fringe structure."""


@dataclass(frozen=True)
class DensityProfile:
    """Densities |psi|**2 sampled on a strictly increasing grid."""

    scenario: Scenario
    xs: np.ndarray
    densities: np.ndarray
    components: WaveComponents | None = None

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        d = np.asarray(self.densities, dtype=float)
        if xs.ndim != 1 or d.shape != xs.shape:
            raise ValueError("xs and densities must be matching 1-D arrays")
        if xs.size == 0:
            raise ValueError("profile grid must be non-empty")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("xs must be strictly increasing")
        if np.any(d < 0):
            raise ValueError("densities must be nonnegative")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "densities", d)


@dataclass(frozen=True)
class FringeStats:
    """Main-fringe summary: peak, first minimum behind it, and contrast."""

    p_max: float
    p_min: float
    x_peak: float
    x_min: float
    visibility: float
    fringe_width: float

    def __post_init__(self):
        if not (self.p_max >= self.p_min >= 0.0):
            raise ValueError("require p_max >= p_min >= 0")
        if not (0.0 <= self.visibility <= 1.0):
            raise ValueError("visibility must lie in [0, 1]")


def fringe_scale(scenario: Scenario) -> float:
    """Characteristic fringe width sqrt(pi hbar t / m)."""
    ctx = scenario.context
    return float(np.sqrt(np.pi * ctx.hbar * scenario.time / ctx.mass))


def profile(scenario: Scenario, xs, with_components: bool = False) -> DensityProfile:
    """Evaluate |psi|**2 for the scenario's mirror law on the given grid.

    The forbidden region beyond a moving mirror reports density zero.
    """
    xs = np.asarray(xs, dtype=float)
    if scenario.time <= 0.0 and scenario.mirror.kind is not MirrorKind.STATIC:
        raise ValueError("profile requires scenario.time > 0")
    kind = scenario.mirror.kind
    components = None
    if kind is MirrorKind.STATIC:
        dens = np.abs(initial_state(xs, scenario.k)) ** 2
    elif kind is MirrorKind.SUDDEN_REMOVAL:
        dens = np.abs(psi_sudden(xs, scenario.time, scenario.k, scenario.context)) ** 2
    else:
        wc = psi_moving(xs, scenario.time, scenario)
        dens = np.abs(wc.psi) ** 2
        if with_components:
            components = wc
    return DensityProfile(scenario, xs, dens, components)


def _refine_extremum(xs, d, i):
    """Parabola through (i-1, i, i+1); returns (x*, d*)."""
    x0, x1, x2 = xs[i - 1], xs[i], xs[i + 1]
    d0, d1, d2 = d[i - 1], d[i], d[i + 1]
    # general three-point quadratic vertex (handles mildly nonuniform grids)
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (d1 - d0) + x1 * (d0 - d2) + x0 * (d2 - d1)) / denom
    b = (x2 * x2 * (d0 - d1) + x1 * x1 * (d2 - d0) + x0 * x0 * (d1 - d2)) / denom
    if a == 0.0:
        return x1, d1
    xv = -b / (2.0 * a)
    if not (x0 <= xv <= x2):
        return x1, d1
    c = d0 - a * x0 * x0 - b * x0
    return xv, a * xv * xv + b * xv + c


def _local_extrema(d):
    inner = d[1:-1]
    maxima = np.where((inner > d[:-2]) & (inner >= d[2:]))[0] + 1
    minima = np.where((inner < d[:-2]) & (inner <= d[2:]))[0] + 1
    return maxima, minima


def _analysis_window(p: DensityProfile):
    """(lo, hi, mirror_side) bounds of the fringe search window."""
    s = p.scenario
    kind = s.mirror.kind
    if kind is MirrorKind.STATIC:
        raise AnalysisError("a static mirror produces no travelling fringes")
    delta = fringe_scale(s)
    if kind is MirrorKind.MOVING and s.mirror_velocity < s.v_k:
        cp = critical_points(s)
        return cp.x_plus, cp.x_mirror, True
    front = s.v_k * s.time
    hi = front + 6.0 * delta
    if kind is MirrorKind.MOVING:
        hi = min(hi, s.mirror_velocity * s.time)
    return front - 12.0 * delta, hi, False


def main_fringe(p: DensityProfile) -> FringeStats:
    """Extract the main fringe of the matter-wave front.

    For sudden removal and mirrors at or above beam velocity the main
    peak is the highest local maximum in a window around the beam front
    v_k t (ties broken toward the front).  For a mirror slower than the
    beam the fringes of interest are the reflected-front oscillations
    between x_plus and the mirror; there the most developed fringe --
    the one adjacent to the mirror, which tends to the asymptotic
    standing wave -- is taken as the main peak.  In every case p_min is
    the first local minimum behind (left of) the peak, per the contrast
    definition V = (P_max - P_min)/(P_max + P_min).
    """
    lo, hi, mirror_side = _analysis_window(p)
    xs, d = p.xs, p.densities
    lo = max(lo, xs[0])
    hi = min(hi, xs[-1])
    sel = (xs >= lo) & (xs <= hi)
    if sel.sum() < 5:
        raise AnalysisError("analysis window contains too few grid points")
    idx = np.where(sel)[0]
    xw, dw = xs[idx[0] : idx[-1] + 1], d[idx[0] : idx[-1] + 1]
    maxima, minima = _local_extrema(dw)
    if maxima.size == 0:
        raise AnalysisError("no local maximum found (grid too coarse or no fringes)")
    if mirror_side:
        i_peak = maxima[-1]
    else:
        best = dw[maxima].max()
        # nearest the front among (near-)ties
        candidates = maxima[dw[maxima] >= best * (1.0 - 1e-12)]
        i_peak = candidates[-1]
    left_minima = minima[minima < i_peak]
    if left_minima.size == 0:
        raise AnalysisError("no local minimum behind the main peak")
    i_min = left_minima[-1]
    x_peak, p_max = _refine_extremum(xw, dw, i_peak)
    x_min, p_min = _refine_extremum(xw, dw, i_min)
    p_min = max(p_min, 0.0)  # parabolic refinement may dip below zero at nodes
    visibility = (p_max - p_min) / (p_max + p_min)
    return FringeStats(
        p_max=p_max,
        p_min=p_min,
        x_peak=x_peak,
        x_min=x_min,
        visibility=min(visibility, 1.0),
        fringe_width=2.0 * abs(x_peak - x_min),
    )


def cornu_theta(x, t: float, k_eff: float, context: PhysicalContext):
    """Dimensionless Cornu-spiral parameter.

        theta = sqrt(m / (pi hbar t)) * (hbar k_eff t / m - x)

    zero at the classical position of a particle with wavenumber k_eff
    (the mirror position when k_eff = m v / hbar), positive behind it.
    The normalization is pinned by the requirement that
    ``universal_enhanced(cornu_theta(...))`` reproduce
    |psi_near_limit|**2 exactly at v = v_k.
    """
    if not t > 0.0:
        raise ValueError("cornu_theta requires t > 0")
    hbar, m = context.hbar, context.mass
    xa = np.asarray(x, dtype=float)
    val = np.sqrt(m / (np.pi * hbar * t)) * (hbar * k_eff * t / m - xa)
    return float(val[()]) if val.ndim == 0 else val


def universal_enhanced(theta):
    """Enhanced-release universal profile 2[S(theta)**2 + C(theta)**2].

    Describes the beam released by a mirror receding at the beam
    velocity; zero for theta <= 0 (beyond the mirror), tending to 1 far
    behind the front.  Peak value 1.8014163538604137.
    """
    th = np.asarray(theta, dtype=float)
    c, s = fresnel(np.maximum(th, 0.0))
    val = np.where(th > 0.0, 2.0 * (np.square(c) + np.square(s)), 0.0)
    return float(val[()]) if val.ndim == 0 else val


def universal_ordinary(theta):
    """Sudden-removal universal profile [(S+1/2)**2 + (C+1/2)**2] / 2.

    Valid for arbitrary theta wherever the counter-propagating component
    is negligible; tends to 0 far ahead of the front and 1 far behind.
    Peak value 1.3704429197031104.
    """
    th = np.asarray(theta, dtype=float)
    c, s = fresnel(th)
    val = 0.5 * (np.square(s + 0.5) + np.square(c + 0.5))
    return float(val[()]) if val.ndim == 0 else val


#: Exact maxima of the two universal curves (independent multiprecision values).
ENHANCED_PEAK = 1.8014163538604137
ORDINARY_PEAK = 1.3704429197031104


@dataclass(frozen=True)
class WidthScalingResult:
    """Fringe widths per evaluation time and the fitted power-law exponent."""

    points: tuple
    exponent: float


def _front_grid(scenario: Scenario, per_scale: int = 64) -> np.ndarray:
    """Grid resolving the fringe window of the scenario's front."""
    delta = fringe_scale(scenario)
    kind = scenario.mirror.kind
    if kind is MirrorKind.MOVING and scenario.mirror_velocity < scenario.v_k:
        cp = critical_points(scenario)
        kp = scenario.context.wavenumber(scenario.v_k - scenario.mirror_velocity)
        step = min(delta, np.pi / kp) / 32.0
        lo, hi = cp.x_plus - 2.0 * delta, cp.x_mirror
    else:
        front = scenario.v_k * scenario.time
        step = delta / per_scale
        lo, hi = front - 14.0 * delta, front + 7.0 * delta
        if kind is MirrorKind.MOVING:
            hi = min(hi, scenario.mirror_velocity * scenario.time)
    n = int(np.ceil((hi - lo) / step)) + 1
    return np.linspace(lo, hi, n)


def fringe_width_scaling(scenario: Scenario, times) -> WidthScalingResult:
    """Main-fringe width at each time plus the least-squares power in t.

    The diffraction fringes of a released beam widen as sqrt(t); the
    fitted exponent of width versus time makes that law testable.
    Requires at least three strictly positive times.
    """
    ts = [float(t) for t in times]
    if len(ts) < 3:
        raise ValueError("need at least 3 times to fit a scaling exponent")
    if any(t <= 0 for t in ts):
        raise ValueError("times must be positive")
    pts = []
    for t in ts:
        s = Scenario(scenario.context, scenario.k, scenario.mirror, t)
        stats = main_fringe(profile(s, _front_grid(s)))
        pts.append((t, stats.fringe_width))
    log_t = np.log([p[0] for p in pts])
    log_w = np.log([p[1] for p in pts])
    exponent = float(np.polyfit(log_t, log_w, 1)[0])
    return WidthScalingResult(points=tuple(pts), exponent=exponent)


@dataclass(frozen=True)
class ScanPoint:
    v_over_vk: float
    p_max: float
    visibility: float


def enhancement_scan(v_over_vk, scenario: Scenario) -> list[ScanPoint]:
    """Main-fringe stats across mirror velocities at fixed beam and time.

    Each ratio v/v_k is run as a full moving-mirror profile; the
    scenario supplies context, wavenumber and time (its own mirror law
    is ignored).  Deterministic: results are assembled in input order.
    """
    from .physics import MirrorLaw

    ratios = [float(r) for r in v_over_vk]
    if any(r <= 0 for r in ratios):
        raise ValueError("velocity ratios must be positive")
    if scenario.time <= 0:
        raise ValueError("enhancement_scan requires scenario.time > 0")
    out = []
    v_k = scenario.v_k
    for r in ratios:
        s = Scenario(
            scenario.context, scenario.k, MirrorLaw.moving(r * v_k), scenario.time
        )
        stats = main_fringe(profile(s, _front_grid(s)))
        out.append(ScanPoint(v_over_vk=r, p_max=stats.p_max, visibility=stats.visibility))
    return out
