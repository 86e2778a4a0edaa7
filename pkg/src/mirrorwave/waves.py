"""Exact transient wavefunctions for a beam released by a moving mirror.

The building block is the Moshinsky function

    M(x, k, t) = exp(i m x**2 / (2 hbar t)) / 2 * w(-z),
    z = (1+i)/2 * sqrt(hbar t / m) * (k - m x / (hbar t)),

a freely evolved cut-off plane wave.  Everything else is algebra on M:

* sudden removal of the mirror:   psi = M(x, k, t) - M(x, -k, t)
* mirror receding at velocity v:  four M terms in mirror-frame
  coordinates times a Galilean phase (``psi_moving``)
* the v -> v_k limit keeping only the two dominant terms
  (``psi_near_limit``).

Numerical note: for u = k - m x/(hbar t) >= 0 the argument -z falls in
the lower half-plane where w is evaluated through the reflection
2 exp(-z**2) - w(z).  Here exp(i m x**2/2 hbar t) * exp(-z**2) collapses
analytically to the plane wave exp(i(kx - hbar k**2 t/2m)), so M is
computed as

    M = plane_wave - exp(i phi1) * w(|z| ray) / 2      (u >= 0)
    M =              exp(i phi1) * w(|z| ray) / 2      (u < 0)

with every phase assembled in extended precision (see specialfn.cis).
This keeps M, and identities built from it, at the 1e-15 level even
when the phases reach thousands of radians, where the naive
exp(-z**2) route loses five digits to phase rounding.

All functions are pure, accept scalars or numpy arrays for the spatial
argument, and may be called concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .physics import MirrorKind, PhysicalContext, Scenario
from .specialfn import cis, faddeeva


def initial_state(x, k: float):
    """Standing matter wave 2i sin(kx) for x < 0, zero at and beyond the wall.

    The Heaviside convention Theta(0) = 0 keeps the state consistent with
    the Dirichlet condition at the mirror (a measure-zero choice).
    """
    xa = np.asarray(x, dtype=float)
    val = np.where(xa < 0.0, 2j * np.sin(k * xa), 0.0 + 0.0j)
    return complex(val[()]) if val.ndim == 0 else val


def moshinsky_z(x, k, t: float, context: PhysicalContext):
    """Scaled argument z = (1+i)/2 sqrt(hbar t/m) (k - m x/(hbar t))."""
    hbar, m = context.hbar, context.mass
    u = np.asarray(k, dtype=float) - m * np.asarray(x, dtype=float) / (hbar * t)
    return 0.5 * (1.0 + 1j) * np.sqrt(hbar * t / m) * u


def _phases(x, k, t, context):
    """(phi_free, phi_plane) in long double: m x^2/(2 hbar t), kx - hbar k^2 t/(2m)."""
    hbar = np.longdouble(context.hbar)
    m = np.longdouble(context.mass)
    x_ld = np.asarray(x, dtype=np.longdouble)
    k_ld = np.asarray(k, dtype=np.longdouble)
    t_ld = np.longdouble(t)
    phi_free = m * x_ld * x_ld / (2.0 * hbar * t_ld)
    phi_plane = k_ld * x_ld - hbar * k_ld * k_ld * t_ld / (2.0 * m)
    return phi_free, phi_plane


def moshinsky_m(x, k, t: float, context: PhysicalContext):
    """Moshinsky function M(x, k, t); finite for all finite inputs, t > 0."""
    if not t > 0.0:
        raise ValueError("moshinsky_m requires t > 0")
    hbar, m = context.hbar, context.mass
    xa = np.asarray(x, dtype=float)
    ka = np.asarray(k, dtype=float)
    u = ka - m * xa / (hbar * t)
    # w is always evaluated on the arg = pi/4 ray (upper half-plane),
    # where it is well conditioned; the lower-half reflection term is
    # folded into the closed-form plane wave below.
    z_ray = 0.5 * (1.0 + 1j) * np.sqrt(hbar * t / m) * np.abs(u)
    w_ray = faddeeva(z_ray)
    phi_free, phi_plane = _phases(xa, ka, t, context)
    half_tail = 0.5 * cis(phi_free) * w_ray
    val = np.where(u >= 0.0, cis(phi_plane) - half_tail, half_tail)
    return complex(val[()]) if val.ndim == 0 else val


def moshinsky_asymptotic(x, k, t: float, context: PhysicalContext, n_max: int):
    """Large-|z| expansion of M: plane wave (classical side only) plus
    the inverse-power series sum_n Gamma(n+1/2) / z**(2n+1) / (2 pi i).

    The series is truncated at min(n_max, floor(|z|**2)), the
    superasymptotic optimum, so the divergent tail is never summed.
    Returns ``(value, in_classical_region)``.  Requires |z| >= 2
    everywhere; below that the expansion is unreliable and a ValueError
    is raised.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if not t > 0.0:
        raise ValueError("moshinsky_asymptotic requires t > 0")
    hbar, m = context.hbar, context.mass
    xa = np.asarray(x, dtype=float)
    u = np.asarray(k, dtype=float) - m * xa / (hbar * t)
    z = moshinsky_z(xa, k, t, context)
    az2 = np.abs(z) ** 2
    if np.any(az2 < 4.0):
        raise ValueError("asymptotic expansion requires |z| >= 2")
    n_cap = np.minimum(n_max, np.floor(az2).astype(int))
    series = np.zeros(np.shape(z), dtype=complex)
    inv_z2 = 1.0 / (z * z)
    term = 1.0 / z  # Gamma(1/2)/z enters through the prefactor below
    gamma_ratio = 1.0
    for n in range(int(np.max(n_cap)) + 1):
        if n > 0:
            gamma_ratio *= n - 0.5  # Gamma(n+1/2)/Gamma(1/2)
            term = term * inv_z2
        series = series + np.where(n <= n_cap, gamma_ratio * term, 0.0)
    series *= np.sqrt(np.pi) / (2.0j * np.pi)
    phi_free, phi_plane = _phases(xa, k, t, context)
    classical = u >= 0.0
    val = np.where(classical, cis(phi_plane), 0.0) + cis(phi_free) * series
    if val.ndim == 0:
        return complex(val[()]), bool(classical)
    return val, classical


def psi_sudden(x, t: float, k: float, context: PhysicalContext):
    """Beam released by instantaneous mirror removal: M(x,k,t) - M(x,-k,t)."""
    return moshinsky_m(x, k, t, context) - moshinsky_m(x, -k, t, context)


def propagator_free(x, t: float, xp, tp: float, context: PhysicalContext):
    """Free one-dimensional propagator K0(x, t | x', t'), principal-branch root."""
    if not t > tp:
        raise ValueError("propagator_free requires t > t'")
    hbar, m = context.hbar, context.mass
    dt = t - tp
    amp = np.sqrt(m / (2.0 * np.pi * hbar * dt)) * np.exp(-0.25j * np.pi)
    dx_ld = np.asarray(x, dtype=np.longdouble) - np.asarray(xp, dtype=np.longdouble)
    phase = np.longdouble(m) * dx_ld * dx_ld / (2.0 * np.longdouble(hbar) * np.longdouble(dt))
    val = amp * cis(phase)
    return complex(val[()]) if val.ndim == 0 else val


def propagator_moving_wall(x, t: float, xp, tp: float, v: float, context: PhysicalContext):
    """Propagator with a perfectly reflecting wall moving along x_w = v*t.

    Image construction in the comoving frame times the Galilean phase:

        K = e^{i(m/hbar)[v(x-vt) - v(x'-vt') + v^2(t-t')/2]}
            x [K0(x-vt, t | x'-vt', t') - K0(x-vt, t | -(x'-vt'), t')]

    The phase follows from the boost psi_lab = e^{i(mvx - m v^2 t/2)/hbar}
    psi_mirror(x - vt, t); the opposite overall sign fails to reproduce
    the closed-form moving-mirror solution under the superposition
    integral, which pins the convention.  Vanishes identically when the
    endpoint sits on the wall; both endpoints must lie in the physical
    region (x <= v t, x' <= v t').
    """
    if not t > tp:
        raise ValueError("propagator_moving_wall requires t > t'")
    xa = np.asarray(x, dtype=float)
    xpa = np.asarray(xp, dtype=float)
    if np.any(xa > v * t) or np.any(xpa > v * tp):
        raise ValueError("propagator_moving_wall endpoints must satisfy x <= v*t")
    hbar, m = context.hbar, context.mass
    y, yp = xa - v * t, xpa - v * tp
    phase = (
        np.longdouble(m)
        / np.longdouble(hbar)
        * (
            np.longdouble(v) * (np.asarray(xa, np.longdouble) - np.longdouble(v) * np.longdouble(t))
            - np.longdouble(v) * (np.asarray(xpa, np.longdouble) - np.longdouble(v) * np.longdouble(tp))
            + np.longdouble(v) ** 2 * (np.longdouble(t) - np.longdouble(tp)) / 2.0
        )
    )
    val = cis(phase) * (
        propagator_free(y, t, yp, tp, context) - propagator_free(y, t, -yp, tp, context)
    )
    return complex(val[()]) if val.ndim == 0 else val


@dataclass(frozen=True)
class WaveComponents:
    """The four Moshinsky terms of the moving-mirror solution.

    ``m1``/``m2`` propagate the free beam (wavefronts near +-v_k t),
    ``m3``/``m4`` are their images about the mirror (fronts near
    (2v -+ v_k) t).  ``psi`` is the physical wavefunction: the signed
    combination inside the physical region x <= v t and exactly zero
    beyond the mirror.  The component values are kept unmasked ("formal"
    values) for diagnostics of the forbidden region.
    """

    m1: np.ndarray
    m2: np.ndarray
    m3: np.ndarray
    m4: np.ndarray
    prefactor: np.ndarray
    psi: np.ndarray


@dataclass(frozen=True)
class CriticalPoints:
    """Classical space-time markers of the moving-mirror problem.

    x_minus = -v_k t  : leftmost reach of the wave reflected before release
    x_plus  = (2v - v_k) t : front of particles reflected off the moving wall
    x_mirror = v t    : the wall itself
    """

    x_minus: float
    x_plus: float
    x_mirror: float


def critical_points(scenario: Scenario) -> CriticalPoints:
    """Exact classical markers; requires the finite-velocity mirror variant."""
    v = scenario.mirror_velocity
    t = scenario.time
    v_k = scenario.v_k
    return CriticalPoints(
        x_minus=-v_k * t,
        x_plus=(2.0 * v - v_k) * t,
        x_mirror=v * t,
    )


def psi_moving(x, t: float, scenario: Scenario) -> WaveComponents:
    """Exact wavefunction for a mirror receding at finite velocity v.

        psi = e^{i(mvx/hbar - m v^2 t/2hbar)} [M1 - M2 - M3 + M4]

    with M1..M4 the Moshinsky terms in mirror-frame coordinates
    (k -+ mv/hbar at x - vt and its image vt - x).  On the wall the pairs
    (M1, M3) and (M2, M4) coincide bitwise, so psi(vt, t) is exactly 0.
    """
    if not t > 0.0:
        raise ValueError("psi_moving requires t > 0")
    if scenario.mirror.kind is not MirrorKind.MOVING:
        raise ValueError("psi_moving requires the finite-velocity mirror variant")
    ctx = scenario.context
    hbar, m = ctx.hbar, ctx.mass
    v = scenario.mirror_velocity
    k = scenario.k
    kp = k - m * v / hbar
    km = -k - m * v / hbar
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    y = xa - v * t
    m1 = moshinsky_m(y, kp, t, ctx)
    m2 = moshinsky_m(y, km, t, ctx)
    m3 = moshinsky_m(-y, kp, t, ctx)
    m4 = moshinsky_m(-y, km, t, ctx)
    x_ld = np.asarray(xa, dtype=np.longdouble)
    phase = (
        np.longdouble(m) * np.longdouble(v) * x_ld / np.longdouble(hbar)
        - np.longdouble(m) * np.longdouble(v) ** 2 * np.longdouble(t) / (2.0 * np.longdouble(hbar))
    )
    prefactor = cis(phase)
    # group the pairs that coincide bitwise at the wall (M1,M3) and (M2,M4)
    # so psi(vt, t) cancels to exactly zero instead of rounding noise
    formal = (m1 - m3) - (m2 - m4)
    psi = np.where(y <= 0.0, prefactor * formal, 0.0 + 0.0j)
    if np.ndim(x) == 0:
        return WaveComponents(
            m1=complex(m1[0]), m2=complex(m2[0]), m3=complex(m3[0]), m4=complex(m4[0]),
            prefactor=complex(prefactor[0]), psi=complex(psi[0]),
        )
    return WaveComponents(m1=m1, m2=m2, m3=m3, m4=m4, prefactor=prefactor, psi=psi)


def psi_near_limit(x, t: float, scenario: Scenario):
    """Two-term approximation valid for mirror velocity close to v_k.

    Keeps only the dominant Moshinsky pair at zero relative wavenumber:

        psi ~= e^{i(mvx/hbar - m v^2 t/2hbar)} [M(x-vt, 0, t) - M(vt-x, 0, t)]

    Intended for 0 < x < v t with |v - v_k| << v_k; callers compare it
    against ``psi_moving`` for validation.
    """
    if not t > 0.0:
        raise ValueError("psi_near_limit requires t > 0")
    if scenario.mirror.kind is not MirrorKind.MOVING:
        raise ValueError("psi_near_limit requires the finite-velocity mirror variant")
    ctx = scenario.context
    hbar, m = ctx.hbar, ctx.mass
    v = scenario.mirror_velocity
    xa = np.asarray(x, dtype=float)
    y = xa - v * t
    x_ld = np.asarray(xa, dtype=np.longdouble)
    phase = (
        np.longdouble(m) * np.longdouble(v) * x_ld / np.longdouble(hbar)
        - np.longdouble(m) * np.longdouble(v) ** 2 * np.longdouble(t) / (2.0 * np.longdouble(hbar))
    )
    val = cis(phase) * (moshinsky_m(y, 0.0, t, ctx) - moshinsky_m(-y, 0.0, t, ctx))
    return complex(val[()]) if val.ndim == 0 else val


def classical_density(x, t: float, scenario: Scenario):
    """Interference-free stream counts for a classical beam, per position.

    Each stream of particles contributes 1.  Sudden removal: background 2
    (the mean of the standing wave) for x < 0, then Theta(v_k t - x).
    A mirror slower than the beam splits the axis into three regions
    (2 streams / 1 stream / 2 streams) bounded by x_minus, x_plus and the
    mirror; a mirror at or above beam speed reflects nothing, so the
    sudden-removal profile simply truncates at the mirror.
    """
    if t < 0.0:
        raise ValueError("classical_density requires t >= 0")
    xa = np.asarray(x, dtype=float)
    v_k = scenario.v_k
    kind = scenario.mirror.kind
    sudden_like = np.where(xa < 0.0, 2.0, np.where(xa <= v_k * t, 1.0, 0.0))
    if kind is MirrorKind.SUDDEN_REMOVAL:
        out = sudden_like
    elif kind is MirrorKind.STATIC:
        out = np.where(xa < 0.0, 2.0, 0.0)
    else:
        v = scenario.mirror_velocity
        if v < 0.0:
            # an approaching mirror adds a three-stream overlap region the
            # receding-mirror bookkeeping below does not model
            raise ValueError("classical stream counting requires a receding mirror (v >= 0)")
        x_m = v * t
        if v >= v_k:
            out = np.where(xa <= x_m, sudden_like, 0.0)
        else:
            x_minus, x_plus = -v_k * t, (2.0 * v - v_k) * t
            out = np.where(
                xa < x_minus,
                2.0,
                np.where(xa <= x_plus, 1.0, np.where(xa <= x_m, 2.0, 0.0)),
            )
    return float(out[()]) if out.ndim == 0 else out
