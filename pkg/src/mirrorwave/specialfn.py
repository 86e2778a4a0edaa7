"""High-accuracy complex special-function kernels.

Four kernels back every wave solution in this package:

* ``faddeeva`` -- the scaled complex complementary error function
  w(z) = exp(-z**2) * erfc(-i*z),
* ``erfc_complex`` -- erfc of a complex argument, derived from w,
* ``fresnel`` -- the Fresnel integrals C and S (C(inf) = S(inf) = 1/2),
* ``gamma_half`` -- Gamma(n + 1/2) for the asymptotic series.

w(z) is evaluated with a region scheme (radii tuned against an
arbitrary-precision reference):

* |z| <= 2.5              Maclaurin series  w(z) = sum (i z)**n / Gamma(n/2 + 1)
* 2.5 < |z| <= 12         Weideman rational approximation (N = 48)
* |z| > 12                Laplace continued fraction

all for Im z >= 0; the lower half-plane uses the reflection
w(z) = 2 exp(-z**2) - w(-z), guarded against overflow of exp(-z**2).

Large phase arguments (hundreds to thousands of radians arise routinely
for cm/s beams at ms times) are reduced modulo 2*pi in extended
precision before the complex exponential is formed; see ``cis``.

Everything here is pure and reentrant: tables are built once at import
and never mutated, so all functions may be called concurrently.
"""

from __future__ import annotations

import numpy as np

SQRT_PI = 1.7724538509055160273

# pi and 2*pi to long-double precision (np.pi alone is a 53-bit value)
PI_LD = np.longdouble("3.141592653589793238462643383279502884")
TWO_PI_LD = np.longdouble("6.283185307179586476925286766559005768")

#: True when the platform long double actually carries extra mantissa bits
#: (x86 80-bit extended).  The fallback path is plain float64, which only
#: matters for phases beyond ~1e4 rad.
EXTENDED_PRECISION = np.finfo(np.longdouble).eps < 1e-18

_TAYLOR_RADIUS = 1.8
_CF_RADIUS = 12.0
_TAYLOR_TERMS = 64
_WEIDEMAN_N = 48
_CF_DEPTH = 18

# exp(-z*z) overflows double once Im(z)**2 - Re(z)**2 exceeds ~709.78
_EXP_OVERFLOW = 709.0


class SpecialFunctionOverflow(FloatingPointError):
    """exp(-z**2) exceeds the double range; the result would saturate."""


def cis(phi) -> np.ndarray:
    """exp(i*phi) with the argument reduced modulo 2*pi in extended precision.

    ``phi`` may be float64 or long double, scalar or array.  Passing a
    long-double phi computed from long-double factors keeps the phase
    error near eps_ld * |phi| instead of eps_64 * |phi|.
    """
    phi_ld = np.asarray(phi, dtype=np.longdouble)
    reduced = np.mod(phi_ld, TWO_PI_LD).astype(np.float64)
    return np.cos(reduced) + 1j * np.sin(reduced)


# --- Maclaurin region -------------------------------------------------------

# 1 / Gamma(n/2 + 1) for n = 0..N; generated by the recurrence
# Gamma(y + 1) = y * Gamma(y) from Gamma(1) = 1 and Gamma(3/2) = sqrt(pi)/2.
def _taylor_coeffs(n_terms):
    inv = np.empty(n_terms)
    g = np.empty(n_terms)  # Gamma(n/2 + 1)
    g[0] = 1.0
    g[1] = SQRT_PI / 2.0
    for n in range(2, n_terms):
        g[n] = (n / 2.0) * g[n - 2]
    np.divide(1.0, g, out=inv)
    return inv


_TAYLOR_INV_GAMMA = _taylor_coeffs(_TAYLOR_TERMS + 1)


def _w_taylor(z):
    iz = 1j * z
    acc = np.full(z.shape, _TAYLOR_INV_GAMMA[0], dtype=complex)
    p = np.ones_like(acc)
    for n in range(1, _TAYLOR_TERMS + 1):
        p = p * iz
        acc += _TAYLOR_INV_GAMMA[n] * p
    return acc


# --- Weideman region --------------------------------------------------------

def _weideman_table(n):
    # J.A.C. Weideman, SIAM J. Numer. Anal. 31 (1994): rational expansion of
    # w on the upper half-plane; coefficients from an FFT of the real-line
    # samples.  n = 48 leaves the annulus error near 1e-15.
    m = 2 * n
    idx = np.arange(-m + 1, m)
    big_l = np.sqrt(n / np.sqrt(2.0))
    theta = (np.pi / m) * idx
    t = big_l * np.tan(0.5 * theta)
    f = np.zeros(idx.size + 1)
    f[1:] = np.exp(-t * t) * (big_l * big_l + t * t)
    a = np.fft.fft(np.fft.fftshift(f)).real / (2 * m)
    return big_l, a[1 : n + 1][::-1]  # highest degree first


_WEIDEMAN_L, _WEIDEMAN_A = _weideman_table(_WEIDEMAN_N)


def _w_weideman(z):
    big_l = _WEIDEMAN_L
    iz = 1j * z
    ratio = (big_l + iz) / (big_l - iz)
    p = np.zeros_like(z)
    for c in _WEIDEMAN_A:
        p = p * ratio + c
    return 2.0 * p / (big_l - iz) ** 2 + (1.0 / SQRT_PI) / (big_l - iz)


# --- continued-fraction region ----------------------------------------------

def _w_contfrac(z):
    # Laplace continued fraction w(z) = (i/sqrt(pi)) / (z - (1/2)/(z - 1/(z - ...)))
    t = np.zeros_like(z)
    for n in range(_CF_DEPTH, 0, -1):
        t = (0.5 * n) / (z - t)
    return (1j / SQRT_PI) / (z - t)


def _w_upper(z):
    """w(z) for Im z >= 0 via the three-region scheme."""
    out = np.empty(z.shape, dtype=complex)
    r = np.abs(z)
    small = r <= _TAYLOR_RADIUS
    big = r > _CF_RADIUS
    mid = ~(small | big)
    if small.any():
        out[small] = _w_taylor(z[small])
    if mid.any():
        out[mid] = _w_weideman(z[mid])
    if big.any():
        out[big] = _w_contfrac(z[big])
    return out


def _reflection_exp(z):
    """2*exp(-z**2) with the oscillatory part phase-reduced in extended precision.

    Raises SpecialFunctionOverflow when Re(-z**2) overflows double range.
    """
    x = np.asarray(z.real, dtype=np.longdouble)
    y = np.asarray(z.imag, dtype=np.longdouble)
    growth = (y * y - x * x).astype(np.float64)  # Re(-z**2)
    if np.any(growth > _EXP_OVERFLOW):
        raise SpecialFunctionOverflow(
            "exp(-z**2) overflows for deep lower-half-plane argument; "
            f"max Re(-z**2) = {float(np.max(growth)):.6g}"
        )
    return 2.0 * np.exp(growth) * cis(-2.0 * x * y)


def faddeeva(z):
    """Faddeeva function w(z) = exp(-z**2) * erfc(-i*z).

    Accepts a complex scalar or array; returns the same shape.  Inputs
    must be finite.  For Im z < 0 the reflection
    w(z) = 2*exp(-z**2) - w(-z) is used; arguments deep enough in the
    lower half-plane to overflow exp(-z**2) raise
    ``SpecialFunctionOverflow`` rather than returning inf.
    """
    za = np.asarray(z, dtype=complex)
    scalar = za.ndim == 0
    zf = np.atleast_1d(za)
    if not np.all(np.isfinite(zf)):
        raise ValueError("faddeeva requires finite arguments")
    lower = zf.imag < 0.0
    out = np.empty(zf.shape, dtype=complex)
    if np.any(~lower):
        out[~lower] = _w_upper(zf[~lower])
    if np.any(lower):
        zl = zf[lower]
        out[lower] = _reflection_exp(zl) - _w_upper(-zl)
    return complex(out[0]) if scalar else out.reshape(za.shape)


def erfc_complex(z):
    """Complementary error function erfc(z) for complex z.

    Built on the Faddeeva function through erfc(z) = exp(-z**2) * w(i*z)
    for Re z >= 0 and erfc(z) = 2 - erfc(-z) otherwise (the reflection
    avoids forming exp(-z**2)*exp(+z**2) pairs that would over/underflow
    separately).
    """
    za = np.asarray(z, dtype=complex)
    scalar = za.ndim == 0
    zf = np.atleast_1d(za).copy()
    if not np.all(np.isfinite(zf)):
        raise ValueError("erfc_complex requires finite arguments")
    neg = zf.real < 0.0
    zf[neg] = -zf[neg]
    # now Re zf >= 0, so i*zf lies in the upper half-plane
    x = np.asarray(zf.real, dtype=np.longdouble)
    y = np.asarray(zf.imag, dtype=np.longdouble)
    growth = (y * y - x * x).astype(np.float64)  # Re(-z**2)
    if np.any(growth > _EXP_OVERFLOW):
        raise SpecialFunctionOverflow(
            "exp(-z**2) overflows in erfc for large |Im z|"
        )
    val = np.exp(growth) * cis(-2.0 * x * y) * _w_upper(1j * zf)
    val[neg] = 2.0 - val[neg]
    return complex(val[0]) if scalar else val.reshape(za.shape)


def fresnel(theta):
    """Fresnel integrals (C(theta), S(theta)).

    Standard normalization: C(x) = int_0^x cos(pi t**2 / 2) dt and
    similarly for S, so C(inf) = S(inf) = 1/2.  Both are odd.  Computed
    from the Faddeeva kernel along the arg = pi/4 ray via

        C + i*S = (1+i)/2 * [1 - exp(i*pi*theta**2/2) * w((1+i)*sqrt(pi)/2*theta)]

    which keeps a single accuracy-critical kernel for the whole package.
    """
    th = np.asarray(theta, dtype=float)
    scalar = th.ndim == 0
    t = np.atleast_1d(th)
    if not np.all(np.isfinite(t)):
        raise ValueError("fresnel requires finite arguments")
    a = np.abs(t)
    q = (SQRT_PI / 2.0) * (1.0 + 1j) * a
    phase = cis((PI_LD / 2.0) * np.asarray(a, dtype=np.longdouble) ** 2)
    erf_val = 1.0 - phase * _w_upper(q)
    cs = 0.5 * (1.0 + 1j) * erf_val
    c = np.copysign(1.0, t) * cs.real
    s = np.copysign(1.0, t) * cs.imag
    if scalar:
        return float(c[0]), float(s[0])
    return c.reshape(th.shape), s.reshape(th.shape)


def fresnel_series(theta):
    """Fresnel integrals by direct power series; cross-check path.

    Accurate to better than 1e-12 for |theta| <= 2.5 and refused beyond
    |theta| = 3 where cancellation starts to eat digits.  Tests use this
    as the second, independent route to C and S.
    """
    th = float(theta)
    if abs(th) > 3.0:
        raise ValueError("fresnel_series is reliable only for |theta| <= 3")
    u = np.pi * th * th / 2.0
    # C: sum over even powers, S: odd powers of u
    c_sum, s_sum = 1.0, 1.0 / 3.0
    term_c, term_s = 1.0, 1.0
    n = 0
    while True:
        n += 1
        term_c *= -(u * u) / ((2 * n) * (2 * n - 1))
        term_s *= -(u * u) / ((2 * n + 1) * (2 * n))
        dc = term_c / (4 * n + 1)
        ds = term_s / (4 * n + 3)
        c_sum += dc
        s_sum += ds
        if abs(dc) < 1e-18 and abs(ds) < 1e-18:
            break
        if n > 200:  # unreachable for |theta| <= 3
            raise RuntimeError("fresnel series failed to converge")
    return th * c_sum, u * th * s_sum


def gamma_half(n: int) -> float:
    """Gamma(n + 1/2) by recurrence from Gamma(1/2) = sqrt(pi).

    Raises OverflowError once the value leaves the double range
    (n >= 171).
    """
    if n != int(n) or n < 0:
        raise ValueError("gamma_half requires a nonnegative integer")
    val = SQRT_PI
    for j in range(int(n)):
        val *= j + 0.5
        if np.isinf(val):
            raise OverflowError(f"Gamma({n}+1/2) overflows double precision")
    return val
