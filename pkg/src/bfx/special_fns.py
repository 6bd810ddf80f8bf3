"""Scalar special functions used by the closed-form expectation formulas.

Everything here is pure and deterministic: log-gamma, modified Bessel
functions I1/I2 (power series below x=15, asymptotic expansion beyond),
the confluent hypergeometric functions of the first (Kummer) and second
(Tricomi) kind, Pochhammer symbols, and the argcosh-based map

    phi_x(y) = argcosh(x * exp(-y) + cosh(y)),

evaluated in a cancellation- and overflow-safe logarithmic form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IllConditioned, NonConvergence

__all__ = [
    "SeriesControl",
    "DEFAULT_SERIES",
    "ln_gamma",
    "pochhammer",
    "bessel_i",
    "bessel_i_scaled",
    "kummer_phi",
    "tricomi_psi",
    "tricomi_psi_integral",
    "phi_x_map",
    "phi_sq_minus_y_sq",
]


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for power-series evaluation."""

    max_terms: int = 400
    term_tol: float = 1e-15

    def __post_init__(self):
        if self.max_terms < 16:
            raise DomainError(f"max_terms must be >= 16, got {self.max_terms}")
        if not (0.0 < self.term_tol < 1e-6):
            raise DomainError(f"term_tol must lie in (0, 1e-6), got {self.term_tol}")


DEFAULT_SERIES = SeriesControl()


def ln_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if x <= 0.0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def pochhammer(a: float, k: int) -> float:
    """Rising factorial (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1."""
    if k < 0:
        raise DomainError(f"pochhammer order must be >= 0, got {k}")
    out = 1.0
    for j in range(k):
        out *= a + j
    return out


# ---------------------------------------------------------------------------
# Modified Bessel functions I_nu, nu in {0, 1, 2}
# ---------------------------------------------------------------------------

_SERIES_ASYMPTOTIC_SPLIT = 15.0
# I_nu(x) overflows double precision just above x ~ 713.
_BESSEL_OVERFLOW_X = 713.0


def _bessel_i_series(nu: int, x: float) -> float:
    # I_nu(x) = sum_k (x/2)^(nu+2k) / (k! (k+nu)!), converges fast for x < 15.
    q = 0.25 * x * x
    term = (0.5 * x) ** nu / math.factorial(nu)
    total = term
    for k in range(1, 200):
        term *= q / (k * (k + nu))
        total += term
        if term < 1e-17 * total:
            return total
    raise NonConvergence(f"I_{nu}({x}) series did not converge")


def _bessel_i_asymptotic_scaled(nu: int, x: float) -> float:
    # e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(nu) / x^k with
    # a_k = prod_{j<=k} (4 nu^2 - (2j-1)^2) / (k! 8^k); truncated at the
    # smallest term. Relative error ~ e^{-2x}, far below 1e-10 for x >= 15.
    mu = 4.0 * nu * nu
    total = 1.0
    term = 1.0
    prev = math.inf
    for k in range(1, 40):
        term *= -(mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        if abs(term) >= prev:
            break
        total += term
        prev = abs(term)
        if abs(term) < 1e-17 * abs(total):
            break
    return total / math.sqrt(2.0 * math.pi * x)


def bessel_i_scaled(order: int, x: float) -> float:
    """Exponentially scaled modified Bessel function e^{-x} I_order(x)."""
    if order not in (0, 1, 2):
        raise DomainError(f"bessel order must be in {{0, 1, 2}}, got {order}")
    if x < 0.0:
        raise DomainError(f"bessel argument must be >= 0, got {x}")
    if x < _SERIES_ASYMPTOTIC_SPLIT:
        return _bessel_i_series(order, x) * math.exp(-x)
    return _bessel_i_asymptotic_scaled(order, x)


def bessel_i(order: int, x: float) -> float:
    """Modified Bessel function I_order(x) for order in {1, 2} (0 allowed too)."""
    if order not in (0, 1, 2):
        raise DomainError(f"bessel order must be in {{0, 1, 2}}, got {order}")
    if x < 0.0:
        raise DomainError(f"bessel argument must be >= 0, got {x}")
    if x > _BESSEL_OVERFLOW_X:
        raise OverflowError(f"I_{order}({x}) exceeds double-precision range")
    if x < _SERIES_ASYMPTOTIC_SPLIT:
        return _bessel_i_series(order, x)
    return _bessel_i_asymptotic_scaled(order, x) * math.exp(x)


def _bessel_i_scaled_vec(order: int, x: np.ndarray) -> np.ndarray:
    """Vectorized e^{-x} I_order(x) on nonnegative arrays (integral kernels)."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < _SERIES_ASYMPTOTIC_SPLIT
    if np.any(small):
        xs = x[small]
        q = 0.25 * xs * xs
        term = (0.5 * xs) ** order / math.factorial(order)
        total = term.copy()
        for k in range(1, 80):
            term = term * q / (k * (k + order))
            total += term
            if np.all(term <= 1e-17 * np.maximum(total, 1e-300)):
                break
        out[small] = total * np.exp(-xs)
    if np.any(~small):
        xl = x[~small]
        mu = 4.0 * order * order
        total = np.ones_like(xl)
        term = np.ones_like(xl)
        for k in range(1, 24):
            term = term * (-(mu - (2 * k - 1) ** 2) / (8.0 * k)) / xl
            total += term
        out[~small] = total / np.sqrt(2.0 * math.pi * xl)
    return out


# ---------------------------------------------------------------------------
# Confluent hypergeometric functions
# ---------------------------------------------------------------------------

def kummer_phi(a: float, c: float, z: float, ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """Kummer function Phi(a, c, z) = sum_k (a)_k / (c)_k z^k / k!.

    For z < -30 the reflection Phi(a,c,z) = e^z Phi(c-a, c, -z) is applied to
    avoid the cancellation of the alternating series.
    """
    if c <= 0.0 and c == round(c):
        raise DomainError(f"kummer_phi undefined for non-positive integer c={c}")
    if z < -30.0:
        return math.exp(z) * kummer_phi(c - a, c, -z, ctl)
    total = 1.0
    term = 1.0
    for k in range(ctl.max_terms):
        term *= (a + k) / (c + k) * z / (k + 1)
        total += term
        if abs(term) < ctl.term_tol * max(abs(total), 1e-300) and k > 2:
            return total
    raise NonConvergence(
        f"kummer_phi(a={a}, c={c}, z={z}) did not converge in {ctl.max_terms} terms"
    )


def _tricomi_combination(a: float, c: float, z: float, ctl: SeriesControl) -> tuple[float, float]:
    # Psi as the Gamma-weighted combination of two Kummer functions; returns
    # (value, magnitude of the largest term) so callers can judge cancellation.
    t1 = math.gamma(1.0 - c) / math.gamma(1.0 + a - c) * kummer_phi(a, c, z, ctl)
    t2 = math.gamma(c - 1.0) / math.gamma(a) * z ** (1.0 - c) * kummer_phi(1.0 + a - c, 2.0 - c, z, ctl)
    return t1 + t2, max(abs(t1), abs(t2))


def tricomi_psi(a: float, c: float, z: float, ctl: SeriesControl = DEFAULT_SERIES) -> float:
    """Tricomi function Psi(a, c, z) for z > 0.

    Evaluated through the two-Kummer combination. Integer (or near-integer) c
    is a pole of each term individually, so the function is evaluated at
    c +/- 1e-5 and averaged. Raises IllConditioned when the two terms cancel
    beyond ten digits; use tricomi_psi_integral in that regime.
    """
    if z <= 0.0:
        raise DomainError(f"tricomi_psi requires z > 0, got {z}")
    if abs(c - round(c)) < 1e-6:
        eps = 1e-5
        lo, lo_mag = _tricomi_combination(a, c - eps, z, ctl)
        hi, hi_mag = _tricomi_combination(a, c + eps, z, ctl)
        value = 0.5 * (lo + hi)
        magnitude = max(lo_mag, hi_mag)
    else:
        value, magnitude = _tricomi_combination(a, c, z, ctl)
    if magnitude > 1e10 * max(abs(value), 1e-300):
        raise IllConditioned(
            f"tricomi_psi(a={a}, c={c}, z={z}): terms of size {magnitude:.3e} "
            f"cancel to {value:.3e}"
        )
    return value


def tricomi_psi_integral(a: float, c: float, z: float, rel_tol: float = 1e-11) -> float:
    """Psi(a, c, z) through its Laplace-type integral (requires a > 0, z > 0).

    Robust for large z where the series combination suffers catastrophic
    cancellation. The integrable t^(a-1) endpoint singularity for a < 1 is
    removed by the substitution t = v^(1/a).
    """
    if a <= 0.0 or z <= 0.0:
        raise DomainError(f"integral representation needs a > 0 and z > 0, got a={a}, z={z}")
    from scipy.integrate import quad

    power = c - a - 1.0
    if a < 1.0:
        # split [0,1] (substituted) + [1, inf)
        head, _ = quad(
            lambda v: math.exp(-z * v ** (1.0 / a)) * (1.0 + v ** (1.0 / a)) ** power,
            0.0, 1.0, epsabs=0.0, epsrel=rel_tol, limit=200,
        )
        head /= a
    else:
        head, _ = quad(
            lambda t: math.exp(-z * t) * t ** (a - 1.0) * (1.0 + t) ** power,
            0.0, 1.0, epsabs=0.0, epsrel=rel_tol, limit=200,
        )
    tail, _ = quad(
        lambda t: math.exp(-z * t) * t ** (a - 1.0) * (1.0 + t) ** power,
        1.0, np.inf, epsabs=1e-300, epsrel=rel_tol, limit=200,
    )
    return (head + tail) * math.exp(-ln_gamma(a))


# ---------------------------------------------------------------------------
# The argcosh map
# ---------------------------------------------------------------------------

def phi_x_map(x, y):
    """argcosh(x e^{-y} + cosh y) for x >= 0, stable for large |y|.

    Accepts scalars or arrays and broadcasts. For |y| <= 30 the evaluation
    uses argcosh(1 + d) = log1p(d + sqrt(d (d + 2))) with
    d = x e^{-y} + 2 sinh^2(y/2) computed without cancellation; beyond that,
    cosh overflows and the exact rearrangements

        y > 30:  phi = y + log1p((2x + 1) e^{-2y})
        y < -30: phi = -y + log1p(2x + e^{2y})

    are used instead.
    """
    x_arr = np.asarray(x, dtype=float)
    y_arr = np.asarray(y, dtype=float)
    if np.any(x_arr < 0.0):
        raise DomainError("phi_x_map requires x >= 0")
    x_b, y_b = np.broadcast_arrays(x_arr, y_arr)
    out = np.empty(x_b.shape, dtype=float)

    hi = y_b > 30.0
    lo = y_b < -30.0
    mid = ~(hi | lo)
    if np.any(hi):
        out[hi] = y_b[hi] + np.log1p((2.0 * x_b[hi] + 1.0) * np.exp(-2.0 * y_b[hi]))
    if np.any(lo):
        out[lo] = -y_b[lo] + np.log1p(2.0 * x_b[lo] + np.exp(2.0 * y_b[lo]))
    if np.any(mid):
        xm, ym = x_b[mid], y_b[mid]
        d = xm * np.exp(-ym) + 2.0 * np.sinh(0.5 * ym) ** 2
        big = d > 1e8
        val = np.empty_like(d)
        if np.any(big):
            val[big] = math.log(2.0) + np.log1p(d[big])
        small = ~big
        if np.any(small):
            ds = d[small]
            val[small] = np.log1p(ds + np.sqrt(ds * (ds + 2.0)))
        out[mid] = val

    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return float(out)
    return out


def phi_sq_minus_y_sq(x, y):
    """phi_x(y)^2 - y^2, computed without forming the near-cancelling squares.

    This nonnegative quantity is the exponent numerator of the kernel-G
    integrand; for |y| > 30 the difference of squares is rebuilt from the
    exact log-form remainders.
    """
    x_arr = np.asarray(x, dtype=float)
    y_arr = np.asarray(y, dtype=float)
    x_b, y_b = np.broadcast_arrays(x_arr, y_arr)
    out = np.empty(x_b.shape, dtype=float)

    hi = y_b > 30.0
    lo = y_b < -30.0
    mid = ~(hi | lo)
    if np.any(hi):
        r = np.log1p((2.0 * x_b[hi] + 1.0) * np.exp(-2.0 * y_b[hi]))
        out[hi] = r * (2.0 * y_b[hi] + r)
    if np.any(lo):
        r = np.log1p(2.0 * x_b[lo] + np.exp(2.0 * y_b[lo]))
        out[lo] = r * (-2.0 * y_b[lo] + r)
    if np.any(mid):
        phi = phi_x_map(x_b[mid], y_b[mid])
        ay = np.abs(y_b[mid])
        out[mid] = (phi - ay) * (phi + ay)
    out = np.maximum(out, 0.0)
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return float(out)
    return out
