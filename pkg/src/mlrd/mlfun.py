"""Generalized Mittag-Leffler function evaluation to certified accuracy.

Evaluates the one-, two-, and three-parameter Mittag-Leffler families

    E_a(z), E_{a,b}(z), and E^g_{a,b}(z) = sum_n (g)_n z^n / (Gamma(n*a+b) n!)

for real and complex arguments, switching between three regimes:

* ``TaylorSeries`` -- the defining power series, compensated summation,
  coefficients built from a vectorized log-Pochhammer / reciprocal-gamma
  table (stable through the poles of Gamma when b <= 0).
* ``Asymptotic`` -- large-|z| expansion: exponential branch terms plus the
  algebraic inverse-power series, generalized to positive integer g through
  the m-fold derivative relation  E^{m+1}_{a,b}(z) = (d/dz)^m E_{a,b-ma}(z) / m!.
* ``IntegralRepresentation`` -- trapezoidal quadrature of the Bromwich-type
  contour integral on a left-opening parabola; bridges the cancellation gap
  on and near the negative real axis where neither series is accurate at
  double precision.

Every result carries an a-posteriori error estimate; values are never
returned silently wrong.  All functions here are pure and safe to call
concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln, rgamma

from .errors import InvalidOrder, NonConvergent, OverflowRegime, QuadratureFailure
from .summation import CompensatedSum

_EPS = np.finfo(float).eps

# Taylor is attempted only when the predicted peak-term exponent |z|^(1/alpha)
# stays below this bound; beyond it, cancellation ~ eps * exp(peak) swamps any
# O(1) result and the a-posteriori check would reject the sum anyway.
_TAYLOR_CANCEL_LOG = 36.0
_TAYLOR_MAX_TERMS = 2000

# Parabola contour: vertex mu, truncation half-width U, node counts for the
# value and for the self-check companion.  Roundoff floor ~ exp(mu)*eps.
_PARABOLA_MU = 8.0
_PARABOLA_U = 2.4
_PARABOLA_N_COARSE = 40
_PARABOLA_N_FINE = 56


class Regime(str, Enum):
    """Which algorithm produced a value (kept for diagnostics)."""

    TAYLOR_SERIES = "TaylorSeries"
    ASYMPTOTIC = "Asymptotic"
    INTEGRAL_REPRESENTATION = "IntegralRepresentation"


_REGIME_BY_CODE = {0: Regime.TAYLOR_SERIES, 1: Regime.ASYMPTOTIC, 2: Regime.INTEGRAL_REPRESENTATION}


@dataclass(frozen=True)
class PrabhakarOrder:
    """Order triple (alpha, beta, gamma) of E^gamma_{alpha,beta}.

    gamma = 1 reduces to the two-parameter (Wiman) function and
    beta = gamma = 1 to the classical Mittag-Leffler function.
    """

    alpha: float
    beta: float
    gamma: float = 1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0.0):
                raise InvalidOrder(f"{name} must be finite and > 0, got {v!r}")


@dataclass(frozen=True)
class EvalResult:
    """A function value with an a-posteriori absolute error estimate."""

    value: complex
    est_error: float
    terms_used: int
    regime: Regime

    def __post_init__(self):
        if self.terms_used < 1:
            raise ValueError("terms_used must be >= 1")


def _as_z_array(z):
    arr = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    # -0.0 imaginary parts put negative reals on the wrong side of the cut
    neg_zero = (arr.imag == 0.0) & np.signbit(arr.imag)
    if np.any(neg_zero):
        arr = np.where(neg_zero, arr.real + 0.0j, arr)
    return arr


# ----------------------------------------------------------------------------
# Taylor regime
# ----------------------------------------------------------------------------


def _taylor_coefficients(alpha, beta, gamma, n):
    """c_n = (gamma)_n / (n! Gamma(alpha n + beta)) for a vector of n."""
    n = np.asarray(n, dtype=float)
    # log of (gamma)_n / n!; gamma > 0 so every factor is positive
    lg = gammaln(gamma + n) - gammaln(gamma) - gammaln(n + 1.0)
    with np.errstate(over="ignore"):
        q = np.exp(np.minimum(lg, 700.0))
    return q * rgamma(alpha * n + beta)


def _wiman_coefficients(alpha, beta, _gamma, n):
    """Two-parameter coefficients 1 / Gamma(alpha n + beta); no Pochhammer factor."""
    n = np.asarray(n, dtype=float)
    return rgamma(alpha * n + beta)


def _taylor_batch(alpha, beta, gamma, z, tol, coeff_fn):
    """Sum the defining series on an argument vector.

    Returns (value, est, terms, failed).  The stop rule requires three
    consecutive terms below a fraction of the running partial sum; the
    error estimate combines the first neglected term (x10 safety) with
    the compensated-summation rounding floor eps * sum |T_n|.
    """
    k = z.shape[0]
    acc = CompensatedSum(z.shape, dtype=np.complex128)
    tsum = np.zeros(k)
    p = np.ones(k, dtype=np.complex128)
    active = np.ones(k, dtype=bool)
    small = np.zeros(k, dtype=np.int64)
    terms = np.ones(k, dtype=np.int64)
    last_term = np.zeros(k)
    failed = np.zeros(k, dtype=bool)

    coeffs = coeff_fn(alpha, beta, gamma, np.arange(256))
    n = 0
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        while True:
            if n >= coeffs.shape[0]:
                grow = np.arange(coeffs.shape[0], min(2 * coeffs.shape[0], _TAYLOR_MAX_TERMS))
                coeffs = np.concatenate([coeffs, coeff_fn(alpha, beta, gamma, grow)])
            t = coeffs[n] * p
            tmag = np.abs(t)
            bad = active & ~np.isfinite(tmag)
            ovf = active & (tmag > 1e250)
            failed |= bad | ovf
            active &= ~(bad | ovf)
            acc.add(t, where=active)
            tsum += np.where(active, tmag, 0.0)
            last_term = np.where(active, tmag, last_term)
            terms = np.where(active, n + 1, terms)

            partial = np.abs(acc.total)
            thresh = 0.02 * tol * (partial + 1e-300)
            is_small = tmag <= thresh
            small = np.where(active & is_small, small + 1, 0)
            stop = active & (small >= 3) & (n >= 3)
            active &= ~stop
            if not active.any():
                break
            p = np.where(active, p * z, p)
            n += 1
            if n >= _TAYLOR_MAX_TERMS:
                failed |= active
                break

    value = acc.total
    est = 10.0 * last_term + 2.0 * _EPS * tsum
    est = np.where(np.isfinite(est), est, np.inf)
    est = np.where(failed, np.inf, est)
    value = np.where(failed, np.nan + 0j, value)
    return value, est, terms, failed


# ----------------------------------------------------------------------------
# Negative real axis at alpha == 1: transformed (positive-term) series
# ----------------------------------------------------------------------------


def _kummer_negative_axis(beta, z):
    """E_{1,beta}(z) for real z < 0 via the reflected confluent series.

    Writing E_{1,b}(z) = e^z * sum_n (b-1)_n (-z)^n / ((b)_n n!) / Gamma(b)
    turns the argument positive, killing the catastrophic cancellation of
    the direct series.  Requires beta > 0.
    """
    x = -z.real
    k = x.shape[0]
    s = np.ones(k)
    t = np.ones(k)
    tsum = np.ones(k)
    terms = np.ones(k, dtype=np.int64)
    active = np.ones(k, dtype=bool)
    n = 0
    while active.any() and n < 10000:
        ratio = (beta - 1.0 + n) * x / ((beta + n) * (n + 1.0))
        t = np.where(active, t * ratio, t)
        s += np.where(active, t, 0.0)
        tsum += np.where(active, np.abs(t), 0.0)
        terms = np.where(active, n + 2, terms)
        active &= np.abs(t) > 0.05 * _EPS * tsum
        n += 1
    pref = np.exp(-x) * rgamma(beta)
    value = (pref * s).astype(np.complex128)
    est = np.abs(pref) * (np.abs(t) * 10.0 + 4.0 * _EPS * tsum) + 1e-305
    return value, est, terms


# ----------------------------------------------------------------------------
# Asymptotic regime (gamma a positive integer)
# ----------------------------------------------------------------------------


def _derivative_coefficients(alpha, beta, m):
    """Coefficients c_k with (d/dz)^m [(1/a) Z^{1-B} e^Z] = e^Z sum_k c_k Z^{1-beta+k},
    B = beta - m*alpha, Z = z^(1/alpha)."""
    p0 = 1.0 - (beta - m * alpha)
    c = np.zeros(m + 1)
    c[0] = 1.0 / alpha
    for j in range(m):
        cn = np.zeros(m + 1)
        cn[1 : j + 2] += c[: j + 1] / alpha
        ks = np.arange(j + 1)
        cn[: j + 1] += c[: j + 1] * (p0 + ks - j * alpha) / alpha
        c = cn
    return c


def _asymptotic_batch(alpha, beta, m, z, tol):
    """Large-|z| evaluation of E^{m+1}_{alpha,beta}(z); honest estimate.

    Exponential branch terms are included for |arg z + 2 pi l| <= alpha*pi
    (half weight on the boundary); the nearest excluded branch magnitude is
    charged to the error estimate.  The algebraic series is truncated at its
    smallest term.
    """
    k = z.shape[0]
    fact_m = math.factorial(m)
    theta = np.angle(z)
    root = np.abs(z) ** (1.0 / alpha)
    value = np.zeros(k, dtype=np.complex128)
    est = np.zeros(k)
    terms = np.full(k, 1, dtype=np.int64)

    c = _derivative_coefficients(alpha, beta, m)
    ks = np.arange(m + 1)
    for ell in (-1, 0, 1):
        phi = theta + 2.0 * np.pi * ell
        dist = np.abs(phi) - alpha * np.pi
        on_boundary = np.abs(dist) <= 1e-9 * (1.0 + alpha * np.pi)
        inside = dist < 0.0
        weight = np.where(on_boundary, 0.5, np.where(inside, 1.0, 0.0))
        Z = root * np.exp(1j * phi / alpha)
        logZ = np.log(np.where(Z == 0, 1.0, Z))
        # e^Z sum_k c_k Z^{1-beta+k}, computed in log form to dodge overflow
        contrib = np.zeros(k, dtype=np.complex128)
        mag = np.zeros(k)
        for kk in ks:
            if c[kk] == 0.0:
                continue
            ex = Z + (1.0 - beta + kk) * logZ
            piece = c[kk] * np.exp(np.where(ex.real < 700.0, ex, np.nan))
            contrib += piece
            mag += np.abs(piece)
        value += np.where(weight > 0.0, weight * contrib / fact_m, 0.0)
        # charge fully-excluded branches near the boundary to the estimate
        fuzz = (~inside) & (~on_boundary) & (np.abs(phi) <= alpha * np.pi + 0.5)
        est += np.where(fuzz, mag / fact_m, 0.0)
        terms += (weight > 0).astype(np.int64) * (m + 1)

    # algebraic part: -(1/m!) sum_k (-1)^m (k)_m z^{-(k+m)} / Gamma(beta - alpha(m+k)).
    # The series is divergent-asymptotic: truncate at the smallest-magnitude
    # term.  Coefficients vanish exactly at the Gamma poles, so zero terms are
    # skipped without touching the running envelope (they would otherwise
    # freeze the sum far too early).
    sgn = (-1.0) ** m
    poch = float(fact_m)  # (1)_m
    zk = z ** (-(1.0 + m))
    env_min = np.full(k, np.inf)
    frozen = np.zeros(k, dtype=bool)
    small = np.zeros(k, dtype=np.int64)
    alg = CompensatedSum(z.shape, dtype=np.complex128)
    floor_mag = np.zeros(k)
    last_mag = np.zeros(k)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for kk in range(1, 200):
            coeff = (-sgn / fact_m) * poch * rgamma(beta - alpha * (m + kk))
            if coeff != 0.0:
                term = coeff * zk
                tmag = np.abs(term)
                grow = ~frozen & (tmag > 1.5 * env_min)
                floor_mag = np.where(grow, tmag, floor_mag)
                frozen |= grow
                alg.add(term, where=~frozen)
                terms += (~frozen).astype(np.int64)
                env_min = np.where(frozen, env_min, np.minimum(env_min, tmag))
                last_mag = np.where(frozen, last_mag, tmag)
                tiny = ~frozen & (tmag <= 1e-3 * tol * (np.abs(value + alg.total) + 1e-300))
                small = np.where(tiny, small + 1, np.where(frozen, small, 0))
                done = ~frozen & (small >= 2)
                floor_mag = np.where(done, tmag, floor_mag)
                frozen |= done
                if frozen.all():
                    break
            poch *= (kk + m) / kk
            zk = zk / z
    floor_mag = np.where(frozen, floor_mag, last_mag)
    value = value + alg.total
    est += 10.0 * floor_mag + 4.0 * _EPS * np.abs(value)
    est = np.where(np.isfinite(value), est, np.inf)
    return value, est, terms


# ----------------------------------------------------------------------------
# Integral-representation regime (parabola contour)
# ----------------------------------------------------------------------------


def _parabola_nodes(n):
    h = 2.0 * _PARABOLA_U / (n - 1)
    u = (np.arange(n) - (n - 1) / 2.0) * h
    s = _PARABOLA_MU * (1.0 + 1j * u) ** 2
    ds = 2j * _PARABOLA_MU * (1.0 + 1j * u)
    return h, s, ds


def _parabola_sum(alpha, beta, gamma, z, n):
    h, s, ds = _parabola_nodes(n)
    logs = np.log(s)[:, None]
    core = np.exp(s)[:, None] * ds[:, None]
    F = np.exp((alpha * gamma - beta) * logs - gamma * np.log(s[:, None] ** alpha - z[None, :]))
    integrand = core * F
    val = (h / (2j * np.pi)) * integrand.sum(axis=0)
    roundoff = _EPS * (np.abs(integrand).sum(axis=0) * h / (2.0 * np.pi))
    return val, roundoff


def _parabola_applicable(alpha, beta, gamma, z):
    """Contour validity: every on-sheet pole of (s^alpha - z)^-gamma must sit
    well left of the vertex, and non-integer gamma is restricted to the
    negative real axis (single-valued integrand there)."""
    if alpha > 1.7:
        return np.zeros(z.shape, dtype=bool)
    ok = np.ones(z.shape, dtype=bool)
    is_neg_real = (z.imag == 0.0) & (z.real < 0.0)
    gamma_int = abs(gamma - round(gamma)) <= 1e-12
    if not gamma_int:
        ok &= is_neg_real
    theta = np.angle(z)
    root = np.abs(z) ** (1.0 / alpha)
    for ell in (-1, 0, 1):
        phi = theta + 2.0 * np.pi * ell
        on_sheet = np.abs(phi) <= alpha * np.pi * (1.0 + 1e-12)
        re_pole = root * np.cos(phi / alpha)
        ok &= ~on_sheet | (re_pole <= -2.0)
    ok &= np.abs(z) >= 1e-3
    return ok


def _parabola_batch(alpha, beta, gamma, z):
    v_fine, r_fine = _parabola_sum(alpha, beta, gamma, z, _PARABOLA_N_FINE)
    v_coarse, _ = _parabola_sum(alpha, beta, gamma, z, _PARABOLA_N_COARSE)
    est = np.abs(v_fine - v_coarse) + r_fine
    real_in = (z.imag == 0.0)
    est = est + np.where(real_in, np.abs(v_fine.imag), 0.0)
    value = np.where(real_in, v_fine.real + 0j, v_fine)
    terms = np.full(z.shape, _PARABOLA_N_FINE + _PARABOLA_N_COARSE, dtype=np.int64)
    est = np.where(np.isfinite(value), est, np.inf)
    return value, est, terms


# ----------------------------------------------------------------------------
# Regime router
# ----------------------------------------------------------------------------


def _values_core(alpha, beta, gamma, z, tol, coeff_fn=_taylor_coefficients):
    """Evaluate E^gamma_{alpha,beta} on a complex vector with per-element
    regime selection.  Returns (value, est, terms, regime_code, ok)."""
    z = _as_z_array(z)
    k = z.shape[0]
    value = np.zeros(k, dtype=np.complex128)
    est = np.full(k, np.inf)
    terms = np.ones(k, dtype=np.int64)
    regime = np.zeros(k, dtype=np.int8)

    zero = z == 0
    if zero.any():
        value[zero] = rgamma(beta)
        est[zero] = 4.0 * _EPS * abs(rgamma(beta))
    pending = ~zero

    def better(mask, v, e, t, code):
        """Adopt candidate values wherever they beat the current estimate."""
        upd = mask & np.isfinite(e) & (e < est)
        value[upd] = v[upd]
        est[upd] = e[upd]
        terms[upd] = t[upd]
        regime[upd] = code

    accept_tol = np.clip(tol, 1e-15, 1e-3)

    zmag = np.abs(z)
    root = zmag ** (1.0 / alpha)
    pos_real = (z.imag == 0.0) & (z.real > 0.0)
    neg_real = (z.imag == 0.0) & (z.real < 0.0)
    n_needed = root + gamma + 40.0
    # z^n in the factored term c_n * z^n must stay inside double range
    no_overflow = n_needed * np.log1p(zmag) <= 690.0
    try_taylor = pending & (n_needed <= float(_TAYLOR_MAX_TERMS)) & no_overflow & (
        pos_real | (root <= _TAYLOR_CANCEL_LOG)
    )
    if try_taylor.any():
        idx = np.flatnonzero(try_taylor)
        v, e, t, failed = _taylor_batch(alpha, beta, gamma, z[idx], accept_tol, coeff_fn)
        vv = np.zeros(k, dtype=np.complex128)
        ee = np.full(k, np.inf)
        tt = np.ones(k, dtype=np.int64)
        vv[idx], ee[idx], tt[idx] = v, e, t
        better(try_taylor, vv, ee, tt, 0)
    ok = est <= accept_tol * (1.0 + np.abs(value))
    pending &= ~ok

    if pending.any() and alpha == 1.0 and gamma == 1.0 and beta > 0.0:
        mask = pending & neg_real & (zmag <= 690.0)
        if mask.any():
            idx = np.flatnonzero(mask)
            v, e, t = _kummer_negative_axis(beta, z[idx])
            vv = np.zeros(k, dtype=np.complex128)
            ee = np.full(k, np.inf)
            tt = np.ones(k, dtype=np.int64)
            vv[idx], ee[idx], tt[idx] = v, e, t
            better(mask, vv, ee, tt, 0)
            ok = est <= accept_tol * (1.0 + np.abs(value))
            pending &= ~ok

    gamma_is_int = abs(gamma - round(gamma)) <= 1e-12 and round(gamma) >= 1
    if pending.any() and gamma_is_int and round(gamma) <= 400:
        idx = np.flatnonzero(pending)
        v, e, t = _asymptotic_batch(alpha, beta, int(round(gamma)) - 1, z[idx], accept_tol)
        vv = np.zeros(k, dtype=np.complex128)
        ee = np.full(k, np.inf)
        tt = np.ones(k, dtype=np.int64)
        vv[idx], ee[idx], tt[idx] = v, e, t
        better(pending, vv, ee, tt, 1)
        ok = est <= accept_tol * (1.0 + np.abs(value))
        pending &= ~ok

    if pending.any():
        mask = pending & _parabola_applicable(alpha, beta, gamma, z)
        if mask.any():
            idx = np.flatnonzero(mask)
            v, e, t = _parabola_batch(alpha, beta, gamma, z[idx])
            vv = np.zeros(k, dtype=np.complex128)
            ee = np.full(k, np.inf)
            tt = np.ones(k, dtype=np.int64)
            vv[idx], ee[idx], tt[idx] = v, e, t
            better(mask, vv, ee, tt, 2)

    ok = est <= accept_tol * (1.0 + np.abs(value))
    ok &= np.isfinite(est) & np.isfinite(value)
    return value, est, terms, regime, ok


def prabhakar_values(alpha, beta, gamma, z, tol=1e-12):
    """Vectorized E^gamma_{alpha,beta}(z) over an argument array.

    Unlike :func:`eval_prabhakar` this accepts any real ``beta`` (the
    inverse-transform series needs second parameters <= 0) and reports
    failures through the returned ``ok`` mask instead of raising.
    """
    return _values_core(alpha, beta, gamma, z, tol)


def _single(order_alpha, order_beta, order_gamma, z, tol, coeff_fn):
    v, e, t, r, ok = _values_core(order_alpha, order_beta, order_gamma, z, tol, coeff_fn)
    res = EvalResult(complex(v[0]), float(e[0]), int(t[0]), _REGIME_BY_CODE[int(r[0])])
    return res, bool(ok[0])


def eval_prabhakar(order: PrabhakarOrder, z, tol: float = 1e-12) -> EvalResult:
    """Evaluate E^gamma_{alpha,beta}(z) with est_error <= tol*(1+|value|).

    Raises NonConvergent when the term cap is exhausted first and
    OverflowRegime when no implemented regime covers the argument; both
    carry the best-effort partial result.
    """
    if not isinstance(order, PrabhakarOrder):
        order = PrabhakarOrder(*order)
    if not (1e-15 <= tol <= 1e-3):
        raise ValueError(f"tol must lie in [1e-15, 1e-3], got {tol!r}")
    res, ok = _single(order.alpha, order.beta, order.gamma, z, tol, _taylor_coefficients)
    if ok:
        return res
    if not np.isfinite(res.value) or not np.isfinite(res.est_error):
        raise OverflowRegime(
            f"no evaluation regime reaches tol={tol:g} at z={z!r} for order {order}", result=res
        )
    if res.regime is Regime.TAYLOR_SERIES and res.terms_used >= _TAYLOR_MAX_TERMS - 1:
        raise NonConvergent(
            f"term cap {_TAYLOR_MAX_TERMS} hit before tolerance at z={z!r}", result=res
        )
    raise OverflowRegime(
        f"best est_error {res.est_error:.3g} exceeds tol={tol:g} at z={z!r} (regime {res.regime.value})",
        result=res,
    )


def eval_wiman(alpha: float, beta: float, z, tol: float = 1e-12) -> EvalResult:
    """Evaluate the two-parameter function E_{alpha,beta}(z).

    Uses its own Taylor coefficient path (no Pochhammer recurrence), so the
    gamma=1 reduction of eval_prabhakar is a genuine cross-check.
    """
    if not (np.isfinite(alpha) and alpha > 0.0) or not (np.isfinite(beta) and beta > 0.0):
        raise InvalidOrder(f"alpha and beta must be > 0, got {alpha!r}, {beta!r}")
    if not (1e-15 <= tol <= 1e-3):
        raise ValueError(f"tol must lie in [1e-15, 1e-3], got {tol!r}")
    res, ok = _single(alpha, beta, 1.0, z, tol, _wiman_coefficients)
    if ok:
        return res
    if not np.isfinite(res.value):
        raise OverflowRegime(f"no regime covers z={z!r}", result=res)
    if res.regime is Regime.TAYLOR_SERIES and res.terms_used >= _TAYLOR_MAX_TERMS - 1:
        raise NonConvergent(f"term cap hit before tolerance at z={z!r}", result=res)
    raise OverflowRegime(
        f"best est_error {res.est_error:.3g} exceeds tol={tol:g} at z={z!r}", result=res
    )


def mittag_leffler(alpha: float, z, tol: float = 1e-12) -> EvalResult:
    """Classical one-parameter E_alpha(z) = E_{alpha,1}(z)."""
    return eval_wiman(alpha, 1.0, z, tol)


# ----------------------------------------------------------------------------
# Laplace-pair self test
# ----------------------------------------------------------------------------


def laplace_pair_check(order: PrabhakarOrder, omega: float, s: float, T: float) -> float:
    """Residual of the Laplace pair for the Prabhakar kernel.

    Quadrature of  integral_0^T e^{-s t} t^{g-1} E^d_{b,g}(omega t^b) dt
    against the closed form  s^{-g} (1 - omega s^{-b})^{-d},  where
    (b, g, d) = (order.alpha, order.beta, order.gamma).  The truncation
    tail bound is charged to the returned residual.
    """
    b, g, d = order.alpha, order.beta, order.gamma
    if s <= 0.0 or T <= 0.0:
        raise ValueError("s and T must be positive")
    if s <= abs(omega) ** (1.0 / b):
        raise ValueError(f"requires s > |omega|^(1/b) = {abs(omega) ** (1.0 / b):g}")

    def integrand(t):
        if t == 0.0:
            return 0.0
        v, _, _, _, _ = _values_core(b, g, d, np.array([omega * t**b]), 1e-13)
        return math.exp(-s * t) * t ** (g - 1.0) * float(v[0].real)

    try:
        val, err = quad(integrand, 0.0, T, limit=400, epsabs=1e-13, epsrel=1e-12)
    except Exception as exc:  # pragma: no cover - scipy raises rarely
        raise QuadratureFailure(str(exc)) from exc
    if not np.isfinite(val) or err > 1e-6:
        raise QuadratureFailure(f"adaptive quadrature error estimate {err:.3g} too large")
    v_T, _, _, _, _ = _values_core(b, g, d, np.array([omega * T**b]), 1e-10)
    tail = abs(math.exp(-s * T) * T ** (g - 1.0) * float(v_T[0].real)) / s * 2.0
    closed = s ** (-g) * (1.0 - omega * s ** (-b)) ** (-d)
    return abs(val - closed) + tail + err
