"""Closed-form Mittag-Leffler series for inverse Laplace transforms.

Inverts fractional rational symbols

    s^(rho-1) / (s^a + A s^b + B s^g + C)            (three-term master)
    s^(rho-1) / (a0 + a1 s^(o1) + ... + aN s^(oN))   (multi-term general)

as double / multinomial series of Prabhakar functions.  Every published
rho-specialization is realized by substituting rho into the master series,
never by retyping a specialized formula, so specialization consistency is
structural.  Series are truncated by an outer-block stop rule with a
divergence guard; results always report convergence flags and honest error
estimates instead of failing silently.

All operations are pure; the vectorized engines evaluate one (r, l) block
of the series across a whole argument array at a time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from .errors import CombinatorialBlowup, InvalidSymbol, NonConvergent
from .mlfun import prabhakar_values
from .summation import CompensatedSum

__all__ = [
    "Truncation",
    "DomainFlag",
    "InversionResult",
    "ThreeTermSymbol",
    "MultiTermSymbol",
    "SeriesResult",
    "enumerate_compositions",
    "composition_count",
    "invert_three_term",
    "invert_two_term",
    "invert_general",
    "invert_three_term_preset",
    "invert_two_term_preset",
    "invert_general_preset",
    "three_term_values",
    "general_values",
    "THREE_TERM_PRESETS",
    "TWO_TERM_PRESETS",
    "GENERAL_PRESETS",
]

_EXPONENT_MERGE_RTOL = 1e-12


@dataclass(frozen=True)
class Truncation:
    """Series truncation policy.

    ``tol`` drives the outer-block stop rule (two consecutive blocks below
    tol * (1 + |partial|)); ``divergence_guard`` is the absolute block
    magnitude beyond which the series is declared divergent-in-practice.
    """

    tol: float = 1e-10
    max_outer: int = 60
    max_total_terms: int = 10**6
    divergence_guard: float = 1e8

    def __post_init__(self):
        if not (1e-14 <= self.tol <= 1e-3):
            raise ValueError(f"tol must lie in [1e-14, 1e-3], got {self.tol!r}")
        if self.max_outer < 1 or self.max_total_terms < 1:
            raise ValueError("truncation caps must be positive")
        if self.divergence_guard <= 0:
            raise ValueError("divergence_guard must be positive")


class DomainFlag(str, Enum):
    INSIDE_GUARD = "InsideGuard"
    GUARD_VIOLATED = "GuardViolated"


@dataclass(frozen=True)
class InversionResult:
    value: float
    est_error: float
    outer_terms_used: int
    converged: bool
    domain_flag: DomainFlag


@dataclass(frozen=True)
class SeriesResult:
    """Vectorized engine output over a broadcast argument grid."""

    value: np.ndarray
    est_error: np.ndarray
    outer_terms_used: np.ndarray
    converged: np.ndarray
    guard_violated: np.ndarray
    stopped: np.ndarray

    def scalar(self) -> InversionResult:
        flag = DomainFlag.GUARD_VIOLATED if bool(self.guard_violated.flat[0]) else DomainFlag.INSIDE_GUARD
        return InversionResult(
            value=float(self.value.flat[0]),
            est_error=float(self.est_error.flat[0]),
            outer_terms_used=int(self.outer_terms_used.flat[0]),
            converged=bool(self.converged.flat[0]),
            domain_flag=flag,
        )

    def scaled(self, factor: float) -> "SeriesResult":
        return SeriesResult(self.value * factor, self.est_error * abs(factor),
                            self.outer_terms_used, self.converged,
                            self.guard_violated, self.stopped)


def _close(x, y):
    return abs(x - y) <= _EXPONENT_MERGE_RTOL * max(1.0, abs(x), abs(y))


class ThreeTermSymbol:
    """Normalized symbol s^(rho-1) / (s^alpha + a s^beta + b s^gamma + c).

    The constructor accepts any real exponents >= 0 and merges ties
    (coefficients add), folds exponent-zero terms into the constant, and
    rescales so the dominant exponent has unit coefficient, recording the
    overall prefactor in ``scale``.  Stored exponents satisfy
    alpha > gamma > beta >= 0 strictly, the ordering the series requires.
    """

    __slots__ = ("rho", "alpha", "beta", "gamma", "a", "b", "c", "scale")

    def __init__(self, rho, alpha, beta, gamma, a, b, c):
        if not (np.isfinite(rho) and rho > 0):
            raise InvalidSymbol(f"rho must be positive, got {rho!r}")
        raw = [(float(alpha), 1.0), (float(beta), float(a)), (float(gamma), float(b))]
        const = float(c)
        for e, coef in raw:
            if not np.isfinite(e) or e < 0:
                raise InvalidSymbol(f"exponents must be finite and >= 0, got {e!r}")
        terms: list[list[float]] = []
        for e, coef in raw:
            if coef == 0.0 and e != float(alpha):
                continue
            if _close(e, 0.0):
                const += coef
                continue
            for t in terms:
                if _close(t[0], e):
                    t[1] += coef
                    break
            else:
                terms.append([e, coef])
        terms.sort(key=lambda t: -t[0])
        terms = [t for t in terms if t[1] != 0.0]
        if not terms:
            raise InvalidSymbol("no fractional term survives normalization")
        lead_e, lead_c = terms[0]
        if lead_c == 0.0:
            raise InvalidSymbol("leading coefficient cancelled to zero")
        if lead_e > 2.0 + 1e-12:
            raise InvalidSymbol(f"dominant exponent {lead_e} > 2 is outside the supported range")
        self.scale = 1.0 / lead_c
        rest = [(e, coef / lead_c) for e, coef in terms[1:]]
        const /= lead_c

        self.rho = float(rho)
        self.alpha = lead_e
        if len(rest) == 0:
            self.gamma, self.b = 2.0 * lead_e / 3.0, 0.0
            self.beta, self.a = lead_e / 3.0, 0.0
        elif len(rest) == 1:
            self.gamma, self.b = rest[0]
            self.beta, self.a = self.gamma / 2.0, 0.0
        else:
            self.gamma, self.b = rest[0]
            self.beta, self.a = rest[1]
        self.c = const
        if not (self.alpha > self.gamma > self.beta >= 0.0):
            raise InvalidSymbol(
                f"exponent ordering alpha > gamma > beta >= 0 failed after "
                f"normalization: {self.alpha}, {self.gamma}, {self.beta}"
            )

    def laplace(self, s):
        """Evaluate the symbol in the Laplace domain (for oracle checks)."""
        return self.scale * s ** (self.rho - 1.0) / (
            s**self.alpha + self.a * s**self.beta + self.b * s**self.gamma + self.c
        )

    def __repr__(self):
        return (
            f"ThreeTermSymbol(rho={self.rho}, alpha={self.alpha}, beta={self.beta}, "
            f"gamma={self.gamma}, a={self.a}, b={self.b}, c={self.c}, scale={self.scale})"
        )


class MultiTermSymbol:
    """Normalized symbol s^(rho-1) / (a0 + sum_j a_j s^(alpha_j)).

    ``terms`` are (coefficient, exponent) pairs; ties merge, zero exponents
    fold into a0, and the list is stored dominant-first.  The first stored
    term must keep a nonzero coefficient (the series divides by it).
    """

    __slots__ = ("rho", "a0", "terms")

    def __init__(self, rho, a0, terms: Sequence[tuple[float, float]]):
        if not (np.isfinite(rho) and rho > 0):
            raise InvalidSymbol(f"rho must be positive, got {rho!r}")
        const = float(a0)
        merged: list[list[float]] = []
        for coef, e in terms:
            e, coef = float(e), float(coef)
            if not np.isfinite(e):
                raise InvalidSymbol(f"exponent {e!r} not finite")
            if coef == 0.0:
                continue
            if _close(e, 0.0):
                const += coef
                continue
            if e < 0:
                raise InvalidSymbol(f"exponents must be positive, got {e!r}")
            for t in merged:
                if _close(t[0], e):
                    t[1] += coef
                    break
            else:
                merged.append([e, coef])
        merged = [t for t in merged if t[1] != 0.0]
        if not merged:
            raise InvalidSymbol("no fractional term survives normalization")
        merged.sort(key=lambda t: -t[0])
        if merged[0][0] > 2.0 + 1e-12:
            raise InvalidSymbol(f"dominant exponent {merged[0][0]} > 2 is outside the supported range")
        self.rho = float(rho)
        self.a0 = const
        self.terms = tuple((coef, e) for e, coef in merged)

    @property
    def n(self) -> int:
        return len(self.terms) - 1

    def laplace(self, s):
        acc = self.a0
        for coef, e in self.terms:
            acc = acc + coef * s**e
        return s ** (self.rho - 1.0) / acc

    def __repr__(self):
        return f"MultiTermSymbol(rho={self.rho}, a0={self.a0}, terms={self.terms})"


# ----------------------------------------------------------------------------
# Multinomial index enumeration
# ----------------------------------------------------------------------------


def enumerate_compositions(m: int, n: int) -> Iterator[tuple[int, ...]]:
    """Yield every n-tuple of nonnegative integers summing to m exactly once,
    in colexicographic order (last coordinate slowest)."""
    if m < 0 or n < 0:
        raise ValueError("m and n must be nonnegative")
    if n == 0:
        if m == 0:
            yield ()
        return
    if n == 1:
        yield (m,)
        return

    def rec(total, parts):
        if parts == 1:
            yield (total,)
            return
        for last in range(total + 1):
            for head in rec(total - last, parts - 1):
                yield head + (last,)

    yield from rec(m, n)


def composition_count(m: int, n: int) -> int:
    """Number of n-part compositions of m: C(m+n-1, n-1)."""
    if n == 0:
        return 1 if m == 0 else 0
    return math.comb(m + n - 1, n - 1)


# ----------------------------------------------------------------------------
# Series engines
# ----------------------------------------------------------------------------


def _broadcast_tc(t, c):
    t = np.asarray(t, dtype=float)
    c = np.asarray(c, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be strictly positive")
    shape = np.broadcast_shapes(t.shape, c.shape)
    return np.broadcast_to(t, shape).ravel(), np.broadcast_to(c, shape).ravel(), shape


def _finish(shape, acc, est_ml, last_block, stopped, guard, outer, tol):
    value = acc.total
    est = est_ml + 10.0 * last_block
    converged = stopped & ~guard & (est <= tol * (1.0 + np.abs(value)))
    return SeriesResult(
        value=value.reshape(shape),
        est_error=est.reshape(shape),
        outer_terms_used=outer.reshape(shape),
        converged=converged.reshape(shape),
        guard_violated=guard.reshape(shape),
        stopped=stopped.reshape(shape),
    )


def three_term_values(rho, alpha, beta, gamma, a, b, c, t, trunc: Truncation | None = None) -> SeriesResult:
    """Vectorized master series over broadcastable (t, c) arrays.

    The exponents must already satisfy alpha > gamma > beta >= 0 (go
    through ThreeTermSymbol for normalization).  ``c`` may vary per element
    (one Fourier mode constant each); the returned arrays follow the
    broadcast shape of (t, c).
    """
    trunc = trunc or Truncation()
    t_flat, c_flat, shape = _broadcast_tc(t, c)
    k = t_flat.shape[0]
    w = -(c_flat * t_flat**alpha)
    ml_tol = float(np.clip(trunc.tol * 1e-2, 1e-15, 1e-3))

    acc = CompensatedSum((k,))
    est_ml = np.zeros(k)
    last_block = np.zeros(k)
    small = np.zeros(k, dtype=np.int64)
    outer = np.zeros(k, dtype=np.int64)
    stopped = np.zeros(k, dtype=bool)
    guard = np.zeros(k, dtype=bool)
    active = np.ones(k, dtype=bool)

    for r in range(trunc.max_outer):
        ids = np.flatnonzero(active)
        if ids.size == 0:
            break
        block = np.zeros(ids.size)
        block_est = np.zeros(ids.size)
        tr_ = t_flat[ids]
        wr_ = w[ids]
        for l in range(r + 1):
            if a == 0.0 and l > 0:
                continue
            if b == 0.0 and l < r:
                continue
            coef = float(math.comb(r, l)) * a**l * b ** (r - l)
            if coef == 0.0:
                continue
            e = (alpha - gamma) * r + (gamma - beta) * l + alpha - rho
            tp = coef * tr_**e
            ml_val, ml_est, _, _, _ = prabhakar_values(alpha, e + 1.0, float(r + 1), wr_, ml_tol)
            block += tp * ml_val.real
            block_est += np.abs(tp) * (ml_est + np.abs(ml_val.imag))
        signed = block if r % 2 == 0 else -block
        full = np.zeros(k)
        full[ids] = signed
        bmag = np.abs(block)

        viol = bmag > trunc.divergence_guard
        keep = ~viol
        mask = active.copy()
        if viol.any():
            mask[ids[viol]] = False
        acc.add(np.where(np.isfinite(full), full, 0.0), where=mask)
        est_ml[ids[keep]] += block_est[keep]
        guard[ids[viol]] = True
        active[ids[viol]] = False
        outer[ids] = r + 1

        partial = np.abs(acc.total[ids])
        is_small = bmag <= trunc.tol * (1.0 + partial)
        small_ids = small[ids]
        small_ids = np.where(is_small & keep, small_ids + 1, 0)
        small[ids] = small_ids
        newly = (small_ids >= 2) & keep
        stopped[ids[newly]] = True
        last_block[ids[newly]] = bmag[newly]
        active[ids[newly]] = False
        nonfin = ~np.isfinite(bmag)
        guard[ids[nonfin]] = True
        active[ids[nonfin]] = False
    else:
        rem = np.flatnonzero(active)
        last_block[rem] = np.maximum(last_block[rem], 1.0)

    return _finish(shape, acc, est_ml, last_block, stopped, guard, outer, trunc.tol)


def general_values(rho, a0, terms, t, trunc: Truncation | None = None) -> SeriesResult:
    """Vectorized multinomial series over broadcastable (t, a0) arrays.

    ``terms`` is the normalized dominant-first (coefficient, exponent)
    tuple; ``a0`` may vary per element.  Raises CombinatorialBlowup when
    the cumulative composition count exceeds the term budget.
    """
    trunc = trunc or Truncation()
    t_flat, a0_flat, shape = _broadcast_tc(t, a0)
    k = t_flat.shape[0]
    a1, alpha1 = terms[0]
    if a1 == 0.0:
        raise InvalidSymbol("dominant coefficient must be nonzero")
    n = len(terms) - 1
    alpha2 = terms[1][1] if n >= 1 else None
    ratios = [terms[j][0] / a1 for j in range(1, len(terms))]
    w = -(a0_flat / a1) * t_flat**alpha1
    ml_tol = float(np.clip(trunc.tol * 1e-2, 1e-15, 1e-3))

    acc = CompensatedSum((k,))
    est_ml = np.zeros(k)
    last_block = np.zeros(k)
    small = np.zeros(k, dtype=np.int64)
    outer = np.zeros(k, dtype=np.int64)
    stopped = np.zeros(k, dtype=bool)
    guard = np.zeros(k, dtype=bool)
    active = np.ones(k, dtype=bool)
    budget = 0

    for m in range(trunc.max_outer):
        ids = np.flatnonzero(active)
        if ids.size == 0:
            break
        budget += composition_count(m, n)
        if budget > trunc.max_total_terms:
            raise CombinatorialBlowup(
                f"composition budget {trunc.max_total_terms} exceeded at outer index m={m}"
            )
        block = np.zeros(ids.size)
        block_est = np.zeros(ids.size)
        tr_ = t_flat[ids]
        wr_ = w[ids]
        fact_m = math.factorial(m)
        for comp in enumerate_compositions(m, n):
            coef = float(fact_m)
            for rj, ratio in zip(comp, ratios):
                if rj:
                    coef = coef / math.factorial(rj) * ratio**rj
            if coef == 0.0:
                continue
            A = alpha1 * (1.0 + m)
            if n >= 1:
                A -= alpha2 * m
                A += sum((alpha2 - terms[j + 1][1]) * comp[j] for j in range(n))
            e = A - rho
            tp = coef * tr_**e
            ml_val, ml_est, _, _, _ = prabhakar_values(alpha1, e + 1.0, float(m + 1), wr_, ml_tol)
            block += tp * ml_val.real
            block_est += np.abs(tp) * (ml_est + np.abs(ml_val.imag))
        signed = (block if m % 2 == 0 else -block) / a1
        block_est /= abs(a1)
        bmag = np.abs(signed)

        full = np.zeros(k)
        full[ids] = signed
        viol = bmag > trunc.divergence_guard
        keep = ~viol
        mask = active.copy()
        if viol.any():
            mask[ids[viol]] = False
        acc.add(np.where(np.isfinite(full), full, 0.0), where=mask)
        est_ml[ids[keep]] += block_est[keep]
        guard[ids[viol]] = True
        active[ids[viol]] = False
        outer[ids] = m + 1

        partial = np.abs(acc.total[ids])
        is_small = bmag <= trunc.tol * (1.0 + partial)
        small_ids = small[ids]
        small_ids = np.where(is_small & keep, small_ids + 1, 0)
        small[ids] = small_ids
        newly = (small_ids >= 2) & keep
        stopped[ids[newly]] = True
        last_block[ids[newly]] = bmag[newly]
        active[ids[newly]] = False
        nonfin = ~np.isfinite(bmag)
        guard[ids[nonfin]] = True
        active[ids[nonfin]] = False
    else:
        rem = np.flatnonzero(active)
        last_block[rem] = np.maximum(last_block[rem], 1.0)

    return _finish(shape, acc, est_ml, last_block, stopped, guard, outer, trunc.tol)


# ----------------------------------------------------------------------------
# Public scalar operations
# ----------------------------------------------------------------------------


def _scalar_result(res: SeriesResult, trunc: Truncation, what: str) -> InversionResult:
    out = res.scalar()
    if not out.converged and not out.domain_flag is DomainFlag.GUARD_VIOLATED and not bool(res.stopped.flat[0]):
        raise NonConvergent(
            f"{what}: outer cap {trunc.max_outer} exhausted before the stop rule fired",
            result=out,
        )
    return out


def invert_three_term(sym: ThreeTermSymbol, t: float, trunc: Truncation | None = None) -> InversionResult:
    """Invert the three-term symbol at a single positive time."""
    trunc = trunc or Truncation()
    res = three_term_values(sym.rho, sym.alpha, sym.beta, sym.gamma,
                            sym.a, sym.b, sym.c, float(t), trunc).scaled(sym.scale)
    return _scalar_result(res, trunc, "three-term inversion")


def invert_two_term(rho, alpha, beta, a, b, t, trunc: Truncation | None = None) -> InversionResult:
    """Invert s^(rho-1)/(s^alpha + a s^beta + b) by substitution into the
    master operation (gamma slot carries a zero coefficient)."""
    if not alpha > beta >= 0:
        raise InvalidSymbol(f"requires alpha > beta >= 0, got {alpha!r}, {beta!r}")
    sym = ThreeTermSymbol(rho, alpha, beta, (alpha + beta) / 2.0, a, 0.0, b)
    return invert_three_term(sym, t, trunc)


def invert_general(sym: MultiTermSymbol, t: float, trunc: Truncation | None = None) -> InversionResult:
    """Invert the multi-term symbol at a single positive time."""
    trunc = trunc or Truncation()
    res = general_values(sym.rho, sym.a0, sym.terms, float(t), trunc)
    return _scalar_result(res, trunc, "multi-term inversion")


THREE_TERM_PRESETS = ("one", "alpha", "beta", "gamma", "alpha_plus_beta")
TWO_TERM_PRESETS = ("alpha", "beta")
GENERAL_PRESETS = ("alpha1", "alpha2", "one", "alpha1_plus_alpha2")


def _three_term_rho(preset, alpha, beta, gamma):
    table = {
        "one": 1.0,
        "alpha": alpha,
        "beta": beta,
        "gamma": gamma,
        "alpha_plus_beta": alpha + beta,
    }
    try:
        return table[preset]
    except KeyError:
        raise ValueError(f"unknown preset {preset!r}; choose from {THREE_TERM_PRESETS}") from None


def invert_three_term_preset(preset: str, alpha, beta, gamma, a, b, c, t,
                             trunc: Truncation | None = None) -> InversionResult:
    """Named rho-specializations of the three-term master inversion.

    Implemented by substituting rho into the master series; the printed
    specialized forms are never retyped.
    """
    rho = _three_term_rho(preset, alpha, beta, gamma)
    return invert_three_term(ThreeTermSymbol(rho, alpha, beta, gamma, a, b, c), t, trunc)


def invert_two_term_preset(preset: str, alpha, beta, a, b, t,
                           trunc: Truncation | None = None) -> InversionResult:
    """rho = alpha / rho = beta specializations of the two-term inversion."""
    table = {"alpha": alpha, "beta": beta}
    if preset not in table:
        raise ValueError(f"unknown preset {preset!r}; choose from {TWO_TERM_PRESETS}")
    return invert_two_term(table[preset], alpha, beta, a, b, t, trunc)


def invert_general_preset(preset: str, a0, terms, t,
                          trunc: Truncation | None = None) -> InversionResult:
    """Named rho-specializations of the multi-term inversion."""
    sym0 = MultiTermSymbol(1.0, a0, terms)
    alpha1 = sym0.terms[0][1]
    alpha2 = sym0.terms[1][1] if sym0.n >= 1 else alpha1
    table = {
        "alpha1": alpha1,
        "alpha2": alpha2,
        "one": 1.0,
        "alpha1_plus_alpha2": alpha1 + alpha2,
    }
    if preset not in table:
        raise ValueError(f"unknown preset {preset!r}; choose from {GENERAL_PRESETS}")
    return invert_general(MultiTermSymbol(table[preset], a0, terms), t, trunc)
