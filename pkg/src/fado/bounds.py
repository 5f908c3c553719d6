"""Executable mistake/power bounds and trace auditors.

The detector's guarantees are chains of three closed forms: the zeta-capped
gain energy, an integral lower bound on the accumulated gain mass, and an
algebraic bound on any quantity that is dominated by a constant plus
the square root of an affine function of itself.  This module exposes each
link with explicit constants, the bound compositions built from them, and
auditors that check the unconditional inequalities against a detector's
diagnostics trace.

All functions are pure; everything is safe for unrestricted parallel use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .detector import DiagnosticsTrace, as_vector

__all__ = [
    "riemann_zeta",
    "ac_y_bound",
    "ac_x_bound",
    "gamma_sum_lower_bound",
    "mistake_bound_realizable",
    "power_delta_bound",
    "mistake_bound_agnostic",
    "adaptive_mistake_bound",
    "AdaptiveBoundReport",
    "sigma_admissibility_ratio",
    "GroundTruth",
    "ContaminationReport",
    "sigma_size",
    "TraceAudit",
    "audit_trace",
]

_ZETA_TOL = 1e-10
_CHUNK = 10_000_000


@lru_cache(maxsize=256)
def riemann_zeta(s: float) -> float:
    """zeta(s) for s > 1, to absolute error <= 1e-10.

    Direct summation of k**-s up to a cutoff N plus the integral tail
    N**(1-s)/(s-1); the approximation error is below N**-s, and N is chosen
    so that bound is under tolerance.  The required N blows up as s -> 1+,
    so calls are cached and the summation is chunked; the practical domain
    here is s = 1 + 2*tau with tau in (0, 1/2).
    """
    s = float(s)
    if not (s > 1.0 and math.isfinite(s)):
        raise ValueError("zeta is summed only for s > 1")
    n_cut = int(math.ceil((2.0 / _ZETA_TOL) ** (1.0 / s)))
    total = 0.0
    lo = 1
    while lo <= n_cut:
        hi = min(lo + _CHUNK - 1, n_cut)
        k = np.arange(lo, hi + 1, dtype=np.float64)
        total += float(np.sum(k ** -s))
        lo = hi + 1
    return total + n_cut ** (1.0 - s) / (s - 1.0)


def _check_ac_args(a: float, c: float) -> None:
    if not (a > 0 and math.isfinite(a)):
        raise ValueError("a must be a positive finite number")
    if not (c > 0 and math.isfinite(c)):
        raise ValueError("c must be a positive finite number")


def ac_y_bound(a: float, c: float) -> float:
    """Bound on |y| when x + y <= c*sqrt(a + 2y), y >= -a/2, x >= 0.

    The second branch is the positive root of y = c*sqrt(a + 2y).
    """
    _check_ac_args(a, c)
    return max(a / 2.0, c * math.sqrt(a + c * c) + c * c)


def ac_x_bound(a: float, c: float) -> float:
    """Bound on x under the same premises as :func:`ac_y_bound`.

    Evaluates x <= c*sqrt(a + 2|y|) + |y| at both candidate |y| values.
    """
    _check_ac_args(a, c)
    y_star = c * math.sqrt(a + c * c) + c * c
    branch1 = c * math.sqrt(2.0 * a) + a / 2.0
    branch2 = c * math.sqrt(a + 2.0 * y_star) + y_star
    return max(branch1, branch2)


def _check_schedule_args(tau: float, gamma0: float) -> None:
    if not (0.0 < tau < 0.5):
        raise ValueError("tau must lie strictly between 0 and 1/2")
    if not (gamma0 > 0 and math.isfinite(gamma0)):
        raise ValueError("gamma0 must be a positive finite number")


def gamma_sum_lower_bound(m: int, tau: float, gamma0: float = 1.0) -> float:
    """Integral lower bound on the accumulated gain after m mistakes.

    gamma0 * ((m+1)**(1/2-tau) - 1) / (1/2 - tau) never exceeds the true
    partial sum gamma0 * sum_{k<=m} k**-(1/2+tau); it trails it by at most
    gamma0.  This is the explicit stand-in for the otherwise unnamed
    universal constant in the gain-mass growth statement.
    """
    _check_schedule_args(tau, gamma0)
    if m < 1:
        raise ValueError("m must be at least 1")
    q = 0.5 - tau
    return gamma0 * ((float(m) + 1.0) ** q - 1.0) / q


def _gamma_mass_lb(m: int, tau: float, gamma0: float) -> float:
    # Same integral bound, extended to m = 0 for the bisections below.
    if m < 1:
        return 0.0
    return gamma_sum_lower_bound(m, tau, gamma0)


def _largest_m_with_mass_below(rhs: float, mu: float, tau: float,
                               gamma0: float) -> int:
    """Largest m with mu * mass_lower_bound(m) <= rhs (monotone bisection).

    Ties resolve to the larger m, the conservative side.
    """
    if rhs < 0:
        return 0
    hi = 1
    while mu * _gamma_mass_lb(hi, tau, gamma0) <= rhs:
        hi *= 2
        if hi > 2 ** 400:  # pragma: no cover - parameter pathology guard
            raise OverflowError("mistake bound search diverged")
    lo = hi // 2  # mu*lb(lo) <= rhs < mu*lb(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mu * _gamma_mass_lb(mid, tau, gamma0) <= rhs:
            lo = mid
        else:
            hi = mid
    return lo


def mistake_bound_realizable(norm_w_bar: float, mu: float, tau: float = 0.25,
                             gamma0: float = 1.0) -> int:
    """Mistake cap for margin-realizable streams under the decaying gain.

    Largest m such that mu * gamma_sum_lower_bound(m) stays within the
    algebraic x-bound evaluated at a = gamma0**2 * zeta(1+2*tau) and
    c = norm_w_bar.  Any run on a stream whose points all sit within
    epsilon - mu of a fixed center of that norm makes at most this many
    mistakes, at every prefix.
    """
    if not (norm_w_bar > 0 and math.isfinite(norm_w_bar)):
        raise ValueError("norm_w_bar must be a positive finite number")
    if not (mu > 0 and math.isfinite(mu)):
        raise ValueError("mu must be a positive finite number")
    _check_schedule_args(tau, gamma0)
    a = gamma0 * gamma0 * riemann_zeta(1.0 + 2.0 * tau)
    x_max = ac_x_bound(a, norm_w_bar)
    return _largest_m_with_mass_below(x_max, mu, tau, gamma0)


def power_delta_bound(norm_w_bar: float, m_T: int, tau: float = 0.25,
                      gamma0: float = 1.0) -> float:
    """Excess distance guaranteeing detection after m_T mistakes.

    delta* = x_bound(gamma0**2 * zeta(1+2*tau) + c'**2, norm_w_bar) / c'
    with c' = m_T**((1-2*tau)/4).  A transaction farther than
    epsilon + delta* from the realizable center is always flagged.
    Decreasing in m_T throughout the practically reachable range; once
    c'**2 dwarfs the zeta term (m_T beyond any realizable run) the ratio
    turns back upward, which is exactly where the chain's a = O(c^2)
    premise stops holding.
    """
    if not (norm_w_bar > 0 and math.isfinite(norm_w_bar)):
        raise ValueError("norm_w_bar must be a positive finite number")
    if m_T < 1:
        raise ValueError("m_T must be at least 1")
    _check_schedule_args(tau, gamma0)
    c_prime = float(m_T) ** ((1.0 - 2.0 * tau) / 4.0)
    a = gamma0 * gamma0 * riemann_zeta(1.0 + 2.0 * tau) + c_prime * c_prime
    return ac_x_bound(a, norm_w_bar) / c_prime


def mistake_bound_agnostic(norm_w_bar: float, mu: float, tau: float,
                           gamma0: float, sigma_T: float) -> int:
    """Mistake cap when a contaminated prefix has fault mass sigma_T.

    The margin mass is reduced by sqrt(gamma0**2 * zeta(1+2*tau) * sigma_T)
    (the Cauchy-Schwarz coupling of gain energy and fault sizes); with
    sigma_T = 0 this reduces to :func:`mistake_bound_realizable`.
    """
    if not (norm_w_bar > 0 and math.isfinite(norm_w_bar)):
        raise ValueError("norm_w_bar must be a positive finite number")
    if not (mu > 0 and math.isfinite(mu)):
        raise ValueError("mu must be a positive finite number")
    if not (sigma_T >= 0 and math.isfinite(sigma_T)):
        raise ValueError("sigma_T must be a nonnegative finite number")
    _check_schedule_args(tau, gamma0)
    zeta_energy = gamma0 * gamma0 * riemann_zeta(1.0 + 2.0 * tau)
    x_max = ac_x_bound(zeta_energy, norm_w_bar)
    rhs = x_max + math.sqrt(zeta_energy * sigma_T)
    return _largest_m_with_mass_below(rhs, mu, tau, gamma0)


def sigma_admissibility_ratio(norm_w_bar: float, sigma_T: float) -> float:
    """sigma_T / norm_w_bar**8, reported (not enforced) for the agnostic cap."""
    if not (norm_w_bar > 0 and math.isfinite(norm_w_bar)):
        raise ValueError("norm_w_bar must be a positive finite number")
    return sigma_T / norm_w_bar ** 8


@dataclass(frozen=True)
class AdaptiveBoundReport:
    """Diagnostic mistake cap for the adaptive-radius variant.

    ``loose`` is always True: the epsilon-correction step of the chain picks
    an interior split point implicitly, and this executable version solves
    that split equation numerically, keeping every slack in place.
    """

    bound: int
    ac_component: float
    first_solvable_m: int
    loose: bool = True


def _split_equation_min(m: float, p: float) -> float:
    """min over x in (0, m] of g(x) = x + (m - x) * x**-p (g is convex)."""
    def dg(x: float) -> float:
        return 1.0 - x ** -p - p * (m - x) * x ** (-p - 1.0)

    if dg(m) <= 0.0:
        return float(m)  # minimum at the right edge: g(m) = m
    lo, hi = min(1e-9, m / 2), m
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if dg(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    return x + (m - x) * x ** -p


def adaptive_mistake_bound(norm_w_bar: float, epsilon: float,
                           tau: float = 0.25,
                           gamma0: float = 1.0) -> AdaptiveBoundReport:
    """Loose diagnostic cap on adaptive-radius mistakes.

    For mistake counts where the split equation
    x + (m - x)/x**(1/2+tau) = m / (2*epsilon*gamma0) admits a root, the
    chain forces m <= 2 * x_bound(gamma0**2 * zeta(1+2*tau), norm_w_bar);
    counts below the first such root escape the argument and are admitted
    into the cap unchallenged.
    """
    if not (norm_w_bar > 0 and math.isfinite(norm_w_bar)):
        raise ValueError("norm_w_bar must be a positive finite number")
    if not (epsilon > 0 and math.isfinite(epsilon)):
        raise ValueError("epsilon must be a positive finite number")
    _check_schedule_args(tau, gamma0)
    p = 0.5 + tau
    scale = 2.0 * epsilon * gamma0
    a = gamma0 * gamma0 * riemann_zeta(1.0 + 2.0 * tau)
    ac_cap = 2.0 * ac_x_bound(a, norm_w_bar)

    def solvable(m: int) -> bool:
        return _split_equation_min(float(m), p) <= m / scale

    hi = 1
    while not solvable(hi):
        hi *= 2
        if hi > 2 ** 200:  # pragma: no cover - parameter pathology guard
            raise OverflowError("split-equation search diverged")
    if hi == 1:
        first = 1
    else:
        lo = hi // 2  # unsolvable at lo, solvable at hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if solvable(mid):
                hi = mid
            else:
                lo = mid
        first = hi
    bound = max(int(math.floor(ac_cap)), first - 1)
    return AdaptiveBoundReport(bound=bound, ac_component=ac_cap,
                               first_solvable_m=first)


@dataclass(eq=False)
class GroundTruth:
    """Generator-side truth: center, radius, margin, optional norm cap."""

    w_bar: np.ndarray
    epsilon: float
    mu: float = 0.0
    R: Optional[float] = None

    def __post_init__(self):
        self.w_bar = as_vector(self.w_bar, name="w_bar")
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ValueError("epsilon must be a positive finite number")
        if not (self.mu >= 0 and math.isfinite(self.mu)):
            raise ValueError("mu must be a nonnegative finite number")
        if self.mu > 0 and self.mu >= self.epsilon:
            raise ValueError("mu must be smaller than epsilon (empty ball otherwise)")
        if self.R is not None and not (self.R > 0 and math.isfinite(self.R)):
            raise ValueError("R must be a positive finite number when given")

    @property
    def dim(self) -> int:
        return self.w_bar.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.w_bar))

    @property
    def inner_radius(self) -> float:
        return self.epsilon - self.mu


@dataclass(frozen=True)
class ContaminationReport:
    """Realizability violation counts and sizes over a finite stream."""

    p_T: int
    r_T: float
    sigma_T: float


def sigma_size(stream, truth: GroundTruth) -> ContaminationReport:
    """Count and size realizability violations of a stream against a truth.

    p_T counts points at distance >= epsilon from the center; sigma_T sums
    the squared positive excess over the margin radius epsilon - mu.  An
    empty stream reports (0, 1.0, 0.0) by convention.
    """
    samples = np.asarray(stream, dtype=np.float64)
    if samples.size == 0:
        return ContaminationReport(p_T=0, r_T=1.0, sigma_T=0.0)
    if samples.ndim == 1:
        samples = samples[None, :]
    if samples.shape[1] != truth.dim:
        raise ValueError(
            f"stream dimension {samples.shape[1]} does not match truth dimension {truth.dim}"
        )
    dists = np.linalg.norm(samples - truth.w_bar, axis=1)
    p_t = int(np.count_nonzero(dists >= truth.epsilon))
    excess = np.maximum(dists - truth.inner_radius, 0.0)
    sigma_t = float(np.sum(excess * excess))
    return ContaminationReport(p_T=p_t, r_T=1.0 - p_t / samples.shape[0],
                               sigma_T=sigma_t)


@dataclass(frozen=True)
class TraceAudit:
    """Outcome of the unconditional trace inequalities; reports, never raises."""

    inner_ok: bool
    inner_margin: float
    energy_ok: bool
    energy_margin: float
    telescoping_ok: bool
    telescoping_residual: float

    @property
    def passed(self) -> bool:
        return self.inner_ok and self.energy_ok and self.telescoping_ok


_AUDIT_RTOL = 1e-9


def audit_trace(trace: DiagnosticsTrace, tau: float,
                gamma0: float = 1.0) -> TraceAudit:
    """Check a power-decay run's trace against its three inequalities.

    (i) the gain-weighted inner products cannot undercut minus half the
    gain energy; (ii) the gain energy stays within gamma0**2 * zeta(1+2*tau);
    (iii) the telescoped center norm matches the accumulated sums to 1e-9
    relative.  Margins are signed (nonnegative = satisfied with room).
    """
    _check_schedule_args(tau, gamma0)
    gg = trace.sum_d_gamma_sq
    gvw = trace.sum_d_gamma_vw
    wn = trace.w_norm_sq

    inner_margin = gvw + 0.5 * gg
    inner_ok = inner_margin >= -_AUDIT_RTOL * max(1.0, gg)

    energy_cap = gamma0 * gamma0 * riemann_zeta(1.0 + 2.0 * tau)
    energy_margin = energy_cap - gg
    energy_ok = energy_margin >= -_AUDIT_RTOL * max(1.0, energy_cap)

    residual = abs(wn - (gg + 2.0 * gvw))
    telescoping_ok = residual <= _AUDIT_RTOL * max(1.0, abs(wn))

    return TraceAudit(inner_ok=inner_ok, inner_margin=inner_margin,
                      energy_ok=energy_ok, energy_margin=energy_margin,
                      telescoping_ok=telescoping_ok,
                      telescoping_residual=residual)
