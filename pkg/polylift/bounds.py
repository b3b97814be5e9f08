"""
Truncation-error envelopes for quadratic systems x' = F1 x + F2 x^[2].

E1 (backward integration) needs an a-priori bound alpha on the running sup
norm of the solution; E2 (power series) needs only ||x0||. Both degenerate
cases (||F1|| or mu(F1) numerically zero) are evaluated by their continuity
limits. Envelope functions are total: past a horizon they return +inf.
"""
import logging
import math
from typing import Iterable, Optional

import numpy as np

from polylift.carleman import QuadraticReduction
from polylift.config import get_settings
from polylift.errors import HorizonExceeded, MissingAlpha
from polylift.models.schemas import BoundComparison, BoundEnvelope, BoundParams
from polylift.tensor import Vector, log_norm, sup_norm_vec

logger = logging.getLogger(__name__)


def _singular(value: float) -> bool:
    return abs(value) < get_settings().singular_threshold


def _exp_ratio(rate: float, t: float) -> float:
    """(e^{rate t} - 1)/rate, equal to t at rate = 0"""
    if _singular(rate):
        return t
    try:
        return math.expm1(rate * t) / rate
    except OverflowError:
        return math.inf


def _require_alpha(p: BoundParams) -> float:
    if p.alpha is None:
        raise MissingAlpha("the E1 bound needs alpha >= sup ||x(tau)||")
    return p.alpha


def params_from_reduction(
    reduction: QuadraticReduction,
    x0: Vector,
    alpha: Optional[float] = None,
) -> BoundParams:
    """BoundParams of the reduced quadratic system started at x~0 = lift of x0"""
    x_tilde = reduction.lift(x0)
    return BoundParams.from_norms(
        norm_F1=reduction.norm_F1_tilde,
        norm_F2=reduction.norm_F2_tilde,
        mu_F1=log_norm(reduction.F1_tilde),
        norm_x0=sup_norm_vec(x_tilde),
        alpha=alpha,
    )


def bound1_bracket(p: BoundParams, t: float) -> float:
    """Base of the E1 power: alpha ||F2|| (e^{mu t} - 1)/mu"""
    return _require_alpha(p) * p.norm_F2 * _exp_ratio(p.mu_F1, t)


def error_bound_1(p: BoundParams, N: int, t: float) -> float:
    """
    E1(t) = alpha^{N+1} ||F2||^N ((e^{mu(F1) t} - 1)/mu(F1))^N

    Args:
        p: Bound parameters with alpha set
        N: Truncation order
        t: Time, t >= 0

    Returns:
        Envelope value (+inf on overflow)
    """
    alpha = _require_alpha(p)
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    base = bound1_bracket(p, t)
    try:
        return alpha * base**N
    except OverflowError:
        return math.inf


def bound1_horizon(p: BoundParams) -> float:
    """
    End of the E1 convergence interval, +inf when the bracket stays below 1
    for all t (mu(F1) < 0 and alpha ||F2|| < |mu(F1)|, or F2 = 0).
    """
    alpha = _require_alpha(p)
    c = alpha * p.norm_F2
    mu = p.mu_F1
    if c == 0.0:
        return math.inf
    if _singular(mu):
        return 1.0 / c
    if mu < 0:
        if c <= -mu:
            return math.inf
        logger.warning(
            f"⚠️  mu(F1)={mu:.6g} < 0 but alpha*||F2||={c:.6g} >= |mu|: bracket exceeds 1 in finite time"
        )
    return math.log1p(mu / c) / mu


def _e2_parts(p: BoundParams, t: float):
    """(growth factor, 1 - beta0 (e^{||F1|| t} - 1), beta0 (e^{||F1|| t} - 1))"""
    if _singular(p.norm_F1):
        c = p.norm_x0 * p.norm_F2
        return 1.0, 1.0 - c * t, c * t
    try:
        growth = math.exp(p.norm_F1 * t)
        increment = p.beta0 * math.expm1(p.norm_F1 * t)
    except OverflowError:
        return math.inf, -math.inf, math.inf
    return growth, 1.0 - increment, increment


def error_bound_2(p: BoundParams, N: int, t: float) -> float:
    """
    E2(t) = ||x0|| e^{||F1|| t} / ((1+beta0) - beta0 e^{||F1|| t}) * [beta0 (e^{||F1|| t} - 1)]^N

    Returns +inf from T* on; the ||F1|| -> 0 limit is
    ||x0|| (c t)^N / (1 - c t) with c = ||x0|| ||F2||.
    """
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    if p.beta0 == 0.0 and not _singular(p.norm_F1):
        return 0.0
    growth, denominator, increment = _e2_parts(p, t)
    if denominator <= 0:
        return math.inf
    try:
        return p.norm_x0 * growth / denominator * increment**N
    except OverflowError:
        return math.inf


def t_star(p: BoundParams) -> float:
    """
    T* = ln(1 + 1/beta0)/||F1||, the convergence horizon of E2.
    +inf when beta0 = 0; 1/(||x0|| ||F2||) in the ||F1|| -> 0 limit.
    """
    if _singular(p.norm_F1):
        c = p.norm_x0 * p.norm_F2
        return math.inf if c == 0.0 else 1.0 / c
    if p.beta0 == 0.0:
        return math.inf
    if math.isinf(p.beta0):
        return 0.0
    return math.log1p(1.0 / p.beta0) / p.norm_F1


def growth_bound(p: BoundParams, t: float) -> float:
    """
    A-priori bound ||x(t)|| <= ||x0|| e^{||F1|| t} ||F1|| / (||F1|| + ||F2|| (1 - e^{||F1|| t}) ||x0||),
    the solution of u' = ||F1|| u + ||F2|| u^2, u(0) = ||x0||. +inf once the denominator vanishes.
    """
    if t < 0:
        raise ValueError(f"time must be nonnegative, got {t}")
    growth, denominator, _ = _e2_parts(p, t)
    if denominator <= 0:
        return math.inf
    return p.norm_x0 * growth / denominator


def compare_bounds(p: BoundParams, N: int, t: float) -> BoundComparison:
    """
    E1 with the worst-case alpha = growth_bound(p, t), E2 and the factor
    (e^{||F1|| t} / ((1+beta0) - beta0 e^{||F1|| t}))^N with E1_worst <= factor * E2.
    """
    horizon = t_star(p)
    if t >= horizon:
        raise HorizonExceeded(f"t={t!r} is not below T*={horizon!r}")
    alpha = growth_bound(p, t)
    worst = p.model_copy(update={"alpha": alpha}) if alpha > 0 else p
    e1 = error_bound_1(worst, N, t) if alpha > 0 else 0.0
    e2 = error_bound_2(p, N, t)
    growth, denominator, _ = _e2_parts(p, t)
    factor = (growth / denominator) ** N
    return BoundComparison(t=t, N=N, E1_worst=e1, E2=e2, factor=factor)


def sample_times(t_end: float, count: int) -> np.ndarray:
    """count equally spaced times on [0, t_end]"""
    return np.linspace(0.0, t_end, count)


def envelope(kind: str, p: BoundParams, N: int, times: Iterable[float]) -> BoundEnvelope:
    """
    Sample E1 or E2 on the given times.

    E2 is +inf from T* on. E1 uses p.alpha, or growth_bound(p, t) at each t
    when alpha is absent, and is +inf outside its convergence interval.
    """
    samples = []
    if kind == "E2":
        horizon = t_star(p)
        for t in times:
            t = float(t)
            samples.append((t, math.inf if t >= horizon else error_bound_2(p, N, t)))
    elif kind == "E1":
        horizon = bound1_horizon(p) if p.alpha is not None else t_star(p)
        for t in times:
            t = float(t)
            samples.append((t, _envelope1_value(p, N, t)))
    else:
        raise ValueError(f"unknown envelope kind {kind!r}")
    return BoundEnvelope(kind=kind, N=N, T_star=horizon, samples=samples)


def _envelope1_value(p: BoundParams, N: int, t: float) -> float:
    if p.alpha is None:
        alpha = growth_bound(p, t)
        if math.isinf(alpha):
            return math.inf
        if alpha == 0.0:
            return 0.0
        p = p.model_copy(update={"alpha": alpha})
    if t >= bound1_horizon(p):
        return math.inf
    return error_bound_1(p, N, t)
