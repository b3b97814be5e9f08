"""
Fixed-step classical RK4 integration of the nonlinear system and of its
truncated Carleman lift, and measurement of the truncation error on the
shared time grid.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Tuple

import numpy as np

from polylift.carleman import CarlemanSystem, assemble
from polylift.config import get_settings
from polylift.errors import BlowUp, DimensionMismatch
from polylift.models.ode import PolyODE
from polylift.tensor import Vector, kron_power_vec

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """States sampled on a strictly increasing time grid starting at 0"""

    times: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        if self.times.shape[0] != self.states.shape[0]:
            raise DimensionMismatch(
                f"{self.times.shape[0]} times but {self.states.shape[0]} states"
            )

    def __len__(self) -> int:
        return self.times.shape[0]

    @property
    def dim(self) -> int:
        return self.states.shape[1]


@dataclass(frozen=True, eq=False)
class ErrorSeries:
    """Sup-norm error samples (t, ||e(t)||)"""

    times: np.ndarray
    errors: np.ndarray

    def __iter__(self) -> Iterator[Tuple[float, float]]:
        return zip(self.times.tolist(), self.errors.tolist())

    def __len__(self) -> int:
        return self.times.shape[0]


def time_grid(t_end: float, h: float) -> np.ndarray:
    """0, h, 2h, ... with a final partial step landing exactly on t_end"""
    if h <= 0 or t_end <= 0:
        raise ValueError(f"need h > 0 and t_end > 0, got h={h!r}, t_end={t_end!r}")
    steps = max(1, math.ceil(t_end / h - 1e-9))
    times = np.arange(steps + 1, dtype=float) * h
    times[-1] = t_end
    return times


def rk4(
    rhs: Callable[[Vector], Vector],
    y0: Vector,
    t_end: float,
    h: float,
    threshold: Optional[float] = None,
) -> Trajectory:
    """
    Classical fourth-order Runge-Kutta on an autonomous system.

    Raises BlowUp (carrying the trajectory up to the last finite state) as
    soon as a component is non-finite or exceeds the overflow threshold.
    """
    threshold = get_settings().overflow_threshold if threshold is None else threshold
    times = time_grid(t_end, h)
    y = np.array(y0, dtype=float)
    states = np.empty((times.size, y.size))
    states[0] = y

    for step in range(times.size - 1):
        dt = times[step + 1] - times[step]
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * dt * k1)
        k3 = rhs(y + 0.5 * dt * k2)
        k4 = rhs(y + dt * k3)
        y = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > threshold:
            t = float(times[step + 1])
            logger.warning(f"⚠️  Blow-up detected at t={t:.6g}")
            partial = Trajectory(times[: step + 1].copy(), states[: step + 1].copy())
            raise BlowUp(t, partial)
        states[step + 1] = y

    return Trajectory(times, states)


def integrate_nonlinear(ode: PolyODE, x0: Vector, t_end: float, h: float) -> Trajectory:
    """RK4 on x' = sum_j F_j x^[j]"""
    x0 = np.asarray(x0, dtype=float).ravel()
    if x0.size != ode.n:
        raise DimensionMismatch(f"x0 has dimension {x0.size}, system has n={ode.n}")
    return rk4(ode.rhs, x0, t_end, h)


def integrate_truncated(system: CarlemanSystem, t_end: float, h: float) -> Trajectory:
    """RK4 on the sparse linear system y' = A_N y; states are full lifted vectors"""
    matrix = system.matrix
    return rk4(lambda y: matrix @ y, system.y0, t_end, h)


def first_block(traj: Trajectory, n: int) -> Trajectory:
    """Projection of lifted states onto their first n components"""
    if not 1 <= n <= traj.dim:
        raise DimensionMismatch(f"cannot project {traj.dim}-dimensional states onto {n} components")
    return Trajectory(traj.times, traj.states[:, :n])


def truncation_error(
    reference: Trajectory,
    truncated: Trajectory,
    system: CarlemanSystem,
    block: int = 1,
) -> ErrorSeries:
    """
    ||y_i(t) - y^_i(t)|| on the common prefix of two trajectories sharing a grid.

    Args:
        reference: Nonlinear trajectory x(t)
        truncated: Lifted trajectory of the truncated system
        system: The truncated system (for block offsets)
        block: Block index i; 1 gives the first-block error x - x^
    """
    count = min(len(reference), len(truncated))
    exact = reference.states[:count]
    if block > 1:
        exact = np.array([kron_power_vec(x, block) for x in exact])
    approx = system.block(truncated.states[:count], block)
    errors = np.max(np.abs(exact - approx), axis=1)
    return ErrorSeries(reference.times[:count].copy(), errors)


def measured_error(
    ode: PolyODE,
    x0: Vector,
    N: int,
    t_end: float,
    h: float,
    block: int = 1,
) -> ErrorSeries:
    """
    Integrate the nonlinear and the order-N truncated systems on the same grid
    and return the sup-norm error of the requested block. BlowUp propagates.
    """
    reference = integrate_nonlinear(ode, x0, t_end, h)
    system = assemble(ode, x0, N)
    truncated = integrate_truncated(system, t_end, h)
    series = truncation_error(reference, truncated, system, block)
    logger.info(f"✅ Measured truncation error N={N}: max {series.errors.max():.3e} on [0, {t_end}]")
    return series
