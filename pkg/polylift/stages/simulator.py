"""
Simulation stages - reference trajectory and per-order truncated runs
"""
import logging
from typing import Any, Dict, List

from langgraph.types import Send

from polylift.bounds import envelope
from polylift.carleman import assemble
from polylift.config import get_settings
from polylift.errors import BlowUp
from polylift.models.graph_state import OrderResult, PipelineState
from polylift.sim import integrate_nonlinear, integrate_truncated, truncation_error

logger = logging.getLogger(__name__)


def simulate_reference(state: PipelineState) -> Dict[str, Any]:
    """
    Pipeline Node: Integrate the nonlinear system once for all orders

    Args:
        state: Graph state with system, x0, t_end and step

    Returns:
        Update with the reference trajectory (truncated at a blow-up)
    """
    logger.info("🔄 Integrating the nonlinear system")
    step = state.get("step") or get_settings().default_step
    try:
        reference = integrate_nonlinear(state["system"], state["x0"], state["t_end"], step)
        return {"reference": reference}
    except BlowUp as e:
        error_msg = f"Nonlinear solution blew up at t={e.t:.6g}"
        logger.warning(f"⚠️  {error_msg}")
        return {"reference": e.trajectory, "errors": [error_msg]}


def fan_out_orders(state: PipelineState) -> List[Send]:
    """Conditional edge: one simulate_order branch per requested order"""
    shared = {
        key: state[key]
        for key in ("system", "x0", "t_end", "step", "bound_params", "reference")
        if key in state
    }
    return [Send("simulate_order", {**shared, "order": order}) for order in state["orders"]]


def simulate_order(state: PipelineState) -> Dict[str, Any]:
    """
    Pipeline Node: Truncated run, measured error and envelopes for one order

    Args:
        state: Fan-out payload with the shared data and `order`

    Returns:
        Update appending one OrderResult (and an error message on blow-up)
    """
    N = state["order"]
    step = state.get("step") or get_settings().default_step
    errors: List[str] = []
    blow_up_t = None

    system = assemble(state["system"], state["x0"], N)
    try:
        truncated = integrate_truncated(system, state["t_end"], step)
    except BlowUp as e:
        truncated = e.trajectory
        blow_up_t = e.t
        error_msg = f"Truncated system N={N} blew up at t={e.t:.6g}"
        errors.append(error_msg)
        logger.warning(f"⚠️  {error_msg}")

    series = truncation_error(state["reference"], truncated, system)
    params = state["bound_params"]
    times = series.times.tolist()
    result = OrderResult(
        N=N,
        series=series,
        bound_E2=envelope("E2", params, N, times).values(),
        bound_E1=envelope("E1", params, N, times).values(),
        blow_up_t=blow_up_t,
    )
    logger.info(f"✅ Order N={N}: {len(series)} samples, max error {series.errors.max():.3e}")
    return {"results": [result], "errors": errors}
