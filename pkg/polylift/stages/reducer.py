"""
Reduction stage - rewrites the system in quadratic form and derives the bound parameters
"""
import logging
import math
from typing import Any, Dict

from polylift.bounds import params_from_reduction, t_star
from polylift.carleman import reduce_quadratic
from polylift.config import get_settings
from polylift.models.graph_state import PipelineState

logger = logging.getLogger(__name__)


def reduce_system(state: PipelineState) -> Dict[str, Any]:
    """
    Pipeline Node: Quadratic reduction, exact norms, beta0 and T*

    Args:
        state: Graph state with the loaded system

    Returns:
        Update with the reduction, bound parameters, T*, the audit window and
        the resolved integration horizon
    """
    settings = get_settings()
    reduction = reduce_quadratic(state["system"])
    params = params_from_reduction(reduction, state["x0"], alpha=state.get("alpha"))
    horizon = t_star(params)
    audit_until = settings.soundness_fraction * horizon

    t_end = state.get("t_end")
    if t_end is None:
        t_end = audit_until if math.isfinite(audit_until) else 1.0

    logger.info(
        f"🎯 beta0={params.beta0:.6g}, T*={horizon:.6g}, auditing on [0, {audit_until:.6g}]"
    )
    return {
        "reduction": reduction,
        "bound_params": params,
        "t_star": horizon,
        "audit_until": audit_until,
        "t_end": t_end,
    }
