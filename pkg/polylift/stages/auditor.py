"""
Audit stage - checks measured truncation errors against the E2 envelope
"""
import logging
from typing import Any, Dict

from polylift.config import get_settings
from polylift.models.graph_state import PipelineState
from polylift.models.schemas import CompareReport, OrderSummary

logger = logging.getLogger(__name__)


def audit_soundness(state: PipelineState) -> Dict[str, Any]:
    """
    Pipeline Node: Compare err(t) with E2(t) on t <= soundness_fraction * T*

    Args:
        state: Graph state with all per-order results

    Returns:
        Update with the CompareReport verdict
    """
    settings = get_settings()
    audit_until = state["audit_until"]
    summaries = []

    for result in sorted(state.get("results", []), key=lambda r: r.N):
        checked = violations = 0
        max_error = max_ratio = 0.0
        first_violation = None
        for (t, err), bound in zip(result.series, result.bound_E2):
            max_error = max(max_error, err)
            if t > audit_until:
                continue
            checked += 1
            if bound > 0:
                max_ratio = max(max_ratio, err / bound)
            if err > bound + settings.soundness_atol:
                violations += 1
                if first_violation is None:
                    first_violation = t
        summaries.append(
            OrderSummary(
                N=result.N,
                samples_checked=checked,
                violations=violations,
                max_error=max_error,
                max_ratio=max_ratio,
                first_violation_t=first_violation,
                blow_up_t=result.blow_up_t,
            )
        )
        if violations:
            logger.error(f"❌ N={result.N}: {violations} sample(s) exceed the E2 envelope (first at t={first_violation})")

    verdict = "violated" if any(s.violations for s in summaries) else "sound"
    logger.info(f"🎯 Soundness verdict: {verdict.upper()}")
    report = CompareReport(
        T_star=state["t_star"],
        audit_until=audit_until,
        verdict=verdict,
        orders=summaries,
        errors=sorted(state.get("errors", [])),
    )
    return {"report": report}
