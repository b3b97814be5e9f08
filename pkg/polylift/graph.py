"""
LangGraph workflow orchestration for the compare pipeline
"""
import logging
from typing import Any, Dict, Iterable, Mapping, Optional

from langgraph.graph import END, StateGraph

from polylift.models.graph_state import PipelineState
from polylift.models.schemas import CompareReport
from polylift.stages import (
    audit_soundness,
    fan_out_orders,
    load_system,
    reduce_system,
    simulate_order,
    simulate_reference,
)

logger = logging.getLogger(__name__)


def create_pipeline():
    """
    Creates the LangGraph workflow behind `compare`

    Graph flow:
    1. Parse the system (load_system)
    2. Quadratic reduction, bound parameters and T* (reduce_system)
    3. Reference nonlinear trajectory (simulate_reference)
    4. One truncated run per order, in parallel (simulate_order via Send)
    5. Soundness audit against E2 (audit_soundness)
    """
    workflow = StateGraph(PipelineState)

    workflow.add_node("load_system", load_system)
    workflow.add_node("reduce_system", reduce_system)
    workflow.add_node("simulate_reference", simulate_reference)
    workflow.add_node("simulate_order", simulate_order)
    workflow.add_node("audit_soundness", audit_soundness)

    workflow.set_entry_point("load_system")
    workflow.add_edge("load_system", "reduce_system")
    workflow.add_edge("reduce_system", "simulate_reference")
    workflow.add_conditional_edges("simulate_reference", fan_out_orders, ["simulate_order"])
    workflow.add_edge("simulate_order", "audit_soundness")
    workflow.add_edge("audit_soundness", END)

    pipeline = workflow.compile()
    logger.info("✅ Compare pipeline compiled")
    return pipeline


def initial_state(
    source_text: str,
    x0: Iterable[float],
    orders: Iterable[int],
    t_end: Optional[float] = None,
    step: Optional[float] = None,
    alpha: Optional[float] = None,
    params: Optional[Mapping[str, float]] = None,
    source_name: str = "<input>",
) -> Dict[str, Any]:
    return {
        "source_text": source_text,
        "source_name": source_name,
        "params": dict(params or {}),
        "x0": [float(v) for v in x0],
        "orders": sorted(set(int(N) for N in orders)),
        "t_end": t_end,
        "step": step,
        "alpha": alpha,
        "results": [],
        "errors": [],
    }


def run_pipeline(state: Dict[str, Any]) -> Dict[str, Any]:
    """Run the compiled pipeline synchronously and return the final state"""
    logger.info(f"🔄 Running compare pipeline for orders {state['orders']}")
    final_state = create_pipeline().invoke(state)
    report: CompareReport = final_state["report"]
    logger.info(f"🎯 Pipeline finished: {report.verdict}")
    return final_state


def visualize_pipeline() -> Optional[str]:
    """Mermaid diagram of the workflow"""
    try:
        return create_pipeline().get_graph().draw_mermaid()
    except Exception as e:
        logger.warning(f"Could not generate graph visualization: {e}")
        return None
