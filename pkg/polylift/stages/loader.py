"""
System loading stage - parses the input system and checks the initial state
"""
import logging
from typing import Any, Dict

from polylift.errors import DimensionMismatch
from polylift.models.graph_state import PipelineState
from polylift.utils.system_loader import SystemLoader

logger = logging.getLogger(__name__)


def load_system(state: PipelineState) -> Dict[str, Any]:
    """
    Pipeline Node: Parse the DSL or JSON source into a polynomial system

    Args:
        state: Graph state with source text, name and parameter overrides

    Returns:
        Update with the compiled system and the parameter bindings used
    """
    logger.info("📄 Loading system %s", state.get("source_name", "<input>"))

    system, bindings = SystemLoader.from_text(
        state["source_text"],
        name=state.get("source_name", "<input>"),
        overrides=state.get("params") or None,
    )
    x0 = state.get("x0") or []
    if len(x0) != system.n:
        raise DimensionMismatch(f"x0 has {len(x0)} component(s), system has n={system.n}")

    return {"system": system, "bindings": bindings}
