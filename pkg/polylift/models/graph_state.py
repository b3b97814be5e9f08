"""
LangGraph state definitions for the compare pipeline
"""
import operator
from dataclasses import dataclass, field
from typing import Annotated, Any, Dict, List, Optional, TypedDict

from polylift.sim import ErrorSeries


@dataclass(frozen=True, eq=False)
class OrderResult:
    """Measured error and envelopes of one truncation order on the shared grid"""

    N: int
    series: ErrorSeries
    bound_E2: List[float] = field(default_factory=list)
    bound_E1: List[float] = field(default_factory=list)
    blow_up_t: Optional[float] = None


class PipelineState(TypedDict, total=False):
    """
    State passed through the compare workflow
    """
    # Input
    source_text: str
    source_name: str
    params: Dict[str, float]
    x0: List[float]
    orders: List[int]
    t_end: Optional[float]
    step: float
    alpha: Optional[float]

    # Fan-out payload
    order: int

    # Loaded and derived data
    system: Any  # PolyODE
    bindings: Dict[str, float]
    reduction: Any  # QuadraticReduction
    bound_params: Any  # BoundParams
    t_star: float
    audit_until: float
    reference: Any  # Trajectory

    # Per-order results, merged across parallel branches
    results: Annotated[List[OrderResult], operator.add]

    # Final verdict
    report: Any  # CompareReport

    # Error tracking
    errors: Annotated[List[str], operator.add]
