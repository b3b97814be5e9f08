"""
Pipeline stages (graph nodes)
"""
from polylift.stages.loader import load_system
from polylift.stages.reducer import reduce_system
from polylift.stages.simulator import fan_out_orders, simulate_order, simulate_reference
from polylift.stages.auditor import audit_soundness

__all__ = [
    "load_system",
    "reduce_system",
    "simulate_reference",
    "fan_out_orders",
    "simulate_order",
    "audit_soundness",
]
