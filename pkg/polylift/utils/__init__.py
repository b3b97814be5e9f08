"""
Utility modules
"""
from polylift.utils.system_loader import SystemLoader
from polylift.utils.export import (
    format_float,
    trajectory_payload,
    write_json,
    write_matrix_market,
    write_rows,
    write_trajectory_csv,
)

__all__ = [
    "SystemLoader",
    "format_float",
    "trajectory_payload",
    "write_json",
    "write_matrix_market",
    "write_rows",
    "write_trajectory_csv",
]
