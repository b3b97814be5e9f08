"""
Output writers: CSV series, Matrix Market matrices and JSON reports
"""
import csv
import json
import logging
import math
from pathlib import Path
from typing import Iterable, Sequence, Union

from pydantic import BaseModel
from scipy.io import mmwrite

from polylift.sim import Trajectory
from polylift.tensor import SparseMatrix

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def format_float(value: float) -> str:
    """Round-trip decimal text; infinities as 'inf'/'-inf'"""
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(value)


def _ensure_parent(path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_rows(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[float]]) -> Path:
    path = _ensure_parent(Path(path))
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(value) for value in row])
    logger.info(f"✅ Wrote {path}")
    return path


def write_trajectory_csv(path: PathLike, traj: Trajectory) -> Path:
    """Header t,comp_1,...,comp_n"""
    header = ["t"] + [f"comp_{i}" for i in range(1, traj.dim + 1)]
    rows = ([t, *state] for t, state in zip(traj.times.tolist(), traj.states.tolist()))
    return write_rows(path, header, rows)


def trajectory_payload(traj: Trajectory) -> dict:
    return {
        "t": [format_float(t) for t in traj.times.tolist()],
        "states": [[format_float(v) for v in state] for state in traj.states.tolist()],
    }


def write_matrix_market(path: PathLike, matrix: SparseMatrix, comment: str = "") -> Path:
    """Coordinate real general format (1-based indices)"""
    path = _ensure_parent(Path(path))
    mmwrite(str(path), matrix.tocoo(), comment=comment, field="real", precision=17, symmetry="general")
    logger.info(f"✅ Wrote {path} ({matrix.shape[0]}x{matrix.shape[1]}, nnz {matrix.nnz})")
    return path


def write_json(path: PathLike, payload: Union[BaseModel, dict]) -> Path:
    path = _ensure_parent(Path(path))
    if isinstance(payload, BaseModel):
        text = payload.model_dump_json(indent=2)
    else:
        text = json.dumps(payload, indent=2, sort_keys=False)
    path.write_text(text + "\n", encoding="utf-8")
    logger.info(f"✅ Wrote {path}")
    return path
