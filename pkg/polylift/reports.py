"""
Builders for the JSON reports shared by the CLI and the service
"""
import logging
from typing import Iterable, List

from polylift.bounds import bound1_horizon
from polylift.carleman import CarlemanSystem, QuadraticReduction, reduction_norm_bounds
from polylift.models.graph_state import OrderResult
from polylift.models.schemas import (
    BoundParams,
    BoundReport,
    LiftMetadata,
    OrderSeries,
    ReductionReport,
)

logger = logging.getLogger(__name__)


def lift_metadata(system: CarlemanSystem) -> LiftMetadata:
    return LiftMetadata(
        n=system.n,
        k=system.k,
        N=system.N,
        dimension=system.dimension,
        nnz=int(system.matrix.nnz),
        block_offsets=list(system.block_offsets),
    )


def reduction_report(reduction: QuadraticReduction) -> ReductionReport:
    bound_F1, bound_F2 = reduction_norm_bounds(reduction.source)
    return ReductionReport(
        n=reduction.source.n,
        k=reduction.source.k,
        D=reduction.dimension,
        block_dims=list(reduction.block_dims),
        norm_F1_tilde=reduction.norm_F1_tilde,
        norm_F2_tilde=reduction.norm_F2_tilde,
        bound_F1_tilde=bound_F1,
        bound_F2_tilde=bound_F2,
    )


def bound_report(params: BoundParams, t_star: float, orders: Iterable[int]) -> BoundReport:
    """Scalar bound quantities; the E1 horizon only when alpha was supplied"""
    return BoundReport(
        norm_F1_tilde=params.norm_F1,
        norm_F2_tilde=params.norm_F2,
        beta0=params.beta0,
        T_star=t_star,
        mu=params.mu_F1,
        norm_x0=params.norm_x0,
        alpha=params.alpha,
        bound1_horizon=bound1_horizon(params) if params.alpha is not None else None,
        orders=sorted(set(orders)),
    )


def order_series(results: Iterable[OrderResult]) -> List[OrderSeries]:
    return [
        OrderSeries(
            N=result.N,
            t=result.series.times.tolist(),
            err=result.series.errors.tolist(),
            bound_E2=list(result.bound_E2),
            bound_E1=list(result.bound_E1),
        )
        for result in sorted(results, key=lambda r: r.N)
    ]
