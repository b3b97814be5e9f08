"""
FastAPI application exposing Carleman lifting, error bounds and the
compare pipeline over HTTP
"""
import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, File, HTTPException, Request, Response, UploadFile
from fastapi.responses import JSONResponse

from polylift import __version__
from polylift.bounds import params_from_reduction, t_star
from polylift.carleman import assemble, reduce_quadratic
from polylift.config import get_settings
from polylift.errors import AssemblyLimitExceeded, ModelError, PolyliftError
from polylift.graph import create_pipeline, initial_state
from polylift.models.dsl import to_dsl
from polylift.models.ode import PolyODE, degree_norms
from polylift.models.schemas import (
    BoundReport,
    BoundsRequest,
    CompareRequest,
    CompareResponse,
    LiftMetadata,
    LiftRequest,
    ParsedSystemResponse,
    SystemDocument,
    SystemInput,
)
from polylift.reports import bound_report, lift_metadata, order_series
from polylift.utils.system_loader import SystemLoader

logging.basicConfig(level=get_settings().log_level)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    logger.info("🚀 Starting polylift service")
    yield
    logger.info("🛑 Shutting down polylift service")


app = FastAPI(
    title="polylift API",
    description="Carleman linearization of polynomial ODEs with a-priori truncation-error bounds",
    version=__version__,
    lifespan=lifespan,
)


@app.exception_handler(ModelError)
async def model_error_handler(request: Request, exc: ModelError):
    logger.warning(f"⚠️  Invalid system: {exc}")
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(AssemblyLimitExceeded)
async def size_guard_handler(request: Request, exc: AssemblyLimitExceeded):
    logger.warning(f"⚠️  Size guard: {exc}")
    return JSONResponse(status_code=413, content={"detail": str(exc)})


@app.exception_handler(PolyliftError)
async def library_error_handler(request: Request, exc: PolyliftError):
    logger.error(f"❌ {type(exc).__name__}: {exc}")
    return JSONResponse(status_code=500, content={"detail": str(exc)})


def _load(body: SystemInput) -> PolyODE:
    if body.document is not None:
        return body.document.to_ode()
    system, _ = SystemLoader.from_text(body.dsl, name="<request>", overrides=body.params or None)
    return system


@app.get("/")
async def root():
    """Health check endpoint"""
    return {"service": "polylift", "status": "healthy", "version": __version__}


@app.get("/favicon.ico", include_in_schema=False)
async def favicon():
    return Response(status_code=204)


@app.get("/health")
async def health_check():
    """Detailed health check endpoint"""
    settings = get_settings()
    return {
        "status": "healthy",
        "service": "polylift",
        "components": {"api": "operational", "pipeline": "ready"},
        "limits": {
            "max_index_space": settings.max_index_space,
            "overflow_threshold": settings.overflow_threshold,
        },
    }


@app.post("/systems/parse", response_model=ParsedSystemResponse)
async def parse_system(file: UploadFile = File(...)):
    """
    Parse an uploaded DSL or JSON system file

    Args:
        file: `.ode` DSL text or `.json` system document

    Returns:
        ParsedSystemResponse: canonical document, degree and degree norms
    """
    content = await file.read()
    try:
        text = content.decode("utf-8")
    except UnicodeDecodeError:
        raise HTTPException(status_code=400, detail=f"{file.filename} is not UTF-8 text")
    logger.info(f"📥 Received {file.filename} ({len(content)} bytes)")

    system, params = SystemLoader.from_text(text, name=file.filename or "<upload>")
    return ParsedSystemResponse(
        document=SystemDocument.from_ode(system),
        k=system.k,
        degree_norms=list(degree_norms(system)),
        params=params,
        dsl=to_dsl(system),
    )


@app.post("/lift", response_model=LiftMetadata)
async def lift(body: LiftRequest):
    """Assemble the order-N Carleman matrix and return its layout"""
    system = assemble(_load(body), body.x0, body.order)
    return lift_metadata(system)


@app.post("/bounds", response_model=BoundReport)
async def bounds(body: BoundsRequest):
    """Bound parameters, beta0 and T* of the reduced quadratic system"""
    reduction = reduce_quadratic(_load(body))
    params = params_from_reduction(reduction, body.x0, alpha=body.alpha)
    return bound_report(params, t_star(params), body.orders)


@app.post("/compare", response_model=CompareResponse)
async def compare(body: CompareRequest):
    """
    Measured truncation error against the envelopes, with a soundness verdict

    Returns:
        CompareResponse: per-order series on the shared grid and the audit report
    """
    source = body.document.model_dump_json() if body.document is not None else body.dsl
    state = initial_state(
        source,
        x0=body.x0,
        orders=body.orders,
        t_end=body.t_end,
        step=body.step,
        alpha=body.alpha,
        params=body.params,
        source_name="<request>.json" if body.document is not None else "<request>",
    )
    logger.info("🔄 Starting compare pipeline")
    result = await create_pipeline().ainvoke(state)
    logger.info(f"✅ Compare complete: {result['report'].verdict}")
    return CompareResponse(report=result["report"], series=order_series(result["results"]))


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="0.0.0.0", port=8000)
