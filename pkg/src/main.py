"""
Main FastAPI application
"""
import logging
from datetime import datetime

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse
from pydantic import ValidationError

from src.blocks import HypersurfaceSpec, hypersurface_diamond
from src.config import api_settings, setup_logging
from src.construct import construct, eval_recipe
from src.errors import ConstructionError, HodgeError
from src.formats import format_diamond, format_recipe, parse_recipe
from src.models import (
    ConstructResponse,
    DiamondResponse,
    ErrorResponse,
    EvalRequest,
    RefuteRequest,
    RefuteResponse,
    TargetRequest,
    WitnessEntry,
)
from src.relations import make_relation, refute, verify_certificate

# Initialize logging
setup_logging()
logger = logging.getLogger("hodge_mod.main")

# Create FastAPI application
app = FastAPI(
    title="Hodge Residue Constructor API",
    description="Construct varieties whose Hodge numbers hit prescribed residues modulo m",
    version="1.0.0"
)

ERROR_RESPONSES = {
    400: {"model": ErrorResponse, "description": "Invalid input"},
    500: {"model": ErrorResponse, "description": "Verification failure"},
}


def _http_error(e: HodgeError) -> HTTPException:
    if isinstance(e, ConstructionError):
        logger.error(f"Construction failed: {e}")
        return HTTPException(status_code=500, detail=str(e))
    return HTTPException(status_code=400, detail=str(e))


@app.post("/api/construct", response_model=ConstructResponse, responses=ERROR_RESPONSES)
async def construct_target(request: TargetRequest):
    """
    Build and verify a recipe for a residue target

    - **dim**: dimension n
    - **mod**: modulus m
    - **residues**: quarter entries (p, q, value); omitted entries are 0
    """
    try:
        target = request.to_target()
    except ValidationError as e:
        raise HTTPException(status_code=400, detail="; ".join(err["msg"] for err in e.errors()))
    except HodgeError as e:
        raise _http_error(e)
    logger.info(f"Construct request n={target.n} m={target.m}")
    try:
        recipe, diamond = construct(target)
    except HodgeError as e:
        raise _http_error(e)
    return ConstructResponse(verified=True, recipe=format_recipe(recipe), diamond=format_diamond(diamond))


@app.post("/api/eval", response_model=DiamondResponse, responses=ERROR_RESPONSES)
async def evaluate_recipe(request: EvalRequest):
    """Evaluate a recipe in text format to its Hodge diamond"""
    try:
        diamond = eval_recipe(parse_recipe(request.recipe))
    except HodgeError as e:
        raise _http_error(e)
    return DiamondResponse(diamond=format_diamond(diamond))


@app.get("/api/hypersurface", response_model=DiamondResponse, responses=ERROR_RESPONSES)
async def hypersurface(dim: int = Query(..., ge=0), degree: int = Query(..., ge=1)):
    """Diamond of a smooth degree-d hypersurface of dimension N"""
    try:
        diamond = hypersurface_diamond(HypersurfaceSpec(dim, degree))
    except HodgeError as e:
        raise _http_error(e)
    return DiamondResponse(diamond=format_diamond(diamond))


@app.post("/api/refute", response_model=RefuteResponse, responses=ERROR_RESPONSES)
async def refute_relation(request: RefuteRequest):
    """Certify that a polynomial relation among Hodge numbers does not hold"""
    terms = [
        (term.coefficient, {(power.p, power.q): power.exponent for power in term.powers})
        for term in request.terms
    ]
    try:
        f = make_relation(request.dim, terms, request.inner)
        certificate = refute(f)
    except (ValueError, ZeroDivisionError) as e:
        raise HTTPException(status_code=400, detail=f"bad coefficient: {e}")
    except HodgeError as e:
        raise _http_error(e)

    if not verify_certificate(f, certificate):
        raise HTTPException(status_code=500, detail="certificate failed re-verification")
    return RefuteResponse(
        modulus=certificate.modulus,
        witness=[WitnessEntry(p=p, q=q, value=v) for (p, q), v in sorted(certificate.witness.items())],
        witness_value=str(certificate.witness_value),
        diamond_value=str(certificate.diamond_value),
        recipe=format_recipe(certificate.recipe),
    )


@app.exception_handler(HTTPException)
async def http_exception_handler(request, exc):
    """Handler for HTTP errors"""
    logger.warning(f"HTTP error {exc.status_code}: {exc.detail}")
    return JSONResponse(
        status_code=exc.status_code,
        content={"detail": exc.detail}
    )


@app.get("/api/health")
async def health_check():
    """Health check endpoint"""
    return {"status": "healthy", "timestamp": datetime.now().isoformat()}


@app.get("/")
async def root():
    """Root endpoint"""
    return {
        "message": "Hodge Residue Constructor API",
        "version": "1.0.0",
        "docs": "/docs"
    }


if __name__ == "__main__":
    import uvicorn

    logger.info("Starting Hodge Residue Constructor API")
    uvicorn.run("src.main:app", access_log=True, **api_settings())
