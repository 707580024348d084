from contextlib import asynccontextmanager
from datetime import datetime
from typing import Dict, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, ConfigDict

import config
from checks import SUITES, run_suite
from cli import INPUT_ERRORS
from pipeline import TENSOR_SELECTORS, PiAnalysis
from report_formatting import ReportFormatter
from structure_algebra import InstanceFile, load_structures, structures_from_document, validate

logger = config.logger


class AnalysisRequest(BaseModel):
    """Either a shipped fixture name or an inline instance document."""

    model_config = ConfigDict(extra="forbid")

    fixture: Optional[str] = None
    instance: Optional[InstanceFile] = None
    subst: Dict[str, str] = {}


class TensorRequest(AnalysisRequest):
    which: str


class CheckRequest(AnalysisRequest):
    suite: str = "all"


def _structures(request: AnalysisRequest):
    if (request.fixture is None) == (request.instance is None):
        raise HTTPException(status_code=400, detail="Provide exactly one of 'fixture' or 'instance'")
    try:
        if request.fixture is not None:
            return load_structures(config.resolve_fixture(request.fixture))
        algebra, structure = structures_from_document(request.instance)
        return algebra, structure, request.instance.name or "inline"
    except FileNotFoundError as e:
        raise HTTPException(status_code=404, detail=str(e))
    except INPUT_ERRORS as e:
        logger.warning(f"[API] Rejected instance: {e}")
        raise HTTPException(status_code=400, detail=str(e))


def _analysis(request: AnalysisRequest) -> PiAnalysis:
    algebra, structure, name = _structures(request)
    try:
        analysis = PiAnalysis.from_structures(algebra, structure, name, request.subst or None)
    except INPUT_ERRORS as e:
        logger.warning(f"[API] Rejected analysis request: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    if not analysis.structure_report.ok:
        raise HTTPException(status_code=422, detail=analysis.structure_report.to_dict())
    return analysis


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Manage startup and shutdown events"""
    config.refresh_fixtures()
    logger.info(f"[STARTUP] Serving fixtures: {config.list_fixtures()}")

    yield

    logger.info("[SHUTDOWN] Stopping analysis API")


app = FastAPI(title="Pi-Connections API", lifespan=lifespan)


@app.get("/health")
async def health():
    return {"status": "healthy", "timestamp": datetime.now().isoformat()}


@app.get("/api/fixtures")
async def fixtures():
    return {"fixtures": config.list_fixtures(), "substitutions": sorted(config.get_substitution_mapping())}


@app.post("/api/validate")
def validate_instance(request: AnalysisRequest):
    algebra, structure, _ = _structures(request)
    try:
        report = validate(algebra, structure, request.subst or None)
    except INPUT_ERRORS as e:
        raise HTTPException(status_code=400, detail=str(e))
    return report.to_dict()


@app.post("/api/classify")
def classify(request: AnalysisRequest):
    return _analysis(request).classification.to_dict()


@app.post("/api/tensor")
def tensor(request: TensorRequest):
    if request.which not in TENSOR_SELECTORS:
        raise HTTPException(status_code=400, detail=f"Unknown tensor '{request.which}', expected one of {TENSOR_SELECTORS}")
    return ReportFormatter.tensors_data(_analysis(request).tensors(request.which))


@app.post("/api/check")
def check(request: CheckRequest):
    if request.suite != "all" and request.suite not in SUITES:
        raise HTTPException(status_code=400, detail=f"Unknown suite '{request.suite}'")
    analysis = _analysis(request)
    logger.info(f"[API] Running suite '{request.suite}' on '{analysis.name}'")
    return run_suite(request.suite, analysis).to_dict()


@app.post("/api/report")
def report(request: AnalysisRequest):
    analysis = _analysis(request)
    classification = analysis.classification
    return {
        "instance": analysis.name,
        "validation": analysis.structure_report.to_dict(),
        "coincidence": analysis.coincidence.to_dict(),
        "classification": classification.to_dict(),
        "class": classification.label,
    }
