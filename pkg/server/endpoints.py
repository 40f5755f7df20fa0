from typing import Any, Dict

from fastapi import APIRouter, Depends, HTTPException, Request
from fastapi.responses import JSONResponse

from backend.config import TORSOR_RATE_LIMIT, Settings, logger, parse_extend, parse_window
from backend.document import DIRECTIVES, SELFCHECK_PROPERTIES, parse_document
from backend.errors import BadParameters, DocumentError
from backend.evaluator import resolve_context
from backend.runner import run_document_async
from server.dependencies import get_settings_state
from server.rate_limiter import limiter

MAX_DOCUMENT_CHARS = 20000

router = APIRouter()


def _overrides(data: Dict[str, Any]) -> Dict[str, Any]:
    """Optional run flags from a request body"""
    try:
        prec = data.get("prec")
        if prec is not None and (not isinstance(prec, int) or prec < 2):
            raise ValueError("prec must be an integer >= 2")
        seed = data.get("seed")
        if seed is not None and not isinstance(seed, int):
            raise ValueError("seed must be an integer")
        window = parse_window(data["window"]) if data.get("window") is not None else None
        extend = parse_extend(data["extend"]) if data.get("extend") is not None else None
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    return {"prec": prec, "window": window, "extend": extend, "seed": seed}


async def _run(text: str, data: Dict[str, Any], settings: Settings) -> Dict[str, Any]:
    try:
        document = parse_document(text)
        context = resolve_context(document, settings=settings, **_overrides(data))
    except (DocumentError, BadParameters) as e:
        raise HTTPException(status_code=400, detail=e.to_dict())
    result = await run_document_async(document, context)
    return {
        "context": context.to_dict(),
        "records": list(result.records),
        "exit_code": result.exit_code,
    }


@router.get("/health")
async def health_check():
    return {"status": "healthy", "version": "1.0"}


@router.post("/run")
@limiter.limit(TORSOR_RATE_LIMIT)
async def run(request: Request, settings: Settings = Depends(get_settings_state)):
    try:
        data = await request.json()
        text = data.get("document")
        if not isinstance(text, str):
            raise HTTPException(status_code=400, detail="document is required")
        if len(text) > MAX_DOCUMENT_CHARS:
            raise HTTPException(status_code=400, detail=f"document too long (max {MAX_DOCUMENT_CHARS} characters)")

        logger.info(f"📄 /run request: {len(text)} chars")
        return JSONResponse(content=await _run(text, data, settings))
    except HTTPException:
        raise
    except Exception as e:
        logger.error(f"❌ Error in /run: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail="Internal server error")


@router.post("/classify")
@limiter.limit(TORSOR_RATE_LIMIT)
async def classify(request: Request, settings: Settings = Depends(get_settings_state)):
    """Single-unit shortcut: {"expression": "1+l^3*T^-1", "p": 3, "f": 1, "c": 1}"""
    try:
        data = await request.json()
        expression = data.get("expression")
        if not isinstance(expression, str) or not expression.strip() or "\n" in expression:
            raise HTTPException(status_code=400, detail="expression must be a single non-empty line")
        header = {key: data.get(key, default) for key, default in (("p", 3), ("f", 1), ("c", 1))}
        if not all(isinstance(v, int) for v in header.values()):
            raise HTTPException(status_code=400, detail="p, f and c must be integers")

        text = f"mode: mixed\np: {header['p']}\nf: {header['f']}\nc: {header['c']}\nclassify {expression.strip()}\n"
        logger.info(f"🔍 /classify p={header['p']}: {expression[:50]}")
        payload = await _run(text, data, settings)
        record = payload["records"][0]
        if not record["ok"]:
            raise HTTPException(status_code=400, detail=record["error"])
        return JSONResponse(content={"context": payload["context"], "report": record["result"]})
    except HTTPException:
        raise
    except Exception as e:
        logger.error(f"❌ Error in /classify: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail="Internal server error")


@router.get("/info")
async def root_info():
    return {
        "message": "🧮 Rank-p torsor calculator",
        "description": "Classification and degeneration of rank-p torsors over annuli",
        "directives": list(DIRECTIVES),
        "selfcheck_properties": list(SELFCHECK_PROPERTIES),
        "endpoints": {
            "POST /run": "Run a document, one record per directive",
            "POST /classify": "Specialize one Kummer unit",
            "GET /info": "This summary",
            "GET /health": "Health check",
        },
        "version": "1.0",
        "status": "ready",
    }
