from contextlib import asynccontextmanager

from fastapi import FastAPI

from backend.config import get_settings, logger
from backend.expressions import expression_parser
from backend.finite_field import finite_field


# FastAPI lifespan for startup/shutdown
@asynccontextmanager
async def lifespan(app: FastAPI):
    app.state.settings = get_settings()
    try:
        expression_parser()
        logger.info("✅ Expression grammar loaded")
    except Exception as e:
        logger.error(f"❌ Failed to load expression grammar: {e}")
        raise
    logger.info(f"⚙️ prec={app.state.settings.prec} window={app.state.settings.window} extend={app.state.settings.extend}")

    yield

    finite_field.cache_clear()
    logger.info("🔒 Cleared field caches")
