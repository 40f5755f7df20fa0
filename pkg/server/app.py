from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from slowapi import _rate_limit_exceeded_handler
from slowapi.errors import RateLimitExceeded

from server.endpoints import router as endpoints_router
from server.lifespan import lifespan
from server.rate_limiter import limiter

app = FastAPI(
    lifespan=lifespan,
    title="Torsor API",
    version="1.0",
    description="Exact computations with rank-p torsors in characteristic p and over p-adic annuli",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["GET", "POST", "OPTIONS"],
    allow_headers=["*"],
)

app.state.limiter = limiter
app.add_exception_handler(RateLimitExceeded, _rate_limit_exceeded_handler)

app.include_router(endpoints_router)
