from .api import register_routes
from fastapi import FastAPI
from .logging import configure_logging, default_log_level
from .database.core import init_store
from .rate_limiting import limiter
from slowapi import _rate_limit_exceeded_handler
from slowapi.errors import RateLimitExceeded
import logging
import os
from fastapi.middleware.cors import CORSMiddleware

configure_logging(default_log_level())


app = FastAPI(title="Schubert calculus kernel")
app.state.limiter = limiter
app.add_exception_handler(RateLimitExceeded, _rate_limit_exceeded_handler)

# Creates the polynomial cache table when POLY_CACHE_URL is set
init_store()

# Register routes
register_routes(app)

# --- CORS Configuration ---

# Comma-separated list, e.g. ALLOWED_ORIGINS="http://localhost:3000,https://example.org"
allowed_origins_str = os.getenv("ALLOWED_ORIGINS", "")
origins = [
    origin.strip() for origin in allowed_origins_str.split(",") if origin.strip()
]

if not origins:
    origins = [
        "http://localhost",
        "http://localhost:3000",
        "http://localhost:8080",
    ]
    logging.warning(f"ALLOWED_ORIGINS not set. Using local development origins: {origins}")


app.add_middleware(
    CORSMiddleware,
    allow_origins=origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)
