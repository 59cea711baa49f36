from fastapi import Depends
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker, declarative_base, Session
import logging
import os
from dotenv import load_dotenv
from typing import Annotated, Iterator

load_dotenv()

# Unset means the on-disk polynomial cache is disabled.
# Example: POLY_CACHE_URL=sqlite:///./poly_cache.db
POLY_CACHE_URL = os.getenv("POLY_CACHE_URL")

engine = create_engine(POLY_CACHE_URL) if POLY_CACHE_URL else None

SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)

Base = declarative_base()


def init_store() -> None:
    """Creates the cache tables when a store is configured."""
    if engine is None:
        return
    from ..entities import polynomial  # noqa: F401  registers the table

    Base.metadata.create_all(bind=engine)
    logging.info(f"Polynomial cache store ready at {POLY_CACHE_URL}")


def get_db() -> Iterator[Session | None]:
    if engine is None:
        yield None
        return
    db: Session = SessionLocal()
    try:
        yield db
    finally:
        db.close()


DbSession = Annotated[Session | None, Depends(get_db)]
