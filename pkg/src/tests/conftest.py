import json
import random

import pytest
from fastapi.testclient import TestClient
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker
from sqlalchemy.pool import StaticPool

from src.main import app
from src.database.core import Base, get_db
from src.entities.polynomial import CachedPolynomial  # noqa: F401
from src.fgl.service import make_additive, make_multiplicative

# One in-memory SQLite database shared by every connection of the test run
SQLALCHEMY_DATABASE_URL = "sqlite://"

engine = create_engine(
    SQLALCHEMY_DATABASE_URL,
    connect_args={"check_same_thread": False},
    poolclass=StaticPool,
)
TestingSessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)


@pytest.fixture(scope="session", autouse=True)
def setup_db():
    Base.metadata.drop_all(bind=engine)
    Base.metadata.create_all(bind=engine)
    yield
    Base.metadata.drop_all(bind=engine)


@pytest.fixture(scope="function")
def db_session():
    """Session bound to a transaction that is rolled back after the test."""
    connection = engine.connect()
    transaction = connection.begin()
    session = TestingSessionLocal(bind=connection)

    yield session

    session.close()
    transaction.rollback()
    connection.close()


@pytest.fixture(scope="function")
def client(db_session):
    """TestClient whose polynomial cache store is the test session."""

    def override_get_db():
        yield db_session

    app.dependency_overrides[get_db] = override_get_db

    with TestClient(app) as test_client:
        yield test_client

    app.dependency_overrides.clear()


@pytest.fixture
def rng() -> random.Random:
    """Provides a seeded random generator."""
    return random.Random(20240601)


@pytest.fixture
def additive_law():
    """Provides the additive law F(u, v) = u + v."""
    return make_additive(6)


@pytest.fixture
def multiplicative_law():
    """Provides the multiplicative law F(u, v) = u + v - b*u*v."""
    return make_multiplicative(6)


@pytest.fixture
def law_file(tmp_path):
    """Provides a user law file F(u, v) = u + v + 2*u*v over the integers."""
    path = tmp_path / "doubled.json"
    path.write_text(json.dumps({"1,0": "1", "0,1": "1", "1,1": "2", "cap": 5}))
    return path


@pytest.fixture
def broken_law_file(tmp_path):
    """Provides a law file F(u, v) = u + v + u^2*v^2, which is not associative."""
    path = tmp_path / "broken.json"
    path.write_text(json.dumps({"1,0": "1", "0,1": "1", "2,2": "1", "cap": 4}))
    return path
