from fastapi import APIRouter, HTTPException, Request, status

from ..exceptions import BadRequestError
from ..rate_limiting import VERIFY_RATE_LIMIT, limiter
from . import model, service

router = APIRouter(prefix="/verify", tags=["Verification"])


@router.get("/{suite}", response_model=model.VerificationReport)
@limiter.limit(VERIFY_RATE_LIMIT)
def run_verification(
    request: Request,
    suite: model.VerificationSuite,
    n: int = 3,
    samples: int | None = None,
    seed: int = 0,
    run_all: bool = False,
):
    """Runs a verification suite; failures are part of the report, not an HTTP error."""
    try:
        return service.run_suite(suite, n, samples=samples, seed=seed, stop_at_first=not run_all)
    except BadRequestError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
