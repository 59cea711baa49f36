from fastapi import APIRouter, HTTPException, status
from pydantic import ValidationError

from ..exceptions import BadRequestError
from ..permgroup.service import parse_permutation
from . import model, service

router = APIRouter(prefix="/degeneracy", tags=["Degeneracy loci"])


@router.get("/essential/{perm}", response_model=model.EssentialResponse)
def get_essential(perm: str):
    try:
        return service.describe_essential(parse_permutation(perm))
    except BadRequestError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/rank", response_model=model.RankCheckResponse)
def post_rank(request: model.RankCheckRequest):
    """Checks rank(upper-left i x j) <= r_w(i, j) on an integer matrix."""
    try:
        w = parse_permutation(request.permutation)
        matrix = model.IntMatrix(rows=tuple(tuple(row) for row in request.matrix))
        return model.RankCheckResponse(
            permutation=str(w),
            which=request.which,
            satisfied=service.satisfies_rank_conditions(matrix, w, request.which),
            corner_ranks=service.corner_ranks(matrix),
        )
    except ValidationError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    except BadRequestError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
