from fastapi import APIRouter, HTTPException, status

from ..exceptions import BadRequestError
from . import model, service

router = APIRouter(prefix="/permutations", tags=["Permutations"])


@router.get("/{perm}", response_model=model.PermutationInfo)
def permutation_info(perm: str):
    """Length, reduced words, rank table and essential set of a permutation."""
    try:
        return service.describe(service.parse_permutation(perm))
    except BadRequestError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
