from fastapi import APIRouter, HTTPException, status

from ..exceptions import BadRequestError
from . import model, service

router = APIRouter(prefix="/flag", tags=["Flag bundle"])


def _context(n: int, mode: model.FlagMode, cap: int | None) -> model.FlagContext:
    if mode == model.FlagMode.FGL:
        raise BadRequestError("FGL mode is only available from the command line")
    return service.make_context(n, mode, cap)


@router.get("/class", response_model=model.FlagClassResponse)
def get_class(
    n: int,
    mode: model.FlagMode = model.FlagMode.CH,
    word: str = "",
    cap: int | None = None,
    vector: bool = False,
):
    """Bott-Samelson class for a word such as "1,2,1"."""
    try:
        indices = tuple(int(part) for part in word.split(",") if part.strip())
        c = service.bott_samelson_class(indices, _context(n, mode, cap))
        return service.to_response(c, indices, with_vector=vector)
    except ValueError:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=f"Invalid word '{word}'")
    except BadRequestError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/eq", response_model=model.FlagEqResponse)
def post_eq(request: model.FlagEqRequest):
    """Equality of two representatives modulo J."""
    try:
        ctx = _context(request.n, request.mode, request.cap)
        equal = service.class_eq(
            service.class_from_text(request.left, ctx),
            service.class_from_text(request.right, ctx),
        )
        return model.FlagEqResponse(n=request.n, mode=request.mode, equal=equal, status="exact")
    except BadRequestError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
