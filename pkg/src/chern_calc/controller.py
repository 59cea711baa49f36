from fastapi import APIRouter, HTTPException, status

from ..exceptions import BadRequestError
from ..flagbundle.model import FlagMode
from ..flagbundle.service import make_context
from . import model, service

router = APIRouter(prefix="/chern", tags=["Chern roots"])


@router.get("/base-class", response_model=model.BaseClassResponse)
def get_base_class(n: int, law: str = "add", cap: int | None = None, expand: bool = False):
    """Factors of prod_{k+j<=n} F(x_k, chi(y_j)) for the additive or multiplicative law."""
    if law not in ("add", "mult"):
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail="law must be add or mult")
    try:
        if law == "add":
            ctx = make_context(n, FlagMode.CH)
            mode = model.BaseClassMode.EXACT
        else:
            ctx = make_context(n, FlagMode.CK, cap)
            mode = model.BaseClassMode.TRUNCATED
        factors = service.kernel_top_chern(n, ctx.law, ctx.cap, ctx.graded)
        expanded = None
        if expand:
            value = service.bott_base_class(n, ctx.law, mode, ctx.cap, ctx.graded)
            expanded = str(getattr(value, "poly", value))
        return model.BaseClassResponse(
            n=n,
            law=ctx.law.name,
            mode=mode,
            cap=ctx.cap,
            factors=[str(p) for p in factors.factors],
            expanded=expanded,
        )
    except BadRequestError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
