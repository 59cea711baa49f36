from fastapi import APIRouter, HTTPException, status

from ..database.core import DbSession
from ..exceptions import BadRequestError
from ..permgroup.service import parse_permutation
from ..polyring.service import parse_poly
from . import model, service

router = APIRouter(prefix="/polynomials", tags=["Polynomials"])


@router.get("/{kind}", response_model=model.PolynomialResponse)
def get_polynomial(kind: model.PolynomialFamilyKind, perm: str, db: DbSession):
    """Double polynomial of a permutation, e.g. /polynomials/beta?perm=[2,1]."""
    try:
        return service.to_response(service.double_poly(kind, parse_permutation(perm), db))
    except BadRequestError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.get("/{kind}/table", response_model=list[model.TableRow])
def get_table(kind: model.PolynomialFamilyKind, n: int, db: DbSession):
    """Every polynomial of the family on S_n."""
    try:
        return [service.to_row(p) for p in service.family_table(kind, n, db)]
    except BadRequestError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.post("/specialize", response_model=model.SpecializeResponse)
def specialize(request: model.SpecializeRequest):
    try:
        value = service.specialize_beta(parse_poly(request.polynomial), request.value)
        if request.negate_y:
            value = service.negate_y(value)
        return model.SpecializeResponse(value=request.value, text=str(value))
    except BadRequestError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
