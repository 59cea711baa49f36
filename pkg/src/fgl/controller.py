from fastapi import APIRouter, HTTPException, status

from ..exceptions import BadRequestError
from . import model, service

router = APIRouter(prefix="/fgl", tags=["Formal group laws"])

BUILTIN_LAWS = ("add", "additive", "mult", "multiplicative")


def _builtin_law(law: str, cap: int) -> model.FormalGroupLaw:
    # law files are a CLI feature; the HTTP surface never reads the filesystem
    if law.lower() not in BUILTIN_LAWS:
        raise BadRequestError(f"Unknown law '{law}', expected add or mult")
    return service.resolve_law(law, cap)


@router.get("/{law}/chi", response_model=model.SeriesResponse)
def get_chi(law: str, cap: int = service.DEFAULT_CAP):
    """Inverse series of the additive or multiplicative law."""
    try:
        resolved = _builtin_law(law, cap)
        return model.SeriesResponse(
            law=resolved.name, cap=cap, series=str(service.chi(resolved).poly)
        )
    except BadRequestError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.get("/{law}/axioms", response_model=model.AxiomReport)
def get_axioms(law: str, cap: int = service.DEFAULT_CAP):
    try:
        return service.verify_axioms(_builtin_law(law, cap))
    except BadRequestError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@router.get("/lazard/relations", response_model=model.LazardResponse)
def get_lazard_relations(cap: int = 4):
    """Associativity relations among free coefficients up to the given degree."""
    try:
        relations = service.lazard_relations(cap)
    except BadRequestError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    return model.LazardResponse(cap=cap, relations=[str(r) for r in relations])
