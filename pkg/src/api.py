from fastapi import FastAPI
from src.permgroup.controller import router as permutations_router
from src.schubert_calc.controller import router as polynomials_router
from src.fgl.controller import router as fgl_router
from src.chern_calc.controller import router as chern_router
from src.flagbundle.controller import router as flag_router
from src.degeneracy.controller import router as degeneracy_router
from src.verification.controller import router as verification_router


def register_routes(app: FastAPI) -> None:
    """Register all routes for the FastAPI application."""
    app.include_router(permutations_router)
    app.include_router(polynomials_router)
    app.include_router(fgl_router)
    app.include_router(chern_router)
    app.include_router(flag_router)
    app.include_router(degeneracy_router)
    app.include_router(verification_router)
