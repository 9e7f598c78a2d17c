# app/api/routers/library.py - Endpoints de la biblioteca de modelos predefinidos

from fastapi import APIRouter, Depends, HTTPException, status

from app.core.dependencies import as_http_error, get_model_library
from app.core.exceptions import DerivhomError
from app.repositories.model_library import ModelLibrary
from app.schemas.workspace import GeneratorInfo, LibraryCatalog, ModelInfo

router = APIRouter(prefix="/library", tags=["library"])


@router.get("", response_model=LibraryCatalog)
async def get_catalog(library: ModelLibrary = Depends(get_model_library)):
    """Familias disponibles y nombres de ejemplo"""
    return LibraryCatalog(families=library.catalog(), examples=["S2", "S3", "CP2", "HP2", "K4", "S3xS5"])


@router.get("/{name}", response_model=ModelInfo)
async def get_model(name: str, library: ModelLibrary = Depends(get_model_library)):
    """
    Resolver un modelo por nombre

    Acepta S<n>, CP<n>, HP<n>, K<m> y productos como S3xS5.
    """
    if not library.is_builtin(name):
        raise HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=f"Modelo desconocido '{name}'")
    try:
        algebra = library.resolve(name)
    except DerivhomError as error:
        raise as_http_error(error)
    generators = [
        GeneratorInfo(
            name=gen.name,
            degree=gen.degree,
            differential=algebra.render(algebra.generator_differential(gen.index)),
        )
        for gen in algebra.generators
    ]
    return ModelInfo(name=algebra.name, generators=generators, minimal=algebra.is_minimal())
