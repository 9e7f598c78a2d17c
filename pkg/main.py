# main.py - Punto de entrada de la API FastAPI

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.api.routers import library, workspaces
from app.core.config import settings
from app.core.logging import configure_logging

configure_logging()

# Crear la instancia de la aplicación FastAPI
app = FastAPI(
    title="derivhom API",
    description="Complejos de derivaciones, G-sucesiones y comprobaciones de homotopía racional",
    version=settings.tool_version,
    docs_url="/docs",
    redoc_url="/redoc",
    openapi_url="/openapi.json",
)

# Orígenes permitidos desde la configuración
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.cors_origins_list,
    allow_credentials=True,
    allow_methods=["GET", "POST", "OPTIONS"],
    allow_headers=["Accept", "Content-Type"],
)

app.include_router(workspaces.router, prefix="/api/v1", tags=["Workspaces"])
app.include_router(library.router, prefix="/api/v1", tags=["Biblioteca de modelos"])


@app.get("/")
async def root():
    """
    Endpoint raíz

    Returns:
        dict: Nombre, versión y enlace a la documentación
    """
    return {"message": settings.app_name, "version": settings.tool_version, "documentation": "/docs"}


@app.get("/health")
async def health_check():
    """
    Endpoint de verificación de salud

    Returns:
        dict: {"status": "healthy"} mientras la aplicación responde
    """
    return {"status": "healthy"}
