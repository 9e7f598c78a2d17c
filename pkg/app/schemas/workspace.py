# app/schemas/workspace.py - Esquemas Pydantic para las peticiones de workspaces y la biblioteca

from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from app.core.validators import ValidationUtils


class WorkspaceRequest(BaseModel):
    """
    Petición con el texto de un workspace

    El texto se analiza con la misma gramática que los ficheros del CLI.
    """

    source: str = Field(..., min_length=1, description="Texto del workspace")


class RunRequest(WorkspaceRequest):
    """Petición de ejecución con las mismas opciones que 'run' en el CLI"""

    task: str = Field(default="all", description="Nombre de la tarea o 'all'")
    max_degree: Optional[int] = Field(None, ge=2, description="Grado máximo N de la ventana")
    format: Literal["text", "json"] = Field(default="json", description="Formato del informe")

    @field_validator("task")
    @classmethod
    def validate_task(cls, v):
        """Normaliza el nombre de la tarea"""
        v = ValidationUtils.sanitize_name(v)
        if v != "all" and not ValidationUtils.is_identifier(v):
            raise ValueError("El nombre de la tarea debe ser un identificador o 'all'")
        return v


class CheckResponse(BaseModel):
    """Resumen de un workspace válido"""

    models: List[str] = Field(default_factory=list, description="Modelos declarados")
    morphisms: List[str] = Field(default_factory=list, description="Morfismos declarados")
    tasks: List[str] = Field(default_factory=list, description="Tareas declaradas")
    formatted: str = Field(..., description="Workspace normalizado")


class GeneratorInfo(BaseModel):
    name: str
    degree: int
    differential: str


class ModelInfo(BaseModel):
    """Modelo de la biblioteca con sus generadores y diferenciales"""

    name: str = Field(..., description="Nombre del modelo")
    generators: List[GeneratorInfo] = Field(default_factory=list, description="Generadores en orden de declaración")
    minimal: bool = Field(..., description="Si el diferencial es descomponible")


class LibraryCatalog(BaseModel):
    families: Dict[str, str] = Field(default_factory=dict, description="Familias de modelos predefinidos")
    examples: List[str] = Field(default_factory=list, description="Nombres válidos de ejemplo")
