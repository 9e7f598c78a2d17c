# app/core/dependencies.py - Dependencias compartidas por los routers

from functools import lru_cache

from fastapi import HTTPException

from app.core.exceptions import DerivhomError, ParseError, SemanticError
from app.repositories.model_library import ModelLibrary, model_library
from app.services.report_service import ReportService
from app.services.task_service import TaskService


@lru_cache
def get_task_service() -> TaskService:
    """Servicio de tareas compartido; sus cachés de complejos se reutilizan entre peticiones"""
    return TaskService()


def get_report_service() -> ReportService:
    return ReportService()


def get_model_library() -> ModelLibrary:
    return model_library


def as_http_error(error: DerivhomError) -> HTTPException:
    """Traducir un error del motor a HTTPException conservando los diagnósticos"""
    detail = {"message": error.message, "details": error.details}
    if isinstance(error, ParseError):
        detail["kind"] = "parse"
    elif isinstance(error, SemanticError):
        detail["kind"] = "semantic"
    else:
        detail["kind"] = type(error).__name__
    return HTTPException(status_code=error.status_code, detail=detail)
