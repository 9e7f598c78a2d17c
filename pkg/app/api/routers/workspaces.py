# app/api/routers/workspaces.py - Endpoints para validar y ejecutar workspaces

from fastapi import APIRouter, Depends, Response

from app.core.dependencies import as_http_error, get_report_service, get_task_service
from app.core.exceptions import DerivhomError
from app.dsl.parser import format_workspace, parse_workspace
from app.schemas.workspace import CheckResponse, RunRequest, WorkspaceRequest
from app.services.report_service import ReportService
from app.services.task_service import RunOptions, TaskService

router = APIRouter(prefix="/workspaces", tags=["workspaces"])


@router.post("/check", response_model=CheckResponse)
async def check_workspace(request: WorkspaceRequest):
    """
    Analizar y validar un workspace

    Devuelve los objetos declarados y el texto normalizado. Los errores de
    sintaxis responden 422 con kind=parse y los semánticos 422 con
    kind=semantic, listando todos los fallos con línea y columna.
    """
    try:
        workspace = parse_workspace(request.source)
    except DerivhomError as error:
        raise as_http_error(error)
    return CheckResponse(
        models=list(workspace.models),
        morphisms=list(workspace.morphisms),
        tasks=[task.name for task in workspace.tasks],
        formatted=format_workspace(workspace),
    )


@router.post("/run")
async def run_workspace(
    request: RunRequest,
    tasks: TaskService = Depends(get_task_service),
    reports: ReportService = Depends(get_report_service),
):
    """
    Ejecutar las tareas de un workspace

    El cuerpo de la respuesta es el mismo informe que produce el CLI, en
    JSON o en texto según ``format``. Un fallo de invariante interno
    responde 500.
    """
    try:
        workspace = parse_workspace(request.source)
        report = tasks.run_tasks(workspace, RunOptions(task=request.task, max_degree=request.max_degree))
        payload = reports.render(report, request.format)
    except DerivhomError as error:
        raise as_http_error(error)
    media_type = "application/json" if request.format == "json" else "text/plain; charset=utf-8"
    return Response(content=payload, media_type=media_type)
