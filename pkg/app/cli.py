# app/cli.py - Interfaz de línea de comandos: check y run sobre ficheros de workspace

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from app.core.config import settings
from app.core.exceptions import DerivhomError
from app.core.logging import configure_logging
from app.dsl.parser import parse_workspace
from app.services.report_service import ReportService
from app.services.task_service import RunOptions, TaskService

logger = logging.getLogger(__name__)

EXIT_OK = 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.app_name,
        description=(
            "Homotopía racional de espacios de aplicaciones mediante complejos de derivaciones. "
            "Los morfismos son algebraicos: 'map phi : Y -> X' declara M_Y → M_X, "
            "el modelo de una aplicación X → Y."
        ),
    )
    parser.add_argument("--log-level", default=None, help="Nivel de logging (por defecto el de la configuración)")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="Analizar y validar un workspace sin ejecutar tareas")
    check.add_argument("file", type=Path, help="Fichero de workspace")

    run = commands.add_parser("run", help="Ejecutar las tareas de un workspace")
    run.add_argument("file", type=Path, help="Fichero de workspace")
    run.add_argument("--task", default="all", help="Nombre de la tarea o 'all'")
    run.add_argument("--max-degree", type=int, default=None, help="Grado máximo N de la ventana")
    run.add_argument("--format", choices=("text", "json"), default=settings.default_format, help="Formato del informe")
    run.add_argument("-o", "--output", type=Path, default=None, help="Escribir el informe en un fichero")
    return parser


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DerivhomError(f"No se puede leer {path}: {exc.strerror}") from None


def _report_error(error: DerivhomError) -> int:
    for line in error.lines():
        print(line, file=sys.stderr)
    return error.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(list(argv) if argv is not None else None)
    configure_logging(args.log_level)
    try:
        workspace = parse_workspace(_read(args.file))
        if args.command == "check":
            print(
                f"{args.file}: {len(workspace.models)} modelos, {len(workspace.morphisms)} morfismos, "
                f"{len(workspace.tasks)} tareas; validación correcta"
            )
            return EXIT_OK
        report = TaskService().run_tasks(workspace, RunOptions(task=args.task, max_degree=args.max_degree))
        payload = ReportService().render(report, args.format)
    except DerivhomError as error:
        return _report_error(error)
    if args.output is not None:
        args.output.write_bytes(payload)
        logger.info("Informe escrito en %s", args.output)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    return EXIT_OK


def run(argv: Optional[List[str]] = None) -> None:
    sys.exit(main(argv))
