# app/schemas/report.py - Esquemas Pydantic del informe de tareas

from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class DegreeTable(BaseModel):
    """
    Tabla de un grado

    Dimensiones por término, veredicto de exactitud y testigos en notación
    P∂w con el formato "término: expresión".
    """

    dims: Dict[str, int] = Field(default_factory=dict, description="Dimensión de cada término")
    exact: bool = Field(default=True, description="Falso si hay un defecto registrado en este grado")
    witnesses: List[str] = Field(default_factory=list, description="Testigos 'término: expresión'")


class TaskReport(BaseModel):
    """Sección del informe para una tarea"""

    name: str = Field(..., description="Nombre de la tarea en el workspace")
    kind: str = Field(..., description="Tipo de tarea")
    tables: Dict[str, DegreeTable] = Field(default_factory=dict, description="Tablas indexadas por grado")
    notes: List[str] = Field(default_factory=list, description="Presentaciones, auditorías y obstrucciones")
    seconds: Optional[float] = Field(None, description="Duración, solo si report_timings está activo")


class Report(BaseModel):
    """
    Informe completo

    Las claves de nivel superior son estables: tool_version, assumptions y
    tasks. Dos ejecuciones sobre la misma entrada dan el mismo JSON.
    """

    tool_version: str = Field(..., description="Versión de la herramienta")
    assumptions: List[str] = Field(default_factory=list, description="Supuestos usados (F0, truncamientos)")
    tasks: List[TaskReport] = Field(default_factory=list, description="Secciones por tarea")

    def assume(self, line: str) -> None:
        if line not in self.assumptions:
            self.assumptions.append(line)
