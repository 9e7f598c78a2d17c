# app/models/workspace.py - Modelos, morfismos y tareas declarados en un fichero de workspace

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from app.core.exceptions import TaskParameterError
from app.models.algebra import DGMorphism, FreeDGAlgebra
from app.repositories.model_library import model_library

TASK_KINDS = (
    "homotopy-groups",
    "gottlieb",
    "evaluation-subgroups",
    "g-sequence",
    "exactness",
    "omega-homology",
    "les",
    "based-groups",
    "thom",
    "grivel",
    "splitting",
    "tncz",
)

_RANGE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")
_TRUE = {"true", "yes", "1", "on"}
_FALSE = {"false", "no", "0", "off"}


@dataclass
class TaskSpec:
    """Tarea pedida: nombre, tipo y parámetros en texto literal"""

    name: str
    kind: str
    params: Dict[str, str] = field(default_factory=dict)
    line: int = 0
    column: int = 0

    def get(self, key: str, default: Optional[str] = None) -> Optional[str]:
        return self.params.get(key, default)

    def get_int(self, key: str, default: Optional[int] = None) -> Optional[int]:
        value = self.params.get(key)
        if value is None:
            return default
        try:
            return int(value)
        except ValueError:
            raise TaskParameterError(f"Tarea {self.name}: '{key}' debe ser un entero, se recibió '{value}'") from None

    def get_degrees(self, key: str = "degrees") -> Optional[List[int]]:
        """'2..8' o '2, 4, 6'"""
        value = self.params.get(key)
        if value is None:
            return None
        match = _RANGE.match(value)
        if match:
            low, high = int(match.group(1)), int(match.group(2))
            if low > high:
                raise TaskParameterError(f"Tarea {self.name}: rango vacío '{value}'")
            return list(range(low, high + 1))
        try:
            return [int(part) for part in value.split(",") if part.strip()]
        except ValueError:
            raise TaskParameterError(
                f"Tarea {self.name}: '{key}' debe ser un rango a..b o una lista de enteros, se recibió '{value}'"
            ) from None

    def get_flag(self, key: str) -> bool:
        value = self.params.get(key)
        if value is None:
            return False
        lowered = value.lower()
        if lowered in _TRUE:
            return True
        if lowered in _FALSE:
            return False
        raise TaskParameterError(f"Tarea {self.name}: '{key}' debe ser true o false, se recibió '{value}'")


@dataclass
class Workspace:
    """
    Contenido validado de un workspace.

    Los morfismos siguen la dirección algebraica: ``map phi : Y -> X``
    declara φ: M_Y → M_X, el modelo de una aplicación X → Y.
    """

    models: Dict[str, FreeDGAlgebra] = field(default_factory=dict)
    morphisms: Dict[str, DGMorphism] = field(default_factory=dict)
    tasks: List[TaskSpec] = field(default_factory=list)

    def model(self, name: str) -> FreeDGAlgebra:
        """Modelo declarado o de la biblioteca predefinida"""
        if name in self.models:
            return self.models[name]
        if model_library.is_builtin(name):
            return model_library.resolve(name)
        raise TaskParameterError(f"Modelo desconocido '{name}'")

    def has_model(self, name: str) -> bool:
        return name in self.models or model_library.is_builtin(name)

    def morphism(self, name: str) -> DGMorphism:
        try:
            return self.morphisms[name]
        except KeyError:
            raise TaskParameterError(f"Morfismo desconocido '{name}'") from None

    def select(self, name: Optional[str] = None) -> List[TaskSpec]:
        """Tareas a ejecutar: todas o la nombrada"""
        if name is None or name == "all":
            return list(self.tasks)
        selected = [task for task in self.tasks if task.name == name]
        if not selected:
            raise TaskParameterError(f"Tarea desconocida '{name}'")
        return selected
