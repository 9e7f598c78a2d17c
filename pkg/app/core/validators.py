# app/core/validators.py - Resultados de validación de álgebras y morfismos
# La validación nunca lanza excepciones: acumula incidencias en un informe

from dataclasses import dataclass, field
from typing import List, Optional


@dataclass(frozen=True)
class ValidationIssue:
    """Una incidencia de validación ligada a un objeto (generador o imagen)"""

    code: str
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.subject}: {self.message}"


@dataclass
class ValidationReport:
    """Informe de validación de un álgebra DG o de un morfismo"""

    subject: str
    issues: List[ValidationIssue] = field(default_factory=list)
    minimal: Optional[bool] = None

    @property
    def is_valid(self) -> bool:
        return not self.issues

    def add(self, code: str, subject: str, message: str) -> None:
        """Registrar una incidencia"""
        self.issues.append(ValidationIssue(code, subject, message))

    def messages(self) -> List[str]:
        """Mensajes legibles, prefijados con el objeto validado"""
        return [f"{self.subject}: {issue}" for issue in self.issues]

    def extend(self, other: "ValidationReport") -> None:
        self.issues.extend(other.issues)


class ValidationUtils:
    """Utilidades de validación de nombres"""

    @staticmethod
    def sanitize_name(value: str) -> str:
        """Limpia un identificador"""
        return value.strip() if value else ""

    @staticmethod
    def is_identifier(value: str) -> bool:
        """Los nombres de generadores y modelos siguen la sintaxis de identificador"""
        return bool(value) and (value[0].isalpha() or value[0] == "_") and all(
            char.isalnum() or char == "_" for char in value
        )
