# app/core/exceptions.py - Jerarquía de errores del motor de cálculo

from typing import List, Optional, Sequence, Tuple


class DerivhomError(Exception):
    """Error base; ``exit_code`` es el código de salida del CLI"""

    exit_code: int = 1
    status_code: int = 400

    def __init__(self, message: str, details: Optional[Sequence[str]] = None):
        super().__init__(message)
        self.message = message
        self.details: List[str] = list(details or [])

    def lines(self) -> List[str]:
        """Mensaje principal seguido de cada detalle"""
        return [self.message, *self.details]


class ParseError(DerivhomError):
    """Errores léxicos o sintácticos con posición (línea, columna)"""

    exit_code = 2
    status_code = 422

    def __init__(self, diagnostics: Sequence[Tuple[int, int, str]]):
        self.diagnostics = list(diagnostics)
        details = [f"{line}:{column}: {text}" for line, column, text in self.diagnostics]
        super().__init__("Error de sintaxis en el workspace", details)


class SemanticError(DerivhomError):
    """Fallo de validación semántica; lista todos los fallos"""

    exit_code = 1
    status_code = 422

    def __init__(self, message: str, details: Optional[Sequence[str]] = None):
        super().__init__(message, details)


class NotMinimalError(SemanticError):
    """Operación que exige un álgebra minimal sobre un álgebra no minimal"""


class MixedDegreeError(SemanticError):
    """Se exigió un elemento homogéneo y tiene grados mezclados"""


class TaskParameterError(DerivhomError):
    """Tarea desconocida, parámetro inválido o ventana de grados excesiva"""

    exit_code = 1
    status_code = 400


class HypothesisError(DerivhomError):
    """Comprobación rechazada porque falla una hipótesis"""

    exit_code = 1
    status_code = 400

    def __init__(self, hypothesis: str, message: str, details: Optional[Sequence[str]] = None):
        super().__init__(message, [f"hipótesis: {hypothesis}", *(details or [])])
        self.hypothesis = hypothesis


class F0ValidationError(DerivhomError):
    """Un modelo declarado F0 no cumple las condiciones necesarias"""

    exit_code = 1
    status_code = 400


class InternalAssertionError(DerivhomError):
    """Violación de un invariante matemático: siempre es un bug"""

    exit_code = 3
    status_code = 500
