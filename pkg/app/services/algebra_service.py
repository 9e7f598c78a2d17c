# app/services/algebra_service.py - Servicio para operaciones sobre álgebras DG

import logging
from typing import Dict, List

from app.core.exceptions import NotMinimalError, SemanticError
from app.core.linalg import QMatrix
from app.core.validators import ValidationReport
from app.models.algebra import CohomologySpace, DGMorphism, Element, FreeDGAlgebra, Monomial

logger = logging.getLogger(__name__)


class AlgebraService:
    """Servicio para validar álgebras y morfismos y calcular invariantes básicos"""

    # Operaciones elementales

    @staticmethod
    def multiply(left: Element, right: Element) -> Element:
        return left.algebra.multiply(left, right)

    @staticmethod
    def monomial_basis(algebra: FreeDGAlgebra, degree: int) -> List[Monomial]:
        return algebra.monomial_basis(degree)

    @staticmethod
    def extend_differential(algebra: FreeDGAlgebra, element: Element) -> Element:
        return algebra.d(element)

    @staticmethod
    def apply_morphism(morphism: DGMorphism, element: Element) -> Element:
        return morphism.apply(element)

    @staticmethod
    def cohomology_space(algebra: FreeDGAlgebra, degree: int) -> CohomologySpace:
        return algebra.cohomology_space(degree)

    # Validación

    def validate_dga(self, algebra: FreeDGAlgebra) -> ValidationReport:
        """
        Validar un álgebra DG libre.

        Informa de diferenciales no homogéneos o de grado incorrecto, de
        generadores con d² ≠ 0 y del veredicto de minimalidad.
        """
        report = ValidationReport(subject=algebra.name)
        for gen in algebra.generators:
            value = algebra.generator_differential(gen.index)
            if not value.is_homogeneous_of(gen.degree + 1):
                report.add(
                    "degree",
                    f"d {gen.name}",
                    f"el diferencial {value} debe ser homogéneo de grado {gen.degree + 1}, tiene grados {value.degrees()}",
                )
                continue
            square = algebra.d(value)
            if not square.is_zero():
                report.add("d_squared", f"d {gen.name}", f"d²({gen.name}) = {square} ≠ 0")
        report.minimal = algebra.is_minimal()
        logger.debug("Validación de %s: %d incidencias, minimal=%s", algebra.name, len(report.issues), report.minimal)
        return report

    def validate_morphism(self, morphism: DGMorphism) -> ValidationReport:
        """Comprobar grados de las imágenes y φ∘d = d∘φ en cada generador"""
        report = ValidationReport(subject=morphism.name)
        source, target = morphism.source, morphism.target
        for gen in source.generators:
            value = morphism.images[gen.index]
            if not value.is_homogeneous_of(gen.degree):
                report.add(
                    "degree",
                    f"{gen.name} |->",
                    f"la imagen {value} debe tener grado {gen.degree}, tiene grados {value.degrees()}",
                )
                continue
            left = morphism.apply(source.generator_differential(gen.index))
            right = target.d(value)
            if left != right:
                report.add(
                    "chain_map",
                    f"{gen.name} |->",
                    f"φ(d {gen.name}) = {left} pero d(φ({gen.name})) = {right}",
                )
        return report

    def require_valid(self, report: ValidationReport) -> None:
        if not report.is_valid:
            raise SemanticError(f"Validación fallida para {report.subject}", report.messages())

    # Parte lineal

    def linear_part(self, morphism: DGMorphism) -> Dict[int, QMatrix]:
        """
        Matriz de Q(φ) en cada grado de generadores.

        Filas: generadores del destino de ese grado; columnas: generadores
        del origen. Se descarta la parte descomponible de cada imagen.
        """
        for algebra in (morphism.source, morphism.target):
            if not algebra.is_minimal():
                raise NotMinimalError(f"{algebra.name} no es minimal: los indescomponibles no están definidos")
        source, target = morphism.source, morphism.target
        degrees = sorted({gen.degree for gen in source.generators} | {gen.degree for gen in target.generators})
        result: Dict[int, QMatrix] = {}
        for degree in degrees:
            columns = source.generators_of_degree(degree)
            rows = target.generators_of_degree(degree)
            entries = {}
            for col, gen in enumerate(columns):
                value = morphism.images[gen.index]
                for row, target_gen in enumerate(rows):
                    coefficient = value.coefficient(target.generator_monomial(target_gen.index))
                    if coefficient:
                        entries[(row, col)] = coefficient
            result[degree] = QMatrix(len(rows), len(columns), entries)
        return result

    def has_zero_linear_part(self, morphism: DGMorphism) -> bool:
        return all(matrix.is_zero() for matrix in self.linear_part(morphism).values())

    def homotopy_dimensions(self, algebra: FreeDGAlgebra, max_degree: int) -> Dict[int, int]:
        """dim π_n ⊗ QQ leído de los indescomponibles de un modelo minimal"""
        if not algebra.is_minimal():
            raise NotMinimalError(f"{algebra.name} no es minimal")
        return {n: len(algebra.generators_of_degree(n)) for n in range(1, max_degree + 1)}
