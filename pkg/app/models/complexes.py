# app/models/complexes.py - Complejos de cadenas de derivaciones y conos relativos

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from app.core.exceptions import InternalAssertionError
from app.core.linalg import (
    QMatrix,
    QuotientSpace,
    Rational,
    Subspace,
    Vector,
    image,
    kernel,
    quotient_coordinates,
    to_rational,
)
from app.models.algebra import DGMorphism, FreeDGAlgebra
from app.models.derivation import Derivation, ElementaryDerivation, render_combination, vector_terms

logger = logging.getLogger(__name__)


class HomologySpace:
    """H_n de un complejo: ciclos módulo bordes, con representantes"""

    def __init__(self, complex_: "ChainComplex", degree: int, quotient: QuotientSpace):
        self.complex = complex_
        self.degree = degree
        self.quotient = quotient

    @property
    def dimension(self) -> int:
        return self.quotient.dim

    @property
    def ambient_dim(self) -> int:
        return self.quotient.cycles.ambient_dim

    def representatives(self) -> List[Vector]:
        return self.quotient.representatives()

    def class_of(self, vector: Sequence[Rational]) -> Vector:
        return self.quotient.project(vector)

    def lift(self, coordinates: Sequence[Rational]) -> Vector:
        return self.quotient.lift(coordinates)

    def render_class(self, coordinates: Sequence[Rational]) -> str:
        return self.complex.render_vector(self.degree, self.lift(coordinates))

    def __repr__(self) -> str:
        return f"H_{self.degree}({self.complex.name}) = Q^{self.dimension}"


class ChainComplex(ABC):
    """
    Complejo de cadenas de grado -1 en coordenadas.

    ``ambient_dim(n)`` es la dimensión de las coordenadas en grado n y
    ``space(n)`` el subespacio admitido (todo salvo en grado 1, donde
    solo entran los ciclos). ``delta(n)`` va del grado n al n-1.
    """

    def __init__(self, name: str):
        self.name = name
        self._homology: Dict[int, HomologySpace] = {}
        self._space: Dict[int, Subspace] = {}

    @abstractmethod
    def ambient_dim(self, degree: int) -> int:
        """Dimensión de las coordenadas en grado ``degree``"""

    @abstractmethod
    def delta(self, degree: int) -> QMatrix:
        """Diferencial en coordenadas"""

    @abstractmethod
    def render_vector(self, degree: int, vector: Sequence[Rational]) -> str:
        """Expresión legible de una cadena"""

    @property
    @abstractmethod
    def top_degree(self) -> int:
        """Grado por encima del cual el complejo es nulo"""

    def space(self, degree: int) -> Subspace:
        if degree not in self._space:
            self._space[degree] = self._compute_space(degree)
        return self._space[degree]

    def _compute_space(self, degree: int) -> Subspace:
        return Subspace.full(self.ambient_dim(degree))

    def verify_square_zero(self, degree: int) -> None:
        """δ_{n-1}∘δ_n = 0; en grado 2 contra el δ_1 sin restringir"""
        lower = self.raw_delta(degree - 1)
        upper = self.delta(degree)
        if not lower.matmul(upper).is_zero():
            raise InternalAssertionError(f"δ² ≠ 0 en {self.name}, grado {degree}")

    def raw_delta(self, degree: int) -> QMatrix:
        """Diferencial sobre todo el espacio elemental (incluido el grado 1)"""
        return self.delta(degree)

    def homology(self, degree: int) -> HomologySpace:
        if degree not in self._homology:
            space = self.space(degree)
            if space.dim:
                cycles = Subspace.span(
                    (space.vector(v) for v in kernel(_restrict(self.delta(degree), space)).basis),
                    self.ambient_dim(degree),
                )
            else:
                cycles = space
            upper = self.space(degree + 1)
            boundaries = (
                upper.image_under(self.delta(degree + 1)) if upper.dim else Subspace.zero(self.ambient_dim(degree))
            )
            self._homology[degree] = HomologySpace(self, degree, quotient_coordinates(cycles, boundaries))
            logger.debug("H_%d(%s) = %d", degree, self.name, self._homology[degree].dimension)
        return self._homology[degree]

    def verify(self, max_degree: int) -> None:
        for degree in range(2, max_degree + 2):
            self.verify_square_zero(degree)


def _restrict(matrix: QMatrix, space: Subspace) -> QMatrix:
    return QMatrix.from_columns([matrix.apply(v) for v in space.basis], matrix.rows)


class DerivationComplex(ChainComplex):
    """
    Der_*(A, B; φ) con base elemental {P∂w} ordenada por (índice de w, P).

    Con ``reduced=True`` se excluyen las componentes con P = 1, que es el
    complejo del ideal de aumento Der_*(A, B̃; φ̃).
    """

    def __init__(self, base: DGMorphism, reduced: bool = False, name: Optional[str] = None):
        tag = "~" if reduced else ""
        super().__init__(name or f"Der({base.source.name},{base.target.name}{tag};{base.name})")
        self.base = base
        self.reduced = reduced
        self._basis: Dict[int, List[ElementaryDerivation]] = {}
        self._index: Dict[int, Dict[ElementaryDerivation, int]] = {}
        self._delta: Dict[int, QMatrix] = {}

    @property
    def source(self) -> FreeDGAlgebra:
        return self.base.source

    @property
    def target(self) -> FreeDGAlgebra:
        return self.base.target

    @property
    def top_degree(self) -> int:
        return self.source.max_generator_degree

    def basis(self, degree: int) -> List[ElementaryDerivation]:
        """Base elemental completa en grado n ≥ 0 (en grado 1 sin restringir a ciclos)"""
        if degree < 0:
            return []
        if degree not in self._basis:
            elements = []
            for gen in self.source.generators:
                for monomial in self.target.monomial_basis(gen.degree - degree):
                    if self.reduced and not any(monomial):
                        continue
                    elements.append(ElementaryDerivation(gen.index, monomial))
            self._basis[degree] = elements
            self._index[degree] = {element: i for i, element in enumerate(elements)}
        return self._basis[degree]

    def index_of(self, degree: int, element: ElementaryDerivation) -> Optional[int]:
        self.basis(degree)
        return self._index[degree].get(element)

    def ambient_dim(self, degree: int) -> int:
        return len(self.basis(degree)) if degree >= 1 else 0

    def derivation(self, degree: int, vector: Sequence[Rational]) -> Derivation:
        return Derivation.from_vector(degree, self.base, self.basis(degree), vector)

    def vector(self, derivation: Derivation) -> Vector:
        """Coordenadas de una derivación en la base elemental"""
        basis = self.basis(derivation.degree)
        values = [0] * len(basis)
        for element, coefficient in derivation.terms():
            position = self.index_of(derivation.degree, element)
            if position is None:
                raise InternalAssertionError(
                    f"La derivación {derivation} no pertenece a {self.name} en grado {derivation.degree}"
                )
            values[position] = coefficient
        return tuple(to_rational(v) for v in values)

    def elementary_delta(self, degree: int) -> QMatrix:
        """δ: E_n → E_{n-1} sobre la base elemental completa"""
        if degree not in self._delta:
            source_basis = self.basis(degree)
            rows = len(self.basis(degree - 1))
            columns = []
            for element in source_basis:
                image_derivation = Derivation.elementary(degree, self.base, element).delta()
                columns.append(self.vector(image_derivation) if rows else ())
            self._delta[degree] = QMatrix.from_columns(columns, rows)
        return self._delta[degree]

    def raw_delta(self, degree: int) -> QMatrix:
        if degree < 1:
            return QMatrix.zero(0, self.ambient_dim(degree))
        return self.elementary_delta(degree)

    def delta(self, degree: int) -> QMatrix:
        if degree <= 1:
            # El grado 1 solo contiene ciclos y el complejo es nulo por debajo
            return QMatrix.zero(0, self.ambient_dim(degree))
        return self.elementary_delta(degree)

    def _compute_space(self, degree: int) -> Subspace:
        if degree == 1:
            return kernel(self.elementary_delta(1))
        return Subspace.full(self.ambient_dim(degree))

    def render_vector(self, degree: int, vector: Sequence[Rational]) -> str:
        return render_combination(vector_terms(self.basis(degree), tuple(vector)), self.source, self.target)


class ChainMap:
    """Aplicación de cadenas dada por una matriz en cada grado"""

    def __init__(self, name: str, source: ChainComplex, target: ChainComplex, builder: Callable[[int], QMatrix]):
        self.name = name
        self.source = source
        self.target = target
        self._builder = builder
        self._matrices: Dict[int, QMatrix] = {}

    def matrix(self, degree: int) -> QMatrix:
        if degree not in self._matrices:
            if degree < 1:
                return QMatrix.zero(self.target.ambient_dim(degree), self.source.ambient_dim(degree))
            matrix = self._builder(degree)
            expected = (self.target.ambient_dim(degree), self.source.ambient_dim(degree))
            if matrix.shape != expected:
                raise InternalAssertionError(
                    f"{self.name}: matriz {matrix.shape} en grado {degree}, se esperaba {expected}"
                )
            self._matrices[degree] = matrix
        return self._matrices[degree]

    def verify(self, degree: int) -> None:
        """δ∘f = f∘δ sobre el espacio admitido; en grado 1, f lleva ciclos a ciclos"""
        space = self.source.space(degree)
        if not space.dim:
            return
        if degree > 1:
            defect = self.target.delta(degree).matmul(self.matrix(degree)) - self.matrix(degree - 1).matmul(
                self.source.delta(degree)
            )
        else:
            defect = self.target.raw_delta(1).matmul(self.matrix(1))
        if any(any(defect.apply(v)) for v in space.basis):
            raise InternalAssertionError(f"{self.name} no conmuta con δ en grado {degree}")

    def induced(self, degree: int) -> QMatrix:
        """Matriz de H_n(f) en las bases de clases"""
        source_h = self.source.homology(degree)
        target_h = self.target.homology(degree)
        matrix = self.matrix(degree)
        columns = [target_h.class_of(matrix.apply(rep)) for rep in source_h.representatives()]
        return QMatrix.from_columns(columns, target_h.dimension)


class RelativeComplex(ChainComplex):
    """
    Cono Rel_n = C_{n-1} ⊕ D_n de una aplicación de cadenas f: C → D.

    δ(a, b) = (-δa, δb - f(a)). J(b) = (0, b) y P(a, b) = a.
    """

    def __init__(self, chain_map: ChainMap, name: Optional[str] = None):
        super().__init__(name or f"Rel({chain_map.name})")
        self.chain_map = chain_map
        self.upstream = chain_map.source
        self.downstream = chain_map.target
        self._delta: Dict[int, QMatrix] = {}

    @property
    def top_degree(self) -> int:
        return max(self.upstream.top_degree + 1, self.downstream.top_degree)

    def split_dims(self, degree: int) -> Tuple[int, int]:
        return self.upstream.ambient_dim(degree - 1), self.downstream.ambient_dim(degree)

    def ambient_dim(self, degree: int) -> int:
        return sum(self.split_dims(degree))

    def _compute_space(self, degree: int) -> Subspace:
        # El grado 1 del complejo de arriba solo admite ciclos
        return self.upstream.space(degree - 1).direct_sum(self.downstream.space(degree))

    def delta(self, degree: int) -> QMatrix:
        if degree in self._delta:
            return self._delta[degree]
        up_src, down_src = self.split_dims(degree)
        up_dst, down_dst = self.split_dims(degree - 1)
        upstream_delta = self.upstream.delta(degree - 1)
        downstream_delta = self.downstream.delta(degree)
        self._delta[degree] = QMatrix.block(
            [
                [-upstream_delta, QMatrix.zero(up_dst, down_src)],
                [-self.chain_map.matrix(degree - 1), downstream_delta],
            ]
        )
        return self._delta[degree]

    def verify_square_zero(self, degree: int) -> None:
        square = self.delta(degree - 1).matmul(self.delta(degree))
        images = [square.apply(v) for v in self.space(degree).basis]
        if any(any(v) for v in images):
            raise InternalAssertionError(f"δ² ≠ 0 en {self.name}, grado {degree}")

    def inclusion(self, degree: int) -> QMatrix:
        """J: D_n → Rel_n"""
        up, down = self.split_dims(degree)
        return QMatrix.block([[QMatrix.zero(up, down)], [QMatrix.identity(down)]])

    def projection(self, degree: int) -> QMatrix:
        """P: Rel_n → C_{n-1}"""
        up, down = self.split_dims(degree)
        return QMatrix.block([[QMatrix.identity(up), QMatrix.zero(up, down)]])

    def pair(self, degree: int, vector: Sequence[Rational]) -> Tuple[Vector, Vector]:
        up, _ = self.split_dims(degree)
        return tuple(vector[:up]), tuple(vector[up:])

    def render_vector(self, degree: int, vector: Sequence[Rational]) -> str:
        upstream_part, downstream_part = self.pair(degree, vector)
        left = self.upstream.render_vector(degree - 1, upstream_part) if any(upstream_part) else "0"
        right = self.downstream.render_vector(degree, downstream_part) if any(downstream_part) else "0"
        return f"({left}, {right})"


def induced_on_homology(
    matrix_of: Callable[[int], QMatrix], source: ChainComplex, target: ChainComplex, degree: int, target_degree: int
) -> QMatrix:
    """Matriz en homología de una aplicación que baja el grado (p.ej. P o Δ)"""
    source_h = source.homology(degree)
    target_h = target.homology(target_degree)
    matrix = matrix_of(degree)
    columns = [target_h.class_of(matrix.apply(rep)) for rep in source_h.representatives()]
    return QMatrix.from_columns(columns, target_h.dimension)


def relative_chain_map(name: str, source: RelativeComplex, target: RelativeComplex, upstream: ChainMap, downstream: ChainMap) -> ChainMap:
    """(α, β): Rel(f) → Rel(g) por bloques diagonales"""

    def builder(degree: int) -> QMatrix:
        up_dst, down_dst = target.split_dims(degree)
        up_src, down_src = source.split_dims(degree)
        return QMatrix.block(
            [
                [upstream.matrix(degree - 1), QMatrix.zero(up_dst, down_src)],
                [QMatrix.zero(down_dst, up_src), downstream.matrix(degree)],
            ]
        )

    return ChainMap(name, source, target, builder)
