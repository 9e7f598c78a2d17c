# app/services/analysis_service.py - Comprobaciones de alto nivel: presentaciones de cohomología, φ_X, oráculos y criterios

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from app.core.exceptions import (
    F0ValidationError,
    HypothesisError,
    InternalAssertionError,
    NotMinimalError,
    SemanticError,
)
from app.core.linalg import (
    QMatrix,
    QuotientSpace,
    Rational,
    Subspace,
    Vector,
    kernel,
    quotient_coordinates,
    rank_kernel_image,
    solve_linear,
)
from app.models.algebra import DGMorphism, Element, FreeDGAlgebra
from app.models.derivation import Derivation, ElementaryDerivation
from app.repositories.model_library import eilenberg_mac_lane
from app.services.algebra_service import AlgebraService
from app.services.derivation_service import DerivationService
from app.services.sequence_service import SequenceService, check_window, default_window

logger = logging.getLogger(__name__)


def presentation_truncation(*algebras: FreeDGAlgebra) -> int:
    """
    Grado de truncamiento para presentar H*(A).

    Supera el doble de la dimensión formal Σ|impares| - Σ(|pares| - 1) cuando
    es positiva; nunca baja de la ventana por defecto.
    """
    result = default_window(*algebras)
    for algebra in algebras:
        bound = sum(g.degree for g in algebra.generators if g.is_odd) - sum(
            g.degree - 1 for g in algebra.generators if not g.is_odd
        )
        result = max(result, 2 * bound)
    return result


class AlgebraPresentation:
    """
    H*(A) como cociente de un álgebra libre con d = 0 por un ideal de relaciones.

    ``free`` tiene un generador por clase elegida y ``representatives`` guarda
    un cociclo de A para cada uno. Todo se calcula hasta ``truncation``.
    """

    def __init__(
        self,
        source: FreeDGAlgebra,
        free: FreeDGAlgebra,
        representatives: Sequence[Element],
        relations: Sequence[Element],
        truncation: int,
    ):
        self.source = source
        self.free = free
        self.representatives: Tuple[Element, ...] = tuple(representatives)
        self.relations: Tuple[Element, ...] = tuple(relations)
        self.truncation = truncation
        self.evaluation = DGMorphism(
            f"ev_{source.name}",
            free,
            source,
            {gen.name: rep for gen, rep in zip(free.generators, self.representatives)},
        )
        self._ideal: Dict[int, Subspace] = {}
        self._quotient: Dict[int, QuotientSpace] = {}
        self._evaluation_matrix: Dict[int, QMatrix] = {}

    @property
    def generators(self) -> List[Tuple[str, int]]:
        return [(gen.name, gen.degree) for gen in self.free.generators]

    def ideal(self, degree: int) -> Subspace:
        """Componente de grado k del ideal generado por las relaciones"""
        if degree not in self._ideal:
            free = self.free
            size = len(free.monomial_basis(degree))
            vectors = []
            for relation in self.relations:
                relation_degree = relation.homogeneous_degree()
                for monomial in free.monomial_basis(degree - relation_degree):
                    product = free.monomial_element(monomial) * relation
                    if not product.is_zero():
                        vectors.append(free.coordinates(product, degree))
            self._ideal[degree] = Subspace.span(vectors, size)
        return self._ideal[degree]

    def quotient(self, degree: int) -> QuotientSpace:
        if degree not in self._quotient:
            self._quotient[degree] = quotient_coordinates(
                Subspace.full(len(self.free.monomial_basis(degree))), self.ideal(degree)
            )
        return self._quotient[degree]

    def dimension(self, degree: int) -> int:
        return self.quotient(degree).dim

    def basis_elements(self, degree: int) -> List[Element]:
        """Monomios (o combinaciones) cuyas clases son la base del cociente"""
        return [self.free.from_coordinates(v, degree) for v in self.quotient(degree).representatives()]

    def reduce(self, element: Element, degree: int) -> Vector:
        """Coordenadas de la clase de un elemento libre de grado k"""
        if not self.free.monomial_basis(degree):
            return ()
        return self.quotient(degree).project(self.free.coordinates(element, degree))

    def evaluation_matrix(self, degree: int) -> QMatrix:
        """Monomios libres de grado k → clases en H^k(A)"""
        if degree not in self._evaluation_matrix:
            space = self.source.cohomology_space(degree)
            columns = [
                space.class_of(self.evaluation.apply(self.free.monomial_element(monomial)))
                for monomial in self.free.monomial_basis(degree)
            ]
            self._evaluation_matrix[degree] = QMatrix.from_columns(columns, space.dimension)
        return self._evaluation_matrix[degree]

    def lift(self, class_vector: Sequence[Rational], degree: int) -> Element:
        """Un elemento libre que evalúa en la clase dada"""
        matrix = self.evaluation_matrix(degree)
        if not any(class_vector):
            return self.free.zero()
        solution = solve_linear(matrix, class_vector) if matrix.cols else None
        if solution is None:
            raise InternalAssertionError(
                f"La clase {tuple(str(v) for v in class_vector)} de H^{degree}({self.source.name}) no está generada"
            )
        return self.free.from_coordinates(solution, degree)

    def describe(self) -> str:
        """Notación QQ[x4]/(x4^3)"""
        gens = ",".join(gen.name for gen in self.free.generators)
        body = f"Q[{gens}]" if gens else "Q"
        if not self.relations:
            return body
        return f"{body}/({', '.join(self.free.render(r) for r in self.relations)})"

    def __repr__(self) -> str:
        return f"AlgebraPresentation({self.describe()} hasta grado {self.truncation})"


@dataclass
class CohomologyDerivationSpace:
    """Derivaciones de grado n entre álgebras presentadas que anulan las relaciones"""

    degree: int
    source: AlgebraPresentation
    target: AlgebraPresentation
    morphism: DGMorphism
    variables: List[Tuple[int, Element]]
    space: Subspace

    @property
    def dimension(self) -> int:
        return self.space.dim

    def derivation(self, vector: Sequence[Rational]) -> Derivation:
        values: Dict[int, Element] = {}
        for (index, value), coefficient in zip(self.variables, vector):
            if coefficient:
                term = value.scaled(coefficient)
                values[index] = values[index] + term if index in values else term
        return Derivation(self.degree, self.morphism, values)

    def witnesses(self) -> List[str]:
        return [self.derivation(vector).render() for vector in self.space.basis]


@dataclass
class OracleRow:
    """Comparación de dos caminos de cálculo en un grado"""

    degree: int
    derivation_dim: int
    reference_dim: int

    @property
    def agrees(self) -> bool:
        return self.derivation_dim == self.reference_dim


@dataclass
class OracleTable:
    name: str
    rows: List[OracleRow] = field(default_factory=list)
    assumptions: List[str] = field(default_factory=list)


@dataclass
class SplittingVerdict:
    """0 → G_{n+1}(A,B) → G^rel_{n+1} → G_n(B) → 0 en un grado"""

    degree: int
    dims: Dict[str, int]
    injective: bool
    surjective: bool
    exact_middle: bool

    @property
    def holds(self) -> bool:
        return self.injective and self.surjective and self.exact_middle


@dataclass
class TnczVerdict:
    """Resultado de la búsqueda de ψ y de la trivialización Φ"""

    degree: int
    found_psi: Optional[Derivation] = None
    trivialization: Optional[DGMorphism] = None
    inverse: Optional[DGMorphism] = None
    audit: List[str] = field(default_factory=list)
    obstruction: List[str] = field(default_factory=list)

    @property
    def trivializes(self) -> bool:
        return self.trivialization is not None


class AnalysisService:
    """Servicio para comprobaciones sobre el álgebra de cohomología y criterios de escisión"""

    def __init__(self, sequences: Optional[SequenceService] = None):
        self.sequences = sequences or SequenceService()
        self.derivations: DerivationService = self.sequences.derivations
        self.algebras = AlgebraService()
        self._presentations: Dict[Tuple[int, int], AlgebraPresentation] = {}

    # Presentaciones

    def cohomology_presentation(self, algebra: FreeDGAlgebra, max_degree: int) -> AlgebraPresentation:
        """
        Presentar H*(A) hasta ``max_degree``.

        Generadores: en cada grado, una base de H^k módulo los productos de
        generadores anteriores. Relaciones: base del núcleo de la evaluación
        módulo el ideal de las relaciones de grado menor.
        """
        if max_degree < 0:
            raise SemanticError(f"Grado de truncamiento negativo: {max_degree}")
        key = (id(algebra), max_degree)
        if key in self._presentations:
            return self._presentations[key]

        generators: List[Tuple[str, int]] = []
        representatives: List[Element] = []
        used = set()
        for degree in range(1, max_degree + 1):
            space = algebra.cohomology_space(degree)
            if not space.dimension:
                continue
            partial = AlgebraPresentation(
                algebra, FreeDGAlgebra(f"F_{algebra.name}", generators).freeze(), representatives, (), max_degree
            )
            products = Subspace.span(partial.evaluation_matrix(degree).columns(), space.dimension)
            complement = quotient_coordinates(Subspace.full(space.dimension), products).representatives()
            for position, class_vector in enumerate(complement):
                representative = space.lift(class_vector)
                name = self._generator_name(algebra, representative, degree, position, len(complement), used)
                used.add(name)
                generators.append((name, degree))
                representatives.append(representative)

        free = FreeDGAlgebra(f"H({algebra.name})", generators).freeze()
        presentation = AlgebraPresentation(algebra, free, representatives, (), max_degree)
        relations: List[Element] = []
        for degree in range(1, max_degree + 1):
            if not free.monomial_basis(degree):
                continue
            evaluation_kernel = kernel(presentation.evaluation_matrix(degree))
            lower = AlgebraPresentation(algebra, free, representatives, relations, max_degree).ideal(degree)
            for vector in quotient_coordinates(evaluation_kernel, lower).representatives():
                relations.append(free.from_coordinates(vector, degree))
        presentation = AlgebraPresentation(algebra, free, representatives, relations, max_degree)
        self._check_presentation(presentation)
        logger.debug("Presentación de H*(%s): %s", algebra.name, presentation.describe())
        self._presentations[key] = presentation
        return presentation

    @staticmethod
    def _generator_name(
        algebra: FreeDGAlgebra, representative: Element, degree: int, position: int, count: int, used: set
    ) -> str:
        terms = representative.terms
        if len(terms) == 1:
            (monomial, coefficient), = terms.items()
            if coefficient == 1 and algebra.is_generator_monomial(monomial):
                name = algebra.generators[monomial.index(1)].name
                if name not in used:
                    return name
        name = f"h{degree}" if count == 1 else f"h{degree}_{position + 1}"
        while name in used:
            name = f"{name}'"
        return name

    @staticmethod
    def _check_presentation(presentation: AlgebraPresentation) -> None:
        for degree in range(1, presentation.truncation + 1):
            expected = presentation.source.cohomology_space(degree).dimension
            if presentation.dimension(degree) != expected:
                raise InternalAssertionError(
                    f"La presentación de H^{degree}({presentation.source.name}) tiene dimensión "
                    f"{presentation.dimension(degree)}, se esperaba {expected}"
                )

    def presented_map(
        self, morphism: DGMorphism, source: AlgebraPresentation, target: AlgebraPresentation
    ) -> DGMorphism:
        """H(φ) entre presentaciones, validado contra las relaciones"""
        images = {}
        for gen, representative in zip(source.free.generators, source.representatives):
            class_vector = target.source.cohomology_space(gen.degree).class_of(morphism.apply(representative))
            images[gen.name] = target.lift(class_vector, gen.degree)
        presented = DGMorphism(f"H({morphism.name})", source.free, target.free, images)
        for relation in source.relations:
            degree = relation.homogeneous_degree()
            if degree <= target.truncation and any(target.reduce(presented.apply(relation), degree)):
                raise SemanticError(
                    f"H({morphism.name}) no respeta la relación {source.free.render(relation)}"
                )
        return presented

    def cohomology_derivation_space(
        self, source: AlgebraPresentation, target: AlgebraPresentation, morphism: DGMorphism, degree: int
    ) -> CohomologyDerivationSpace:
        """Der_n(P_A, P_B; h): valores en generadores que anulan cada relación"""
        if degree < 1:
            raise SemanticError(f"El grado de las derivaciones debe ser ≥ 1, se recibió {degree}")
        if morphism.source is not source.free or morphism.target is not target.free:
            raise SemanticError(f"{morphism.name} no es una aplicación entre las presentaciones dadas")
        variables: List[Tuple[int, Element]] = []
        for gen in source.free.generators:
            value_degree = gen.degree - degree
            if value_degree < 0:
                continue
            for value in target.basis_elements(value_degree):
                variables.append((gen.index, value))

        constraint_rows: List[List[Rational]] = []
        columns: List[List[Rational]] = [[] for _ in variables]
        for relation in source.relations:
            value_degree = relation.homogeneous_degree() - degree
            if value_degree < 0:
                continue
            for column, (index, value) in zip(columns, variables):
                derivation = Derivation(degree, morphism, {index: value})
                column.extend(target.reduce(derivation.evaluate(relation), value_degree))
        height = len(columns[0]) if columns else 0
        constraint = QMatrix.from_columns([tuple(column) for column in columns], height)
        space = kernel(constraint) if variables else Subspace.zero(0)
        return CohomologyDerivationSpace(degree, source, target, morphism, variables, space)

    # φ_X

    def phi_x_map(self, algebra: FreeDGAlgebra, degree: int) -> Tuple[QMatrix, CohomologyDerivationSpace]:
        """φ_X: H_n(Der(A,A;1)) → Der_n(H*(A), H*(A); 1), [θ] ↦ ([χ] ↦ [θ(χ)])"""
        if not algebra.is_minimal():
            raise NotMinimalError(f"{algebra.name} no es minimal")
        presentation = self.cohomology_presentation(algebra, presentation_truncation(algebra))
        identity = DGMorphism.identity(presentation.free)
        codomain = self.cohomology_derivation_space(presentation, presentation, identity, degree)
        complex_ = self.derivations.self_complex(algebra)
        homology = complex_.homology(degree)
        columns = [
            self._phi_x_column(codomain, complex_.derivation(degree, rep))
            for rep in homology.representatives()
        ]
        return QMatrix.from_columns(columns, codomain.dimension), codomain

    def phi_x_image(self, codomain: CohomologyDerivationSpace, cycle: Derivation) -> Vector:
        """Coordenadas de φ_X([θ]) para un ciclo θ"""
        return self._phi_x_column(codomain, cycle)

    @staticmethod
    def _phi_x_column(codomain: CohomologyDerivationSpace, cycle: Derivation) -> Vector:
        presentation = codomain.source
        algebra = presentation.source
        vector: List[Rational] = []
        for gen, representative in zip(presentation.free.generators, presentation.representatives):
            value_degree = gen.degree - codomain.degree
            if value_degree < 0:
                continue
            value = cycle.evaluate(representative)
            class_vector = algebra.cohomology_space(value_degree).class_of(value)
            lifted = presentation.lift(class_vector, value_degree)
            vector.extend(presentation.reduce(lifted, value_degree))
        return codomain.space.coordinates(vector)

    # Oráculos

    def thom_check(
        self,
        algebra: FreeDGAlgebra,
        m: int,
        degrees: Optional[Sequence[int]] = None,
        images: Optional[Sequence[Optional[Element]]] = None,
    ) -> OracleTable:
        """dim H_n(Der(Λ(z_m), X; φ)) frente a dim H^{m-n}(X), sumando sobre los generadores de V"""
        if m < 2:
            raise SemanticError(f"thom requiere m ≥ 2, se recibió {m}")
        degrees = list(degrees) if degrees is not None else list(range(2, m + 1))
        images = list(images) if images else [None]
        table = OracleTable(f"thom[{algebra.name}, K(Q,{m})]")
        totals = {n: [0, 0] for n in degrees}
        for position, value in enumerate(images):
            sphere = eilenberg_mac_lane(m, f"K{m}" if len(images) == 1 else f"K{m}_{position + 1}")
            image_value = value if value is not None else algebra.zero()
            if not image_value.is_zero():
                if not image_value.is_homogeneous_of(m) or not algebra.d(image_value).is_zero():
                    raise SemanticError(
                        f"La imagen de z{m} debe ser un cociclo de grado {m}", [algebra.render(image_value)]
                    )
            morphism = DGMorphism(f"z{m}->{algebra.render(image_value)}", sphere, algebra, {f"z{m}": image_value})
            complex_ = self.derivations.complex(morphism)
            for n in degrees:
                totals[n][0] += complex_.homology(n).dimension if n >= 1 else 0
                totals[n][1] += algebra.cohomology_space(m - n).dimension if m - n >= 0 else 0
        for n in degrees:
            row = OracleRow(n, *totals[n])
            if not row.agrees:
                raise InternalAssertionError(
                    f"thom: dim H_{n}(Der) = {row.derivation_dim} ≠ dim H^{m - n}({algebra.name}) = {row.reference_dim}"
                )
            table.rows.append(row)
        return table

    def validate_f0(self, algebra: FreeDGAlgebra, truncation: int) -> List[str]:
        """Condiciones necesarias de F0 comprobables hasta el truncamiento"""
        problems = []
        even = sum(1 for gen in algebra.generators if not gen.is_odd)
        odd = len(algebra.generators) - even
        if even != odd:
            problems.append(f"{algebra.name}: {even} generadores pares y {odd} impares")
        top = 0
        for degree in range(1, truncation + 1):
            dimension = algebra.cohomology_space(degree).dimension
            if not dimension:
                continue
            top = degree
            if degree % 2:
                problems.append(f"H^{degree}({algebra.name}) = {dimension} en grado impar")
        if top > truncation // 2:
            problems.append(
                f"{algebra.name}: cohomología no nula en grado {top} > {truncation // 2}, no se comprueba dimensión finita"
            )
        return problems

    def _f0_assumptions(self, algebras: Sequence[FreeDGAlgebra], truncation: int, error) -> List[str]:
        problems: List[str] = []
        for algebra in algebras:
            problems.extend(self.validate_f0(algebra, truncation))
        if problems:
            raise error(problems)
        ledger = [
            f"{algebra.name} se asume F0 (H^impar = 0 y dimensión finita comprobadas hasta grado {truncation})"
            for algebra in algebras
        ]
        for line in ledger:
            logger.warning(line)
        return ledger

    def grivel_check(self, morphism: DGMorphism, degrees: Optional[Sequence[int]] = None) -> OracleTable:
        """dim H_{2r}(Der(A,B;φ)) frente a dim Der_{2r}(H*(A), H*(B); H(φ))"""
        truncation = presentation_truncation(morphism.source, morphism.target)

        def refuse(problems: List[str]) -> F0ValidationError:
            return F0ValidationError("Falla la validación F0", problems)

        table = OracleTable(f"grivel[{morphism.name}]")
        table.assumptions = self._f0_assumptions((morphism.source, morphism.target), truncation, refuse)
        window = default_window(morphism.source, morphism.target)
        degrees = list(degrees) if degrees is not None else list(range(2, window + 1, 2))
        for degree in degrees:
            if degree < 2 or degree % 2:
                raise SemanticError(f"grivel solo admite grados pares ≥ 2, se recibió {degree}")
        source = self.cohomology_presentation(morphism.source, truncation)
        target = self.cohomology_presentation(morphism.target, truncation)
        presented = self.presented_map(morphism, source, target)
        complex_ = self.derivations.complex(morphism)
        for degree in degrees:
            derivations = self.cohomology_derivation_space(source, target, presented, degree)
            row = OracleRow(degree, complex_.homology(degree).dimension, derivations.dimension)
            if not row.agrees:
                raise InternalAssertionError(
                    f"grivel: dim H_{degree}(Der) = {row.derivation_dim} ≠ dim Der_{degree}(H*) = {row.reference_dim}"
                )
            table.rows.append(row)
        return table

    # Criterios de escisión

    def splitting_check(
        self, morphism: DGMorphism, degrees: Optional[Sequence[int]] = None
    ) -> Tuple[List[SplittingVerdict], List[str]]:
        """Sucesiones exactas cortas de la G-sucesión bajo hipótesis validadas"""
        source, target = morphism.source, morphism.target
        if any(not source.generator_differential(gen.index).is_zero() for gen in source.generators):
            raise HypothesisError("source differential not zero", f"{source.name} tiene diferencial no nulo")
        if not self.algebras.has_zero_linear_part(morphism):
            raise HypothesisError("nonzero linear part", f"{morphism.name} induce un morfismo no nulo en homotopía")

        def refuse(problems: List[str]) -> HypothesisError:
            return HypothesisError("target not F0", f"{target.name} no supera la validación F0", problems)

        assumptions = self._f0_assumptions((target,), presentation_truncation(target), refuse)
        window = default_window(source, target)
        degrees = list(degrees) if degrees is not None else list(range(2, window))
        top = check_window(max(max(degrees, default=2) + 1, window))
        sequence = self.sequences.build_g_sequence(morphism, top)
        verdicts = []
        for n in degrees:
            evaluation = sequence.evaluation[n + 1]
            relative = sequence.relative[n + 1]
            gottlieb = sequence.gottlieb[n]
            j_rank = rank_kernel_image(sequence.restricted(sequence.j_hat[n + 1], evaluation, relative))[0]
            p_rank = rank_kernel_image(sequence.restricted(sequence.p_hat[n + 1], relative, gottlieb))[0]
            middle = self.sequences._relative_verdict(sequence, n + 1)
            verdicts.append(
                SplittingVerdict(
                    n,
                    {evaluation.label: evaluation.dimension, relative.label: relative.dimension, gottlieb.label: gottlieb.dimension},
                    injective=j_rank == evaluation.dimension,
                    surjective=p_rank == gottlieb.dimension,
                    exact_middle=middle.exact,
                )
            )
        return verdicts, assumptions

    def omega_vanishing_check(self, morphism: DGMorphism, degrees: Optional[Sequence[int]] = None) -> Dict[int, int]:
        """Con d = 0 en el origen y φ_X = 0, la ω-homología se anula en cada G_n(B)"""
        source, target = morphism.source, morphism.target
        if any(not source.generator_differential(gen.index).is_zero() for gen in source.generators):
            raise HypothesisError("source differential not zero", f"{source.name} tiene diferencial no nulo")
        window = default_window(source, target)
        degrees = list(degrees) if degrees is not None else list(range(2, window + 1))
        for n in degrees:
            matrix, _ = self.phi_x_map(target, n)
            if not matrix.is_zero():
                raise HypothesisError("phi_X nonzero", f"φ_X({target.name}) no es nula en grado {n}")
        sequence = self.sequences.build_g_sequence(morphism, check_window(max(max(degrees, default=2), window)))
        result = {}
        for n in degrees:
            omega = self.sequences.omega_homology(morphism, n, sequence)
            if omega.dimension:
                raise InternalAssertionError(
                    f"ω-homología no nula en G_{n}({target.name}) pese a φ_X = 0", omega.witnesses
                )
            result[n] = 0
        return result

    # TNCZ

    def tncz_analyze(self, total: FreeDGAlgebra, fiber_generator: str) -> TnczVerdict:
        """
        Buscar ψ ∈ Der_{2r+1}(Λ(u)⊗ΛV, ΛV; π) con δψ = 0 y ψ(u) = 1.

        Si existe, Φ(v) = v + u·ψ(v) es un isomorfismo sobre el producto
        (Λ(u)⊗ΛV, d); si no, se devuelve la obstrucción δ(u*).
        """
        u = total.generator(fiber_generator)
        if not u.is_odd:
            raise SemanticError(f"El generador {u.name} debe tener grado impar, tiene grado {u.degree}")
        if not total.generator_differential(u.index).is_zero():
            raise SemanticError(f"Modelo relativo mal formado: D({u.name}) ≠ 0")
        self.algebras.require_valid(self.algebras.validate_dga(total))

        others = [gen for gen in total.generators if gen.index != u.index]
        fiber = FreeDGAlgebra(f"{total.name}/{u.name}", [(gen.name, gen.degree) for gen in others])
        projection = DGMorphism(f"pi_{total.name}", total, fiber, {gen.name: fiber.gen(gen.name) for gen in others})
        for gen in others:
            fiber.set_differential(gen.name, projection.apply(total.generator_differential(gen.index)))
        fiber.freeze()
        fiber_report = self.algebras.validate_dga(fiber)
        fiber_report.extend(self.algebras.validate_morphism(projection))
        if not fiber_report.is_valid:
            raise SemanticError(f"Modelo relativo mal formado: {total.name}", fiber_report.messages())

        degree = u.degree
        verdict = TnczVerdict(degree)
        complex_ = self.derivations.complex(projection)
        basis = complex_.basis(degree)
        dual = ElementaryDerivation(u.index, fiber.unit_monomial)
        position = complex_.index_of(degree, dual)
        delta = complex_.elementary_delta(degree)
        rest = [i for i in range(len(basis)) if i != position]
        rhs = tuple(-value for value in delta.column(position))
        system = QMatrix.from_columns([delta.column(i) for i in rest], delta.rows)
        rank = rank_kernel_image(system)[0]
        solution = solve_linear(system, rhs) if system.cols else (() if not any(rhs) else None)
        verdict.audit.append(
            f"sistema δψ = 0 con ψ({u.name}) = 1: {delta.rows} ecuaciones, {len(rest)} incógnitas, rango {rank}"
        )

        if solution is None:
            obstruction = Derivation.elementary(degree, projection, dual).delta()
            for gen in total.generators:
                value = obstruction.values[gen.index]
                if not value.is_zero():
                    source_value = total.render(total.generator_differential(gen.index))
                    verdict.obstruction.append(f"ψ({source_value}) = {fiber.render(value)}")
            verdict.audit.append("sistema incompatible: no existe ψ con ψ(u) = 1")
            logger.info("TNCZ %s: sin ψ, obstrucción %s", total.name, verdict.obstruction)
            return verdict

        vector = [0] * len(basis)
        vector[position] = 1
        for index, value in zip(rest, solution):
            vector[index] = value
        psi = complex_.derivation(degree, vector)
        if not psi.delta().is_zero() or psi.values[u.index] != fiber.one():
            raise InternalAssertionError(f"ψ = {psi} no es un ciclo con ψ({u.name}) = 1")
        verdict.found_psi = psi
        verdict.audit.append(f"ψ = {psi.render()}: δψ = 0 y ψ({u.name}) = 1 comprobados")
        self._trivialize(total, fiber, projection, psi, u.name, verdict)
        return verdict

    def _trivialize(
        self,
        total: FreeDGAlgebra,
        fiber: FreeDGAlgebra,
        projection: DGMorphism,
        psi: Derivation,
        u_name: str,
        verdict: TnczVerdict,
    ) -> None:
        others = [gen for gen in total.generators if gen.name != u_name]
        product = FreeDGAlgebra(f"{total.name}_prod", [(gen.name, gen.degree) for gen in total.generators])
        to_product = DGMorphism("iota", fiber, product, {gen.name: product.gen(gen.name) for gen in others})
        for gen in others:
            product.set_differential(gen.name, to_product.apply(fiber.differential_of(gen.name)))
        product.freeze()
        to_total = DGMorphism("iota", fiber, total, {gen.name: total.gen(gen.name) for gen in others})

        u_product, u_total = product.gen(u_name), total.gen(u_name)
        forward = {u_name: u_product}
        backward = {u_name: u_total}
        for gen in others:
            value = psi.values[gen.index]
            forward[gen.name] = product.gen(gen.name) + u_product * to_product.apply(value)
            backward[gen.name] = total.gen(gen.name) - u_total * to_total.apply(value)
        phi = DGMorphism("Phi", total, product, forward)
        inverse = DGMorphism("Phi^-1", product, total, backward)

        report = self.algebras.validate_dga(product)
        report.extend(self.algebras.validate_morphism(phi))
        report.extend(self.algebras.validate_morphism(inverse))
        if not report.is_valid:
            raise InternalAssertionError("Φ no es un morfismo de álgebras DG", report.messages())
        verdict.audit.append("Φ∘D = d∘Φ comprobado en cada generador")

        product_projection = DGMorphism("pi", product, fiber, {gen.name: fiber.gen(gen.name) for gen in others})
        if phi.images[total.generator(u_name).index] != u_product:
            raise InternalAssertionError(f"Φ({u_name}) ≠ {u_name}")
        if product_projection.compose(phi) != projection:
            raise InternalAssertionError("π∘Φ ≠ π")
        verdict.audit.append(f"Φ({u_name}) = {u_name} y π∘Φ = π comprobados")
        if not inverse.compose(phi).is_identity() or not phi.compose(inverse).is_identity():
            raise InternalAssertionError("Φ no es invertible")
        verdict.audit.append("Φ⁻¹(v) = v - u·ψ(v) es inversa por ambos lados")
        verdict.trivialization = phi
        verdict.inverse = inverse
        logger.info("TNCZ %s: trivialización construida con ψ = %s", total.name, psi.render())
