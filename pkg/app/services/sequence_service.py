# app/services/sequence_service.py - Servicio para subgrupos de evaluación, G-sucesión y sucesiones exactas

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from app.core.config import settings
from app.core.exceptions import InternalAssertionError, TaskParameterError
from app.core.linalg import QMatrix, Subspace, image, kernel, quotient_coordinates, restricted_kernel
from app.models.algebra import DGMorphism, FreeDGAlgebra
from app.models.complexes import (
    ChainComplex,
    ChainMap,
    HomologySpace,
    RelativeComplex,
    induced_on_homology,
)
from app.services.derivation_service import DerivationService

logger = logging.getLogger(__name__)


def default_window(*algebras: FreeDGAlgebra) -> int:
    """2·(grado máximo de generador) + margen"""
    top = max((algebra.max_generator_degree for algebra in algebras), default=0)
    return 2 * top + settings.window_headroom


def check_window(max_degree: int) -> int:
    if max_degree < 2:
        raise TaskParameterError(f"max-degree debe ser ≥ 2, se recibió {max_degree}")
    if max_degree > settings.max_degree_limit:
        raise TaskParameterError(
            f"max-degree {max_degree} supera el límite configurado {settings.max_degree_limit}"
        )
    return max_degree


@dataclass
class SubgroupInHomology:
    """Subespacio de H_n (en coordenadas de clases) obtenido como imagen de una aplicación inducida"""

    label: str
    degree: int
    ambient: HomologySpace
    subspace: Subspace
    provenance: str

    @property
    def dimension(self) -> int:
        return self.subspace.dim

    def witnesses(self) -> List[str]:
        return [self.ambient.render_class(vector) for vector in self.subspace.basis]


@dataclass
class TermVerdict:
    """Veredicto de exactitud en un término"""

    label: str
    degree: int
    dimension: int
    defect: int
    witnesses: List[str] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.defect == 0


@dataclass
class GSequence:
    """
    G-sucesión de φ: A → B.

    ... → G^rel_{n+1} → G_n(B) → G_n(A,B;φ) → G^rel_n → G_{n-1}(B) → ...
    Las matrices guardadas son las de la escalera en homología; sus
    restricciones a los subgrupos se calculan al vuelo.
    """

    base: DGMorphism
    max_degree: int
    gottlieb: Dict[int, SubgroupInHomology] = field(default_factory=dict)
    evaluation: Dict[int, SubgroupInHomology] = field(default_factory=dict)
    relative: Dict[int, SubgroupInHomology] = field(default_factory=dict)
    phi_hat: Dict[int, QMatrix] = field(default_factory=dict)
    j_hat: Dict[int, QMatrix] = field(default_factory=dict)
    p_hat: Dict[int, QMatrix] = field(default_factory=dict)

    def restricted(self, matrix: QMatrix, source: SubgroupInHomology, target: SubgroupInHomology) -> QMatrix:
        """Matriz de la restricción en coordenadas de los subgrupos"""
        columns = [target.subspace.coordinates(matrix.apply(vector)) for vector in source.subspace.basis]
        return QMatrix.from_columns(columns, target.dimension)


@dataclass
class ExactnessReport:
    """Veredictos por término de la G-sucesión"""

    base: DGMorphism
    verdicts: List[TermVerdict]

    @property
    def failures(self) -> List[TermVerdict]:
        return [verdict for verdict in self.verdicts if not verdict.exact]

    @property
    def is_exact(self) -> bool:
        return not self.failures


@dataclass
class SequenceTerm:
    """Término de una sucesión exacta larga auditada"""

    label: str
    degree: int
    dimension: int
    outgoing_rank: int
    exact: bool = True

    @property
    def display(self) -> str:
        return f"H_{self.degree}({self.label})"


@dataclass
class LongExactSequenceReport:
    """Espacios, rangos y auditoría de exactitud de una sucesión exacta larga"""

    name: str
    terms: List[SequenceTerm] = field(default_factory=list)

    def dimensions(self, degree: int) -> Dict[str, int]:
        return {term.label: term.dimension for term in self.terms if term.degree == degree}


@dataclass
class OmegaHomology:
    degree: int
    dimension: int
    witnesses: List[str]


@dataclass
class _Ladder:
    """Escalera de complejos asociada a φ"""

    upper: ChainMap  # φ*
    lower: ChainMap  # φ̂*
    upper_relative: RelativeComplex
    lower_relative: RelativeComplex
    target_augment: ChainMap  # ε_* sobre Der(B, B; 1)
    source_augment: ChainMap  # ε_* sobre Der(A, B; φ)
    relative_augment: ChainMap  # (ε_*, ε_*)


class SequenceService:
    """Servicio para la G-sucesión de un morfismo y las sucesiones exactas largas asociadas"""

    def __init__(self, derivations: Optional[DerivationService] = None):
        """Inicializar el servicio sobre un servicio de derivaciones compartido"""
        self.derivations = derivations or DerivationService()
        self._ladders: Dict[Tuple, _Ladder] = {}

    # Escalera

    def _ladder(self, base: DGMorphism) -> _Ladder:
        key = base.signature()
        if key not in self._ladders:
            service = self.derivations
            upper = service.precompose_induced(base)
            lower = service.augmented_precompose(base)
            upper_relative = service.build_relative_complex(upper)
            lower_relative = service.build_relative_complex(lower)
            target_augment = service.augment_induced(upper.source)
            source_augment = service.augment_induced(upper.target)
            relative_augment = service.relative_augmentation(
                upper_relative, lower_relative, target_augment, source_augment
            )
            self._ladders[key] = _Ladder(
                upper, lower, upper_relative, lower_relative, target_augment, source_augment, relative_augment
            )
        return self._ladders[key]

    # Subgrupos

    @staticmethod
    def _image_subgroup(label: str, chain_map: ChainMap, degree: int, provenance: str) -> SubgroupInHomology:
        induced = chain_map.induced(degree)
        ambient = chain_map.target.homology(degree)
        subspace = Subspace.span(induced.columns(), ambient.dimension)
        return SubgroupInHomology(label, degree, ambient, subspace, provenance)

    def evaluation_subgroup(self, base: DGMorphism, degree: int) -> SubgroupInHomology:
        """G_n(A, B; φ) = im H(ε_*): H_n(Der(A,B;φ)) → H_n(Der(A,QQ;ε))"""
        augment = self.derivations.augment_induced(self.derivations.complex(base))
        label = f"G_{degree}({base.source.name},{base.target.name})"
        return self._image_subgroup(label, augment, degree, "H(eps_*)")

    def gottlieb_group(self, algebra: FreeDGAlgebra, degree: int) -> SubgroupInHomology:
        """G_n(B) = G_n(B, B; 1)"""
        subgroup = self.evaluation_subgroup(DGMorphism.identity(algebra), degree)
        subgroup.label = f"G_{degree}({algebra.name})"
        return subgroup

    def relative_evaluation_subgroup(self, base: DGMorphism, degree: int) -> SubgroupInHomology:
        """G^rel_n = im H(ε_*, ε_*): H_n(Rel(φ*)) → H_n(Rel(φ̂*))"""
        ladder = self._ladder(base)
        label = f"G^rel_{degree}({base.source.name},{base.target.name})"
        return self._image_subgroup(label, ladder.relative_augment, degree, "H(eps_*, eps_*)")

    # G-sucesión

    def build_g_sequence(self, base: DGMorphism, max_degree: Optional[int] = None) -> GSequence:
        top = check_window(max_degree or default_window(base.source, base.target))
        ladder = self._ladder(base)
        lower, relative = ladder.lower, ladder.lower_relative
        sequence = GSequence(base, top)
        for degree in range(1, top + 2):
            sequence.gottlieb[degree] = self.gottlieb_group(base.target, degree)
            sequence.evaluation[degree] = self.evaluation_subgroup(base, degree)
            sequence.relative[degree] = self.relative_evaluation_subgroup(base, degree)
            sequence.phi_hat[degree] = lower.induced(degree)
            sequence.j_hat[degree] = induced_on_homology(relative.inclusion, lower.target, relative, degree, degree)
            sequence.p_hat[degree] = induced_on_homology(relative.projection, relative, lower.source, degree, degree - 1)
        self._check_restrictions(sequence)
        logger.debug("G-sucesión de %s construida hasta grado %d", base.name, top)
        return sequence

    def _check_restrictions(self, sequence: GSequence) -> None:
        """Cada aplicación lleva su subgrupo al siguiente y las composiciones se anulan"""
        top = sequence.max_degree + 1
        for degree in range(1, top + 1):
            steps = [
                (sequence.phi_hat[degree], sequence.gottlieb[degree], sequence.evaluation[degree]),
                (sequence.j_hat[degree], sequence.evaluation[degree], sequence.relative[degree]),
            ]
            if degree >= 2:
                steps.append((sequence.p_hat[degree], sequence.relative[degree], sequence.gottlieb[degree - 1]))
            for matrix, source, target in steps:
                if not target.subspace.contains(source.subspace.image_under(matrix)):
                    raise InternalAssertionError(
                        f"La restricción {source.label} → {target.label} se sale del subgrupo"
                    )
        for degree in range(2, top + 1):
            composites = [
                (sequence.j_hat[degree].matmul(sequence.phi_hat[degree]), sequence.gottlieb[degree]),
                (sequence.p_hat[degree].matmul(sequence.j_hat[degree]), sequence.evaluation[degree]),
                (sequence.phi_hat[degree - 1].matmul(sequence.p_hat[degree]), sequence.relative[degree]),
            ]
            for matrix, source in composites:
                if any(any(matrix.apply(vector)) for vector in source.subspace.basis):
                    raise InternalAssertionError(f"Composición no nula en la G-sucesión desde {source.label}")

    @staticmethod
    def _term_verdict(
        term: SubgroupInHomology, outgoing: QMatrix, incoming: QMatrix, previous: SubgroupInHomology
    ) -> TermVerdict:
        cycles = restricted_kernel(outgoing, term.subspace)
        boundaries = previous.subspace.image_under(incoming)
        quotient = quotient_coordinates(cycles, boundaries)
        witnesses = [f"{term.label}: {term.ambient.render_class(rep)}" for rep in quotient.representatives()]
        return TermVerdict(term.label, term.degree, term.dimension, quotient.dim, witnesses)

    def exactness_report(self, sequence: GSequence) -> ExactnessReport:
        """Comparación núcleo/imagen en cada término de la G-sucesión"""
        verdicts: List[TermVerdict] = []
        top = sequence.max_degree
        for degree in range(top, 1, -1):
            # G^rel_n solo tiene sentido homotópico para n ≥ 3
            if 3 <= degree + 1 <= top:
                verdicts.append(self._relative_verdict(sequence, degree + 1))
            verdicts.append(self._gottlieb_verdict(sequence, degree))
            verdicts.append(
                self._term_verdict(
                    sequence.evaluation[degree], sequence.j_hat[degree], sequence.phi_hat[degree], sequence.gottlieb[degree]
                )
            )
        return ExactnessReport(sequence.base, verdicts)

    def _gottlieb_verdict(self, sequence: GSequence, degree: int) -> TermVerdict:
        return self._term_verdict(
            sequence.gottlieb[degree], sequence.phi_hat[degree], sequence.p_hat[degree + 1], sequence.relative[degree + 1]
        )

    def _relative_verdict(self, sequence: GSequence, degree: int) -> TermVerdict:
        return self._term_verdict(
            sequence.relative[degree], sequence.p_hat[degree], sequence.j_hat[degree], sequence.evaluation[degree]
        )

    def omega_homology(self, base: DGMorphism, degree: int, sequence: Optional[GSequence] = None) -> OmegaHomology:
        """H^{aω}_n = ker(φ̂ restringida a G_n(B)) / im(P̂ desde G^rel_{n+1})"""
        if degree < 2:
            raise TaskParameterError("La ω-homología se define para n ≥ 2")
        if sequence is None or sequence.max_degree < degree:
            sequence = self.build_g_sequence(base, max(degree, default_window(base.source, base.target)))
        verdict = self._gottlieb_verdict(sequence, degree)
        return OmegaHomology(degree, verdict.defect, verdict.witnesses)

    # Sucesiones exactas largas

    @staticmethod
    def _audit(name: str, entries: List[Tuple[str, int, ChainComplex, QMatrix, QMatrix]]) -> LongExactSequenceReport:
        """Cada entrada: (etiqueta, grado, complejo, entrante, saliente); exactitud obligatoria"""
        report = LongExactSequenceReport(name)
        for label, degree, complex_, incoming, outgoing in entries:
            dimension = complex_.homology(degree).dimension
            if outgoing.cols != dimension or incoming.rows != dimension:
                raise InternalAssertionError(f"{name}: matrices incompatibles con H_{degree}({label})")
            cycles = kernel(outgoing)
            rank_out = dimension - cycles.dim
            boundaries = image(incoming)
            if not cycles.contains(boundaries):
                raise InternalAssertionError(f"{name}: composición no nula en H_{degree}({label})")
            if cycles != boundaries:
                raise InternalAssertionError(
                    f"{name}: falla la exactitud en H_{degree}({label})",
                    [f"dim ker = {cycles.dim}, dim im = {boundaries.dim}"],
                )
            report.terms.append(SequenceTerm(label, degree, dimension, rank_out))
        logger.debug("Auditoría de %s superada en %d términos", name, len(report.terms))
        return report

    def _cone_sequence(self, name: str, chain_map: ChainMap, relative: RelativeComplex, top: int) -> LongExactSequenceReport:
        source, target = chain_map.source, chain_map.target

        def f_hat(n: int) -> QMatrix:
            return chain_map.induced(n)

        def j_hat(n: int) -> QMatrix:
            return induced_on_homology(relative.inclusion, target, relative, n, n)

        def p_hat(n: int) -> QMatrix:
            return induced_on_homology(relative.projection, relative, source, n, n - 1)

        entries = []
        for degree in range(top, 1, -1):
            entries.append((source.name, degree, source, p_hat(degree + 1), f_hat(degree)))
            entries.append((target.name, degree, target, f_hat(degree), j_hat(degree)))
            entries.append((relative.name, degree, relative, j_hat(degree), p_hat(degree)))
        return self._audit(name, entries)

    def les_of_fstar(self, base: DGMorphism, max_degree: Optional[int] = None) -> LongExactSequenceReport:
        """H(Der(B,B;1)) → H(Der(A,B;φ)) → H(Rel(φ*)) → ..."""
        top = check_window(max_degree or default_window(base.source, base.target))
        ladder = self._ladder(base)
        return self._cone_sequence(f"LES({base.name}*)", ladder.upper, ladder.upper_relative, top)

    def les_of_f(self, base: DGMorphism, max_degree: Optional[int] = None) -> LongExactSequenceReport:
        """H(Der(B,QQ;ε)) → H(Der(A,QQ;ε)) → H(Rel(φ̂*)) → ..."""
        top = check_window(max_degree or default_window(base.source, base.target))
        ladder = self._ladder(base)
        return self._cone_sequence(f"LES({base.name}^*)", ladder.lower, ladder.lower_relative, top)

    def les_of_eval_fibration(self, base: DGMorphism, max_degree: Optional[int] = None) -> LongExactSequenceReport:
        """H(Der(A,B̃;φ̃)) → H(Der(A,B;φ)) → H(Der(A,QQ;ε)) → H_{n-1}(Der(A,B̃;φ̃)) → ..."""
        top = check_window(max_degree or default_window(base.source, base.target))
        service = self.derivations
        full = service.complex(base)
        reduced = service.augmentation_ideal_complex(base)
        augmented = service.augmented_complex(base.source)
        inclusion = service.inclusion_induced(reduced, full)
        augment = service.augment_induced(full)

        def connecting(n: int) -> QMatrix:
            # Δ por el lema de la serpiente: levantar w* a 1∂w, aplicar δ y leer la clase
            lifted = full.delta(n).matmul(service.unit_section(augmented, full, n))
            restricted = service.reduced_projection(full, reduced, n - 1).matmul(lifted)
            back = inclusion.matrix(n - 1).matmul(restricted)
            for rep in augmented.homology(n).representatives():
                if back.apply(rep) != lifted.apply(rep):
                    raise InternalAssertionError(f"Δ_{n}: el borde del levantamiento tiene componente unidad")
            return induced_on_homology(lambda _: restricted, augmented, reduced, n, n - 1)

        entries = []
        for degree in range(top, 1, -1):
            entries.append((reduced.name, degree, reduced, connecting(degree + 1), inclusion.induced(degree)))
            entries.append((full.name, degree, full, inclusion.induced(degree), augment.induced(degree)))
            entries.append((augmented.name, degree, augmented, augment.induced(degree), connecting(degree)))
        return self._audit(f"LES(ev[{base.name}])", entries)

    def based_groups(self, base: DGMorphism, max_degree: Optional[int] = None) -> Dict[int, HomologySpace]:
        """π_n(map_*(X, Y; f)) ⊗ QQ = H_n(Der(A, B̃; φ̃)) para 2 ≤ n ≤ N"""
        top = check_window(max_degree or default_window(base.source, base.target))
        reduced = self.derivations.augmentation_ideal_complex(base)
        return {degree: reduced.homology(degree) for degree in range(2, top + 1)}

