# app/services/derivation_service.py - Servicio para complejos de derivaciones y aplicaciones inducidas

import logging
from typing import Callable, Dict, List, Optional, Tuple

from app.core.linalg import QMatrix
from app.models.algebra import DGMorphism, FreeDGAlgebra
from app.models.complexes import (
    ChainComplex,
    ChainMap,
    DerivationComplex,
    HomologySpace,
    RelativeComplex,
    relative_chain_map,
)
from app.models.derivation import Derivation, ElementaryDerivation
from app.repositories.complex_repository import ComplexRepository

logger = logging.getLogger(__name__)


class DerivationService:
    """Servicio para construir complejos Der(A, B; φ) y las aplicaciones entre ellos"""

    def __init__(self, repository: Optional[ComplexRepository] = None):
        """Inicializar el servicio con un repositorio de complejos (uno nuevo por defecto)"""
        self.repository = repository or ComplexRepository()
        self._maps: Dict[Tuple, ChainMap] = {}

    # Complejos

    def complex(self, base: DGMorphism) -> DerivationComplex:
        return self.repository.derivation_complex(base)

    def self_complex(self, algebra: FreeDGAlgebra) -> DerivationComplex:
        return self.repository.self_complex(algebra)

    def augmented_complex(self, algebra: FreeDGAlgebra) -> DerivationComplex:
        return self.repository.augmented_complex(algebra)

    def augmentation_ideal_complex(self, base: DGMorphism) -> DerivationComplex:
        """Der(A, B̃; φ̃): la misma base elemental sin componentes con valor unidad"""
        return self.repository.derivation_complex(base, reduced=True)

    def derivation_basis(self, base: DGMorphism, degree: int) -> List[Derivation]:
        """
        Base de Der_n(A, B; φ) como derivaciones.

        Para n ≥ 2 son las derivaciones elementales P∂w; en grado 1 la base
        canónica del subespacio de ciclos.
        """
        complex_ = self.complex(base)
        if degree < 1:
            return []
        return [complex_.derivation(degree, vector) for vector in complex_.space(degree).basis]

    @staticmethod
    def delta(derivation: Derivation) -> Derivation:
        return derivation.delta()

    def complex_homology(self, complex_: ChainComplex, degree: int) -> HomologySpace:
        return complex_.homology(degree)

    # Aplicaciones de cadenas

    def precompose_induced(self, base: DGMorphism) -> ChainMap:
        """φ*: Der(B, B; 1) → Der(A, B; φ), θ ↦ θ∘φ"""
        source = self.self_complex(base.target)
        target = self.complex(base)

        def builder(degree: int) -> QMatrix:
            columns = []
            for element in source.basis(degree):
                derivation = Derivation.elementary(degree, source.base, element)
                composite = derivation.precompose(base)
                columns.append(target.vector(Derivation(degree, base, dict(enumerate(composite.values)))))
            return QMatrix.from_columns(columns, target.ambient_dim(degree))

        return self._cached(("phi*", base.signature()), lambda: ChainMap(f"{base.name}*", source, target, builder))

    def augment_induced(self, complex_: DerivationComplex) -> ChainMap:
        """ε_*: Der(A, B; φ) → Der(A, QQ; ε), conserva el coeficiente de la unidad"""
        target = self.augmented_complex(complex_.source)

        def builder(degree: int) -> QMatrix:
            entries = {}
            target_basis = target.basis(degree)
            positions = {element.generator: i for i, element in enumerate(target_basis)}
            for col, element in enumerate(complex_.basis(degree)):
                if not any(element.monomial):
                    entries[(positions[element.generator], col)] = 1
            return QMatrix(target.ambient_dim(degree), complex_.ambient_dim(degree), entries)

        return self._cached(("eps*", id(complex_)), lambda: ChainMap(f"eps_*[{complex_.name}]", complex_, target, builder))

    def augmented_precompose(self, base: DGMorphism) -> ChainMap:
        """φ̂*: Der(B, QQ; ε) → Der(A, QQ; ε)"""
        source = self.augmented_complex(base.target)
        target = self.augmented_complex(base.source)

        def builder(degree: int) -> QMatrix:
            entries = {}
            for col, element in enumerate(source.basis(degree)):
                dual = Derivation.elementary(degree, source.base, element)
                for row, target_element in enumerate(target.basis(degree)):
                    image = base.images[target_element.generator]
                    coefficient = dual.evaluate(image).constant_term()
                    if coefficient:
                        entries[(row, col)] = coefficient
            return QMatrix(target.ambient_dim(degree), source.ambient_dim(degree), entries)

        return self._cached(("phi^*", base.signature()), lambda: ChainMap(f"{base.name}^*", source, target, builder))

    def inclusion_induced(self, reduced: DerivationComplex, full: DerivationComplex) -> ChainMap:
        """i_*: Der(A, B̃; φ̃) → Der(A, B; φ)"""

        def builder(degree: int) -> QMatrix:
            entries = {}
            for col, element in enumerate(reduced.basis(degree)):
                entries[(full.index_of(degree, element), col)] = 1
            return QMatrix(full.ambient_dim(degree), reduced.ambient_dim(degree), entries)

        return self._cached(("i*", id(full)), lambda: ChainMap(f"i_*[{full.name}]", reduced, full, builder))

    def unit_section(self, augmented: DerivationComplex, full: DerivationComplex, degree: int) -> QMatrix:
        """Sección w* ↦ 1∂w de ε_* (no es aplicación de cadenas)"""
        entries = {}
        unit = full.target.unit_monomial
        for col, element in enumerate(augmented.basis(degree)):
            position = full.index_of(degree, ElementaryDerivation(element.generator, unit))
            entries[(position, col)] = 1
        return QMatrix(full.ambient_dim(degree), augmented.ambient_dim(degree), entries)

    def reduced_projection(self, full: DerivationComplex, reduced: DerivationComplex, degree: int) -> QMatrix:
        """Coordenadas de Der(A, B; φ) sin componentes unidad → coordenadas reducidas"""
        entries = {}
        for col, element in enumerate(full.basis(degree)):
            position = reduced.index_of(degree, element)
            if position is not None:
                entries[(position, col)] = 1
        return QMatrix(reduced.ambient_dim(degree), full.ambient_dim(degree), entries)

    # Complejos relativos

    def build_relative_complex(self, chain_map: ChainMap, max_degree: Optional[int] = None) -> RelativeComplex:
        """Cono de una aplicación de cadenas, con δ² = 0 comprobado"""
        top = max_degree if max_degree is not None else chain_map.source.top_degree + 1
        for degree in range(1, top + 2):
            chain_map.verify(degree)
        relative = RelativeComplex(chain_map)
        relative.verify(top + 1)
        return relative

    def relative_augmentation(self, upper: RelativeComplex, lower: RelativeComplex, upstream: ChainMap, downstream: ChainMap) -> ChainMap:
        """(ε_*, ε_*): Rel(φ*) → Rel(φ̂*)"""
        chain_map = relative_chain_map("(eps_*, eps_*)", upper, lower, upstream, downstream)
        return self._checked(chain_map, upper.top_degree + 1)

    # Auxiliares

    def _cached(self, key: Tuple, factory: Callable[[], ChainMap]) -> ChainMap:
        if key not in self._maps:
            chain_map = factory()
            self._maps[key] = self._checked(chain_map, max(chain_map.source.top_degree, chain_map.target.top_degree) + 1)
        return self._maps[key]

    @staticmethod
    def _checked(chain_map: ChainMap, top: int) -> ChainMap:
        for degree in range(1, top + 2):
            chain_map.verify(degree)
        logger.debug("Aplicación de cadenas %s verificada hasta grado %d", chain_map.name, top + 1)
        return chain_map

