# app/repositories/complex_repository.py - Caché de complejos de derivaciones

import logging

from app.models.algebra import DGMorphism, FreeDGAlgebra
from app.models.complexes import ChainComplex, DerivationComplex
from .base_repository import BaseRepository

logger = logging.getLogger(__name__)


class ComplexRepository(BaseRepository[ChainComplex]):
    """Repositorio que construye cada complejo una sola vez por (φ, reducido)"""

    def derivation_complex(self, base: DGMorphism, reduced: bool = False) -> DerivationComplex:
        """Der(A, B; φ), o Der(A, B̃; φ̃) si ``reduced``"""
        key = ("der", base.signature(), reduced)

        def build() -> DerivationComplex:
            logger.debug("Construyendo complejo para %s (reducido=%s)", base.name, reduced)
            return DerivationComplex(base, reduced=reduced)

        return self.get_or_create(key, build)

    def self_complex(self, algebra: FreeDGAlgebra) -> DerivationComplex:
        """Der(A, A; 1)"""
        return self.derivation_complex(DGMorphism.identity(algebra))

    def augmented_complex(self, algebra: FreeDGAlgebra) -> DerivationComplex:
        """Der(A, QQ; ε)"""
        return self.derivation_complex(DGMorphism.augmentation(algebra))
