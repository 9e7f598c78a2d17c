# app/repositories/model_library.py - Biblioteca de modelos minimales predefinidos

import re
from typing import Dict, List, Optional, Tuple

from app.core.exceptions import SemanticError
from app.models.algebra import FreeDGAlgebra
from .base_repository import BaseRepository

BUILTIN_PATTERN = re.compile(r"^(S|CP|HP|K)(\d+)$")

# Descripción breve de cada familia para el listado de la API
FAMILIES: Dict[str, str] = {
    "S": "esfera S^n: Λ(x_n) si n es impar; Λ(x_n, y_{2n-1}), dy = x² si n es par",
    "CP": "espacio proyectivo complejo: Λ(x2, y_{2n+1}), dy = x^{n+1}",
    "HP": "espacio proyectivo cuaterniónico: Λ(x4, y_{4n+3}), dy = x^{n+1}",
    "K": "Eilenberg-Mac Lane K(Q, m): Λ(z_m), d = 0",
}


def sphere(n: int, name: Optional[str] = None) -> FreeDGAlgebra:
    name = name or f"S{n}"
    if n % 2:
        return FreeDGAlgebra.build(name, [(f"x{n}", n)])
    return FreeDGAlgebra.build(name, [(f"x{n}", n), (f"y{2 * n - 1}", 2 * n - 1)], {f"y{2 * n - 1}": f"x{n}^2"})


def complex_projective(n: int, name: Optional[str] = None) -> FreeDGAlgebra:
    top = 2 * n + 1
    return FreeDGAlgebra.build(name or f"CP{n}", [("x2", 2), (f"y{top}", top)], {f"y{top}": f"x2^{n + 1}"})


def quaternionic_projective(n: int, name: Optional[str] = None) -> FreeDGAlgebra:
    top = 4 * n + 3
    return FreeDGAlgebra.build(name or f"HP{n}", [("x4", 4), (f"y{top}", top)], {f"y{top}": f"x4^{n + 1}"})


def eilenberg_mac_lane(m: int, name: Optional[str] = None) -> FreeDGAlgebra:
    return FreeDGAlgebra.build(name or f"K{m}", [(f"z{m}", m)])


def product(factors: List[FreeDGAlgebra], name: str) -> FreeDGAlgebra:
    """Producto tensorial; los nombres repetidos reciben un sufijo con la posición del factor"""
    generators: List[Tuple[str, int]] = []
    differentials: Dict[str, str] = {}
    used = set()
    for position, factor in enumerate(factors, start=1):
        renames = {}
        for gen in factor.generators:
            new_name = gen.name if gen.name not in used else f"{gen.name}_{position}"
            renames[gen.name] = new_name
            used.add(new_name)
            generators.append((new_name, gen.degree))
        for gen in factor.generators:
            value = factor.generator_differential(gen.index)
            if not value.is_zero():
                differentials[renames[gen.name]] = _renamed(factor, value, renames)
    return FreeDGAlgebra.build(name, generators, differentials)


def _renamed(algebra: FreeDGAlgebra, element, renames: Dict[str, str]) -> str:
    text = algebra.render(element)
    # Sustitución por tokens completos, del nombre más largo al más corto
    for old in sorted(renames, key=len, reverse=True):
        text = re.sub(rf"\b{re.escape(old)}\b", renames[old], text)
    return text


class ModelLibrary(BaseRepository[FreeDGAlgebra]):
    """Repositorio de modelos predefinidos resueltos por nombre"""

    def resolve(self, name: str) -> FreeDGAlgebra:
        """Resolver S<n>, CP<n>, HP<n>, K<m> o productos A x B (p.ej. S3xS5)"""
        return self.get_or_create(name, lambda: self._build(name))

    def is_builtin(self, name: str) -> bool:
        if not name:
            return False
        matches = [BUILTIN_PATTERN.match(part) for part in name.split("x")]
        return all(match and int(match.group(2)) >= 1 for match in matches)

    def _build(self, name: str) -> FreeDGAlgebra:
        parts = name.split("x")
        if len(parts) > 1:
            return product([self.resolve(part) for part in parts], name)
        match = BUILTIN_PATTERN.match(name)
        if not match:
            raise SemanticError(f"Modelo desconocido '{name}'")
        family, number = match.group(1), int(match.group(2))
        if number < 1:
            raise SemanticError(f"Modelo desconocido '{name}': el índice debe ser ≥ 1")
        builders = {
            "S": sphere,
            "CP": complex_projective,
            "HP": quaternionic_projective,
            "K": eilenberg_mac_lane,
        }
        return builders[family](number, name)

    def catalog(self) -> Dict[str, str]:
        return dict(FAMILIES)


# Instancia global compartida por el parser, el CLI y la API
model_library = ModelLibrary()
