# app/models/derivation.py - φ-derivaciones entre álgebras DG libres

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from app.core.exceptions import SemanticError
from app.core.linalg import Rational, Vector
from app.core.signs import delta_sign, derivation_law_sign
from app.models.algebra import DGMorphism, Element, FreeDGAlgebra, Monomial


@dataclass(frozen=True)
class ElementaryDerivation:
    """P∂w: la derivación que lleva el generador w a P y anula los demás"""

    generator: int
    monomial: Monomial

    def render(self, source: FreeDGAlgebra, target: FreeDGAlgebra) -> str:
        name = source.generators[self.generator].name
        if not any(self.monomial):
            return f"{name}*"
        return f"{target.render_monomial(self.monomial)}∂{name}"


class Derivation:
    """
    φ-derivación θ de grado n, determinada por sus valores en generadores.

    Se extiende a monomios con la ley θ(xy) = θ(x)φ(y) + (-1)^{n|x|}φ(x)θ(y).
    """

    def __init__(self, degree: int, base: DGMorphism, values: Optional[Mapping[int, Element]] = None):
        self.degree = degree
        self.base = base
        source, target = base.source, base.target
        normalized: List[Element] = [target.zero() for _ in source.generators]
        for index, value in (values or {}).items():
            if value.algebra is not target:
                raise SemanticError("Valor de derivación fuera del álgebra destino")
            normalized[index] = value
        self.values: Tuple[Element, ...] = tuple(normalized)
        self._cache: Dict[Monomial, Element] = {}

    @property
    def source(self) -> FreeDGAlgebra:
        return self.base.source

    @property
    def target(self) -> FreeDGAlgebra:
        return self.base.target

    @classmethod
    def elementary(cls, degree: int, base: DGMorphism, basis_element: ElementaryDerivation) -> "Derivation":
        value = base.target.monomial_element(basis_element.monomial)
        return cls(degree, base, {basis_element.generator: value})

    @classmethod
    def from_vector(
        cls, degree: int, base: DGMorphism, basis: Sequence[ElementaryDerivation], vector: Sequence[Rational]
    ) -> "Derivation":
        values: Dict[int, Element] = {}
        target = base.target
        for element, coefficient in zip(basis, vector):
            if not coefficient:
                continue
            term = target.monomial_element(element.monomial, coefficient)
            values[element.generator] = values[element.generator] + term if element.generator in values else term
        return cls(degree, base, values)

    def value(self, name: str) -> Element:
        return self.values[self.source.generator(name).index]

    def _evaluate_monomial(self, monomial: Monomial) -> Element:
        cached = self._cache.get(monomial)
        if cached is not None:
            return cached
        source = self.source
        if not any(monomial):
            result = self.target.zero()
        else:
            index, rest = source.split_first(monomial)
            if not any(rest):
                result = self.values[index]
            else:
                first_degree = source.generators[index].degree
                rest_element = source.monomial_element(rest)
                first_image = self.base.images[index]
                sign = derivation_law_sign(self.degree, first_degree)
                result = self.values[index] * self.base.apply(rest_element) + (
                    first_image * self._evaluate_monomial(rest)
                ).scaled(sign)
        self._cache[monomial] = result
        return result

    def evaluate(self, element: Element) -> Element:
        """Extensión de θ a todo el álgebra origen"""
        if element.algebra is not self.source:
            raise SemanticError("La derivación se evalúa sobre elementos del álgebra origen")
        total = self.target.zero()
        for monomial, coefficient in element.terms.items():
            total = total + self._evaluate_monomial(monomial).scaled(coefficient)
        return total

    __call__ = evaluate

    def delta(self) -> "Derivation":
        """δθ = d_B∘θ - (-1)^{|θ|} θ∘d_A, evaluado en generadores"""
        sign = delta_sign(self.degree)
        values = {}
        for gen in self.source.generators:
            value = self.target.d(self.values[gen.index]) - self.evaluate(
                self.source.generator_differential(gen.index)
            ).scaled(sign)
            if not value.is_zero():
                values[gen.index] = value
        return Derivation(self.degree - 1, self.base, values)

    def precompose(self, morphism: DGMorphism) -> "Derivation":
        """θ∘ψ, una (φ∘ψ)-derivación"""
        composite = self.base.compose(morphism)
        values = {gen.index: self.evaluate(morphism.images[gen.index]) for gen in morphism.source.generators}
        return Derivation(self.degree, composite, values)

    def is_zero(self) -> bool:
        return all(value.is_zero() for value in self.values)

    def __add__(self, other: "Derivation") -> "Derivation":
        if other.degree != self.degree or other.base != self.base:
            raise SemanticError("Suma de derivaciones de grado o base distintos")
        return Derivation(self.degree, self.base, {i: a + b for i, (a, b) in enumerate(zip(self.values, other.values))})

    def scaled(self, scalar) -> "Derivation":
        return Derivation(self.degree, self.base, {i: v.scaled(scalar) for i, v in enumerate(self.values)})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.degree == other.degree and self.base == other.base and self.values == other.values

    __hash__ = None

    def terms(self) -> List[Tuple[ElementaryDerivation, Rational]]:
        """Descomposición en derivaciones elementales, en orden de base"""
        result = []
        target = self.target
        for index, value in enumerate(self.values):
            for monomial in sorted(value.terms, key=target.monomial_key, reverse=True):
                result.append((ElementaryDerivation(index, monomial), value.terms[monomial]))
        return result

    def render(self) -> str:
        return render_combination(self.terms(), self.source, self.target)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Derivation(grado {self.degree}: {self.render()})"


def render_combination(
    terms: Sequence[Tuple[ElementaryDerivation, Rational]], source: FreeDGAlgebra, target: FreeDGAlgebra
) -> str:
    """Notación P∂w con coeficientes: "-3*x4^2∂x11", "y4* + 5*x4*x11∂y19" """
    parts: List[str] = []
    for element, coefficient in terms:
        if not coefficient:
            continue
        negative = coefficient < 0
        magnitude = -coefficient if negative else coefficient
        body = element.render(source, target)
        text = body if magnitude == 1 else f"{magnitude}*{body}"
        if not parts:
            parts.append(f"-{text}" if negative else text)
        else:
            parts.append(f" - {text}" if negative else f" + {text}")
    return "".join(parts) if parts else "0"


def vector_terms(basis: Sequence[ElementaryDerivation], vector: Vector) -> List[Tuple[ElementaryDerivation, Rational]]:
    return [(element, value) for element, value in zip(basis, vector) if value]
