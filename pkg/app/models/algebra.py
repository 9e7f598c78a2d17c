# app/models/algebra.py - Álgebras DG libres graduado-conmutativas sobre QQ

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import QQ

from app.core.exceptions import MixedDegreeError, SemanticError
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
from app.core.signs import merge_sign

logger = logging.getLogger(__name__)

# Un monomio es el vector de exponentes en el orden de declaración
Monomial = Tuple[int, ...]


@dataclass(frozen=True)
class Generator:
    """Generador con nombre, grado y posición en el orden fijo del álgebra"""

    name: str
    degree: int
    index: int

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1


class Element:
    """Combinación lineal finita de monomios con coeficientes racionales"""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: "FreeDGAlgebra", terms: Optional[Mapping[Monomial, object]] = None):
        self.algebra = algebra
        clean: Dict[Monomial, Rational] = {}
        for monomial, coefficient in (terms or {}).items():
            value = to_rational(coefficient)
            if value:
                clean[tuple(monomial)] = value
        self.terms = clean

    # Consultas

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, monomial: Monomial) -> Rational:
        return self.terms.get(tuple(monomial), QQ.zero)

    def constant_term(self) -> Rational:
        return self.coefficient(self.algebra.unit_monomial)

    def degrees(self) -> List[int]:
        return sorted({self.algebra.monomial_degree(m) for m in self.terms})

    def homogeneous_degree(self) -> Optional[int]:
        """Grado común de los términos; None para el cero"""
        degrees = self.degrees()
        if not degrees:
            return None
        if len(degrees) > 1:
            raise MixedDegreeError(f"Elemento con grados mezclados {degrees}: {self}")
        return degrees[0]

    def is_homogeneous_of(self, degree: int) -> bool:
        return all(self.algebra.monomial_degree(m) == degree for m in self.terms)

    # Aritmética

    def _check(self, other: "Element") -> None:
        if other.algebra is not self.algebra:
            raise SemanticError(
                f"Operandos de álgebras distintas: {self.algebra.name} y {other.algebra.name}"
            )

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        terms = dict(self.terms)
        for monomial, coefficient in other.terms.items():
            terms[monomial] = terms.get(monomial, QQ.zero) + coefficient
        return Element(self.algebra, terms)

    def __neg__(self) -> "Element":
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scaled(self, scalar) -> "Element":
        factor = to_rational(scalar)
        return Element(self.algebra, {m: factor * c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.algebra.multiply(self, other)
        return self.scaled(other)

    def __rmul__(self, scalar):
        return self.scaled(scalar)

    def __pow__(self, exponent: int) -> "Element":
        result = self.algebra.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((id(self.algebra), frozenset(self.terms.items())))

    def __str__(self) -> str:
        return self.algebra.render(self)

    def __repr__(self) -> str:
        return f"Element({self.algebra.name}: {self})"


class FreeDGAlgebra:
    """
    Álgebra libre ΛV con diferencial de grado +1.

    Los generadores impares son exteriores y los pares polinomiales. El
    diferencial se fija generador a generador antes de congelar el álgebra;
    los generadores sin diferencial declarado tienen d = 0.
    """

    def __init__(self, name: str, generators: Sequence[Tuple[str, int]]):
        self.name = name
        self.generators: Tuple[Generator, ...] = tuple(
            Generator(gen_name, degree, index) for index, (gen_name, degree) in enumerate(generators)
        )
        self._by_name = {gen.name: gen for gen in self.generators}
        if len(self._by_name) != len(self.generators):
            raise SemanticError(f"Nombres de generadores repetidos en {name}")
        for gen in self.generators:
            if gen.degree < 1:
                raise SemanticError(f"{name}: el generador {gen.name} tiene grado {gen.degree} < 1")
        self._odd = tuple(gen.is_odd for gen in self.generators)
        self._differential: List[Element] = [Element(self) for _ in self.generators]
        self._frozen = False
        self._basis_cache: Dict[int, List[Monomial]] = {}
        self._index_cache: Dict[int, Dict[Monomial, int]] = {}
        self._d_cache: Dict[Monomial, Element] = {}
        self._cohomology_cache: Dict[int, "CohomologySpace"] = {}

    # Construcción

    @classmethod
    def build(
        cls,
        name: str,
        generators: Sequence[Tuple[str, int]],
        differential: Optional[Mapping[str, Union[str, Element]]] = None,
    ) -> "FreeDGAlgebra":
        """Construir y congelar un álgebra; los diferenciales pueden darse como texto"""
        algebra = cls(name, generators)
        for gen_name, value in (differential or {}).items():
            algebra.set_differential(gen_name, algebra.element(value) if isinstance(value, str) else value)
        return algebra.freeze()

    @classmethod
    def trivial(cls) -> "FreeDGAlgebra":
        """El cuerpo QQ visto como álgebra DG sin generadores"""
        return RATIONALS

    def set_differential(self, gen_name: str, value: Element) -> None:
        if self._frozen:
            raise SemanticError(f"El álgebra {self.name} ya está congelada")
        value_algebra = value.algebra
        if value_algebra is not self:
            raise SemanticError(f"El diferencial de {gen_name} no pertenece a {self.name}")
        self._differential[self.generator(gen_name).index] = value
        self._d_cache.clear()

    def freeze(self) -> "FreeDGAlgebra":
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    # Generadores y monomios

    def generator(self, name: str) -> Generator:
        try:
            return self._by_name[name]
        except KeyError:
            raise SemanticError(f"Generador desconocido '{name}' en {self.name}") from None

    def has_generator(self, name: str) -> bool:
        return name in self._by_name

    def gen(self, name: str) -> Element:
        """El generador como elemento"""
        return Element(self, {self.generator_monomial(self.generator(name).index): 1})

    @property
    def unit_monomial(self) -> Monomial:
        return (0,) * len(self.generators)

    def generator_monomial(self, index: int) -> Monomial:
        exponents = [0] * len(self.generators)
        exponents[index] = 1
        return tuple(exponents)

    def one(self) -> Element:
        return Element(self, {self.unit_monomial: 1})

    def zero(self) -> Element:
        return Element(self)

    def scalar(self, value) -> Element:
        return Element(self, {self.unit_monomial: value})

    def monomial_element(self, monomial: Monomial, coefficient=1) -> Element:
        return Element(self, {tuple(monomial): coefficient})

    def monomial_degree(self, monomial: Monomial) -> int:
        return sum(exp * gen.degree for exp, gen in zip(monomial, self.generators))

    @property
    def max_generator_degree(self) -> int:
        return max((gen.degree for gen in self.generators), default=0)

    def generators_of_degree(self, degree: int) -> List[Generator]:
        return [gen for gen in self.generators if gen.degree == degree]

    def is_generator_monomial(self, monomial: Monomial) -> bool:
        return sum(monomial) == 1

    def monomial_basis(self, degree: int) -> List[Monomial]:
        """Monomios de grado dado en orden lexicográfico descendente de exponentes"""
        if degree < 0:
            return []
        if degree not in self._basis_cache:
            found: List[Monomial] = []
            self._enumerate(degree, 0, [], found)
            self._basis_cache[degree] = sorted(found, reverse=True)
            self._index_cache[degree] = {m: i for i, m in enumerate(self._basis_cache[degree])}
        return self._basis_cache[degree]

    def _enumerate(self, remaining: int, position: int, prefix: List[int], found: List[Monomial]) -> None:
        if position == len(self.generators):
            if remaining == 0:
                found.append(tuple(prefix))
            return
        gen = self.generators[position]
        top = min(1, remaining // gen.degree) if gen.is_odd else remaining // gen.degree
        for exponent in range(top + 1):
            prefix.append(exponent)
            self._enumerate(remaining - exponent * gen.degree, position + 1, prefix, found)
            prefix.pop()

    def basis_index(self, degree: int) -> Dict[Monomial, int]:
        self.monomial_basis(degree)
        return self._index_cache[degree]

    def coordinates(self, element: Element, degree: int) -> Vector:
        """Vector de coordenadas de un elemento homogéneo en la base monomial"""
        index = self.basis_index(degree)
        values = [QQ.zero] * len(index)
        for monomial, coefficient in element.terms.items():
            if monomial not in index:
                raise MixedDegreeError(f"El elemento {element} no es homogéneo de grado {degree}")
            values[index[monomial]] = coefficient
        return tuple(values)

    def from_coordinates(self, vector: Sequence[Rational], degree: int) -> Element:
        basis = self.monomial_basis(degree)
        return Element(self, {basis[i]: value for i, value in enumerate(vector) if value})

    # Producto

    def multiply_monomials(self, left: Monomial, right: Monomial) -> Tuple[int, Monomial]:
        """(signo, monomio) del producto; signo 0 si se anula"""
        factor = merge_sign(left, right, self._odd)
        if factor == 0:
            return 0, self.unit_monomial
        return factor, tuple(a + b for a, b in zip(left, right))

    def multiply(self, left: Element, right: Element) -> Element:
        if left.algebra is not self or right.algebra is not self:
            raise SemanticError(f"Producto con operandos ajenos a {self.name}")
        terms: Dict[Monomial, Rational] = {}
        for m1, c1 in left.terms.items():
            for m2, c2 in right.terms.items():
                factor, product = self.multiply_monomials(m1, m2)
                if factor:
                    terms[product] = terms.get(product, QQ.zero) + factor * c1 * c2
        return Element(self, terms)

    # Diferencial

    def generator_differential(self, index: int) -> Element:
        return self._differential[index]

    def differential_of(self, name: str) -> Element:
        return self._differential[self.generator(name).index]

    def split_first(self, monomial: Monomial) -> Tuple[int, Monomial]:
        """Separa el primer factor generador: m = x_i · resto"""
        for index, exponent in enumerate(monomial):
            if exponent:
                rest = list(monomial)
                rest[index] -= 1
                return index, tuple(rest)
        raise ValueError("El monomio unidad no tiene factores")

    def _d_monomial(self, monomial: Monomial) -> Element:
        cached = self._d_cache.get(monomial)
        if cached is not None:
            return cached
        if not any(monomial):
            result = self.zero()
        else:
            index, rest = self.split_first(monomial)
            first = self.monomial_element(self.generator_monomial(index))
            rest_element = self.monomial_element(rest)
            sign = -1 if self.generators[index].is_odd else 1
            # d(x·resto) = d(x)·resto + (-1)^{|x|} x·d(resto)
            result = self._differential[index] * rest_element + (first * self._d_monomial(rest)).scaled(sign)
        self._d_cache[monomial] = result
        return result

    def d(self, element: Element) -> Element:
        """Extensión del diferencial por la regla de Leibniz"""
        total = self.zero()
        for monomial, coefficient in element.terms.items():
            total = total + self._d_monomial(monomial).scaled(coefficient)
        return total

    def differential_matrix(self, degree: int) -> QMatrix:
        """Matriz de d: Λ^k → Λ^{k+1} en bases monomiales"""
        source = self.monomial_basis(degree)
        target = self.monomial_basis(degree + 1)
        columns = [self.coordinates(self._d_monomial(m), degree + 1) for m in source]
        return QMatrix.from_columns(columns, len(target))

    def is_minimal(self) -> bool:
        """Todo diferencial de generador está en Λ^{≥2}V"""
        for value in self._differential:
            for monomial in value.terms:
                if sum(monomial) < 2:
                    return False
        return True

    # Cohomología

    def cohomology_space(self, degree: int) -> "CohomologySpace":
        if degree not in self._cohomology_cache:
            size = len(self.monomial_basis(degree))
            cycles = kernel(self.differential_matrix(degree)) if size else Subspace.zero(0)
            if degree >= 1:
                boundaries = image(self.differential_matrix(degree - 1))
            else:
                boundaries = Subspace.zero(size)
            quotient = quotient_coordinates(cycles, boundaries)
            self._cohomology_cache[degree] = CohomologySpace(self, degree, quotient)
            logger.debug("H^%d(%s) = %d", degree, self.name, quotient.dim)
        return self._cohomology_cache[degree]

    # Texto

    def element(self, text: Union[str, int]) -> Element:
        """Interpretar una expresión polinomial en la sintaxis del DSL"""
        from app.dsl.parser import parse_polynomial

        if isinstance(text, int):
            return self.scalar(text)
        return parse_polynomial(str(text)).evaluate(self)

    def render_monomial(self, monomial: Monomial) -> str:
        factors = []
        for exponent, gen in zip(monomial, self.generators):
            if exponent == 1:
                factors.append(gen.name)
            elif exponent > 1:
                factors.append(f"{gen.name}^{exponent}")
        return "*".join(factors) if factors else "1"

    def monomial_key(self, monomial: Monomial) -> Tuple[int, Monomial]:
        return (self.monomial_degree(monomial), monomial)

    def render(self, element: Element) -> str:
        if element.is_zero():
            return "0"
        parts: List[str] = []
        for monomial in sorted(element.terms, key=self.monomial_key, reverse=True):
            coefficient = element.terms[monomial]
            negative = coefficient < 0
            magnitude = -coefficient if negative else coefficient
            body = self.render_monomial(monomial)
            if not any(monomial):
                text = str(magnitude)
            elif magnitude == 1:
                text = body
            else:
                text = f"{magnitude}*{body}"
            if not parts:
                parts.append(f"-{text}" if negative else text)
            else:
                parts.append(f" - {text}" if negative else f" + {text}")
        return "".join(parts)

    def __repr__(self) -> str:
        gens = ", ".join(f"{gen.name}:{gen.degree}" for gen in self.generators)
        return f"FreeDGAlgebra({self.name}; {gens})"


RATIONALS = FreeDGAlgebra("Q", ()).freeze()


class CohomologySpace:
    """H^k de un álgebra DG con representantes y proyección a clases"""

    def __init__(self, algebra: FreeDGAlgebra, degree: int, quotient: QuotientSpace):
        self.algebra = algebra
        self.degree = degree
        self.quotient = quotient

    @property
    def dimension(self) -> int:
        return self.quotient.dim

    @property
    def representatives(self) -> List[Element]:
        return [self.algebra.from_coordinates(v, self.degree) for v in self.quotient.representatives()]

    def class_of(self, element: Element) -> Vector:
        """Coordenadas de la clase de un cociclo"""
        if self.quotient.cycles.ambient_dim == 0:
            return ()
        return self.quotient.project(self.algebra.coordinates(element, self.degree))

    def lift(self, coordinates: Sequence[Rational]) -> Element:
        if self.quotient.cycles.ambient_dim == 0:
            return self.algebra.zero()
        return self.algebra.from_coordinates(self.quotient.lift(coordinates), self.degree)


class DGMorphism:
    """Morfismo de álgebras DG dado por las imágenes de los generadores"""

    def __init__(
        self,
        name: str,
        source: FreeDGAlgebra,
        target: FreeDGAlgebra,
        images: Optional[Mapping[str, Union[Element, str]]] = None,
    ):
        self.name = name
        self.source = source
        self.target = target
        values = [target.zero() for _ in source.generators]
        for gen_name, value in (images or {}).items():
            element = target.element(value) if isinstance(value, str) else value
            if element.algebra is not target:
                raise SemanticError(f"{name}: la imagen de {gen_name} no pertenece a {target.name}")
            values[source.generator(gen_name).index] = element
        self.images: Tuple[Element, ...] = tuple(values)
        self._cache: Dict[Monomial, Element] = {}

    # Constructores

    @classmethod
    def identity(cls, algebra: FreeDGAlgebra) -> "DGMorphism":
        return cls(f"1_{algebra.name}", algebra, algebra, {gen.name: algebra.gen(gen.name) for gen in algebra.generators})

    @classmethod
    def null(cls, source: FreeDGAlgebra, target: FreeDGAlgebra) -> "DGMorphism":
        return cls(f"0_{source.name}", source, target)

    @classmethod
    def augmentation(cls, algebra: FreeDGAlgebra) -> "DGMorphism":
        """ε: A → QQ, anula todos los generadores"""
        return cls(f"eps_{algebra.name}", algebra, RATIONALS)

    # Evaluación

    def image_of(self, name: str) -> Element:
        return self.images[self.source.generator(name).index]

    def _apply_monomial(self, monomial: Monomial) -> Element:
        cached = self._cache.get(monomial)
        if cached is not None:
            return cached
        if not any(monomial):
            result = self.target.one()
        else:
            index, rest = self.source.split_first(monomial)
            result = self.images[index] * self._apply_monomial(rest)
        self._cache[monomial] = result
        return result

    def apply(self, element: Element) -> Element:
        if element.algebra is not self.source:
            raise SemanticError(f"{self.name}: el elemento no pertenece a {self.source.name}")
        total = self.target.zero()
        for monomial, coefficient in element.terms.items():
            total = total + self._apply_monomial(monomial).scaled(coefficient)
        return total

    __call__ = apply

    def compose(self, first: "DGMorphism") -> "DGMorphism":
        """self∘first"""
        if first.target is not self.source:
            raise SemanticError(f"No se puede componer {self.name} con {first.name}")
        images = {gen.name: self.apply(first.images[gen.index]) for gen in first.source.generators}
        return DGMorphism(f"{self.name}.{first.name}", first.source, self.target, images)

    def is_identity(self) -> bool:
        return self.source is self.target and all(
            value == self.source.gen(gen.name) for gen, value in zip(self.source.generators, self.images)
        )

    def signature(self) -> Tuple:
        """Clave estructural para cachés"""
        return (id(self.source), id(self.target), tuple(frozenset(v.terms.items()) for v in self.images))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DGMorphism):
            return NotImplemented
        return self.signature() == other.signature()

    def __hash__(self) -> int:
        return hash(self.signature())

    def __repr__(self) -> str:
        return f"DGMorphism({self.name}: {self.source.name} -> {self.target.name})"


def poincare_dimension(degrees: Iterable[int], degree: int) -> int:
    """dim Λ(V)^k contando soluciones; sirve de comprobación independiente"""
    counts = [0] * (degree + 1)
    counts[0] = 1
    for gen_degree in degrees:
        if gen_degree % 2:
            for k in range(degree, gen_degree - 1, -1):
                counts[k] += counts[k - gen_degree]
        else:
            for k in range(gen_degree, degree + 1):
                counts[k] += counts[k - gen_degree]
    return counts[degree] if degree >= 0 else 0
