# app/core/linalg.py - Álgebra lineal exacta sobre los racionales
#
# Todas las cuentas se hacen en el cuerpo QQ de sympy; la reducción por filas
# la hace DomainMatrix en formato disperso. Los vectores son tuplas de QQ.

from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from app.core.exceptions import InternalAssertionError

Rational = QQ.dtype
Vector = Tuple[Rational, ...]


def to_rational(value) -> Rational:
    """Convertir enteros o racionales de sympy a un elemento de QQ"""
    return QQ.convert(value)


def zero_vector(size: int) -> Vector:
    return (QQ.zero,) * size


def unit_vector(size: int, index: int) -> Vector:
    entries = [QQ.zero] * size
    entries[index] = QQ.one
    return tuple(entries)


def is_zero_vector(vector: Sequence[Rational]) -> bool:
    return not any(vector)


def add_vectors(left: Sequence[Rational], right: Sequence[Rational]) -> Vector:
    return tuple(a + b for a, b in zip(left, right))


def scale_vector(scalar, vector: Sequence[Rational]) -> Vector:
    factor = to_rational(scalar)
    return tuple(factor * entry for entry in vector)


def linear_combination(coefficients: Sequence[Rational], vectors: Sequence[Sequence[Rational]], size: int) -> Vector:
    """Σ c_i v_i en un espacio de dimensión ``size``"""
    total = [QQ.zero] * size
    for coefficient, vector in zip(coefficients, vectors):
        if not coefficient:
            continue
        for index, entry in enumerate(vector):
            if entry:
                total[index] += coefficient * entry
    return tuple(total)


class QMatrix:
    """Matriz racional dispersa de dimensiones fijas"""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Optional[Mapping[Tuple[int, int], object]] = None):
        if rows < 0 or cols < 0:
            raise ValueError("Dimensiones negativas")
        self.rows = rows
        self.cols = cols
        clean: Dict[Tuple[int, int], Rational] = {}
        for (row, col), value in (entries or {}).items():
            if not (0 <= row < rows and 0 <= col < cols):
                raise ValueError(f"Entrada ({row}, {col}) fuera de una matriz {rows}x{cols}")
            value = to_rational(value)
            if value:
                clean[(row, col)] = value
        self.entries = clean

    # Constructores

    @classmethod
    def zero(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, size: int) -> "QMatrix":
        return cls(size, size, {(i, i): QQ.one for i in range(size)})

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Rational]], rows: int) -> "QMatrix":
        entries = {}
        for col, vector in enumerate(columns):
            if len(vector) != rows:
                raise ValueError("Columna con longitud distinta al número de filas")
            for row, value in enumerate(vector):
                if value:
                    entries[(row, col)] = value
        return cls(rows, len(columns), entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "QMatrix":
        width = cols if cols is not None else (len(rows[0]) if rows else 0)
        entries = {}
        for row, vector in enumerate(rows):
            if len(vector) != width:
                raise ValueError("Fila con longitud distinta al número de columnas")
            for col, value in enumerate(vector):
                if value:
                    entries[(row, col)] = value
        return cls(len(rows), width, entries)

    @classmethod
    def block(cls, blocks: Sequence[Sequence["QMatrix"]]) -> "QMatrix":
        """Matriz por bloques; las alturas por fila y anchuras por columna deben cuadrar"""
        heights = [row[0].rows for row in blocks]
        widths = [matrix.cols for matrix in blocks[0]] if blocks else []
        entries = {}
        row_offset = 0
        for block_row, height in zip(blocks, heights):
            col_offset = 0
            for matrix, width in zip(block_row, widths):
                if matrix.rows != height or matrix.cols != width:
                    raise ValueError("Bloques con dimensiones incompatibles")
                for (row, col), value in matrix.entries.items():
                    entries[(row + row_offset, col + col_offset)] = value
                col_offset += width
            row_offset += height
        return cls(sum(heights), sum(widths), entries)

    @classmethod
    def from_domain_matrix(cls, matrix: DomainMatrix) -> "QMatrix":
        rows, cols = matrix.shape
        entries = {}
        for row, values in matrix.to_sparse().rep.items():
            for col, value in values.items():
                entries[(row, col)] = value
        return cls(rows, cols, entries)

    # Conversión y acceso

    def to_domain_matrix(self) -> DomainMatrix:
        sparse: Dict[int, Dict[int, Rational]] = {}
        for (row, col), value in self.entries.items():
            sparse.setdefault(row, {})[col] = value
        return DomainMatrix(sparse, (self.rows, self.cols), QQ)

    def __getitem__(self, key: Tuple[int, int]) -> Rational:
        return self.entries.get(key, QQ.zero)

    def column(self, col: int) -> Vector:
        values = [QQ.zero] * self.rows
        for (row, c), value in self.entries.items():
            if c == col:
                values[row] = value
        return tuple(values)

    def columns(self) -> List[Vector]:
        result = [[QQ.zero] * self.rows for _ in range(self.cols)]
        for (row, col), value in self.entries.items():
            result[col][row] = value
        return [tuple(values) for values in result]

    def to_rows(self) -> List[List[Rational]]:
        result = [[QQ.zero] * self.cols for _ in range(self.rows)]
        for (row, col), value in self.entries.items():
            result[row][col] = value
        return result

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not self.entries

    # Aritmética

    def apply(self, vector: Sequence[Rational]) -> Vector:
        """Producto matriz-vector"""
        if len(vector) != self.cols:
            raise ValueError(f"Vector de longitud {len(vector)} para una matriz de {self.cols} columnas")
        result = [QQ.zero] * self.rows
        for (row, col), value in self.entries.items():
            if vector[col]:
                result[row] += value * vector[col]
        return tuple(result)

    def matmul(self, other: "QMatrix") -> "QMatrix":
        """Composición self∘other"""
        if self.cols != other.rows:
            raise ValueError(f"Dimensiones incompatibles {self.shape} y {other.shape}")
        if not self.entries or not other.entries:
            return QMatrix.zero(self.rows, other.cols)
        return QMatrix.from_domain_matrix(self.to_domain_matrix().matmul(other.to_domain_matrix()))

    __matmul__ = matmul

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise ValueError("Suma de matrices de distinta forma")
        entries = dict(self.entries)
        for key, value in other.entries.items():
            entries[key] = entries.get(key, QQ.zero) + value
        return QMatrix(self.rows, self.cols, entries)

    def __neg__(self) -> "QMatrix":
        return QMatrix(self.rows, self.cols, {key: -value for key, value in self.entries.items()})

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return self + (-other)

    def scaled(self, scalar) -> "QMatrix":
        factor = to_rational(scalar)
        return QMatrix(self.rows, self.cols, {key: factor * value for key, value in self.entries.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    __hash__ = None

    def __repr__(self) -> str:
        return f"QMatrix({self.rows}x{self.cols}, {len(self.entries)} entradas)"


def _reduced_rows(matrix: QMatrix) -> Tuple[List[Dict[int, Rational]], Tuple[int, ...]]:
    """Filas no nulas de la forma escalonada reducida y columnas pivote"""
    if matrix.rows == 0 or matrix.cols == 0 or matrix.is_zero():
        return [], ()
    reduced, pivots = matrix.to_domain_matrix().rref()
    sparse = reduced.to_sparse().rep
    return [dict(sparse.get(index, {})) for index in range(len(pivots))], tuple(pivots)


class Subspace:
    """
    Subespacio de QQ^n guardado en forma escalonada reducida.

    La base es canónica, así que la igualdad es comparación estructural.
    """

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, basis: Sequence[Vector], pivots: Sequence[int]):
        self.ambient_dim = ambient_dim
        self.basis: Tuple[Vector, ...] = tuple(basis)
        self.pivots: Tuple[int, ...] = tuple(pivots)

    @classmethod
    def span(cls, vectors: Iterable[Sequence[Rational]], ambient_dim: int) -> "Subspace":
        rows = [tuple(vector) for vector in vectors]
        for vector in rows:
            if len(vector) != ambient_dim:
                raise ValueError("Vector de longitud distinta a la dimensión ambiente")
        reduced, pivots = _reduced_rows(QMatrix.from_rows(rows, ambient_dim))
        basis = []
        for row in reduced:
            values = [QQ.zero] * ambient_dim
            for col, value in row.items():
                values[col] = value
            basis.append(tuple(values))
        return cls(ambient_dim, basis, pivots)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, (), ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, [unit_vector(ambient_dim, i) for i in range(ambient_dim)], range(ambient_dim))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def residue(self, vector: Sequence[Rational]) -> Vector:
        """Resto de ``vector`` tras eliminar las componentes pivote"""
        rest = list(vector)
        for row, pivot in zip(self.basis, self.pivots):
            coefficient = rest[pivot]
            if coefficient:
                for index, value in enumerate(row):
                    if value:
                        rest[index] -= coefficient * value
        return tuple(rest)

    def contains_vector(self, vector: Sequence[Rational]) -> bool:
        if len(vector) != self.ambient_dim:
            raise ValueError("Vector de longitud distinta a la dimensión ambiente")
        return is_zero_vector(self.residue(vector))

    def coordinates(self, vector: Sequence[Rational]) -> Vector:
        """Coordenadas en la base canónica; el vector debe pertenecer al subespacio"""
        if not self.contains_vector(vector):
            raise InternalAssertionError("Vector fuera del subespacio", [str(tuple(vector))])
        return tuple(vector[pivot] for pivot in self.pivots)

    def vector(self, coordinates: Sequence[Rational]) -> Vector:
        return linear_combination(coordinates, self.basis, self.ambient_dim)

    def contains(self, other: "Subspace") -> bool:
        """other ⊆ self"""
        _check_ambient(self, other)
        return all(self.contains_vector(vector) for vector in other.basis)

    def image_under(self, matrix: QMatrix) -> "Subspace":
        return Subspace.span((matrix.apply(vector) for vector in self.basis), matrix.rows)

    def direct_sum(self, other: "Subspace") -> "Subspace":
        """Suma directa externa en QQ^{n+m}"""
        left = [vector + zero_vector(other.ambient_dim) for vector in self.basis]
        right = [zero_vector(self.ambient_dim) + vector for vector in other.basis]
        pivots = list(self.pivots) + [self.ambient_dim + pivot for pivot in other.pivots]
        return Subspace(self.ambient_dim + other.ambient_dim, left + right, pivots)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambiente={self.ambient_dim})"


class QuotientSpace:
    """
    Cociente cycles/boundaries con proyección explícita a coordenadas.

    Las coordenadas del cociente son las posiciones libres de los bordes
    expresados en la base canónica de los ciclos.
    """

    __slots__ = ("cycles", "boundaries", "_relations", "_free")

    def __init__(self, cycles: Subspace, boundaries: Subspace):
        _check_ambient(cycles, boundaries)
        offending = [vector for vector in boundaries.basis if not cycles.contains_vector(vector)]
        if offending:
            raise InternalAssertionError(
                "Un borde no pertenece al espacio de ciclos",
                [str(tuple(str(value) for value in offending[0]))],
            )
        self.cycles = cycles
        self.boundaries = boundaries
        self._relations = Subspace.span((cycles.coordinates(vector) for vector in boundaries.basis), cycles.dim)
        pivots = set(self._relations.pivots)
        self._free = tuple(index for index in range(cycles.dim) if index not in pivots)

    @property
    def dim(self) -> int:
        return len(self._free)

    def project(self, vector: Sequence[Rational]) -> Vector:
        """Coordenadas de la clase de un ciclo"""
        residue = self._relations.residue(self.cycles.coordinates(vector))
        return tuple(residue[index] for index in self._free)

    def representatives(self) -> List[Vector]:
        """Ciclos cuyas clases forman la base estándar del cociente"""
        return [self.cycles.basis[index] for index in self._free]

    def lift(self, coordinates: Sequence[Rational]) -> Vector:
        return linear_combination(coordinates, self.representatives(), self.cycles.ambient_dim)

    def is_boundary(self, vector: Sequence[Rational]) -> bool:
        return is_zero_vector(self.project(vector))


def _check_ambient(left: Subspace, right: Subspace) -> None:
    if left.ambient_dim != right.ambient_dim:
        raise ValueError(
            f"Dimensiones ambiente distintas: {left.ambient_dim} y {right.ambient_dim}"
        )


# Operaciones


def rank_kernel_image(matrix: QMatrix) -> Tuple[int, Subspace, Subspace]:
    """Rango, núcleo e imagen de una matriz"""
    reduced, pivots = _reduced_rows(matrix)
    pivot_set = set(pivots)
    kernel_vectors = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        values = [QQ.zero] * matrix.cols
        values[free] = QQ.one
        for row, pivot in zip(reduced, pivots):
            values[pivot] = -row.get(free, QQ.zero)
        kernel_vectors.append(tuple(values))
    kernel = Subspace.span(kernel_vectors, matrix.cols)
    image = Subspace.span((matrix.column(pivot) for pivot in pivots), matrix.rows)
    return len(pivots), kernel, image


def kernel(matrix: QMatrix) -> Subspace:
    return rank_kernel_image(matrix)[1]


def image(matrix: QMatrix) -> Subspace:
    return rank_kernel_image(matrix)[2]


def solve_linear(matrix: QMatrix, rhs: Sequence[Rational]) -> Optional[Vector]:
    """Una solución exacta de m·x = b, o None si el sistema es incompatible"""
    if len(rhs) != matrix.rows:
        raise ValueError("Lado derecho de longitud distinta al número de filas")
    if is_zero_vector(rhs):
        return zero_vector(matrix.cols)
    augmented = QMatrix.block([[matrix, QMatrix.from_columns([tuple(to_rational(v) for v in rhs)], matrix.rows)]])
    reduced, pivots = _reduced_rows(augmented)
    if matrix.cols in pivots:
        return None
    solution = [QQ.zero] * matrix.cols
    for row, pivot in zip(reduced, pivots):
        solution[pivot] = row.get(matrix.cols, QQ.zero)
    return tuple(solution)


def quotient_coordinates(cycles: Subspace, boundaries: Subspace) -> QuotientSpace:
    """Cociente con dimensión y proyección; comprueba boundaries ⊆ cycles"""
    return QuotientSpace(cycles, boundaries)


def subspace_ops(left: Subspace, right: Subspace) -> Tuple[Subspace, Subspace, bool]:
    """(suma, intersección, right ⊆ left)"""
    _check_ambient(left, right)
    total = Subspace.span(left.basis + right.basis, left.ambient_dim)
    # Relaciones Σα_i a_i = Σβ_j b_j: núcleo de [A | -B]
    stacked = QMatrix.from_columns(
        list(left.basis) + [scale_vector(-1, vector) for vector in right.basis], left.ambient_dim
    )
    relations = kernel(stacked)
    intersection = Subspace.span(
        (linear_combination(vector[: left.dim], left.basis, left.ambient_dim) for vector in relations.basis),
        left.ambient_dim,
    )
    return total, intersection, left.contains(right)


def intersection(left: Subspace, right: Subspace) -> Subspace:
    return subspace_ops(left, right)[1]


def restricted_kernel(matrix: QMatrix, domain: Subspace) -> Subspace:
    """Vectores de ``domain`` que ``matrix`` anula"""
    if domain.dim == 0:
        return Subspace.zero(matrix.cols)
    images = QMatrix.from_columns([matrix.apply(vector) for vector in domain.basis], matrix.rows)
    return Subspace.span((domain.vector(coefficients) for coefficients in kernel(images).basis), matrix.cols)
