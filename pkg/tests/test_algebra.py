# tests/test_algebra.py - Álgebras DG libres: producto graduado, Leibniz, cohomología y morfismos

import pytest
from hypothesis import given, settings, strategies as st

from app.core.exceptions import MixedDegreeError, SemanticError
from app.core.signs import koszul_sign, merge_sign
from app.models.algebra import DGMorphism, FreeDGAlgebra, RATIONALS, poincare_dimension
from app.repositories.model_library import model_library
from app.services.algebra_service import AlgebraService

# Generadores de ambas paridades, con un diferencial descomponible
MIXED = FreeDGAlgebra.build(
    "M",
    [("a2", 2), ("b3", 3), ("c3", 3), ("e4", 4), ("f7", 7)],
    {"b3": "a2^2", "f7": "e4^2 - a2^2*e4"},
)

BUILTINS = ["S2", "S3", "S4", "S7", "CP2", "CP3", "HP2", "K4", "S3xS5", "S2xS3"]

coefficients = st.integers(min_value=-4, max_value=4)


@st.composite
def homogeneous(draw, algebra=MIXED, max_degree=9):
    degree = draw(st.integers(min_value=0, max_value=max_degree))
    basis = algebra.monomial_basis(degree)
    values = draw(st.lists(coefficients, min_size=len(basis), max_size=len(basis)))
    return algebra.from_coordinates(values, degree), degree


@st.composite
def elements(draw, algebra=MIXED):
    total = algebra.zero()
    for _ in range(draw(st.integers(min_value=1, max_value=3))):
        total = total + draw(homogeneous(algebra))[0]
    return total


@given(elements(), elements(), elements())
def test_product_is_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(elements(), elements(), elements())
def test_product_distributes(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


@given(homogeneous(), homogeneous())
def test_graded_commutativity(left, right):
    (a, p), (b, q) = left, right
    assert a * b == (b * a).scaled(koszul_sign(p, q))


@given(homogeneous(), elements())
def test_leibniz_rule(left, b):
    a, degree = left
    sign = -1 if degree % 2 else 1
    assert MIXED.d(a * b) == MIXED.d(a) * b + (a * MIXED.d(b)).scaled(sign)


@given(elements())
def test_differential_squares_to_zero(a):
    assert MIXED.d(MIXED.d(a)).is_zero()


def test_odd_generators_anticommute_and_square_to_zero():
    b, c = MIXED.gen("b3"), MIXED.gen("c3")
    assert b * c == -(c * b)
    assert (b * b).is_zero()
    assert MIXED.element("b3*c3 + c3*b3").is_zero()


def test_merge_sign_counts_transpositions():
    odd = (True, True, True)
    assert merge_sign((0, 0, 1), (1, 0, 0), odd) == -1
    assert merge_sign((1, 0, 0), (0, 0, 1), odd) == 1
    assert merge_sign((0, 1, 1), (1, 0, 0), odd) == 1
    assert merge_sign((1, 0, 0), (1, 0, 0), odd) == 0


@pytest.mark.parametrize("name", BUILTINS)
def test_builtin_differentials_square_to_zero(name):
    algebra = model_library.resolve(name)
    for degree in range(0, 2 * algebra.max_generator_degree + 3):
        square = algebra.differential_matrix(degree + 1) @ algebra.differential_matrix(degree)
        assert square.is_zero()


@pytest.mark.parametrize("name", BUILTINS)
def test_monomial_basis_matches_generating_function(name):
    algebra = model_library.resolve(name)
    degrees = [gen.degree for gen in algebra.generators]
    for degree in range(0, 30):
        assert len(algebra.monomial_basis(degree)) == poincare_dimension(degrees, degree)


@pytest.mark.parametrize(
    "name, nonzero",
    [
        ("S2", {0, 2}),
        ("S3", {0, 3}),
        ("S4", {0, 4}),
        ("CP2", {0, 2, 4}),
        ("HP2", {0, 4, 8}),
        ("S3xS5", {0, 3, 5, 8}),
    ],
)
def test_cohomology_of_builtin_models(name, nonzero):
    algebra = model_library.resolve(name)
    for degree in range(0, 25):
        expected = 1 if degree in nonzero else 0
        assert algebra.cohomology_space(degree).dimension == expected, degree


def test_cohomology_class_and_lift():
    hp2 = model_library.resolve("HP2")
    space = hp2.cohomology_space(8)
    (representative,) = space.representatives
    assert representative == hp2.element("x4^2")
    assert space.class_of(hp2.element("3*x4^2")) == (3,)
    assert space.lift((2,)) == hp2.element("2*x4^2")


def test_homogeneous_degree_rejects_mixed_elements():
    element = MIXED.element("a2 + b3")
    with pytest.raises(MixedDegreeError):
        element.homogeneous_degree()
    assert MIXED.zero().homogeneous_degree() is None


def test_render_uses_degree_then_exponent_order():
    element = MIXED.element("-3*a2 + e4 + 1/2*a2^2 - b3*c3")
    assert MIXED.render(element) == "-b3*c3 + 1/2*a2^2 + e4 - 3*a2"


@settings(max_examples=60)
@given(elements())
def test_render_parses_back(element):
    assert MIXED.element(MIXED.render(element)) == element


def test_minimality():
    assert model_library.resolve("S4").is_minimal()
    contractible = FreeDGAlgebra.build("C", [("a3", 3), ("b4", 4)], {"a3": "b4"})
    assert not contractible.is_minimal()


def test_duplicate_generators_are_rejected():
    with pytest.raises(SemanticError):
        FreeDGAlgebra("bad", [("x2", 2), ("x2", 4)])


def test_frozen_algebra_rejects_new_differentials():
    with pytest.raises(SemanticError):
        MIXED.set_differential("c3", MIXED.element("a2^2"))


@given(elements(model_library.resolve("S3xS5")), elements(model_library.resolve("S3xS5")))
def test_morphism_is_multiplicative(a, b):
    s3s5 = model_library.resolve("S3xS5")
    swap = DGMorphism("flip", s3s5, s3s5, {"x3": "x3", "x5": "-x5"})
    assert swap(a * b) == swap(a) * swap(b)


def test_morphism_commutes_with_differentials(phi, model_y):
    for degree in range(0, 24):
        for monomial in model_y.monomial_basis(degree):
            element = model_y.monomial_element(monomial)
            assert phi(model_y.d(element)) == phi.target.d(phi(element))


def test_composition_and_identity(phi, model_x):
    identity = DGMorphism.identity(model_x)
    assert identity.is_identity()
    assert identity.compose(phi) == phi
    with pytest.raises(SemanticError):
        phi.compose(identity)


def test_augmentation_lands_in_rationals(model_x):
    eps = DGMorphism.augmentation(model_x)
    assert eps.target is RATIONALS
    assert eps(model_x.element("2 + x4")) == RATIONALS.scalar(2)


def test_validation_reports_chain_map_failure(model_x):
    service = AlgebraService()
    k4 = model_library.resolve("K4")
    good = DGMorphism("ok", k4, model_x, {"z4": "x4"})
    assert service.validate_morphism(good).is_valid
    bad = DGMorphism("bad", model_library.resolve("S4"), model_x, {"x4": "x4", "y7": "0"})
    report = service.validate_morphism(bad)
    assert [issue.code for issue in report.issues] == ["chain_map"]
    with pytest.raises(SemanticError):
        service.require_valid(report)


def test_validation_reports_nonzero_d_squared():
    algebra = FreeDGAlgebra("N", [("a2", 2), ("b3", 3), ("c4", 4)])
    algebra.set_differential("b3", algebra.element("a2^2"))
    algebra.set_differential("c4", algebra.element("a2*b3"))
    report = AlgebraService().validate_dga(algebra.freeze())
    assert [issue.code for issue in report.issues] == ["d_squared"]


def test_product_of_builtins_renames_repeated_generators():
    algebra = model_library.resolve("S3xS3")
    assert [gen.name for gen in algebra.generators] == ["x3", "x3_2"]
    assert model_library.is_builtin("CP2xK4")
    assert not model_library.is_builtin("T2")
    assert not model_library.is_builtin("K0")
    assert not model_library.is_builtin("S3xS0")


def test_linear_part_reads_indecomposables(hp4_inclusion):
    parts = AlgebraService().linear_part(hp4_inclusion)
    assert parts[4].to_rows() == [[1]]
    assert parts[19].shape == (0, 1)
    assert parts[11].shape == (1, 0)


def test_homotopy_dimensions_read_generators():
    service = AlgebraService()
    dims = service.homotopy_dimensions(model_library.resolve("HP2"), 12)
    assert {n for n, dim in dims.items() if dim} == {4, 11}
    contractible = FreeDGAlgebra.build("C", [("a3", 3), ("b4", 4)], {"a3": "b4"})
    with pytest.raises(SemanticError):
        service.homotopy_dimensions(contractible, 6)


def test_service_operations_delegate_to_the_models(phi, model_x, model_y):
    service = AlgebraService()
    assert model_x.render(service.extend_differential(model_x, model_x.gen("x11"))) == "x4^3"
    assert model_x.render(service.apply_morphism(phi, model_y.gen("y19"))) == "x4^2*x11"
    product = service.multiply(model_x.gen("x4"), model_x.gen("x11"))
    assert model_x.render(product) == "x4*x11"
    assert service.monomial_basis(model_x, 15) == model_x.monomial_basis(15)
    assert service.cohomology_space(model_x, 8).dimension == 1
