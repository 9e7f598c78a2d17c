# tests/conftest.py - Fixtures compartidas: workspace de referencia, modelos y servicios

import pytest

from app.dsl.parser import parse_workspace
from app.models.algebra import DGMorphism, FreeDGAlgebra
from app.repositories.model_library import model_library
from app.services.analysis_service import AnalysisService
from app.services.derivation_service import DerivationService
from app.services.sequence_service import SequenceService
from app.services.task_service import TaskService

# X = HP² modelado como Λ(x4, x11), Y con dos factores truncados; φ: M_Y → M_X
EXAMPLE_SOURCE = """\
# Cuaterniónico truncado y su aplicación desde Y
model X {
  gen x4 : 4;
  gen x11 : 11;
  d x11 = x4^3;
}

model Y {
  gen y8 : 8;
  gen y15 : 15;
  gen y4 : 4;
  gen y19 : 19;
  d y15 = y8^2;
  d y19 = y4^5;
}

map phi : Y -> X {
  y8 |-> x4^2;
  y15 |-> x4*x11;
  y4 |-> x4;
  y19 |-> x4^2*x11;
}

task g_sequence {
  map = phi;
}
"""

TNCZ_SOURCE = """\
model Prod {
  gen u3 : 3;
  gen x2 : 2;
  gen y3 : 3;
  d y3 = x2^2;
}

model Twisted {
  gen u3 : 3;
  gen y3 : 3;
  gen z5 : 5;
  d z5 = u3*y3;
}

task trivial { kind = tncz; model = Prod; u = u3; }
task twisted { kind = tncz; model = Twisted; u = u3; }
"""


@pytest.fixture(scope="session")
def example_workspace():
    return parse_workspace(EXAMPLE_SOURCE)


@pytest.fixture(scope="session")
def model_x(example_workspace) -> FreeDGAlgebra:
    return example_workspace.models["X"]


@pytest.fixture(scope="session")
def model_y(example_workspace) -> FreeDGAlgebra:
    return example_workspace.models["Y"]


@pytest.fixture(scope="session")
def phi(example_workspace) -> DGMorphism:
    return example_workspace.morphisms["phi"]


@pytest.fixture(scope="session")
def derivations() -> DerivationService:
    return DerivationService()


@pytest.fixture(scope="session")
def sequences(derivations) -> SequenceService:
    return SequenceService(derivations)


@pytest.fixture(scope="session")
def analysis(sequences) -> AnalysisService:
    return AnalysisService(sequences)


@pytest.fixture(scope="session")
def tasks(analysis) -> TaskService:
    return TaskService(analysis)


@pytest.fixture(scope="session")
def g_sequence(sequences, phi):
    return sequences.build_g_sequence(phi)


@pytest.fixture
def library():
    return model_library


def hp4_fragment_inclusion() -> DGMorphism:
    """Λ(y4, y19) → Λ(x4, x11): el modelo de HP² → HP⁴"""
    source = FreeDGAlgebra.build("HP4", [("y4", 4), ("y19", 19)], {"y19": "y4^5"})
    target = model_library.resolve("HP2")
    return DGMorphism("incl", source, target, {"y4": "x4", "y19": "x4^2*y11"})


def corpus_pairs():
    """Pares (nombre, morfismo) sobre los modelos predefinidos"""
    resolve = model_library.resolve
    s2, s3, s4, cp2, hp2 = (resolve(name) for name in ("S2", "S3", "S4", "CP2", "HP2"))
    k4 = resolve("K4")
    s3s5 = resolve("S3xS5")
    return [
        ("1_S2", DGMorphism.identity(s2)),
        ("1_S3", DGMorphism.identity(s3)),
        ("1_CP2", DGMorphism.identity(cp2)),
        ("1_HP2", DGMorphism.identity(hp2)),
        ("1_S3xS5", DGMorphism.identity(s3s5)),
        ("0_S3_S2", DGMorphism.null(s3, s2)),
        ("0_K4_HP2", DGMorphism.null(k4, hp2)),
        ("S4->HP", DGMorphism("S4->HP", k4, s4, {"z4": "x4"})),
        ("K4->S2", DGMorphism("K4->S2", k4, s2, {"z4": "x2^2"})),
        ("HP2->HP4", hp4_fragment_inclusion()),
        ("CP2->S2", DGMorphism("CP2->S2", cp2, s2, {"x2": "x2", "y5": "x2*y3"})),
    ]


@pytest.fixture(scope="session")
def corpus():
    return corpus_pairs()


@pytest.fixture(scope="session")
def hp4_inclusion() -> DGMorphism:
    return hp4_fragment_inclusion()


@pytest.fixture
def example_source() -> str:
    return EXAMPLE_SOURCE


@pytest.fixture
def tncz_source() -> str:
    return TNCZ_SOURCE
