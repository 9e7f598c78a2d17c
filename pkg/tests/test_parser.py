# tests/test_parser.py - Lenguaje de workspaces: léxico, sintaxis, validación semántica y formato

import pytest

from app.core.exceptions import ParseError, SemanticError
from app.dsl.lexer import tokenize
from app.dsl.parser import format_workspace, parse_polynomial, parse_workspace
from app.repositories.model_library import model_library


def test_tokenize_tracks_positions():
    tokens, diagnostics = tokenize("map f : Y -> X {\n  y4 |-> x4;\n}")
    assert not diagnostics
    kinds = [token.kind for token in tokens]
    assert kinds[:7] == ["IDENT", "IDENT", "SYMBOL", "IDENT", "ARROW", "IDENT", "SYMBOL"]
    mapsto = next(token for token in tokens if token.kind == "MAPSTO")
    assert (mapsto.line, mapsto.column) == (2, 6)
    assert tokens[-1].kind == "EOF"


def test_comments_are_skipped():
    tokens, _ = tokenize("# comentario\n// otro\nmodel")
    assert [token.text for token in tokens] == ["model", ""]
    assert tokens[0].line == 3


def test_example_workspace(example_workspace, model_x, model_y, phi):
    assert list(example_workspace.models) == ["X", "Y"]
    assert [gen.name for gen in model_y.generators] == ["y8", "y15", "y4", "y19"]
    assert model_x.render(model_x.differential_of("x11")) == "x4^3"
    assert model_x.render(phi.image_of("y19")) == "x4^2*x11"
    (task,) = example_workspace.tasks
    assert task.kind == "g-sequence"
    assert task.params == {"map": "phi"}


def test_syntax_error_reports_line_and_column():
    with pytest.raises(ParseError) as excinfo:
        parse_workspace("model X {\n  gen x4 4;\n}\n")
    assert excinfo.value.diagnostics == [(2, 10, "se esperaba ':', se encontró '4'")]
    assert excinfo.value.details == ["2:10: se esperaba ':', se encontró '4'"]
    assert excinfo.value.exit_code == 2


def test_parser_recovers_and_reports_every_error():
    source = "model X {\n  gen x4 4;\n  gen x11 : 11;\n}\nmap f : X X {\n}\n"
    with pytest.raises(ParseError) as excinfo:
        parse_workspace(source)
    positions = [(line, column) for line, column, _ in excinfo.value.diagnostics]
    assert positions == [(2, 10), (5, 11)]
    assert "'->'" in excinfo.value.diagnostics[1][2]


def test_unexpected_character_is_a_lexical_error():
    with pytest.raises(ParseError) as excinfo:
        parse_workspace("model X { gen x4 : 4 $; }")
    assert excinfo.value.diagnostics == [(1, 22, "carácter inesperado '$'")]


def test_unclosed_block():
    with pytest.raises(ParseError) as excinfo:
        parse_workspace("model X {\n  gen x4 : 4;\n")
    assert "falta '}'" in excinfo.value.diagnostics[0][2]


def test_odd_square_is_rejected():
    source = "model Z {\n  gen y3 : 3;\n  gen z5 : 5;\n  d z5 = y3^2;\n}\n"
    with pytest.raises(SemanticError) as excinfo:
        parse_workspace(source)
    (detail,) = excinfo.value.details
    assert detail.startswith("4:10: odd square is zero")
    assert excinfo.value.exit_code == 1


def test_degree_mismatch_is_rejected():
    source = "model Z {\n  gen x2 : 2;\n  gen y4 : 4;\n  d y4 = x2^2;\n}\n"
    with pytest.raises(SemanticError) as excinfo:
        parse_workspace(source)
    (detail,) = excinfo.value.details
    assert detail.startswith("4:10: degree mismatch")
    assert "se esperaba 5" in detail


def test_nonzero_d_squared_is_rejected():
    source = (
        "model N {\n  gen a2 : 2;\n  gen b3 : 3;\n  gen c4 : 4;\n"
        "  d b3 = a2^2;\n  d c4 = a2*b3;\n}\n"
    )
    with pytest.raises(SemanticError) as excinfo:
        parse_workspace(source)
    (detail,) = excinfo.value.details
    assert detail.startswith("6:3: N: d c4: d²(c4)")


def test_semantic_errors_are_collected():
    source = """\
model A {
  gen a2 : 2;
  gen a2 : 4;
  d q = a2;
}

map f : A -> Missing {
}

map g : S4 -> A {
  x4 |-> b;
}

task unknown_kind { map = nope; }
"""
    with pytest.raises(SemanticError) as excinfo:
        parse_workspace(source)
    details = excinfo.value.details
    assert len(details) == 6
    assert any("generador duplicado 'a2'" in detail for detail in details)
    assert any("diferencial de un generador no declarado 'q'" in detail for detail in details)
    assert any("modelo desconocido 'Missing'" in detail for detail in details)
    assert any(detail.startswith("11:10: generador desconocido 'b'") for detail in details)
    assert any("tipo de tarea desconocido 'unknown-kind'" in detail for detail in details)
    assert any("morfismo no declarado 'nope'" in detail for detail in details)


def test_map_that_is_not_a_chain_map():
    source = """\
model X {
  gen x4 : 4;
  gen x11 : 11;
  d x11 = x4^3;
}

map bad : S4 -> X {
  x4 |-> x4;
}
"""
    with pytest.raises(SemanticError) as excinfo:
        parse_workspace(source)
    (detail,) = excinfo.value.details
    assert detail.startswith("7:1: bad: y7 |->")


def test_builtin_models_in_maps_and_tasks():
    source = """\
map q : K4 -> S2 {
  z4 |-> x2^2;
}

task thom { model = HP2; m = 12; degrees = 4..12; }
task split { kind = splitting; map = q; }
"""
    workspace = parse_workspace(source)
    q = workspace.morphisms["q"]
    assert q.source is model_library.resolve("K4")
    assert q.target is model_library.resolve("S2")
    thom, split = workspace.tasks
    assert thom.kind == "thom"
    assert thom.get_int("m") == 12
    assert thom.get_degrees() == list(range(4, 13))
    assert split.kind == "splitting"
    assert workspace.model("HP2") is model_library.resolve("HP2")


def test_task_values_are_literal():
    with pytest.raises(SemanticError) as excinfo:
        parse_workspace("task les { map = a->b; }\n")
    assert "morfismo no declarado 'a->b'" in excinfo.value.details[0]


def test_malformed_task_entries():
    with pytest.raises(ParseError) as excinfo:
        parse_workspace("task gottlieb { model ; }\n")
    assert "clave = valor" in excinfo.value.diagnostics[0][2]


def test_format_workspace_is_a_fixpoint(example_workspace, tncz_source):
    text = format_workspace(example_workspace)
    assert format_workspace(parse_workspace(text)) == text
    assert "  d x11 = x4^3;" in text
    assert "  kind = g-sequence;" in text
    tncz_text = format_workspace(parse_workspace(tncz_source))
    assert format_workspace(parse_workspace(tncz_text)) == tncz_text


def test_parse_polynomial():
    node = parse_polynomial("3/4*x2^2 - y3*x5 + 2 x7")
    assert [str(term.coefficient) for term in node.terms] == ["3/4", "-1", "2"]
    assert node.terms[1].exponents() == {"y3": 1, "x5": 1}
    assert node.terms[2].text == "2 x7"
    problems = node.check({"x2": 2, "y3": 3, "x5": 5, "x7": 7}, 4, "expr")
    assert [(line, column) for line, column, _ in problems] == [(1, 12), (1, 20)]
    assert problems[0][2] == "degree mismatch: 'y3*x5' tiene grado 8, se esperaba 4 en expr"


@pytest.mark.parametrize("text", ["x2 +", "1/0", "x2 y3", "^2", "x2^"])
def test_parse_polynomial_errors(text):
    with pytest.raises(ParseError):
        parse_polynomial(text)


def test_polynomial_evaluation_in_builtin_model():
    s3s5 = model_library.resolve("S3xS5")
    value = parse_polynomial("2*x3*x5 - x5*x3").evaluate(s3s5)
    assert value == s3s5.element("3*x3*x5")
    with pytest.raises(SemanticError):
        parse_polynomial("q2").evaluate(s3s5)


def test_zero_index_builtin_joins_the_collected_errors():
    source = """\
map z : K0 -> S2 {
}

map w : S4 -> CP0 {
}

task thom { model = HP0; m = 4; }
"""
    with pytest.raises(SemanticError) as excinfo:
        parse_workspace(source)
    details = excinfo.value.details
    assert len(details) == 3
    assert details[0].startswith("1:1: modelo desconocido 'K0'")
    assert details[1].startswith("4:1: modelo desconocido 'CP0'")
    assert "la tarea thom usa un modelo desconocido 'HP0'" in details[2]
