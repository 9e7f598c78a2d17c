# tests/test_report.py - Ejecución de tareas, informes en texto/JSON y CLI

import json

import pytest

from app import cli
from app.core.exceptions import F0ValidationError, InternalAssertionError, TaskParameterError
from app.dsl.parser import parse_workspace
from app.services.report_service import ReportService
from app.services.task_service import RunOptions

BUILTIN_TASKS = """\
map q : K4 -> S2 {
  z4 |-> x2^2;
}

task homotopy_groups { model = HP2; }
task thom { model = S2; m = 4; }
task split { kind = splitting; map = q; degrees = 2..5; }
task les { map = q; sequence = fstar; max-degree = 6; }
"""


@pytest.fixture(scope="module")
def example_report(tasks, example_workspace):
    return tasks.run_tasks(example_workspace)


def test_g_sequence_report_tables(example_report):
    (section,) = example_report.tasks
    assert section.kind == "g-sequence"
    assert list(section.tables) == [str(n) for n in range(2, 41)]
    eleven = section.tables["11"]
    assert eleven.dims["G_11(X)"] == 1
    assert not eleven.exact
    assert eleven.witnesses == ["G_11(X): x11*"]
    assert section.tables["4"].witnesses == ["G_4(Y,X): y4*"]
    assert section.tables["8"].witnesses == ["G^rel_8(Y,X): (0, y8*)"]
    assert "G^rel_2(Y,X)" not in section.tables["2"].dims
    non_exact = {degree for degree, table in section.tables.items() if not table.exact}
    assert non_exact == {"4", "8", "11"}
    assert section.notes == ["no exacta en G_11(X), G^rel_8(Y,X), G_4(Y,X)"]


def test_report_records_window_assumption(example_report):
    assert "g_sequence: ventana de grados hasta 40" in example_report.assumptions


def test_json_report_is_deterministic(tasks, example_workspace):
    service = ReportService()
    first = service.render(tasks.run_tasks(example_workspace), "json")
    second = service.render(tasks.run_tasks(example_workspace), "json")
    assert first == second
    data = json.loads(first)
    assert list(data) == ["tool_version", "assumptions", "tasks"]
    assert "seconds" not in data["tasks"][0]


def test_text_and_json_agree_on_dimensions(example_report):
    service = ReportService()
    data = json.loads(service.render(example_report, "json"))
    text = service.render(example_report, "text").decode("utf-8")
    for degree, table in data["tasks"][0]["tables"].items():
        assert f"  degree {degree}" in text
        for label, dim in table["dims"].items():
            assert f"    {label} dim {dim}" in text


def test_text_report_rows(example_report):
    lines = ReportService().render(example_report, "text").decode("utf-8").splitlines()
    assert lines[0] == "derivhom 1.0.0"
    assert "task g_sequence (g-sequence)" in lines
    assert "    G_11(X) dim 1, non-exact, witness x11*" in lines
    assert "    G_4(Y,X) dim 1, non-exact, witness y4*" in lines
    assert "    G_11(Y,X) dim 0, exact" in lines


def test_unknown_format_is_rejected(example_report):
    with pytest.raises(TaskParameterError):
        ReportService().render(example_report, "yaml")


def test_tncz_tasks(tasks, tncz_source):
    report = tasks.run_tasks(parse_workspace(tncz_source))
    trivial, twisted = report.tasks
    assert trivial.tables["3"].dims == {"psi": 1}
    assert trivial.tables["3"].exact
    assert trivial.tables["3"].witnesses == ["psi: u3*"]
    assert twisted.tables["3"].dims == {"psi": 0}
    assert twisted.tables["3"].witnesses == ["obstruccion: ψ(u3*y3) = y3"]
    text = ReportService().render(report, "text").decode("utf-8")
    assert "    verdict: holds" in text
    assert "    verdict: fails" in text
    assert "    obstruccion: ψ(u3*y3) = y3" in text


def test_tasks_on_builtin_models(tasks):
    report = tasks.run_tasks(parse_workspace(BUILTIN_TASKS))
    homotopy, thom, split, les = report.tasks
    assert homotopy.tables["7"].dims["H_7(Der(HP2,HP2;1_HP2))"] == 1
    assert homotopy.tables["11"].dims["H_11(Der(HP2,HP2;1_HP2))"] == 1
    assert homotopy.tables["11"].dims["H_11(Der(HP2,Q;eps_HP2))"] == 1
    assert {degree: table.dims["H_" + degree + "(Der(K4,S2))"] for degree, table in thom.tables.items()} == {
        "2": 1,
        "3": 0,
        "4": 1,
    }
    assert list(split.tables) == ["2", "3", "4", "5"]
    assert all(table.exact for table in split.tables.values())
    assert any("se asume F0" in line for line in report.assumptions)
    assert les.notes and les.notes[0].endswith("términos")
    assert max(int(degree) for degree in les.tables) == 6


def test_select_single_task(tasks):
    report = tasks.run_tasks(parse_workspace(BUILTIN_TASKS), RunOptions(task="thom"))
    assert [section.name for section in report.tasks] == ["thom"]
    with pytest.raises(TaskParameterError):
        tasks.run_tasks(parse_workspace(BUILTIN_TASKS), RunOptions(task="missing"))


def test_window_override_and_limits(tasks, example_workspace):
    report = tasks.run_tasks(example_workspace, RunOptions(max_degree=12))
    assert list(report.tasks[0].tables)[-1] == "12"
    with pytest.raises(TaskParameterError):
        tasks.run_tasks(example_workspace, RunOptions(max_degree=1))
    with pytest.raises(TaskParameterError):
        tasks.run_tasks(example_workspace, RunOptions(max_degree=500))


def test_missing_task_parameters(tasks):
    workspace = parse_workspace("task thom { model = S2; }\n")
    with pytest.raises(TaskParameterError):
        tasks.run_tasks(workspace)


DECLARED_F0 = """\
map h : HP2 -> HP2 {
  x4 |-> x4;
  y11 |-> y11;
}

map s : S3 -> S3 {
  x3 |-> x3;
}

task grivel_hp2 { kind = grivel; map = h; f0 = true; }
task grivel_s3 { kind = grivel; map = s; f0 = true; }
"""


def test_declared_f0_is_recorded_but_still_validated(tasks):
    workspace = parse_workspace(DECLARED_F0)
    report = tasks.run_tasks(workspace, RunOptions(task="grivel_hp2"))
    declared = [line for line in report.assumptions if line.startswith("grivel_hp2: F0 declarado")]
    assert declared == [
        "grivel_hp2: F0 declarado por el usuario para HP2 y HP2 "
        "(registrado; H^impar = 0 y el balance de generadores se validan igualmente)"
    ]
    assert any("HP2 se asume F0" in line for line in report.assumptions)
    with pytest.raises(F0ValidationError):
        tasks.run_tasks(workspace, RunOptions(task="grivel_s3"))


# CLI


@pytest.fixture
def example_file(tmp_path, example_source):
    path = tmp_path / "example.dh"
    path.write_text(example_source, encoding="utf-8")
    return path


def test_cli_check(example_file, capsys):
    assert cli.main(["check", str(example_file)]) == 0
    assert "2 modelos, 1 morfismos, 1 tareas" in capsys.readouterr().out


def test_cli_run_writes_json(example_file, tmp_path):
    output = tmp_path / "report.json"
    code = cli.main(["run", str(example_file), "--format", "json", "--max-degree", "12", "-o", str(output)])
    assert code == 0
    data = json.loads(output.read_text(encoding="utf-8"))
    assert data["tasks"][0]["tables"]["11"]["witnesses"] == ["G_11(X): x11*"]


def test_cli_run_prints_text(example_file, capsys):
    assert cli.main(["run", str(example_file), "--task", "g_sequence", "--max-degree", "12"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("derivhom ")
    assert "    G_11(X) dim 1, non-exact, witness x11*" in out


def test_cli_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.dh"
    path.write_text("model X {\n  gen x4 4;\n}\n", encoding="utf-8")
    assert cli.main(["check", str(path)]) == 2
    assert "2:10: se esperaba ':'" in capsys.readouterr().err


def test_cli_semantic_error_exit_code(tmp_path, capsys):
    path = tmp_path / "odd.dh"
    path.write_text("model Z {\n  gen y3 : 3;\n  gen z5 : 5;\n  d z5 = y3^2;\n}\n", encoding="utf-8")
    assert cli.main(["check", str(path)]) == 1
    assert "odd square is zero" in capsys.readouterr().err


def test_cli_task_errors_exit_with_one(example_file, tmp_path):
    assert cli.main(["run", str(example_file), "--task", "nope"]) == 1
    assert cli.main(["run", str(example_file), "--max-degree", "1"]) == 1
    assert cli.main(["check", str(tmp_path / "missing.dh")]) == 1


def test_cli_internal_error_exit_code(example_file, monkeypatch):
    def broken(self, workspace, options=None):
        raise InternalAssertionError("δ² ≠ 0")

    monkeypatch.setattr(cli.TaskService, "run_tasks", broken)
    assert cli.main(["run", str(example_file)]) == 3
