# app/services/task_service.py - Ejecución de las tareas de un workspace

import logging
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from app.core.config import settings
from app.core.exceptions import TaskParameterError
from app.models.algebra import DGMorphism, FreeDGAlgebra
from app.models.complexes import HomologySpace
from app.models.workspace import TaskSpec, Workspace
from app.schemas.report import DegreeTable, Report, TaskReport
from app.services.analysis_service import AnalysisService, presentation_truncation
from app.services.sequence_service import SequenceService, SubgroupInHomology, check_window, default_window

logger = logging.getLogger(__name__)

LES_KINDS = ("fstar", "f", "eval")


@dataclass
class RunOptions:
    """Opciones de ejecución comunes a todas las tareas"""

    task: Optional[str] = None
    max_degree: Optional[int] = None


def _homology_table(table: DegreeTable, label: str, space: HomologySpace) -> None:
    table.dims[label] = space.dimension
    table.witnesses.extend(f"{label}: {space.complex.render_vector(space.degree, rep)}" for rep in space.representatives())


def _subgroup_table(table: DegreeTable, subgroup: SubgroupInHomology) -> None:
    table.dims[subgroup.label] = subgroup.dimension
    table.witnesses.extend(f"{subgroup.label}: {witness}" for witness in subgroup.witnesses())


class TaskService:
    """Orquesta las tareas de un workspace y compone el informe"""

    def __init__(self, analysis: Optional[AnalysisService] = None):
        self.analysis = analysis or AnalysisService()
        self.sequences: SequenceService = self.analysis.sequences
        self.derivations = self.sequences.derivations
        self._runners: Dict[str, Callable[[Workspace, TaskSpec, TaskReport, Report, Optional[int]], None]] = {
            "homotopy-groups": self._homotopy_groups,
            "gottlieb": self._gottlieb,
            "evaluation-subgroups": self._evaluation_subgroups,
            "g-sequence": self._g_sequence,
            "exactness": self._exactness,
            "omega-homology": self._omega_homology,
            "les": self._les,
            "based-groups": self._based_groups,
            "thom": self._thom,
            "grivel": self._grivel,
            "splitting": self._splitting,
            "tncz": self._tncz,
        }

    def run_tasks(self, workspace: Workspace, options: Optional[RunOptions] = None) -> Report:
        """Ejecutar las tareas seleccionadas en orden de declaración"""
        options = options or RunOptions()
        report = Report(tool_version=settings.tool_version)
        for task in workspace.select(options.task):
            runner = self._runners.get(task.kind)
            if runner is None:
                raise TaskParameterError(f"Tipo de tarea desconocido '{task.kind}' en {task.name}")
            logger.info("Tarea %s (%s): inicio", task.name, task.kind)
            section = TaskReport(name=task.name, kind=task.kind)
            started = time.perf_counter()
            runner(workspace, task, section, report, options.max_degree)
            if settings.report_timings:
                section.seconds = round(time.perf_counter() - started, 6)
            report.tasks.append(section)
            logger.info("Tarea %s (%s): fin", task.name, task.kind)
        return report

    # Parámetros

    @staticmethod
    def _morphism(workspace: Workspace, task: TaskSpec) -> DGMorphism:
        name = task.get("map")
        if name is None:
            raise TaskParameterError(f"La tarea {task.name} ({task.kind}) requiere 'map'")
        return workspace.morphism(name)

    @staticmethod
    def _model(workspace: Workspace, task: TaskSpec) -> FreeDGAlgebra:
        name = task.get("model")
        if name is None:
            raise TaskParameterError(f"La tarea {task.name} ({task.kind}) requiere 'model'")
        return workspace.model(name)

    @staticmethod
    def _window(task: TaskSpec, report: Report, override: Optional[int], *algebras: FreeDGAlgebra) -> int:
        requested = task.get_int("max-degree", override)
        window = check_window(requested if requested is not None else default_window(*algebras))
        report.assume(f"{task.name}: ventana de grados hasta {window}")
        return window

    @staticmethod
    def _table(section: TaskReport, degree: int) -> DegreeTable:
        return section.tables.setdefault(str(degree), DegreeTable())

    # Tareas

    def _homotopy_groups(self, workspace, task, section, report, override) -> None:
        """π_n(map(X,Y;f)) ⊗ QQ = H_n(Der(A,B;φ)); con 'model' también π_n(X) ⊗ QQ"""
        if task.get("model") is not None:
            algebra = self._model(workspace, task)
            complexes = [self.derivations.self_complex(algebra), self.derivations.augmented_complex(algebra)]
            window = self._window(task, report, override, algebra)
        else:
            morphism = self._morphism(workspace, task)
            complexes = [self.derivations.complex(morphism)]
            window = self._window(task, report, override, morphism.source, morphism.target)
        for degree in range(2, window + 1):
            table = self._table(section, degree)
            for complex_ in complexes:
                _homology_table(table, f"H_{degree}({complex_.name})", complex_.homology(degree))

    def _gottlieb(self, workspace, task, section, report, override) -> None:
        algebra = self._model(workspace, task)
        window = self._window(task, report, override, algebra)
        for degree in range(2, window + 1):
            _subgroup_table(self._table(section, degree), self.sequences.gottlieb_group(algebra, degree))

    def _evaluation_subgroups(self, workspace, task, section, report, override) -> None:
        morphism = self._morphism(workspace, task)
        window = self._window(task, report, override, morphism.source, morphism.target)
        for degree in range(2, window + 1):
            table = self._table(section, degree)
            _subgroup_table(table, self.sequences.evaluation_subgroup(morphism, degree))
            if degree >= 3:
                _subgroup_table(table, self.sequences.relative_evaluation_subgroup(morphism, degree))

    def _g_sequence(self, workspace, task, section, report, override) -> None:
        """Dimensiones de los tres subgrupos y veredicto de exactitud por término"""
        morphism = self._morphism(workspace, task)
        window = self._window(task, report, override, morphism.source, morphism.target)
        sequence = self.sequences.build_g_sequence(morphism, window)
        exactness = self.sequences.exactness_report(sequence)
        for degree in range(2, window + 1):
            table = self._table(section, degree)
            table.dims[sequence.gottlieb[degree].label] = sequence.gottlieb[degree].dimension
            table.dims[sequence.evaluation[degree].label] = sequence.evaluation[degree].dimension
            if degree >= 3:
                table.dims[sequence.relative[degree].label] = sequence.relative[degree].dimension
        for verdict in exactness.verdicts:
            if not verdict.exact:
                table = self._table(section, verdict.degree)
                table.exact = False
                table.witnesses.extend(verdict.witnesses)
        section.notes.append(
            "G-sucesión exacta" if exactness.is_exact
            else "no exacta en " + ", ".join(verdict.label for verdict in exactness.failures)
        )

    def _exactness(self, workspace, task, section, report, override) -> None:
        """Defecto de exactitud (dim ker / im) en cada término"""
        morphism = self._morphism(workspace, task)
        window = self._window(task, report, override, morphism.source, morphism.target)
        exactness = self.sequences.exactness_report(self.sequences.build_g_sequence(morphism, window))
        for verdict in sorted(exactness.verdicts, key=lambda v: v.degree):
            table = self._table(section, verdict.degree)
            table.dims[verdict.label] = verdict.defect
            if not verdict.exact:
                table.exact = False
                table.witnesses.extend(verdict.witnesses)

    def _omega_homology(self, workspace, task, section, report, override) -> None:
        morphism = self._morphism(workspace, task)
        window = self._window(task, report, override, morphism.source, morphism.target)
        degrees = task.get_degrees() or list(range(2, window + 1))
        if task.get("check") == "vanishing":
            self.analysis.omega_vanishing_check(morphism, degrees)
            section.notes.append(f"φ_X({morphism.target.name}) = 0 y d = 0 en {morphism.source.name}: ω-homología nula")
        sequence = self.sequences.build_g_sequence(morphism, max(window, max(degrees, default=2)))
        for degree in degrees:
            omega = self.sequences.omega_homology(morphism, degree, sequence)
            table = self._table(section, degree)
            label = f"H^omega_{degree}({morphism.name})"
            table.dims[label] = omega.dimension
            table.exact = omega.dimension == 0
            table.witnesses.extend(omega.witnesses)

    def _les(self, workspace, task, section, report, override) -> None:
        """Auditoría de las tres sucesiones exactas largas; un fallo es un error interno"""
        morphism = self._morphism(workspace, task)
        window = self._window(task, report, override, morphism.source, morphism.target)
        chosen = task.get("sequence", "all")
        kinds = LES_KINDS if chosen == "all" else (chosen,)
        builders = {
            "fstar": self.sequences.les_of_fstar,
            "f": self.sequences.les_of_f,
            "eval": self.sequences.les_of_eval_fibration,
        }
        for kind in kinds:
            if kind not in builders:
                raise TaskParameterError(f"Tarea {task.name}: sucesión desconocida '{kind}' (fstar, f, eval o all)")
            audit = builders[kind](morphism, window)
            for term in sorted(audit.terms, key=lambda t: t.degree):
                self._table(section, term.degree).dims[f"{audit.name} {term.display}"] = term.dimension
            section.notes.append(f"{audit.name}: exacta en {len(audit.terms)} términos")

    def _based_groups(self, workspace, task, section, report, override) -> None:
        morphism = self._morphism(workspace, task)
        window = self._window(task, report, override, morphism.source, morphism.target)
        for degree, space in self.sequences.based_groups(morphism, window).items():
            _homology_table(self._table(section, degree), f"H_{degree}({space.complex.name})", space)

    def _thom(self, workspace, task, section, report, override) -> None:
        algebra = self._model(workspace, task)
        m = task.get_int("m")
        if m is None:
            raise TaskParameterError(f"La tarea {task.name} (thom) requiere 'm'")
        raw_images = task.get("images") or task.get("image")
        images = [algebra.element(text.strip()) for text in raw_images.split(",")] if raw_images else None
        table_result = self.analysis.thom_check(algebra, m, task.get_degrees(), images)
        for row in table_result.rows:
            table = self._table(section, row.degree)
            table.dims[f"H_{row.degree}(Der(K{m},{algebra.name}))"] = row.derivation_dim
            table.dims[f"H^{m - row.degree}({algebra.name})"] = row.reference_dim
            table.exact = row.agrees

    @staticmethod
    def _declared_f0(task, *algebras) -> str:
        """El indicador f0 solo queda registrado: las condiciones necesarias se validan siempre"""
        names = " y ".join(algebra.name for algebra in algebras)
        return f"{task.name}: F0 declarado por el usuario para {names} (registrado; H^impar = 0 y el balance de generadores se validan igualmente)"

    def _grivel(self, workspace, task, section, report, override) -> None:
        morphism = self._morphism(workspace, task)
        if task.get_flag("f0"):
            report.assume(self._declared_f0(task, morphism.source, morphism.target))
        table_result = self.analysis.grivel_check(morphism, task.get_degrees())
        for line in table_result.assumptions:
            report.assume(line)
        truncation = presentation_truncation(morphism.source, morphism.target)
        report.assume(f"{task.name}: cohomología presentada hasta grado {truncation}")
        for algebra in (morphism.source, morphism.target):
            presentation = self.analysis.cohomology_presentation(algebra, truncation)
            section.notes.append(f"H*({algebra.name}) = {presentation.describe()}")
        for row in table_result.rows:
            table = self._table(section, row.degree)
            table.dims[f"H_{row.degree}(Der({morphism.source.name},{morphism.target.name};{morphism.name}))"] = row.derivation_dim
            table.dims[f"Der_{row.degree}(H*({morphism.source.name}),H*({morphism.target.name}))"] = row.reference_dim
            table.exact = row.agrees

    def _splitting(self, workspace, task, section, report, override) -> None:
        morphism = self._morphism(workspace, task)
        if task.get_flag("f0"):
            report.assume(self._declared_f0(task, morphism.target))
        verdicts, assumptions = self.analysis.splitting_check(morphism, task.get_degrees())
        for line in assumptions:
            report.assume(line)
        for verdict in verdicts:
            table = self._table(section, verdict.degree)
            table.dims.update(verdict.dims)
            table.exact = verdict.holds
            if not verdict.injective:
                table.witnesses.append(f"H(J^) no inyectiva en grado {verdict.degree + 1}")
            if not verdict.surjective:
                table.witnesses.append(f"H(P^) no sobreyectiva sobre grado {verdict.degree}")
            if not verdict.exact_middle:
                table.witnesses.append(f"sin exactitud en G^rel_{verdict.degree + 1}")

    def _tncz(self, workspace, task, section, report, override) -> None:
        algebra = self._model(workspace, task)
        u = task.get("u")
        if u is None:
            raise TaskParameterError(f"La tarea {task.name} (tncz) requiere 'u'")
        verdict = self.analysis.tncz_analyze(algebra, u)
        table = self._table(section, verdict.degree)
        table.dims["psi"] = 1 if verdict.found_psi is not None else 0
        table.exact = verdict.trivializes
        if verdict.found_psi is not None:
            table.witnesses.append(f"psi: {verdict.found_psi.render()}")
        table.witnesses.extend(f"obstruccion: {line}" for line in verdict.obstruction)
        section.notes.extend(verdict.audit)
