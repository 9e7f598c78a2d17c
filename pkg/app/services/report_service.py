# app/services/report_service.py - Representación del informe en texto y JSON

import json
from typing import List

from app.core.exceptions import TaskParameterError
from app.schemas.report import DegreeTable, Report, TaskReport

# Tipos cuyas tablas llevan un veredicto por término
TERM_VERDICT_KINDS = ("g-sequence", "exactness", "omega-homology")
# Tipos cuyas tablas llevan un veredicto por grado
DEGREE_VERDICT_KINDS = ("thom", "grivel", "splitting", "tncz")


class ReportService:
    """Servicio para serializar informes de forma determinista"""

    def render(self, report: Report, fmt: str = "text") -> bytes:
        if fmt == "json":
            return self.render_json(report)
        if fmt == "text":
            return self.render_text(report)
        raise TaskParameterError(f"Formato desconocido '{fmt}': use text o json")

    @staticmethod
    def render_json(report: Report) -> bytes:
        data = report.model_dump(exclude_none=True)
        return (json.dumps(data, indent=2, ensure_ascii=False) + "\n").encode("utf-8")

    def render_text(self, report: Report) -> bytes:
        lines: List[str] = [f"derivhom {report.tool_version}"]
        if report.assumptions:
            lines.append("assumptions:")
            lines.extend(f"  - {line}" for line in report.assumptions)
        for section in report.tasks:
            lines.extend(self._section(section))
        return ("\n".join(lines) + "\n").encode("utf-8")

    def _section(self, section: TaskReport) -> List[str]:
        header = f"task {section.name} ({section.kind})"
        if section.seconds is not None:
            header += f" [{section.seconds:.6f} s]"
        lines = [header]
        for degree, table in section.tables.items():
            lines.append(f"  degree {degree}")
            lines.extend(self._rows(section.kind, table))
        lines.extend(f"  note: {note}" for note in section.notes)
        return lines

    @staticmethod
    def _rows(kind: str, table: DegreeTable) -> List[str]:
        rows = []
        claimed = set()
        for label, dimension in table.dims.items():
            prefix = f"{label}: "
            witnesses = [w[len(prefix):] for w in table.witnesses if w.startswith(prefix)]
            claimed.update(w for w in table.witnesses if w.startswith(prefix))
            text = f"    {label} dim {dimension}"
            if kind in TERM_VERDICT_KINDS:
                text += ", exact" if table.exact or not witnesses else ", non-exact"
            if witnesses:
                text += (", witness " if len(witnesses) == 1 else ", witnesses ") + "; ".join(witnesses)
            rows.append(text)
        if kind in DEGREE_VERDICT_KINDS:
            rows.append(f"    verdict: {'holds' if table.exact else 'fails'}")
        rows.extend(f"    {w}" for w in table.witnesses if w not in claimed)
        return rows
