"""Text and JSON renderings of reports; identical inputs give byte-identical output."""

import json
from typing import Dict, List, Mapping

from classifier import BASIC_CLASSES, ClassificationReport
from pipeline import TENSOR_SELECTORS, PiAnalysis
from tensor_core import Tensor, serialize_components
from validation import ValidationReport

TEXT = "text"
JSON = "json"
FORMATS = (TEXT, JSON)


def _valence_label(t: Tensor) -> str:
    upper = sum(1 for kind in t.valence if kind == "u")
    return f"({upper},{t.rank - upper})"


class ReportFormatter:
    """Renderers shared by the CLI and the HTTP API."""

    @staticmethod
    def dumps(data: object) -> str:
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    @staticmethod
    def tensor_lines(name: str, t: Tensor) -> List[str]:
        lines = [f"{name} {_valence_label(t)}:"]
        components = t.nonzero_components()
        if not components:
            lines.append("  all components zero")
            return lines
        for index, value in components:
            lines.append(f"  [{','.join(str(i) for i in index)}] = {t.ring.format(value)}")
        return lines

    @staticmethod
    def tensors_data(tensors: Mapping[str, Tensor]) -> Dict[str, object]:
        return {name: serialize_components(t) for name, t in tensors.items()}

    @staticmethod
    def tensors(tensors: Mapping[str, Tensor], fmt: str) -> str:
        if fmt == JSON:
            return ReportFormatter.dumps(ReportFormatter.tensors_data(tensors))
        lines: List[str] = []
        for name, t in tensors.items():
            lines.extend(ReportFormatter.tensor_lines(name, t))
        return "\n".join(lines) + "\n"

    @staticmethod
    def validation_lines(report: ValidationReport) -> List[str]:
        passed = len(report.checks) - len(report.failures)
        lines = [f"{report.title}: {passed}/{len(report.checks)} checks passed"]
        for check in report.checks:
            line = f"  [{'PASS' if check.passed else 'FAIL'}] {check.name}"
            if check.witness is not None:
                line += f" at {list(check.witness)}"
            if check.residual is not None:
                line += f" residual {check.residual}"
            if check.detail and not check.passed:
                line += f" ({check.detail})"
            lines.append(line)
        return lines

    @staticmethod
    def validation(report: ValidationReport, fmt: str) -> str:
        if fmt == JSON:
            return ReportFormatter.dumps(report.to_dict())
        return "\n".join(ReportFormatter.validation_lines(report)) + "\n"

    @staticmethod
    def classification_lines(report: ClassificationReport) -> List[str]:
        lines = [f"F0: {report.F0}"]
        for name in BASIC_CLASSES:
            verdict = report.classes[name]
            line = f"{name}: {verdict.holds}"
            if not verdict.holds and verdict.witness is not None:
                line += f" (fails '{verdict.clause}' at {list(verdict.witness)})"
            lines.append(line)
        for name, verdict in report.unions.items():
            lines.append(f"{name}: {verdict.holds}")
        for which, verdicts in report.torsion.items():
            held = [name for name in BASIC_CLASSES if verdicts[name].holds]
            lines.append(f"torsion ({which}): {', '.join(held) if held else 'none'}")
        return lines

    @staticmethod
    def classification(report: ClassificationReport, fmt: str) -> str:
        if fmt == JSON:
            return ReportFormatter.dumps(report.to_dict())
        return "\n".join(ReportFormatter.classification_lines(report)) + "\n"

    @staticmethod
    def full_report(analysis: PiAnalysis, fmt: str) -> str:
        """Structure checks, every tensor, the torsion forms, coincidence and the class."""
        classification = analysis.classification
        if fmt == JSON:
            return ReportFormatter.dumps({
                "instance": analysis.name,
                "parameters": list(analysis.instance.ring.params),
                "validation": analysis.structure_report.to_dict(),
                "tensors": {
                    which: ReportFormatter.tensors_data(analysis.tensors(which)) for which in TENSOR_SELECTORS
                },
                "coincidence": analysis.coincidence.to_dict(),
                "classification": classification.to_dict(),
                "class": classification.label,
            })

        lines = [f"instance: {analysis.name}", f"parameters: {', '.join(analysis.instance.ring.params) or 'none'}", ""]
        lines.extend(ReportFormatter.validation_lines(analysis.structure_report))
        for which in TENSOR_SELECTORS:
            lines.append("")
            for name, t in analysis.tensors(which).items():
                lines.extend(ReportFormatter.tensor_lines(name, t))
        lines.append("")
        coincidence = analysis.coincidence
        lines.append(f"D1 = D2: {coincidence.connections_equal}")
        if coincidence.witness is not None:
            lines.append(f"N(phi e_i, phi e_j) != 0 at {list(coincidence.witness)}")
        lines.append("")
        lines.extend(ReportFormatter.classification_lines(classification))
        lines.append("")
        lines.append(f"class: {classification.label}")
        return "\n".join(lines) + "\n"
