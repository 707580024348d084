import json

from report_formatting import JSON, TEXT, ReportFormatter
from tensor_core import LOWER, UPPER, zero_tensor


def test_tensor_lines(ex_l):
    lines = ReportFormatter.tensor_lines("D1", ex_l.first.coefficients.gamma)
    assert lines[0] == "D1 (1,2):"
    assert "  [1,2,1] = l1" in lines


def test_zero_tensor_lines(ex_0):
    lines = ReportFormatter.tensor_lines("F", ex_0.F.tensor)
    assert lines == ["F (0,3):", "  all components zero"]


def test_tensors_json_is_sorted_and_stable(ex_l):
    text = ReportFormatter.tensors(ex_l.tensors("lee"), JSON)
    assert text.endswith("\n")
    assert json.loads(text) == {"omega": [], "theta": [], "theta_star": []}
    assert text == ReportFormatter.tensors(ex_l.tensors("lee"), JSON)


def test_validation_text_marks_failures(ex_l):
    report = ex_l.structure_report
    text = ReportFormatter.validation(report, TEXT)
    first_line = text.splitlines()[0]
    assert first_line == f"structure: {len(report.checks)}/{len(report.checks)} checks passed"
    assert "  [PASS] jacobi" in text


def test_classification_text(ex_l):
    lines = ReportFormatter.classification_lines(ex_l.classification)
    assert lines[0] == "F0: False"
    assert "F7: True" in lines
    assert "U0hat: True" in lines
    assert "torsion (first): F7" in lines
    assert "torsion (second): F7" in lines


def test_full_report_ends_with_the_class(ex_l, ex_4):
    assert ReportFormatter.full_report(ex_l, TEXT).endswith("class: F7\n")
    data = json.loads(ReportFormatter.full_report(ex_4, JSON))
    assert data["class"] == "F4"
    assert data["parameters"] == ["a"]
    assert data["coincidence"]["coincide"] is True
    assert set(data["tensors"]) == {"nabla", "F", "lee", "N", "Nhat", "D1", "D2", "T1", "T2", "dEta"}


def test_valence_label_counts_upper_slots(ring_l):
    lines = ReportFormatter.tensor_lines("x", zero_tensor(ring_l, 5, (UPPER, LOWER, UPPER)))
    assert lines[0] == "x (2,1):"
