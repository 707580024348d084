"""Command-line front end.

Exit codes: 0 when everything requested passes, 1 when a validation or
check fails (the report is still written), 2 on input errors.
"""

import argparse
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, TextIO

import uvicorn

import config
from checks import SUITES, run_suite
from exact_scalar import ScalarParseError, SubstitutionError
from pipeline import TENSOR_SELECTORS, PiAnalysis, load_bindings
from report_formatting import FORMATS, TEXT, ReportFormatter
from structure_algebra import (
    DimensionMismatchError,
    InstanceFormatError,
    MetricNotInvertibleError,
    load_structures,
    validate,
)
from tensor_core import SlotError

logger = config.logger

COMMANDS = ("validate", "classify", "tensor", "check", "report")
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT_ERROR = 2

INPUT_ERRORS = (
    FileNotFoundError,
    InstanceFormatError,
    DimensionMismatchError,
    MetricNotInvertibleError,
    ScalarParseError,
    SubstitutionError,
    SlotError,
)


@dataclass
class RunConfig:
    command: str
    input: str
    bindings: Dict[str, str] = field(default_factory=dict)
    fmt: str = TEXT
    which: Optional[str] = None
    suite: str = "all"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command '{self.command}', expected one of {COMMANDS}")
        if self.command == "tensor" and self.which is None:
            raise ValueError("The tensor command needs --which")
        if self.fmt not in FORMATS:
            raise ValueError(f"Unknown format '{self.fmt}', expected one of {FORMATS}")


def _execute(run_config: RunConfig, stream: TextIO) -> int:
    path = config.resolve_fixture(run_config.input)
    fmt = run_config.fmt

    if run_config.command == "validate":
        algebra, structure, _ = load_structures(path)
        report = validate(algebra, structure, run_config.bindings or None)
        stream.write(ReportFormatter.validation(report, fmt))
        return EXIT_OK if report.ok else EXIT_FAILED

    analysis = PiAnalysis.from_file(path, run_config.bindings or None)
    if not analysis.structure_report.ok:
        stream.write(ReportFormatter.validation(analysis.structure_report, fmt))
        return EXIT_FAILED

    if run_config.command == "classify":
        stream.write(ReportFormatter.classification(analysis.classification, fmt))
        return EXIT_OK
    if run_config.command == "tensor":
        stream.write(ReportFormatter.tensors(analysis.tensors(run_config.which), fmt))
        return EXIT_OK
    if run_config.command == "check":
        report = run_suite(run_config.suite, analysis)
        stream.write(ReportFormatter.validation(report, fmt))
        return EXIT_OK if report.ok else EXIT_FAILED

    stream.write(ReportFormatter.full_report(analysis, fmt))
    return EXIT_OK


def run(run_config: RunConfig, stream: Optional[TextIO] = None) -> int:
    if stream is None:
        stream = sys.stdout
    try:
        return _execute(run_config, stream)
    except INPUT_ERRORS as e:
        logger.error(f"[CLI] {type(e).__name__}: {e}")
        stream.write(f"error: {e}\n")
        return EXIT_INPUT_ERROR


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--subst", help="parameter bindings, e.g. m1=1,m2=-2")
    common.add_argument("--subst-file", help="JSON substitution file or fixture name")
    common.add_argument("--format", dest="fmt", choices=FORMATS, default=TEXT)

    parser = argparse.ArgumentParser(
        prog="pi-connections",
        description="Exact natural connections and classification of left-invariant Riemannian Pi-structures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("validate", "check the Jacobi identity and the structure axioms"),
        ("classify", "class verdicts for F1..F11, F0 and the unions"),
        ("report", "full pipeline report"),
    ):
        command = sub.add_parser(name, parents=[common], help=help_text)
        command.add_argument("file")

    tensor = sub.add_parser("tensor", parents=[common], help="nonzero components of one tensor")
    tensor.add_argument("file")
    tensor.add_argument("--which", choices=TENSOR_SELECTORS, required=True)

    check = sub.add_parser("check", parents=[common], help="run a property suite")
    check.add_argument("file")
    check.add_argument("--suite", choices=("all",) + SUITES, default="all")

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--host", default=config.SERVER_HOST)
    serve.add_argument("--port", type=int, default=config.SERVER_PORT)
    serve.add_argument("--reload", action="store_true")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        uvicorn.run("server:app", host=args.host, port=args.port, reload=args.reload)
        return EXIT_OK

    try:
        bindings = load_bindings(args.subst, args.subst_file)
    except INPUT_ERRORS as e:
        sys.stdout.write(f"error: {e}\n")
        return EXIT_INPUT_ERROR

    run_config = RunConfig(
        command=args.command,
        input=args.file,
        bindings=bindings,
        fmt=args.fmt,
        which=getattr(args, "which", None),
        suite=getattr(args, "suite", "all"),
    )
    return run(run_config)
