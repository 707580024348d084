"""Property suites run by ``check --suite``.

Each suite returns a ``ValidationReport``; ``all`` runs every suite and then
repeats them on seeded random rational substitutions, comparing the numeric
pipeline against the substituted symbolic results.
"""

import random
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import config
from classifier import BASIC_CLASSES
from levi_civita import (
    check_connection_properties,
    check_F_properties,
    check_lee_relations,
    check_xi_eta_identities,
)
from natural_connections import (
    COMPACT_CLASSES,
    FIRST,
    SECOND,
    check_d_eta,
    check_naturality,
    check_t2_property,
    check_torsion_antisymmetric,
    compact_torsion_forms,
    torsion_form_relations,
    torsion_via_F,
    torsion_via_N,
    torsion_via_N_hv,
    u1_torsion,
)
from nijenhuis import U0, U0_HAT, ClassPreconditionError, F_from_NN, F_restricted_forms, NN_from_F, check_NN_properties
from pipeline import PiAnalysis
from structure_algebra import decomposition_report
from tensor_core import tensors_equal_check
from validation import CheckResult, ValidationReport, boolean_check

logger = config.logger

SUITES = ("naturality", "identities", "torsion-paths", "t2-property", "forms", "coincidence", "theorems", "compact")


def _merge(title: str, reports: List[ValidationReport]) -> ValidationReport:
    merged = ValidationReport(title)
    for report in reports:
        for check in report.checks:
            merged.add(CheckResult(f"{report.title}/{check.name}", check.passed, check.witness, check.residual, check.detail))
    return merged


def naturality_suite(analysis: PiAnalysis) -> ValidationReport:
    instance, F = analysis.instance, analysis.F
    return _merge("naturality", [
        check_naturality(instance, analysis.first, F),
        check_naturality(instance, analysis.second, F),
    ])


def identities_suite(analysis: PiAnalysis) -> ValidationReport:
    instance, conn, F, pair = analysis.instance, analysis.levi_civita, analysis.F, analysis.pair
    paths = ValidationReport("dual-paths")
    from_F = NN_from_F(F, instance)
    paths.add(tensors_equal_check("N-from-F", from_F.N, pair.N))
    paths.add(tensors_equal_check("Nhat-from-F", from_F.N_hat, pair.N_hat))
    paths.add(tensors_equal_check("F-from-NN", F_from_NN(pair, instance).tensor, F.tensor))
    for which in (U0, U0_HAT):
        try:
            restricted = F_restricted_forms(pair, instance, which)
        except ClassPreconditionError:
            continue
        paths.add(tensors_equal_check(f"F-{which}-form", restricted.tensor, F.tensor))

    return _merge("identities", [
        analysis.structure_report,
        decomposition_report(instance),
        check_connection_properties(instance, conn),
        check_F_properties(F, instance),
        check_lee_relations(analysis.lee, instance),
        check_xi_eta_identities(instance, conn, F),
        check_NN_properties(pair, instance),
        check_d_eta(instance, analysis.d_eta),
        paths,
    ])


def torsion_paths_suite(analysis: PiAnalysis) -> ValidationReport:
    instance, F, pair = analysis.instance, analysis.F, analysis.pair
    report = ValidationReport("torsion-paths")
    for which in (FIRST, SECOND):
        T = analysis.torsion_data(which).T
        report.add(tensors_equal_check(f"{which}-via-F", torsion_via_F(instance, F, which), T))
        report.add(tensors_equal_check(f"{which}-via-N", torsion_via_N(instance, pair, which), T))
        report.add(tensors_equal_check(f"{which}-via-N-hv", torsion_via_N_hv(instance, pair, which), T))
        report.extend([
            CheckResult(f"{which}-{c.name}", c.passed, c.witness, c.residual)
            for c in check_torsion_antisymmetric(analysis.torsion_data(which), instance).checks
        ])
    if analysis.coincidence.coincide:
        report.add(tensors_equal_check("u1-formula", u1_torsion(instance, pair), analysis.torsion_first.T))
    return report


def t2_property_suite(analysis: PiAnalysis) -> ValidationReport:
    return check_t2_property(analysis.torsion_second.T, analysis.instance)


def forms_suite(analysis: PiAnalysis) -> ValidationReport:
    return torsion_form_relations(analysis.instance, analysis.torsion_first, analysis.torsion_second, analysis.lee)


def coincidence_suite(analysis: PiAnalysis) -> ValidationReport:
    result = analysis.coincidence
    union = analysis.classification.unions["U1"]
    report = ValidationReport("coincidence")
    report.add(boolean_check(
        "N-phi-phi-matches-D1-equals-D2", result.consistent,
        f"N(phi., phi.) = 0: {result.coincide}, D1 = D2: {result.connections_equal}",
    ))
    report.add(boolean_check("U1-verdict-matches", union.holds == result.coincide))
    return report


def theorems_suite(analysis: PiAnalysis) -> ValidationReport:
    classification = analysis.classification
    report = ValidationReport("theorems")
    for which in (FIRST, SECOND):
        torsion_verdicts = classification.torsion[which]
        for name in BASIC_CLASSES:
            f_side, t_side = classification.classes[name], torsion_verdicts[name]
            detail = None if f_side.holds == t_side.holds else f"F-side {f_side.holds}, torsion-side {t_side.holds}"
            report.add(boolean_check(f"{which}-{name}-agrees", f_side.holds == t_side.holds, detail))
    if classification.F0:
        report.add(boolean_check("F0-in-every-class", all(v.holds for v in classification.classes.values())))
    unions = classification.unions
    if unions["U0hat"].holds and not unions["U0"].holds:
        report.add(boolean_check("U0hat-outside-U0-not-in-U1", not unions["U1"].holds))
    if classification.single_classes == ["F7"]:
        report.add(tensors_equal_check("f7-projection-is-F", classification.f7_projection.tensor, analysis.F.tensor))
    return report


def compact_suite(analysis: PiAnalysis) -> ValidationReport:
    instance = analysis.instance
    report = ValidationReport("compact")
    for which_class in COMPACT_CLASSES:
        for which in (FIRST, SECOND):
            try:
                compact = compact_torsion_forms(
                    instance, which_class, which, F=analysis.F, pair=analysis.pair, conn=analysis.levi_civita
                )
            except ClassPreconditionError:
                break
            report.add(tensors_equal_check(f"{which_class}-{which}", compact, analysis.torsion_data(which).T))
    if not report.checks:
        report.add(boolean_check("no-compact-class", True, f"'{instance.name}' is not in {', '.join(COMPACT_CLASSES)}"))
    return report


SUITE_FUNCTIONS: Dict[str, Callable[[PiAnalysis], ValidationReport]] = {
    "naturality": naturality_suite,
    "identities": identities_suite,
    "torsion-paths": torsion_paths_suite,
    "t2-property": t2_property_suite,
    "forms": forms_suite,
    "coincidence": coincidence_suite,
    "theorems": theorems_suite,
    "compact": compact_suite,
}


def run_suite(name: str, analysis: PiAnalysis) -> ValidationReport:
    if name == "all":
        return run_all(analysis)
    if name not in SUITE_FUNCTIONS:
        raise ValueError(f"Unknown suite '{name}', expected 'all' or one of {SUITES}")
    logger.info(f"[CHECK] Running suite '{name}' on '{analysis.name}'")
    return SUITE_FUNCTIONS[name](analysis)


# Substitution fuzz


def random_bindings(params, rng: random.Random) -> Dict[str, Fraction]:
    """Nonzero rationals with small numerators and denominators."""
    bindings = {}
    for name in params:
        numerator = rng.choice([n for n in range(-9, 10) if n])
        bindings[name] = Fraction(numerator, rng.randint(1, 5))
    return bindings


def substitution_oracle(analysis: PiAnalysis, bindings) -> ValidationReport:
    """Substituting the symbolic results equals running the pipeline on the substituted instance."""
    numeric = analysis.substitute(bindings)
    report = ValidationReport("substitution-oracle")
    pairs = {
        "nabla": (analysis.levi_civita.gamma, numeric.levi_civita.gamma),
        "F": (analysis.F.tensor, numeric.F.tensor),
        "N": (analysis.pair.N, numeric.pair.N),
        "Nhat": (analysis.pair.N_hat, numeric.pair.N_hat),
        "D1": (analysis.first.coefficients.gamma, numeric.first.coefficients.gamma),
        "D2": (analysis.second.coefficients.gamma, numeric.second.coefficients.gamma),
        "T1": (analysis.torsion_first.T, numeric.torsion_first.T),
        "T2": (analysis.torsion_second.T, numeric.torsion_second.T),
    }
    for name, (symbolic, direct) in pairs.items():
        report.add(tensors_equal_check(name, symbolic.substitute(bindings), direct))
    return report


def fuzz(analysis: PiAnalysis, rounds: Optional[int] = None, seed: Optional[int] = None) -> ValidationReport:
    params = analysis.instance.ring.params
    report = ValidationReport("fuzz")
    if not params:
        report.add(boolean_check("fuzz", True, "instance has no parameters"))
        return report

    rounds = rounds if rounds is not None else config.fuzz_rounds()
    seed = seed if seed is not None else config.fuzz_seed()
    rng = random.Random(seed)
    logger.info(f"[FUZZ] {rounds} rounds on '{analysis.name}' with seed {seed}")
    for round_no in range(rounds):
        bindings = random_bindings(params, rng)
        oracle = substitution_oracle(analysis, bindings)
        numeric = analysis.substitute(bindings)
        suites = [oracle] + [SUITE_FUNCTIONS[name](numeric) for name in SUITES]
        failures = [check for suite in suites for check in suite.failures]
        shown = ",".join(f"{k}={v}" for k, v in bindings.items())
        if failures:
            first = failures[0]
            report.add(CheckResult(
                f"round-{round_no}", False, first.witness, first.residual, f"{shown}: {first.name} failed"
            ))
        else:
            report.add(CheckResult(f"round-{round_no}", True, detail=shown))
    return report


def run_all(analysis: PiAnalysis, rounds: Optional[int] = None, seed: Optional[int] = None) -> ValidationReport:
    reports = [SUITE_FUNCTIONS[name](analysis) for name in SUITES]
    reports.append(fuzz(analysis, rounds, seed))
    merged = _merge("all", reports)
    logger.info(f"[CHECK] {len(merged.checks) - len(merged.failures)}/{len(merged.checks)} checks passed on '{analysis.name}'")
    return merged
