"""Lazily computed analysis of one instance: every tensor is built once, on first use."""

from functools import cached_property
from pathlib import Path
from typing import Dict, Mapping, Optional, Union

import config
from classifier import ClassificationReport, characterize_by_torsion, classify_by_F, classify_unions, f7_projection
from exact_scalar import RationalLike, parse_substitution
from levi_civita import FundamentalTensor, LeeForms, fundamental_tensor, lee_forms, levi_civita
from natural_connections import (
    FIRST,
    SECOND,
    CoincidenceResult,
    NaturalConnection,
    TorsionData,
    coincidence_test,
    d_eta,
    first_connection,
    second_connection,
    torsion,
)
from nijenhuis import NijenhuisPair, nijenhuis_pair
from structure_algebra import (
    LieAlgebraStructure,
    PiManifoldInstance,
    PiStructure,
    build_instance,
    load_structures,
    load_substitution,
    validate,
)
from tensor_core import ConnectionCoefficients, Tensor
from validation import ValidationReport

logger = config.logger

TENSOR_SELECTORS = ("nabla", "F", "lee", "N", "Nhat", "D1", "D2", "T1", "T2", "dEta")


class PiAnalysis:
    def __init__(self, instance: PiManifoldInstance, structure_report: Optional[ValidationReport] = None):
        self.instance = instance
        self._structure_report = structure_report

    @classmethod
    def from_file(
        cls,
        path: Union[str, Path],
        bindings: Optional[Mapping[str, RationalLike]] = None,
    ) -> "PiAnalysis":
        """Load, validate and (optionally) substitute before any tensor is computed."""
        algebra, structure, name = load_structures(path)
        return cls.from_structures(algebra, structure, name, bindings)

    @classmethod
    def from_structures(
        cls,
        algebra: LieAlgebraStructure,
        structure: PiStructure,
        name: str = "",
        bindings: Optional[Mapping[str, RationalLike]] = None,
    ) -> "PiAnalysis":
        if bindings:
            algebra.ring.parse_bindings(bindings)
        report = validate(algebra, structure, bindings)
        instance = build_instance(algebra, structure, name)
        if bindings:
            instance = instance.substitute(bindings)
        return cls(instance, report)

    @property
    def name(self) -> str:
        return self.instance.name

    @cached_property
    def structure_report(self) -> ValidationReport:
        if self._structure_report is not None:
            return self._structure_report
        return validate(self.instance.algebra, self.instance.structure)

    @cached_property
    def levi_civita(self) -> ConnectionCoefficients:
        logger.debug(f"[PIPELINE] Levi-Civita connection for '{self.name}'")
        return levi_civita(self.instance)

    @cached_property
    def F(self) -> FundamentalTensor:
        return fundamental_tensor(self.instance, self.levi_civita)

    @cached_property
    def lee(self) -> LeeForms:
        return lee_forms(self.F, self.instance)

    @cached_property
    def pair(self) -> NijenhuisPair:
        return nijenhuis_pair(self.instance, self.levi_civita)

    @cached_property
    def first(self) -> NaturalConnection:
        return first_connection(self.instance, self.levi_civita)

    @cached_property
    def second(self) -> NaturalConnection:
        return second_connection(self.instance, self.levi_civita, self.pair)

    @cached_property
    def torsion_first(self) -> TorsionData:
        return torsion(self.first, self.instance)

    @cached_property
    def torsion_second(self) -> TorsionData:
        return torsion(self.second, self.instance)

    @cached_property
    def d_eta(self) -> Tensor:
        return d_eta(self.instance, self.levi_civita)

    @cached_property
    def coincidence(self) -> CoincidenceResult:
        return coincidence_test(self.instance, self.pair, self.first, self.second)

    def connection(self, which: str) -> NaturalConnection:
        return self.first if which == FIRST else self.second

    def torsion_data(self, which: str) -> TorsionData:
        return self.torsion_first if which == FIRST else self.torsion_second

    @cached_property
    def classification(self) -> ClassificationReport:
        report = classify_by_F(self.instance, self.F, self.lee)
        report.unions = classify_unions(self.instance, self.pair)
        for which in (FIRST, SECOND):
            report.torsion[which] = characterize_by_torsion(self.instance, self.torsion_data(which), which)
        report.f7_projection = f7_projection(self.instance, self.F)
        return report

    def tensors(self, which: str) -> Dict[str, Tensor]:
        """Named tensors behind a CLI/API selector."""
        if which == "nabla":
            return {"nabla": self.levi_civita.gamma}
        if which == "F":
            return {"F": self.F.tensor}
        if which == "lee":
            return {"theta": self.lee.theta, "theta_star": self.lee.theta_star, "omega": self.lee.omega}
        if which == "N":
            return {"N": self.pair.N}
        if which == "Nhat":
            return {"Nhat": self.pair.N_hat}
        if which == "D1":
            return {"D1": self.first.coefficients.gamma}
        if which == "D2":
            return {"D2": self.second.coefficients.gamma}
        if which in ("T1", "T2"):
            data = self.torsion_data(FIRST if which == "T1" else SECOND)
            return {which: data.T, f"{which}.t": data.t, f"{which}.t_star": data.t_star, f"{which}.t_hat": data.t_hat}
        if which == "dEta":
            return {"dEta": self.d_eta}
        raise ValueError(f"Unknown tensor selector '{which}', expected one of {TENSOR_SELECTORS}")

    def substitute(self, bindings: Mapping[str, RationalLike]) -> "PiAnalysis":
        """A fresh analysis of the substituted instance (nothing is carried over)."""
        return PiAnalysis(self.instance.substitute(bindings))


def load_bindings(subst: Optional[str] = None, subst_file: Optional[str] = None) -> Dict[str, str]:
    """Merge ``k=v`` bindings from the command line over a substitution file."""
    bindings: Dict[str, str] = {}
    if subst_file:
        bindings.update(load_substitution(config.resolve_substitution(subst_file)))
    if subst:
        bindings.update(parse_substitution(subst))
    return bindings
