"""Named pass/fail checks with witnesses, shared by every verification step."""

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, List, Optional, Tuple

from exact_scalar import Scalar, ScalarRing


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: Optional[Tuple[int, ...]] = None
    residual: Optional[str] = None
    detail: Optional[str] = None

    def to_dict(self) -> Dict[str, object]:
        data: Dict[str, object] = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            data["witness"] = list(self.witness)
        if self.residual is not None:
            data["residual"] = self.residual
        if self.detail is not None:
            data["detail"] = self.detail
        return data


@dataclass
class ValidationReport:
    title: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def extend(self, checks: List[CheckResult]) -> None:
        self.checks.extend(checks)

    def get(self, name: str) -> CheckResult:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(f"No check named '{name}' in report '{self.title}'")

    def to_dict(self) -> Dict[str, object]:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [check.to_dict() for check in self.checks],
        }


def identity_check(
    name: str,
    ring: ScalarRing,
    dim: int,
    arity: int,
    residual: Callable[..., Scalar],
) -> CheckResult:
    """Check that ``residual`` vanishes on every basis index tuple."""
    for index in product(range(dim), repeat=arity):
        value = residual(*index)
        if value:
            return CheckResult(name, False, witness=index, residual=ring.format(value))
    return CheckResult(name, True)


def boolean_check(name: str, passed: bool, detail: Optional[str] = None) -> CheckResult:
    return CheckResult(name, bool(passed), detail=detail)
