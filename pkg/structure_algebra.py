"""Lie algebras with a left-invariant Riemannian Pi-structure.

Instances are loaded from JSON files (schema enforced with ``pydantic``),
validated against the Jacobi identity and the structure axioms, and carry
the frame data every later computation evaluates on: the basis vectors,
their images under phi and phi^2, eta on the basis, and the horizontal part
of the inverse metric.
"""

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, TypeAdapter, ValidationError
from sympy import Matrix

import config
from exact_scalar import RationalLike, Scalar, ScalarRing
from tensor_core import (
    LOWER,
    UPPER,
    Tensor,
    Vector,
    multilinear_eval,
    tensor_from_function,
    unit_vector,
    vec_add,
    vec_scale,
    vec_sub,
)
from validation import CheckResult, ValidationReport, identity_check

logger = config.logger


class InstanceFormatError(ValueError):
    """Raised when an instance document cannot be turned into a structure."""


class DimensionMismatchError(ValueError):
    pass


class MetricNotInvertibleError(ValueError):
    pass


# File schema


class BracketEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    left: str
    right: str
    result: Dict[str, str] = {}


class InstanceFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dimension: int
    parameters: List[str] = []
    basis: List[str]
    brackets: List[BracketEntry] = []
    phi: Dict[str, Dict[str, str]] = {}
    xi: Dict[str, str]
    eta: Dict[str, str]
    metric: Dict[str, Dict[str, str]]
    name: Optional[str] = None
    description: Optional[str] = None


SubstitutionFile = TypeAdapter(Dict[str, str])


# Domain types


@dataclass(frozen=True)
class LieAlgebraStructure:
    ring: ScalarRing
    basis: Tuple[str, ...]
    brackets: Mapping[Tuple[int, int], Vector]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def n(self) -> int:
        return (self.dim - 1) // 2

    @property
    def params(self) -> Tuple[str, ...]:
        return self.ring.params

    def bracket_basis(self, i: int, j: int) -> Vector:
        if i == j:
            return (self.ring.zero,) * self.dim
        if i < j:
            return self.brackets.get((i, j), (self.ring.zero,) * self.dim)
        return tuple(-c for c in self.brackets.get((j, i), (self.ring.zero,) * self.dim))

    @cached_property
    def structure_constants(self) -> Tensor:
        """``c[i, j, k]``: e_k-component of [e_i, e_j]."""
        return tensor_from_function(
            self.ring, self.dim, (LOWER, LOWER, UPPER), lambda i, j, k: self.bracket_basis(i, j)[k]
        )

    def bracket(self, x: Vector, y: Vector) -> Vector:
        c = self.structure_constants
        return tuple(multilinear_eval(c, x, y, unit_vector(self.ring, self.dim, k)) for k in range(self.dim))

    def substitute(self, bindings: Mapping[str, RationalLike]) -> "LieAlgebraStructure":
        return LieAlgebraStructure(
            self.ring,
            self.basis,
            {pair: tuple(self.ring.substitute(c, bindings) for c in vec) for pair, vec in self.brackets.items()},
        )


@dataclass(frozen=True)
class PiStructure:
    """phi as (l,u) with ``phi[j, k]`` the e_k-component of phi(e_j)."""

    phi: Tensor
    xi: Tensor
    eta: Tensor
    g: Tensor

    @property
    def dim(self) -> int:
        return self.g.dim

    @cached_property
    def phi_rows(self) -> Tuple[Vector, ...]:
        """phi(e_j) for every basis vector."""
        dim = self.dim
        return tuple(tuple(self.phi[j, k] for k in range(dim)) for j in range(dim))

    def apply_phi(self, x: Vector) -> Vector:
        result = (self.g.ring.zero,) * self.dim
        for j, c in enumerate(x):
            if c:
                result = vec_add(result, vec_scale(c, self.phi_rows[j]))
        return result

    def substitute(self, bindings: Mapping[str, RationalLike]) -> "PiStructure":
        return PiStructure(
            self.phi.substitute(bindings),
            self.xi.substitute(bindings),
            self.eta.substitute(bindings),
            self.g.substitute(bindings),
        )


@dataclass(frozen=True)
class PiManifoldInstance:
    algebra: LieAlgebraStructure
    structure: PiStructure
    g_inv: Tensor
    name: str = ""

    @property
    def ring(self) -> ScalarRing:
        return self.algebra.ring

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def n(self) -> int:
        return self.algebra.n

    @property
    def basis(self) -> Tuple[str, ...]:
        return self.algebra.basis

    @property
    def g(self) -> Tensor:
        return self.structure.g

    @property
    def xi(self) -> Vector:
        return self.structure.xi.entries

    # Frame data

    @cached_property
    def e(self) -> Tuple[Vector, ...]:
        return tuple(unit_vector(self.ring, self.dim, i) for i in range(self.dim))

    @cached_property
    def phi_e(self) -> Tuple[Vector, ...]:
        return self.structure.phi_rows

    @cached_property
    def phi2_e(self) -> Tuple[Vector, ...]:
        return tuple(self.phi(v) for v in self.phi_e)

    @cached_property
    def eta_e(self) -> Tuple[Scalar, ...]:
        return self.structure.eta.entries

    @cached_property
    def horizontal_pairs(self) -> Tuple[Tuple[Vector, Vector, Scalar], ...]:
        """(phi^2 e_a, phi^2 e_b, g^ab) for the nonzero inverse-metric entries."""
        pairs = []
        for a in range(self.dim):
            for b in range(self.dim):
                weight = self.g_inv[a, b]
                if weight:
                    pairs.append((self.phi2_e[a], self.phi2_e[b], weight))
        return tuple(pairs)

    def phi(self, x: Vector) -> Vector:
        return self.structure.apply_phi(x)

    def phi2(self, x: Vector) -> Vector:
        return self.phi(self.phi(x))

    def eta(self, x: Vector) -> Scalar:
        return multilinear_eval(self.structure.eta, x)

    def metric(self, x: Vector, y: Vector) -> Scalar:
        return multilinear_eval(self.structure.g, x, y)

    def bracket(self, x: Vector, y: Vector) -> Vector:
        return self.algebra.bracket(x, y)

    def horizontal_trace(self, form) -> Scalar:
        """Trace ``form(u, v)`` over the horizontal distribution with g^-1."""
        total = self.ring.zero
        for u, v, weight in self.horizontal_pairs:
            value = form(u, v)
            if value:
                total = total + weight * value
        return total

    def substitute(self, bindings: Mapping[str, RationalLike]) -> "PiManifoldInstance":
        return PiManifoldInstance(
            self.algebra.substitute(bindings),
            self.structure.substitute(bindings),
            self.g_inv.substitute(bindings),
            self.name,
        )


# Projectors and associated metric


def project_h(instance: PiManifoldInstance, x: Vector) -> Vector:
    return instance.phi2(x)


def project_v(instance: PiManifoldInstance, x: Vector) -> Vector:
    return vec_scale(instance.eta(x), instance.xi)


def associated_metric(instance: PiManifoldInstance) -> Tensor:
    """g~(x, y) = g(x, phi y) + eta(x) eta(y)."""
    return tensor_from_function(
        instance.ring,
        instance.dim,
        (LOWER, LOWER),
        lambda i, j: instance.metric(instance.e[i], instance.phi_e[j]) + instance.eta_e[i] * instance.eta_e[j],
    )


# Building instances


def _to_matrix(ring: ScalarRing, t: Tensor) -> Matrix:
    return Matrix(t.dim, t.dim, lambda i, j: t[i, j].as_expr())


def inverse_metric(ring: ScalarRing, g: Tensor) -> Tensor:
    """g^-1 over the polynomial ring; the determinant must be a nonzero constant."""
    matrix = _to_matrix(ring, g)
    det = ring.from_sympy(matrix.det())
    if not det or not det.is_ground:
        raise MetricNotInvertibleError(
            f"Metric determinant '{ring.format(det)}' is not a nonzero rational constant"
        )
    inv_det = ring.const(1 / ring.to_fraction(det))
    adjugate = matrix.adjugate()
    return tensor_from_function(
        ring, g.dim, (UPPER, UPPER), lambda i, j: ring.from_sympy(adjugate[i, j]) * inv_det
    )


def build_instance(
    algebra: LieAlgebraStructure,
    structure: PiStructure,
    name: str = "",
) -> PiManifoldInstance:
    if algebra.dim != structure.dim:
        raise DimensionMismatchError(f"Algebra has dimension {algebra.dim} but the structure has {structure.dim}")
    g_inv = inverse_metric(algebra.ring, structure.g)
    return PiManifoldInstance(algebra, structure, g_inv, name)


def _vector_from_mapping(ring: ScalarRing, basis_index: Dict[str, int], values: Mapping[str, str], where: str) -> Vector:
    vec = [ring.zero] * len(basis_index)
    for label, text in values.items():
        if label not in basis_index:
            raise InstanceFormatError(f"Unknown basis label '{label}' in {where}")
        vec[basis_index[label]] = ring.parse(text)
    return tuple(vec)


def structures_from_document(doc: InstanceFile) -> Tuple[LieAlgebraStructure, PiStructure]:
    dim = doc.dimension
    if dim < 1 or dim % 2 == 0:
        raise InstanceFormatError(f"Dimension must be odd (2n+1), got {dim}")
    if len(doc.basis) != dim:
        raise DimensionMismatchError(f"Dimension {dim} but {len(doc.basis)} basis labels")
    if len(set(doc.basis)) != dim:
        raise InstanceFormatError(f"Duplicate basis labels in {doc.basis}")

    ring = ScalarRing(doc.parameters)
    basis_index = {label: i for i, label in enumerate(doc.basis)}

    brackets: Dict[Tuple[int, int], Vector] = {}
    for entry in doc.brackets:
        for label in (entry.left, entry.right):
            if label not in basis_index:
                raise InstanceFormatError(f"Unknown basis label '{label}' in bracket [{entry.left},{entry.right}]")
        i, j = basis_index[entry.left], basis_index[entry.right]
        result = _vector_from_mapping(ring, basis_index, entry.result, f"bracket [{entry.left},{entry.right}]")
        if i == j:
            if any(result):
                raise InstanceFormatError(f"[{entry.left},{entry.left}] must be zero")
            continue
        if i > j:
            i, j = j, i
            result = tuple(-c for c in result)
        if (i, j) in brackets:
            raise InstanceFormatError(f"Bracket of ({doc.basis[i]}, {doc.basis[j]}) given twice")
        brackets[(i, j)] = result

    for label in doc.phi:
        if label not in basis_index:
            raise InstanceFormatError(f"Unknown basis label '{label}' in phi")
    for label in doc.metric:
        if label not in basis_index:
            raise InstanceFormatError(f"Unknown basis label '{label}' in metric")
    phi_columns = [
        _vector_from_mapping(ring, basis_index, doc.phi.get(label, {}), f"phi column {label}") for label in doc.basis
    ]
    metric_rows = [
        _vector_from_mapping(ring, basis_index, doc.metric.get(label, {}), f"metric row {label}") for label in doc.basis
    ]

    phi = tensor_from_function(ring, dim, (LOWER, UPPER), lambda j, k: phi_columns[j][k])
    xi = Tensor(ring, dim, (UPPER,), _vector_from_mapping(ring, basis_index, doc.xi, "xi"))
    eta = Tensor(ring, dim, (LOWER,), _vector_from_mapping(ring, basis_index, doc.eta, "eta"))
    g = tensor_from_function(ring, dim, (LOWER, LOWER), lambda i, j: metric_rows[i][j])

    algebra = LieAlgebraStructure(ring, tuple(doc.basis), brackets)
    return algebra, PiStructure(phi, xi, eta, g)


def parse_instance_document(text: str) -> InstanceFile:
    try:
        return InstanceFile.model_validate_json(text)
    except ValidationError as e:
        raise InstanceFormatError(f"Malformed instance file: {e}") from e


def load_structures(path: Union[str, Path]) -> Tuple[LieAlgebraStructure, PiStructure, str]:
    path = Path(path)
    logger.info(f"[LOAD] Reading instance file '{path}'")
    doc = parse_instance_document(path.read_text(encoding="utf-8"))
    algebra, structure = structures_from_document(doc)
    return algebra, structure, doc.name or path.stem


def load_instance(path: Union[str, Path]) -> PiManifoldInstance:
    algebra, structure, name = load_structures(path)
    return build_instance(algebra, structure, name)


def load_substitution(path: Union[str, Path]) -> Dict[str, str]:
    path = Path(path)
    logger.info(f"[LOAD] Reading substitution file '{path}'")
    try:
        return SubstitutionFile.validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as e:
        raise InstanceFormatError(f"Malformed substitution file: {e}") from e


def instance_to_document(instance: PiManifoldInstance) -> Dict[str, object]:
    """Inverse of the loader, used to ship substituted instances around."""
    ring, basis = instance.ring, instance.basis
    brackets = []
    for (i, j), vec in sorted(instance.algebra.brackets.items()):
        result = {basis[k]: ring.format(c) for k, c in enumerate(vec) if c}
        if result:
            brackets.append({"left": basis[i], "right": basis[j], "result": result})

    def matrix(t: Tensor) -> Dict[str, Dict[str, str]]:
        out = {}
        for i in range(instance.dim):
            column = {basis[k]: ring.format(t[i, k]) for k in range(instance.dim) if t[i, k]}
            if column:
                out[basis[i]] = column
        return out

    def vector(t: Tensor) -> Dict[str, str]:
        return {basis[k]: ring.format(c) for k, c in enumerate(t.entries) if c}

    return {
        "dimension": instance.dim,
        "parameters": list(ring.params),
        "basis": list(basis),
        "brackets": brackets,
        "phi": matrix(instance.structure.phi),
        "xi": vector(instance.structure.xi),
        "eta": vector(instance.structure.eta),
        "metric": matrix(instance.structure.g),
        "name": instance.name or None,
    }


def dump_instance(instance: PiManifoldInstance) -> str:
    return json.dumps(instance_to_document(instance), indent=2)


# Validation


def _jacobi_check(algebra: LieAlgebraStructure) -> CheckResult:
    e = [unit_vector(algebra.ring, algebra.dim, i) for i in range(algebra.dim)]
    for i, j, k in combinations(range(algebra.dim), 3):
        total = vec_add(
            algebra.bracket(algebra.bracket_basis(i, j), e[k]),
            algebra.bracket(algebra.bracket_basis(j, k), e[i]),
            algebra.bracket(algebra.bracket_basis(k, i), e[j]),
        )
        for value in total:
            if value:
                return CheckResult("jacobi", False, witness=(i, j, k), residual=algebra.ring.format(value))
    return CheckResult("jacobi", True)


def _positive_definite_check(ring: ScalarRing, g: Tensor) -> CheckResult:
    matrix = _to_matrix(ring, g)
    for size in range(1, g.dim + 1):
        minor = ring.to_fraction(ring.from_sympy(matrix[:size, :size].det()))
        if minor <= 0:
            return CheckResult(
                "metric-positive-definite", False, witness=(size,), residual=str(minor),
                detail="leading principal minor is not positive",
            )
    return CheckResult("metric-positive-definite", True)


def validate(
    algebra: LieAlgebraStructure,
    structure: PiStructure,
    bindings: Optional[Mapping[str, RationalLike]] = None,
) -> ValidationReport:
    """Check Jacobi, the Pi-structure axioms and the metric compatibilities.

    With ``bindings`` binding every parameter, the metric is also checked
    to be positive definite by leading principal minors.
    """
    if algebra.dim != structure.dim:
        raise DimensionMismatchError(f"Algebra has dimension {algebra.dim} but the structure has {structure.dim}")
    ring, dim = algebra.ring, algebra.dim
    report = ValidationReport("structure")
    report.add(_jacobi_check(algebra))

    phi, g = structure.phi, structure.g
    xi, eta = structure.xi.entries, structure.eta.entries
    e = [unit_vector(ring, dim, i) for i in range(dim)]
    phi_e = structure.phi_rows
    phi2_e = [structure.apply_phi(v) for v in phi_e]
    phi_xi = structure.apply_phi(xi)

    def eta_of(x: Vector) -> Scalar:
        return multilinear_eval(structure.eta, x)

    def g_of(x: Vector, y: Vector) -> Scalar:
        return multilinear_eval(g, x, y)

    report.add(identity_check("phi-xi", ring, dim, 1, lambda k: phi_xi[k]))
    report.add(identity_check(
        "phi-squared", ring, dim, 2,
        lambda j, k: phi2_e[j][k] - (ring.one if j == k else ring.zero) + eta[j] * xi[k],
    ))
    report.add(identity_check("eta-phi", ring, dim, 1, lambda j: eta_of(phi_e[j])))
    report.add(identity_check("eta-xi", ring, 1, 1, lambda _: eta_of(xi) - ring.one))
    report.add(identity_check("trace-phi", ring, 1, 1, lambda _: sum((phi[j, j] for j in range(dim)), ring.zero)))
    report.add(identity_check("metric-symmetric", ring, dim, 2, lambda i, j: g[i, j] - g[j, i]))
    report.add(identity_check(
        "metric-phi-compatible", ring, dim, 2,
        lambda i, j: g_of(phi_e[i], phi_e[j]) - g[i, j] + eta[i] * eta[j],
    ))
    report.add(identity_check("metric-phi-symmetric", ring, dim, 2, lambda i, j: g_of(phi_e[i], e[j]) - g_of(e[i], phi_e[j])))
    report.add(identity_check("eta-is-g-xi", ring, dim, 1, lambda i: g_of(e[i], xi) - eta[i]))
    report.add(identity_check("xi-unit", ring, 1, 1, lambda _: g_of(xi, xi) - ring.one))

    try:
        g_inv = inverse_metric(ring, g)
    except MetricNotInvertibleError as e_inv:
        report.add(CheckResult("metric-invertible", False, detail=str(e_inv)))
    else:
        report.add(identity_check(
            "metric-invertible", ring, dim, 2,
            lambda i, k: sum((g[i, j] * g_inv[j, k] for j in range(dim)), ring.zero) - (ring.one if i == k else ring.zero),
        ))

    if bindings is not None:
        numeric_g = g.substitute(bindings)
        if all(entry.is_ground or not entry for entry in numeric_g.entries):
            report.add(_positive_definite_check(ring, numeric_g))
        else:
            logger.info("[VALIDATE] Substitution leaves the metric symbolic, skipping positive-definiteness")

    level = "info" if report.ok else "warning"
    getattr(logger, level)(f"[VALIDATE] {len(report.checks) - len(report.failures)}/{len(report.checks)} structure checks passed")
    return report


def decomposition_report(instance: PiManifoldInstance) -> ValidationReport:
    """x = x^h + x^v, H orthogonal to V, and phi^2 idempotent with eta o phi^2 = 0."""
    ring, dim = instance.ring, instance.dim
    report = ValidationReport("decomposition")
    report.add(identity_check(
        "h-plus-v", ring, dim, 2,
        lambda i, k: vec_add(project_h(instance, instance.e[i]), project_v(instance, instance.e[i]))[k] - instance.e[i][k],
    ))
    report.add(identity_check(
        "h-orthogonal-v", ring, dim, 2,
        lambda i, j: instance.metric(project_h(instance, instance.e[i]), project_v(instance, instance.e[j])),
    ))
    report.add(identity_check(
        "projector-idempotent", ring, dim, 2,
        lambda i, k: vec_sub(instance.phi2(instance.phi2_e[i]), instance.phi2_e[i])[k],
    ))
    report.add(identity_check("eta-kills-h", ring, dim, 1, lambda i: instance.eta(instance.phi2_e[i])))
    g_tilde = associated_metric(instance)
    report.add(identity_check("associated-metric-symmetric", ring, dim, 2, lambda i, j: g_tilde[i, j] - g_tilde[j, i]))
    report.add(identity_check("associated-metric-xi", ring, 1, 1, lambda _: g_tilde(instance.xi, instance.xi) - ring.one))
    return report
