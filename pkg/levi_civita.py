"""Levi-Civita connection, fundamental tensor F and the Lee forms."""

from dataclasses import dataclass
from fractions import Fraction

import config
from exact_scalar import Scalar, ScalarRing
from structure_algebra import PiManifoldInstance
from tensor_core import (
    LOWER,
    UPPER,
    ConnectionCoefficients,
    SlotError,
    Tensor,
    Vector,
    lower,
    raise_,
    tensor_from_function,
    zero_check,
)
from validation import ValidationReport, identity_check

logger = config.logger

MAX_DIFFERENTIATED_RANK = 3


@dataclass(frozen=True)
class FundamentalTensor:
    """F(x, y, z) = g((nabla_x phi) y, z) as a (0,3) tensor."""

    tensor: Tensor

    def __post_init__(self):
        if self.tensor.valence != (LOWER, LOWER, LOWER):
            raise SlotError(f"F must be a (0,3) tensor, got valence {self.tensor.valence}")

    @property
    def ring(self) -> ScalarRing:
        return self.tensor.ring

    def __call__(self, x: Vector, y: Vector, z: Vector) -> Scalar:
        return self.tensor(x, y, z)

    def __getitem__(self, index) -> Scalar:
        return self.tensor[index]

    def substitute(self, bindings) -> "FundamentalTensor":
        return FundamentalTensor(self.tensor.substitute(bindings))


@dataclass(frozen=True)
class LeeForms:
    theta: Tensor
    theta_star: Tensor
    omega: Tensor

    def substitute(self, bindings) -> "LeeForms":
        return LeeForms(
            self.theta.substitute(bindings),
            self.theta_star.substitute(bindings),
            self.omega.substitute(bindings),
        )


def levi_civita(instance: PiManifoldInstance) -> ConnectionCoefficients:
    """Koszul formula for left-invariant fields.

    2 g(nabla_x y, z) = g([x,y],z) - g([x,z],y) - g([y,z],x); derivatives of
    the metric components vanish because they are constants.
    """
    ring = instance.ring
    half = ring.const(Fraction(1, 2))
    c_lowered = lower(instance.algebra.structure_constants, 2, instance.g)
    koszul = tensor_from_function(
        ring,
        instance.dim,
        (LOWER, LOWER, LOWER),
        lambda i, j, k: half * (c_lowered[i, j, k] - c_lowered[i, k, j] - c_lowered[j, k, i]),
    )
    return ConnectionCoefficients(raise_(koszul, 2, instance.g_inv))


def nabla_tensor(conn: ConnectionCoefficients, t: Tensor) -> Tensor:
    """Covariant derivative of a left-invariant tensor; the direction slot comes first."""
    if t.rank > MAX_DIFFERENTIATED_RANK:
        raise SlotError(f"Unsupported valence {t.valence} for covariant differentiation")
    gamma = conn.gamma
    dim = t.dim

    def component(i: int, *index: int) -> Scalar:
        total = t.ring.zero
        for slot, kind in enumerate(t.valence):
            full = list(index)
            for m in range(dim):
                if kind == LOWER:
                    weight = gamma[i, index[slot], m]
                else:
                    weight = gamma[i, m, index[slot]]
                if not weight:
                    continue
                full[slot] = m
                value = t[tuple(full)]
                if not value:
                    continue
                if kind == LOWER:
                    total = total - weight * value
                else:
                    total = total + weight * value
        return total

    return tensor_from_function(t.ring, dim, (LOWER,) + t.valence, component)


def fundamental_tensor(instance: PiManifoldInstance, conn: ConnectionCoefficients) -> FundamentalTensor:
    nabla_phi = nabla_tensor(conn, instance.structure.phi)
    return FundamentalTensor(lower(nabla_phi, 2, instance.g))


def check_F_properties(F: FundamentalTensor, instance: PiManifoldInstance) -> ValidationReport:
    ring, dim = instance.ring, instance.dim
    e, pe, p2e, xi, eta = instance.e, instance.phi_e, instance.phi2_e, instance.xi, instance.eta_e

    report = ValidationReport("F-properties")
    report.add(identity_check("F-symmetric", ring, dim, 3, lambda x, y, z: F(e[x], e[y], e[z]) - F(e[x], e[z], e[y])))
    report.add(identity_check(
        "F-phi-phi", ring, dim, 3,
        lambda x, y, z: F(e[x], e[y], e[z]) + F(e[x], pe[y], pe[z])
        - eta[y] * F(e[x], xi, e[z]) - eta[z] * F(e[x], e[y], xi),
    ))
    report.add(identity_check(
        "F-phi-one-slot", ring, dim, 3,
        lambda x, y, z: F(e[x], e[y], pe[z]) + F(e[x], pe[y], e[z])
        - eta[z] * F(e[x], pe[y], xi) - eta[y] * F(e[x], pe[z], xi),
    ))
    report.add(identity_check(
        "F-phi-horizontal", ring, dim, 3, lambda x, y, z: F(e[x], pe[y], pe[z]) + F(e[x], p2e[y], p2e[z])
    ))
    report.add(identity_check(
        "F-phi-mixed", ring, dim, 3, lambda x, y, z: F(e[x], pe[y], p2e[z]) + F(e[x], p2e[y], pe[z])
    ))
    return report


def lee_forms(F: FundamentalTensor, instance: PiManifoldInstance) -> LeeForms:
    """Traces of F over the horizontal distribution, plus omega = F(xi, xi, .)."""
    ring, dim, e = instance.ring, instance.dim, instance.e
    theta = tensor_from_function(ring, dim, (LOWER,), lambda z: instance.horizontal_trace(lambda u, v: F(u, v, e[z])))
    theta_star = tensor_from_function(
        ring, dim, (LOWER,), lambda z: instance.horizontal_trace(lambda u, v: F(u, instance.phi(v), e[z]))
    )
    omega = tensor_from_function(ring, dim, (LOWER,), lambda z: F(instance.xi, instance.xi, e[z]))
    return LeeForms(theta, theta_star, omega)


def check_lee_relations(lee: LeeForms, instance: PiManifoldInstance) -> ValidationReport:
    ring, dim = instance.ring, instance.dim
    report = ValidationReport("lee-relations")
    report.add(identity_check("omega-xi", ring, 1, 1, lambda _: lee.omega(instance.xi)))
    report.add(identity_check(
        "theta-star-phi", ring, dim, 1,
        lambda x: lee.theta_star(instance.phi_e[x]) + lee.theta(instance.phi2_e[x]),
    ))
    report.add(identity_check(
        "theta-star-phi-squared", ring, dim, 1,
        lambda x: lee.theta_star(instance.phi2_e[x]) - lee.theta(instance.phi_e[x]),
    ))
    return report


def check_xi_eta_identities(
    instance: PiManifoldInstance,
    conn: ConnectionCoefficients,
    F: FundamentalTensor,
) -> ValidationReport:
    ring, dim, e = instance.ring, instance.dim, instance.e
    nabla_eta = nabla_tensor(conn, instance.structure.eta)
    nabla_xi = [conn.apply(e[i], instance.xi) for i in range(dim)]

    report = ValidationReport("xi-eta")
    report.add(identity_check(
        "nabla-eta-is-g-nabla-xi", ring, dim, 2, lambda x, y: nabla_eta[x, y] - instance.metric(nabla_xi[x], e[y])
    ))
    report.add(identity_check("eta-nabla-xi", ring, dim, 1, lambda x: instance.eta(nabla_xi[x])))
    report.add(identity_check(
        "F-phi-xi", ring, dim, 2, lambda x, y: F(e[x], instance.phi_e[y], instance.xi) + nabla_eta[x, y]
    ))
    return report


def check_connection_properties(instance: PiManifoldInstance, conn: ConnectionCoefficients) -> ValidationReport:
    """Torsion-freeness and metric compatibility of the Levi-Civita connection."""
    ring, dim = instance.ring, instance.dim
    gamma, c = conn.gamma, instance.algebra.structure_constants
    report = ValidationReport("levi-civita")
    report.add(identity_check(
        "torsion-free", ring, dim, 3, lambda i, j, k: gamma[i, j, k] - gamma[j, i, k] - c[i, j, k]
    ))
    report.add(zero_check("metric-compatible", nabla_tensor(conn, instance.g)))
    return report
