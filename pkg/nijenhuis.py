"""Nijenhuis tensor N, associated Nijenhuis tensor N-hat and their relation to F."""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Tuple

import config
from levi_civita import FundamentalTensor, nabla_tensor
from structure_algebra import PiManifoldInstance
from tensor_core import (
    LOWER,
    ConnectionCoefficients,
    Tensor,
    eval_vector,
    lower,
    raise_,
    tensor_from_function,
    vec_scale,
    vec_sub,
)
from validation import ValidationReport, identity_check

logger = config.logger

U0 = "U0"
U0_HAT = "U0hat"


class ClassPreconditionError(ValueError):
    """Raised when a formula valid only on a subclass is applied outside it."""


@dataclass(frozen=True)
class NijenhuisPair:
    """N (antisymmetric) and N-hat (symmetric) as (1,2) tensors and their (0,3) lowerings."""

    N12: Tensor
    N_hat12: Tensor
    N: Tensor
    N_hat: Tensor

    @classmethod
    def from_vector_valued(cls, N12: Tensor, N_hat12: Tensor, g: Tensor) -> "NijenhuisPair":
        return cls(N12, N_hat12, lower(N12, 2, g), lower(N_hat12, 2, g))

    @classmethod
    def from_lowered(cls, N: Tensor, N_hat: Tensor, g_inv: Tensor) -> "NijenhuisPair":
        return cls(raise_(N, 2, g_inv), raise_(N_hat, 2, g_inv), N, N_hat)

    def substitute(self, bindings) -> "NijenhuisPair":
        return NijenhuisPair(
            self.N12.substitute(bindings),
            self.N_hat12.substitute(bindings),
            self.N.substitute(bindings),
            self.N_hat.substitute(bindings),
        )


def nijenhuis_pair(instance: PiManifoldInstance, conn: ConnectionCoefficients) -> NijenhuisPair:
    """N and N-hat straight from the covariant derivatives of phi and eta."""
    dim, e = instance.dim, instance.e
    nabla_phi = nabla_tensor(conn, instance.structure.phi)
    nabla_eta = nabla_tensor(conn, instance.structure.eta)

    # A(x, y) = (nabla_{phi x} phi) y - phi (nabla_x phi) y - (nabla_x eta)(y) xi
    half_terms = {}
    for i, j in product(range(dim), repeat=2):
        first = eval_vector(nabla_phi, instance.phi_e[i], e[j])
        second = instance.phi(eval_vector(nabla_phi, e[i], e[j]))
        third = vec_scale(nabla_eta[i, j], instance.xi)
        half_terms[i, j] = vec_sub(vec_sub(first, second), third)

    N12 = tensor_from_function(
        instance.ring, dim, nabla_phi.valence, lambda i, j, k: half_terms[i, j][k] - half_terms[j, i][k]
    )
    N_hat12 = tensor_from_function(
        instance.ring, dim, nabla_phi.valence, lambda i, j, k: half_terms[i, j][k] + half_terms[j, i][k]
    )
    return NijenhuisPair.from_vector_valued(N12, N_hat12, instance.g)


def _phi_identities(name: str, T: Tensor, instance: PiManifoldInstance, report: ValidationReport) -> None:
    ring, dim = instance.ring, instance.dim
    e, pe, p2e, xi = instance.e, instance.phi_e, instance.phi2_e, instance.xi
    report.add(identity_check(
        f"{name}-h-phi-phi", ring, dim, 3, lambda x, y, z: T(p2e[x], pe[y], pe[z]) + T(p2e[x], p2e[y], p2e[z])
    ))
    report.add(identity_check(
        f"{name}-h-h-h", ring, dim, 3, lambda x, y, z: T(p2e[x], p2e[y], p2e[z]) - T(pe[x], pe[y], p2e[z])
    ))
    report.add(identity_check(
        f"{name}-x-phi-phi", ring, dim, 3, lambda x, y, z: T(e[x], p2e[y], p2e[z]) + T(e[x], pe[y], pe[z])
    ))
    report.add(identity_check(
        f"{name}-phi-phi-z", ring, dim, 3, lambda x, y, z: T(p2e[x], p2e[y], e[z]) - T(pe[x], pe[y], e[z])
    ))
    report.add(identity_check(
        f"{name}-xi-phi-phi", ring, dim, 2, lambda y, z: T(xi, pe[y], pe[z]) + T(xi, p2e[y], p2e[z])
    ))
    report.add(identity_check(
        f"{name}-phi-phi-xi", ring, dim, 2, lambda x, y: T(pe[x], pe[y], xi) - T(p2e[x], p2e[y], xi)
    ))


def check_NN_properties(pair: NijenhuisPair, instance: PiManifoldInstance) -> ValidationReport:
    ring, dim = instance.ring, instance.dim
    N, N_hat = pair.N, pair.N_hat
    report = ValidationReport("nijenhuis-properties")
    report.add(identity_check("N-antisymmetric", ring, dim, 3, lambda x, y, z: N[x, y, z] + N[y, x, z]))
    report.add(identity_check("Nhat-symmetric", ring, dim, 3, lambda x, y, z: N_hat[x, y, z] - N_hat[y, x, z]))
    _phi_identities("N", N, instance, report)
    _phi_identities("Nhat", N_hat, instance, report)
    return report


def NN_from_F(F: FundamentalTensor, instance: PiManifoldInstance) -> NijenhuisPair:
    """N and N-hat assembled from the components of F alone."""
    e, pe, xi, eta = instance.e, instance.phi_e, instance.xi, instance.eta_e

    def parts(x: int, y: int, z: int) -> Tuple:
        a = F(pe[x], e[y], e[z])
        b = F(pe[y], e[x], e[z])
        c = F(e[x], e[y], pe[z])
        d = F(e[y], e[x], pe[z])
        p = F(e[x], pe[y], xi)
        q = F(e[y], pe[x], xi)
        return a, b, c, d, p, q

    cache = {index: parts(*index) for index in product(range(instance.dim), repeat=3)}

    def n_component(x: int, y: int, z: int):
        a, b, c, d, p, q = cache[x, y, z]
        return a - b - c + d + eta[z] * (p - q)

    def n_hat_component(x: int, y: int, z: int):
        a, b, c, d, p, q = cache[x, y, z]
        return a + b - c - d + eta[z] * (p + q)

    valence = (LOWER, LOWER, LOWER)
    N = tensor_from_function(instance.ring, instance.dim, valence, n_component)
    N_hat = tensor_from_function(instance.ring, instance.dim, valence, n_hat_component)
    return NijenhuisPair.from_lowered(N, N_hat, instance.g_inv)


def F_from_NN(pair: NijenhuisPair, instance: PiManifoldInstance) -> FundamentalTensor:
    ring, e, pe, xi, eta = instance.ring, instance.e, instance.phi_e, instance.xi, instance.eta_e
    quarter, half = ring.const(Fraction(1, 4)), ring.const(Fraction(1, 2))
    N, N_hat = pair.N, pair.N_hat

    def component(x: int, y: int, z: int):
        value = quarter * (
            N(pe[x], e[y], e[z]) + N(pe[x], e[z], e[y]) + N_hat(pe[x], e[y], e[z]) + N_hat(pe[x], e[z], e[y])
        )
        if eta[x]:
            value = value - half * eta[x] * (
                N(xi, e[y], pe[z]) + N_hat(xi, e[y], pe[z]) + eta[z] * N_hat(xi, xi, pe[y])
            )
        return value

    return FundamentalTensor(tensor_from_function(ring, instance.dim, (LOWER, LOWER, LOWER), component))


def F_restricted_forms(pair: NijenhuisPair, instance: PiManifoldInstance, which: str) -> FundamentalTensor:
    """F on U0 (where N vanishes) or on U0hat (where N-hat vanishes)."""
    ring, e, pe, xi, eta = instance.ring, instance.e, instance.phi_e, instance.xi, instance.eta_e
    quarter, half = ring.const(Fraction(1, 4)), ring.const(Fraction(1, 2))

    if which == U0:
        if not pair.N.is_zero():
            raise ClassPreconditionError("The U0 form of F needs N = 0")
        N_hat = pair.N_hat

        def component(x: int, y: int, z: int):
            value = quarter * (N_hat(pe[x], e[y], e[z]) + N_hat(pe[x], e[z], e[y]))
            if eta[x]:
                value = value - half * eta[x] * (N_hat(xi, e[y], pe[z]) + eta[z] * N_hat(xi, xi, pe[y]))
            return value

    elif which == U0_HAT:
        if not pair.N_hat.is_zero():
            raise ClassPreconditionError("The U0hat form of F needs N-hat = 0")
        N = pair.N

        def component(x: int, y: int, z: int):
            value = quarter * (N(pe[x], e[y], e[z]) + N(pe[x], e[z], e[y]))
            if eta[x]:
                value = value - half * eta[x] * N(xi, e[y], pe[z])
            return value

    else:
        raise ValueError(f"Unknown union '{which}', expected {U0} or {U0_HAT}")

    logger.debug(f"[NIJENHUIS] Rebuilding F with the {which} form")
    return FundamentalTensor(tensor_from_function(ring, instance.dim, (LOWER, LOWER, LOWER), component))


def n_phi_phi_witness(pair: NijenhuisPair, instance: PiManifoldInstance) -> Optional[Tuple[int, int]]:
    """First basis pair (i, j) with N(phi e_i, phi e_j) != 0, or None."""
    pe, e = instance.phi_e, instance.e
    for i, j in product(range(instance.dim), repeat=2):
        for k in range(instance.dim):
            if pair.N(pe[i], pe[j], e[k]):
                return i, j
    return None
