"""First and second natural connections, their torsions and torsion forms.

A natural connection parallelizes phi, xi, eta and g. Both connections are
stored as Levi-Civita coefficients plus a potential Q, and every torsion
formula is available along three independent paths (connection
coefficients, F, and the Nijenhuis pair) so they can check one another.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Optional, Tuple

import config
from exact_scalar import Scalar
from levi_civita import FundamentalTensor, LeeForms, fundamental_tensor, levi_civita, nabla_tensor
from nijenhuis import ClassPreconditionError, NijenhuisPair, n_phi_phi_witness, nijenhuis_pair
from structure_algebra import PiManifoldInstance, associated_metric
from tensor_core import (
    LOWER,
    UPPER,
    ConnectionCoefficients,
    Tensor,
    Vector,
    eval_vector,
    lower,
    raise_,
    tensor_from_function,
    vec_add,
    vec_scale,
    zero_check,
)
from validation import ValidationReport, identity_check

logger = config.logger

FIRST = "first"
SECOND = "second"
CONNECTION_KINDS = (FIRST, SECOND)

COMPACT_CLASSES = ("U0hat", "F3", "F7")

COVARIANT_3 = (LOWER, LOWER, LOWER)


@dataclass(frozen=True)
class NaturalConnection:
    coefficients: ConnectionCoefficients
    potential_Q: Tensor
    which: str

    def substitute(self, bindings) -> "NaturalConnection":
        return NaturalConnection(
            self.coefficients.substitute(bindings), self.potential_Q.substitute(bindings), self.which
        )


@dataclass(frozen=True)
class TorsionData:
    """T as (1,2) and (0,3) tensors with its three torsion forms."""

    T12: Tensor
    T: Tensor
    t: Tensor
    t_star: Tensor
    t_hat: Tensor

    def substitute(self, bindings) -> "TorsionData":
        return TorsionData(*(getattr(self, name).substitute(bindings) for name in ("T12", "T", "t", "t_star", "t_hat")))


@dataclass(frozen=True)
class CoincidenceResult:
    coincide: bool
    witness: Optional[Tuple[int, int]]
    connections_equal: bool

    @property
    def consistent(self) -> bool:
        return self.coincide == self.connections_equal

    def to_dict(self):
        return {
            "coincide": self.coincide,
            "witness": list(self.witness) if self.witness else None,
            "connections_equal": self.connections_equal,
        }


def _check_kind(which: str) -> None:
    if which not in CONNECTION_KINDS:
        raise ValueError(f"Unknown connection '{which}', expected one of {CONNECTION_KINDS}")


def _covariant(instance: PiManifoldInstance, component: Callable[..., Scalar]) -> Tensor:
    return tensor_from_function(instance.ring, instance.dim, COVARIANT_3, component)


def _vertical_e(instance: PiManifoldInstance) -> Tuple[Vector, ...]:
    return tuple(vec_scale(c, instance.xi) for c in instance.eta_e)


# Connections


def _first_potential(instance: PiManifoldInstance, conn: ConnectionCoefficients) -> Tensor:
    """Q1(x, y) = -1/2 {(nabla_x phi) phi y - (nabla_x eta)(y) xi} - eta(y) nabla_x xi, as (1,2)."""
    ring, dim, e = instance.ring, instance.dim, instance.e
    half = ring.const(Fraction(1, 2))
    nabla_phi = nabla_tensor(conn, instance.structure.phi)
    nabla_eta = nabla_tensor(conn, instance.structure.eta)
    nabla_xi = [conn.apply(e[i], instance.xi) for i in range(dim)]

    values = {}
    for i, j in product(range(dim), repeat=2):
        bracket = vec_add(
            eval_vector(nabla_phi, e[i], instance.phi_e[j]),
            vec_scale(-nabla_eta[i, j], instance.xi),
        )
        values[i, j] = vec_add(vec_scale(-half, bracket), vec_scale(-instance.eta_e[j], nabla_xi[i]))
    return tensor_from_function(ring, dim, (LOWER, LOWER, UPPER), lambda i, j, k: values[i, j][k])


def first_connection(instance: PiManifoldInstance, conn: ConnectionCoefficients) -> NaturalConnection:
    Q12 = _first_potential(instance, conn)
    return NaturalConnection(conn + Q12, lower(Q12, 2, instance.g), FIRST)


def second_connection(
    instance: PiManifoldInstance,
    conn: ConnectionCoefficients,
    pair: NijenhuisPair,
) -> NaturalConnection:
    """Q2 = Q1 - 1/8 {N(phi^2 z, phi^2 y, phi^2 x) + 2 eta(x) N(phi z, phi y, xi)}."""
    ring = instance.ring
    eighth = ring.const(Fraction(1, 8))
    pe, p2e, xi, eta = instance.phi_e, instance.phi2_e, instance.xi, instance.eta_e
    N = pair.N
    Q1 = lower(_first_potential(instance, conn), 2, instance.g)

    def component(x: int, y: int, z: int) -> Scalar:
        correction = N(p2e[z], p2e[y], p2e[x])
        if eta[x]:
            correction = correction + 2 * eta[x] * N(pe[z], pe[y], xi)
        return Q1[x, y, z] - eighth * correction

    Q2 = _covariant(instance, component)
    return NaturalConnection(conn + raise_(Q2, 2, instance.g_inv), Q2, SECOND)


# Torsion


def torsion_forms(T: Tensor, instance: PiManifoldInstance) -> Tuple[Tensor, Tensor, Tensor]:
    """t, t* (horizontal traces of T) and t-hat = T(., xi, xi)."""
    ring, dim, e = instance.ring, instance.dim, instance.e
    t = tensor_from_function(ring, dim, (LOWER,), lambda x: instance.horizontal_trace(lambda u, v: T(e[x], u, v)))
    t_star = tensor_from_function(
        ring, dim, (LOWER,), lambda x: instance.horizontal_trace(lambda u, v: T(e[x], u, instance.phi(v)))
    )
    t_hat = tensor_from_function(ring, dim, (LOWER,), lambda x: T(e[x], instance.xi, instance.xi))
    return t, t_star, t_hat


def make_torsion_data(T: Tensor, instance: PiManifoldInstance) -> TorsionData:
    t, t_star, t_hat = torsion_forms(T, instance)
    return TorsionData(raise_(T, 2, instance.g_inv), T, t, t_star, t_hat)


def torsion(connection: NaturalConnection, instance: PiManifoldInstance) -> TorsionData:
    """T(x, y) = D_x y - D_y x - [x, y] on the left-invariant frame."""
    D = connection.coefficients.gamma
    c = instance.algebra.structure_constants
    T12 = tensor_from_function(
        instance.ring, instance.dim, (LOWER, LOWER, UPPER), lambda i, j, k: D[i, j, k] - D[j, i, k] - c[i, j, k]
    )
    T = lower(T12, 2, instance.g)
    t, t_star, t_hat = torsion_forms(T, instance)
    return TorsionData(T12, T, t, t_star, t_hat)


def torsion_via_F(instance: PiManifoldInstance, F: FundamentalTensor, which: str) -> Tensor:
    _check_kind(which)
    ring = instance.ring
    half, quarter, eighth = (ring.const(Fraction(1, d)) for d in (2, 4, 8))
    e, pe, p2e, xi, eta = instance.e, instance.phi_e, instance.phi2_e, instance.xi, instance.eta_e

    def first(x: int, y: int, z: int) -> Scalar:
        value = -half * (F(e[x], pe[y], e[z]) - F(e[y], pe[x], e[z]))
        if eta[z]:
            value = value - half * eta[z] * (F(e[x], pe[y], xi) - F(e[y], pe[x], xi))
        if eta[y]:
            value = value + eta[y] * F(e[x], pe[z], xi)
        if eta[x]:
            value = value - eta[x] * F(e[y], pe[z], xi)
        return value

    def second(x: int, y: int, z: int) -> Scalar:
        value = first(x, y, z) - eighth * (
            2 * F(p2e[z], p2e[x], pe[y])
            + F(pe[x], p2e[z], p2e[y])
            - F(pe[y], p2e[z], p2e[x])
            - F(p2e[x], p2e[z], pe[y])
            + F(p2e[y], p2e[z], pe[x])
        )
        if eta[x]:
            value = value - quarter * eta[x] * (
                F(p2e[z], pe[y], xi) - F(p2e[y], pe[z], xi) + F(pe[z], p2e[y], xi) - F(pe[y], p2e[z], xi)
            )
        if eta[y]:
            value = value + quarter * eta[y] * (
                F(p2e[z], pe[x], xi) - F(p2e[x], pe[z], xi) + F(pe[z], p2e[x], xi) - F(pe[x], p2e[z], xi)
            )
        return value

    return _covariant(instance, first if which == FIRST else second)


def torsion_via_N(instance: PiManifoldInstance, pair: NijenhuisPair, which: str) -> Tensor:
    """Torsion from N and N-hat evaluated on phi-images of the arguments."""
    _check_kind(which)
    ring = instance.ring
    quarter, eighth = ring.const(Fraction(1, 4)), ring.const(Fraction(1, 8))
    e, pe, p2e, xi, eta = instance.e, instance.phi_e, instance.phi2_e, instance.xi, instance.eta_e
    N, Nh = pair.N, pair.N_hat

    def first(x: int, y: int, z: int) -> Scalar:
        value = -eighth * (
            2 * N(pe[x], pe[y], e[z])
            + N(pe[x], e[z], pe[y])
            - N(pe[y], e[z], pe[x])
            + Nh(pe[x], e[z], pe[y])
            - Nh(pe[y], e[z], pe[x])
        )
        if eta[x]:
            value = value + quarter * eta[x] * (
                2 * N(xi, pe[y], pe[z])
                - N(pe[y], pe[z], xi)
                + 2 * eta[z] * Nh(xi, xi, p2e[y])
                - Nh(pe[y], pe[z], xi)
            )
        if eta[y]:
            value = value - quarter * eta[y] * (
                2 * N(xi, pe[x], pe[z])
                - N(pe[x], pe[z], xi)
                + 2 * eta[z] * Nh(xi, xi, p2e[x])
                - Nh(pe[x], pe[z], xi)
            )
        if eta[z]:
            value = value - eighth * eta[z] * (
                2 * N(pe[x], pe[y], xi)
                + N(pe[x], xi, pe[y])
                - N(pe[y], xi, pe[x])
                + Nh(pe[x], xi, pe[y])
                - Nh(pe[y], xi, pe[x])
            )
        return value

    def second(x: int, y: int, z: int) -> Scalar:
        correction = N(p2e[z], p2e[y], p2e[x]) - N(p2e[z], p2e[x], p2e[y])
        if eta[x]:
            correction = correction + 2 * eta[x] * N(pe[z], pe[y], xi)
        if eta[y]:
            correction = correction - 2 * eta[y] * N(pe[z], pe[x], xi)
        return first(x, y, z) - eighth * correction

    return _covariant(instance, first if which == FIRST else second)


def _split_frame(instance: PiManifoldInstance) -> Tuple[Tuple[Vector, ...], Tuple[Vector, ...], Tuple[Vector, ...]]:
    """x^h, x^v and phi x^h for every basis vector."""
    h = instance.phi2_e
    return h, _vertical_e(instance), tuple(instance.phi(vector) for vector in h)


def torsion_via_N_hv(instance: PiManifoldInstance, pair: NijenhuisPair, which: str) -> Tensor:
    """Torsion from N and N-hat grouped by the horizontal and vertical parts of x, y, z.

    Blocks with two vertical slots among x, y vanish, so six blocks remain:
    hhh, hhv, vhh, hvh, vhv and hvv.
    """
    _check_kind(which)
    ring = instance.ring
    half, quarter, eighth = (ring.const(Fraction(1, d)) for d in (2, 4, 8))
    h, v, ph = _split_frame(instance)
    N, Nh = pair.N, pair.N_hat

    def first(x: int, y: int, z: int) -> Scalar:
        hhh = (
            2 * N(ph[x], ph[y], h[z])
            + N(ph[x], h[z], ph[y]) - N(ph[y], h[z], ph[x])
            + Nh(ph[x], h[z], ph[y]) - Nh(ph[y], h[z], ph[x])
        )
        hhv = (
            2 * N(ph[x], ph[y], v[z])
            + N(ph[x], v[z], ph[y]) - N(ph[y], v[z], ph[x])
            + Nh(ph[x], v[z], ph[y]) - Nh(ph[y], v[z], ph[x])
        )
        vhh = 2 * N(v[x], ph[y], ph[z]) - N(ph[y], ph[z], v[x]) - Nh(ph[y], ph[z], v[x])
        hvh = 2 * N(v[y], ph[x], ph[z]) - N(ph[x], ph[z], v[y]) - Nh(ph[x], ph[z], v[y])
        vhv_hvv = Nh(v[x], v[z], h[y]) - Nh(v[y], v[z], h[x])
        return -eighth * hhh - quarter * hhv + quarter * (vhh - hvh) + half * vhv_hvv

    def second(x: int, y: int, z: int) -> Scalar:
        return (
            first(x, y, z)
            - eighth * (N(h[z], h[y], h[x]) - N(h[z], h[x], h[y]))
            - quarter * (N(ph[z], ph[y], v[x]) - N(ph[z], ph[x], v[y]))
        )

    return _covariant(instance, first if which == FIRST else second)


def u1_torsion(instance: PiManifoldInstance, pair: NijenhuisPair) -> Tensor:
    """Common torsion of both connections on U1, where N(phi., phi.) vanishes.

    Every N term of the h/v formula whose first two slots are phi-images drops
    out (x^h is itself phi(phi x)), and so does the gap between the connections.
    """
    witness = n_phi_phi_witness(pair, instance)
    if witness is not None:
        raise ClassPreconditionError(f"The U1 torsion formula needs N(phi x, phi y) = 0, fails at {witness}")
    ring = instance.ring
    half, quarter, eighth = (ring.const(Fraction(1, d)) for d in (2, 4, 8))
    h, v, ph = _split_frame(instance)
    N, Nh = pair.N, pair.N_hat

    def component(x: int, y: int, z: int) -> Scalar:
        return (
            -eighth * (Nh(ph[x], h[z], ph[y]) - Nh(ph[y], h[z], ph[x]))
            - quarter * (
                N(ph[x], v[z], ph[y]) - N(ph[y], v[z], ph[x])
                + Nh(ph[x], v[z], ph[y]) - Nh(ph[y], v[z], ph[x])
            )
            + quarter * (
                2 * N(v[x], ph[y], ph[z]) - Nh(ph[y], ph[z], v[x])
                - 2 * N(v[y], ph[x], ph[z]) + Nh(ph[x], ph[z], v[y])
            )
            + half * (Nh(v[x], v[z], h[y]) - Nh(v[y], v[z], h[x]))
        )

    return _covariant(instance, component)


# d(eta) and the compact torsion formulas


def d_eta(instance: PiManifoldInstance, conn: ConnectionCoefficients) -> Tensor:
    """d eta(x, y) = (nabla_x eta) y - (nabla_y eta) x."""
    nabla_eta = nabla_tensor(conn, instance.structure.eta)
    return tensor_from_function(
        instance.ring, instance.dim, (LOWER, LOWER), lambda i, j: nabla_eta[i, j] - nabla_eta[j, i]
    )


def check_d_eta(instance: PiManifoldInstance, d_eta_form: Tensor) -> ValidationReport:
    ring, dim, e = instance.ring, instance.dim, instance.e
    report = ValidationReport("d-eta")
    report.add(identity_check(
        "d-eta-bracket", ring, dim, 2, lambda i, j: d_eta_form[i, j] + instance.eta(instance.bracket(e[i], e[j]))
    ))
    report.add(identity_check("d-eta-antisymmetric", ring, dim, 2, lambda i, j: d_eta_form[i, j] + d_eta_form[j, i]))
    return report


def eta_wedge_d_eta(instance: PiManifoldInstance, d_eta_form: Tensor) -> Tensor:
    """eta(x) d eta(y, z) + eta(y) d eta(z, x) + eta(z) d eta(x, y)."""
    eta = instance.eta_e
    return _covariant(
        instance,
        lambda x, y, z: eta[x] * d_eta_form[y, z] + eta[y] * d_eta_form[z, x] + eta[z] * d_eta_form[x, y],
    )


def d_eta_tensor_eta(instance: PiManifoldInstance, d_eta_form: Tensor) -> Tensor:
    eta = instance.eta_e
    return _covariant(instance, lambda x, y, z: d_eta_form[x, y] * eta[z])


def horizontal_nijenhuis(instance: PiManifoldInstance, pair: NijenhuisPair) -> Tensor:
    h = instance.phi2_e
    return _covariant(instance, lambda x, y, z: pair.N(h[x], h[y], h[z]))


def compact_torsion_forms(
    instance: PiManifoldInstance,
    which_class: str,
    which_conn: str,
    F: Optional[FundamentalTensor] = None,
    pair: Optional[NijenhuisPair] = None,
    conn: Optional[ConnectionCoefficients] = None,
) -> Tensor:
    """Torsion on U0hat, F3 or F7 from d eta and the horizontal part of N."""
    _check_kind(which_conn)
    if which_class not in COMPACT_CLASSES:
        raise ValueError(f"No compact torsion formula for '{which_class}', expected one of {COMPACT_CLASSES}")
    # classifier builds on this module
    from classifier import class_condition_holds

    conn = conn or levi_civita(instance)
    F = F or fundamental_tensor(instance, conn)
    pair = pair or nijenhuis_pair(instance, conn)
    if which_class == "U0hat":
        if not pair.N_hat.is_zero():
            raise ClassPreconditionError("The U0hat torsion formula needs N-hat = 0")
    elif not class_condition_holds(which_class, instance, F):
        raise ClassPreconditionError(f"Instance '{instance.name}' is not in {which_class}")

    ring = instance.ring
    half, quarter, eighth = (ring.const(Fraction(1, d)) for d in (2, 4, 8))
    form = d_eta(instance, conn)
    wedge, tensor_eta = eta_wedge_d_eta(instance, form), d_eta_tensor_eta(instance, form)
    Nh = horizontal_nijenhuis(instance, pair)
    cyclic = _covariant(instance, lambda x, y, z: Nh[x, y, z] + Nh[y, z, x] + Nh[z, x, y])

    if which_conn == FIRST:
        vertical_part = (wedge + tensor_eta).scale(half)
        horizontal_part = (cyclic + Nh).scale(-eighth)
    else:
        vertical_part = tensor_eta
        horizontal_part = Nh.scale(-quarter)

    logger.debug(f"[TORSION] Compact {which_conn} torsion for {which_class} on '{instance.name}'")
    if which_class == "F7":
        return vertical_part
    if which_class == "F3":
        return horizontal_part
    return horizontal_part + vertical_part


# Property suites


def torsion_form_relations(
    instance: PiManifoldInstance,
    first: TorsionData,
    second: TorsionData,
    lee: LeeForms,
) -> ValidationReport:
    ring, dim = instance.ring, instance.dim
    half = ring.const(Fraction(1, 2))
    pe, p2e, xi, eta = instance.phi_e, instance.phi2_e, instance.xi, instance.eta_e
    theta, theta_star, omega = lee.theta, lee.theta_star, lee.omega
    theta_xi, theta_star_xi = theta(xi), theta_star(xi)

    report = ValidationReport("torsion-forms")
    report.add(identity_check(
        "t-from-lee", ring, dim, 1, lambda x: first.t[x] - half * theta(pe[x]) + theta_star_xi * eta[x]
    ))
    report.add(identity_check(
        "t-star-from-lee", ring, dim, 1, lambda x: first.t_star[x] - half * theta_star(pe[x]) + theta_xi * eta[x]
    ))
    report.add(identity_check("t-hat-from-omega", ring, dim, 1, lambda x: first.t_hat[x] - omega(pe[x])))
    report.add(identity_check("t-second-equals-first", ring, dim, 1, lambda x: second.t[x] - first.t[x]))
    report.add(identity_check(
        "t-star-second-equals-first", ring, dim, 1, lambda x: second.t_star[x] - first.t_star[x]
    ))
    report.add(identity_check(
        "t-hat-second-equals-first", ring, dim, 1, lambda x: second.t_hat[x] - first.t_hat[x]
    ))
    for label, data in (("first", first), ("second", second)):
        report.add(identity_check(
            f"t-star-phi-{label}", ring, dim, 1, lambda x, d=data: d.t_star(pe[x]) - d.t(p2e[x])
        ))
    report.add(identity_check("t-phi-theta", ring, dim, 1, lambda x: 2 * first.t(pe[x]) - theta(p2e[x])))
    report.add(identity_check("t-phi2-theta", ring, dim, 1, lambda x: 2 * first.t(p2e[x]) - theta(pe[x])))
    report.add(identity_check(
        "t-star-phi-theta-star", ring, dim, 1, lambda x: 2 * first.t_star(pe[x]) - theta_star(p2e[x])
    ))
    report.add(identity_check(
        "t-star-phi2-theta-star", ring, dim, 1, lambda x: 2 * first.t_star(p2e[x]) - theta_star(pe[x])
    ))
    return report


def check_t2_property(T: Tensor, instance: PiManifoldInstance) -> ValidationReport:
    """The eight-term torsion identity that singles out the second connection."""
    ring, dim = instance.ring, instance.dim
    e, pe, xi, eta = instance.e, instance.phi_e, instance.xi, instance.eta_e

    def residual(x: int, y: int, z: int) -> Scalar:
        value = T(e[x], e[y], e[z]) + T(e[y], e[z], e[x]) + T(pe[x], e[y], pe[z]) + T(e[y], pe[z], pe[x])
        if eta[x]:
            value = value - eta[x] * (T(xi, e[y], e[z]) + T(e[y], e[z], xi) - eta[y] * T(xi, e[z], xi))
        if eta[y]:
            value = value - eta[y] * (
                T(e[x], xi, e[z]) + T(xi, e[z], e[x]) + T(pe[x], xi, pe[z]) + T(xi, pe[z], pe[x])
            )
        if eta[z]:
            value = value - eta[z] * (T(e[x], e[y], xi) + T(e[y], xi, e[x]) - eta[y] * T(e[x], xi, xi))
        return value

    report = ValidationReport("t2-property")
    report.add(identity_check("t2-property", ring, dim, 3, residual))
    return report


def check_torsion_antisymmetric(data: TorsionData, instance: PiManifoldInstance) -> ValidationReport:
    T = data.T
    report = ValidationReport("torsion-antisymmetric")
    report.add(identity_check(
        "torsion-antisymmetric", instance.ring, instance.dim, 3, lambda x, y, z: T[x, y, z] + T[y, x, z]
    ))
    return report


def check_naturality(
    instance: PiManifoldInstance,
    connection: NaturalConnection,
    F: FundamentalTensor,
) -> ValidationReport:
    """D phi = D xi = D eta = D g = D g~ = 0, and the two potential identities."""
    ring, dim = instance.ring, instance.dim
    e, pe = instance.e, instance.phi_e
    D, Q = connection.coefficients, connection.potential_Q
    structure = instance.structure

    report = ValidationReport(f"naturality-{connection.which}")
    report.add(zero_check("parallel-phi", nabla_tensor(D, structure.phi)))
    report.add(zero_check("parallel-xi", nabla_tensor(D, structure.xi)))
    report.add(zero_check("parallel-eta", nabla_tensor(D, structure.eta)))
    report.add(zero_check("parallel-g", nabla_tensor(D, structure.g)))
    report.add(zero_check("parallel-associated-metric", nabla_tensor(D, associated_metric(instance))))
    report.add(identity_check(
        "potential-phi", ring, dim, 3,
        lambda x, y, z: Q(e[x], e[y], pe[z]) - Q(e[x], pe[y], e[z]) - F(e[x], e[y], e[z]),
    ))
    report.add(identity_check(
        "potential-antisymmetric", ring, dim, 3, lambda x, y, z: Q[x, y, z] + Q[x, z, y]
    ))
    return report


def coincidence_test(
    instance: PiManifoldInstance,
    pair: NijenhuisPair,
    first: NaturalConnection,
    second: NaturalConnection,
) -> CoincidenceResult:
    """D1 = D2 exactly when N(phi x, phi y) vanishes; both sides are computed."""
    witness = n_phi_phi_witness(pair, instance)
    connections_equal = first.coefficients.gamma == second.coefficients.gamma
    result = CoincidenceResult(witness is None, witness, connections_equal)
    if not result.consistent:
        logger.error(
            f"[COINCIDENCE] N(phi., phi.) verdict {result.coincide} disagrees with D1 == D2 ({connections_equal})"
        )
    return result
