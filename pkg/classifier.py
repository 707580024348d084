"""Membership in the basic classes F1..F11, F0 and the unions U0, U0hat, U1.

Every condition is multilinear, so it is decided exactly by running over all
basis triples. Conditions come in two flavours: the F-side characteristic
conditions and the torsion-side characterizations for either natural
connection.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Tuple

import config
from exact_scalar import Scalar
from levi_civita import FundamentalTensor, LeeForms, lee_forms
from natural_connections import FIRST, SECOND, TorsionData
from nijenhuis import NijenhuisPair, n_phi_phi_witness
from structure_algebra import PiManifoldInstance
from tensor_core import LOWER, tensor_from_function

logger = config.logger

BASIC_CLASSES = tuple(f"F{i}" for i in range(1, 12))
UNIONS = ("U0", "U0hat", "U1")
MIXED_LABEL = "mixed (not a single basic class)"

Clause = Tuple[str, Callable[[int, int, int], Scalar]]


@dataclass(frozen=True)
class ClassVerdict:
    name: str
    holds: bool
    witness: Optional[Tuple[int, ...]] = None
    clause: Optional[str] = None
    residual: Optional[str] = None

    def to_dict(self) -> Dict[str, object]:
        data: Dict[str, object] = {"holds": self.holds}
        if not self.holds:
            data["witness"] = list(self.witness) if self.witness is not None else None
            data["clause"] = self.clause
            data["residual"] = self.residual
        return data


@dataclass
class ClassificationReport:
    F0: bool
    classes: Dict[str, ClassVerdict]
    unions: Dict[str, ClassVerdict] = field(default_factory=dict)
    torsion: Dict[str, Dict[str, ClassVerdict]] = field(default_factory=dict)
    f7_projection: Optional[FundamentalTensor] = None

    @property
    def single_classes(self) -> List[str]:
        return [name for name in BASIC_CLASSES if self.classes[name].holds]

    @property
    def label(self) -> str:
        if self.F0:
            return "F0"
        held = self.single_classes
        if held:
            return ", ".join(held)
        return MIXED_LABEL

    def torsion_agrees(self, which: str) -> bool:
        """Torsion-side verdicts match the F-side ones for every class."""
        verdicts = self.torsion.get(which, {})
        return all(verdicts[name].holds == self.classes[name].holds for name in verdicts)

    def to_dict(self) -> Dict[str, object]:
        data: Dict[str, object] = {
            "classes": {name: self.classes[name].holds for name in BASIC_CLASSES},
            "unions": {name: verdict.holds for name, verdict in self.unions.items()},
            "F0": self.F0,
            "label": self.label,
        }
        failures = {name: verdict.to_dict() for name, verdict in self.classes.items() if not verdict.holds}
        if failures:
            data["witnesses"] = failures
        if self.torsion:
            data["torsion"] = {
                which: {name: verdict.holds for name, verdict in verdicts.items()}
                for which, verdicts in self.torsion.items()
            }
        return data


def _decide(name: str, clauses: List[Clause], instance: PiManifoldInstance) -> ClassVerdict:
    for label, residual in clauses:
        for index in product(range(instance.dim), repeat=3):
            value = residual(*index)
            if value:
                return ClassVerdict(name, False, index, label, instance.ring.format(value))
    return ClassVerdict(name, True)


# F-side conditions


def _F_clauses(instance: PiManifoldInstance, F: FundamentalTensor, lee: LeeForms) -> Dict[str, List[Clause]]:
    ring, dim = instance.ring, instance.dim
    e, pe, p2e, xi, eta = instance.e, instance.phi_e, instance.phi2_e, instance.xi, instance.eta_e
    theta, theta_star, omega = lee.theta, lee.theta_star, lee.omega
    inv_2n = ring.const(Fraction(1, 2 * instance.n))
    g_pp = {(x, y): instance.metric(pe[x], pe[y]) for x, y in product(range(dim), repeat=2)}
    g_xp = {(x, y): instance.metric(e[x], pe[y]) for x, y in product(range(dim), repeat=2)}
    F_xi = {(x, y): F(e[x], e[y], xi) for x, y in product(range(dim), repeat=2)}
    F_phi_xi = {(x, y): F(pe[x], pe[y], xi) for x, y in product(range(dim), repeat=2)}
    theta_xi, theta_star_xi = theta(xi), theta_star(xi)

    def vertical_split(x, y, z):
        return F[x, y, z] - F_xi[x, y] * eta[z] - F_xi[x, z] * eta[y]

    return {
        "F1": [("main", lambda x, y, z: F[x, y, z] - inv_2n * (
            g_pp[x, y] * theta(p2e[z]) + g_pp[x, z] * theta(p2e[y])
            - g_xp[x, y] * theta(pe[z]) - g_xp[x, z] * theta(pe[y])
        ))],
        "F2": [
            ("F(xi,y,z)=0", lambda x, y, z: F(xi, e[y], e[z])),
            ("F(x,xi,z)=0", lambda x, y, z: F(e[x], xi, e[z])),
            ("theta=0", lambda x, y, z: theta[x]),
            ("cyclic-phi", lambda x, y, z: F(e[x], e[y], pe[z]) + F(e[y], e[z], pe[x]) + F(e[z], e[x], pe[y])),
        ],
        "F3": [
            ("F(xi,y,z)=0", lambda x, y, z: F(xi, e[y], e[z])),
            ("F(x,xi,z)=0", lambda x, y, z: F(e[x], xi, e[z])),
            ("cyclic", lambda x, y, z: F[x, y, z] + F[y, z, x] + F[z, x, y]),
        ],
        "F4": [("main", lambda x, y, z: F[x, y, z] - theta_xi * inv_2n * (g_pp[x, y] * eta[z] + g_pp[x, z] * eta[y]))],
        "F5": [("main", lambda x, y, z: F[x, y, z] - theta_star_xi * inv_2n * (
            g_xp[x, y] * eta[z] + g_xp[x, z] * eta[y]
        ))],
        "F6": [
            ("vertical", vertical_split),
            ("symmetric", lambda x, y, z: F_xi[x, y] - F_xi[y, x]),
            ("phi-invariant", lambda x, y, z: F_xi[x, y] - F_phi_xi[x, y]),
            ("theta(xi)=0", lambda x, y, z: theta_xi),
            ("theta*(xi)=0", lambda x, y, z: theta_star_xi),
        ],
        "F7": [
            ("vertical", vertical_split),
            ("antisymmetric", lambda x, y, z: F_xi[x, y] + F_xi[y, x]),
            ("phi-invariant", lambda x, y, z: F_xi[x, y] - F_phi_xi[x, y]),
        ],
        "F8": [
            ("vertical", vertical_split),
            ("symmetric", lambda x, y, z: F_xi[x, y] - F_xi[y, x]),
            ("phi-anti-invariant", lambda x, y, z: F_xi[x, y] + F_phi_xi[x, y]),
        ],
        "F9": [
            ("vertical", vertical_split),
            ("antisymmetric", lambda x, y, z: F_xi[x, y] + F_xi[y, x]),
            ("phi-anti-invariant", lambda x, y, z: F_xi[x, y] + F_phi_xi[x, y]),
        ],
        "F10": [("main", lambda x, y, z: F[x, y, z] + eta[x] * F(xi, pe[y], pe[z]))],
        "F11": [("main", lambda x, y, z: F[x, y, z] - eta[x] * (eta[y] * omega[z] + eta[z] * omega[y]))],
    }


def class_condition(
    name: str,
    instance: PiManifoldInstance,
    F: FundamentalTensor,
    lee: Optional[LeeForms] = None,
) -> ClassVerdict:
    lee = lee or lee_forms(F, instance)
    clauses = _F_clauses(instance, F, lee)
    if name not in clauses:
        raise ValueError(f"Unknown class '{name}', expected one of {BASIC_CLASSES}")
    return _decide(name, clauses[name], instance)


def class_condition_holds(name: str, instance: PiManifoldInstance, F: FundamentalTensor) -> bool:
    return class_condition(name, instance, F).holds


def classify_by_F(instance: PiManifoldInstance, F: FundamentalTensor, lee: LeeForms) -> ClassificationReport:
    clauses = _F_clauses(instance, F, lee)
    verdicts = {name: _decide(name, clauses[name], instance) for name in BASIC_CLASSES}
    report = ClassificationReport(F0=F.tensor.is_zero(), classes=verdicts)
    logger.info(f"[CLASSIFY] '{instance.name}' -> {report.label}")
    return report


def classify_unions(instance: PiManifoldInstance, pair: NijenhuisPair) -> Dict[str, ClassVerdict]:
    def zero_verdict(name: str, tensor) -> ClassVerdict:
        for index, value in zip(tensor.indices(), tensor.entries):
            if value:
                return ClassVerdict(name, False, index, "vanishes", instance.ring.format(value))
        return ClassVerdict(name, True)

    witness = n_phi_phi_witness(pair, instance)
    return {
        "U0": zero_verdict("U0", pair.N),
        "U0hat": zero_verdict("U0hat", pair.N_hat),
        "U1": ClassVerdict("U1", witness is None, witness, None if witness is None else "N(phi x, phi y)=0"),
    }


# Torsion-side characterizations


def _torsion_clauses(instance: PiManifoldInstance, data: TorsionData, which: str) -> Dict[str, List[Clause]]:
    ring = instance.ring
    e, pe, p2e, xi, eta = instance.e, instance.phi_e, instance.phi2_e, instance.xi, instance.eta_e
    T, t, t_star, t_hat = data.T, data.t, data.t_star, data.t_hat
    half = ring.const(Fraction(1, 2))
    inv_2n = ring.const(Fraction(1, 2 * instance.n))
    g = instance.metric

    def T_xi(y, z):
        return T(xi, e[y], e[z])

    def T_phi_xi(y, z):
        return T(xi, pe[y], pe[z])

    def T_to_xi(y, z):
        return T(e[y], e[z], xi)

    def T_phi_to_xi(y, z):
        return T(pe[y], pe[z], xi)

    def vertical_form(sign: int):
        def residual(x, y, z):
            value = T[x, y, z] - eta[x] * T_xi(y, z) + eta[y] * T_xi(x, z)
            if sign:
                value = value - sign * T_to_xi(x, y) * eta[z]
            return value
        return residual

    clauses: Dict[str, List[Clause]] = {
        "F1": [("main", lambda x, y, z: T[x, y, z] + inv_2n * (
            t(p2e[y]) * g(p2e[x], e[z]) - t(p2e[x]) * g(p2e[y], e[z])
            + t(pe[x]) * g(pe[y], e[z]) - t(pe[y]) * g(pe[x], e[z])
        ))],
        "F2": [
            ("T(xi,y,z)=0", lambda x, y, z: T_xi(y, z)),
            ("T(x,y,xi)=0", lambda x, y, z: T_to_xi(x, y)),
            ("phi-anti-invariant", lambda x, y, z: T[x, y, z] + T(pe[x], pe[y], e[z])),
            ("t=0", lambda x, y, z: t[x]),
        ],
        "F3": [
            ("T(xi,y,z)=0", lambda x, y, z: T_xi(y, z)),
            ("T(x,y,xi)=0", lambda x, y, z: T_to_xi(x, y)),
            ("phi-pair", lambda x, y, z: T[x, y, z] + T(e[x], pe[y], pe[z])),
        ],
        "F4": [("main", lambda x, y, z: T[x, y, z] + inv_2n * t_star(xi) * (
            eta[y] * g(pe[x], e[z]) - eta[x] * g(pe[y], e[z])
        ))],
        "F5": [("main", lambda x, y, z: T[x, y, z] + inv_2n * t(xi) * (
            eta[y] * g(p2e[x], e[z]) - eta[x] * g(p2e[y], e[z])
        ))],
        "F6": [
            ("vertical", vertical_form(-1)),
            ("symmetric", lambda x, y, z: T_xi(y, z) - T_xi(z, y)),
            ("phi-invariant", lambda x, y, z: T_xi(y, z) - T_phi_xi(y, z)),
            ("T(y,z,xi)=0", lambda x, y, z: T_to_xi(y, z)),
            ("t(xi)=0", lambda x, y, z: t(xi)),
            ("t*(xi)=0", lambda x, y, z: t_star(xi)),
        ],
        "F8": [
            ("vertical", vertical_form(1)),
            ("antisymmetric", lambda x, y, z: T_xi(y, z) + T_xi(z, y)),
            ("phi-anti-invariant", lambda x, y, z: T_xi(y, z) + T_phi_xi(y, z)),
            ("half-T(y,z,xi)", lambda x, y, z: T_xi(y, z) - half * T_to_xi(y, z)),
            ("half-T(phi y,phi z,xi)", lambda x, y, z: T_xi(y, z) + half * T_phi_to_xi(y, z)),
        ],
        "F9": [
            ("vertical", vertical_form(0)),
            ("symmetric", lambda x, y, z: T_xi(y, z) - T_xi(z, y)),
            ("phi-anti-invariant", lambda x, y, z: T_xi(y, z) + T_phi_xi(y, z)),
        ],
        "F10": [
            ("vertical", vertical_form(0)),
            ("antisymmetric", lambda x, y, z: T_xi(y, z) + T_xi(z, y)),
            ("phi-anti-invariant", lambda x, y, z: T_xi(y, z) + T_phi_xi(y, z)),
        ],
        "F11": [("main", lambda x, y, z: T[x, y, z] - (eta[y] * t_hat[x] - eta[x] * t_hat[y]) * eta[z])],
    }
    if which == FIRST:
        # on H, F(x,y,z) = -{T(x,phi y,z) - T(phi y,z,x) + T(z,x,phi y)} for the first connection
        def recovered_F(x, y, z):
            return -(T(p2e[x], pe[y], p2e[z]) - T(pe[y], p2e[z], p2e[x]) + T(p2e[z], p2e[x], pe[y]))

        clauses["F3"] = [
            ("T(xi,y,z)=0", lambda x, y, z: T_xi(y, z)),
            ("T(x,y,xi)=0", lambda x, y, z: T_to_xi(x, y)),
            ("cyclic-recovered-F", lambda x, y, z: recovered_F(x, y, z) + recovered_F(y, z, x) + recovered_F(z, x, y)),
        ]
        clauses["F7"] = [
            ("vertical", vertical_form(1)),
            ("antisymmetric", lambda x, y, z: T_xi(y, z) + T_xi(z, y)),
            ("phi-invariant", lambda x, y, z: T_xi(y, z) - T_phi_xi(y, z)),
            ("half-T(y,z,xi)", lambda x, y, z: T_xi(y, z) - half * T_to_xi(y, z)),
            ("half-T(phi y,phi z,xi)", lambda x, y, z: T_xi(y, z) - half * T_phi_to_xi(y, z)),
        ]
    else:
        clauses["F7"] = [
            ("vertical", vertical_form(1)),
            ("antisymmetric", lambda x, y, z: T_xi(y, z) + T_xi(z, y)),
            ("phi-invariant", lambda x, y, z: T_xi(y, z) - T_phi_xi(y, z)),
            ("T(y,z,xi)=T(phi y,phi z,xi)", lambda x, y, z: T_to_xi(y, z) - T_phi_to_xi(y, z)),
        ]
    return clauses


def characterize_by_torsion(instance: PiManifoldInstance, data: TorsionData, which: str) -> Dict[str, ClassVerdict]:
    if which not in (FIRST, SECOND):
        raise ValueError(f"Unknown connection '{which}'")
    clauses = _torsion_clauses(instance, data, which)
    return {name: _decide(name, clauses[name], instance) for name in BASIC_CLASSES}


def f7_projection(instance: PiManifoldInstance, F: FundamentalTensor) -> FundamentalTensor:
    """Component of F in F7."""
    ring = instance.ring
    quarter = ring.const(Fraction(1, 4))
    pe, p2e, xi, eta = instance.phi_e, instance.phi2_e, instance.xi, instance.eta_e

    def skew_part(x: int, y: int) -> Scalar:
        return F(p2e[x], p2e[y], xi) - F(p2e[y], p2e[x], xi) + F(pe[x], pe[y], xi) - F(pe[y], pe[x], xi)

    def component(x: int, y: int, z: int) -> Scalar:
        return quarter * (skew_part(x, y) * eta[z] + skew_part(x, z) * eta[y])

    return FundamentalTensor(tensor_from_function(ring, instance.dim, (LOWER, LOWER, LOWER), component))
