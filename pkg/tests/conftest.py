import pytest

import config
from levi_civita import FundamentalTensor
from pipeline import PiAnalysis
from tensor_core import LOWER, tensor_from_function

EX_L = config.FIXTURES_DIR / "ex_l.json"
EX_0 = config.FIXTURES_DIR / "ex_0.json"
EX_4 = config.FIXTURES_DIR / "ex_4.json"
EX_R_BINDINGS = {"l1": "1", "l2": "2", "l3": "-1", "l4": "3", "m1": "1", "m2": "-2"}


@pytest.fixture(scope="session")
def ex_l() -> PiAnalysis:
    return PiAnalysis.from_file(EX_L)


@pytest.fixture(scope="session")
def ex_0() -> PiAnalysis:
    return PiAnalysis.from_file(EX_0)


@pytest.fixture(scope="session")
def ex_4() -> PiAnalysis:
    return PiAnalysis.from_file(EX_4)


@pytest.fixture(scope="session")
def ex_r() -> PiAnalysis:
    return PiAnalysis.from_file(EX_L, EX_R_BINDINGS)


@pytest.fixture
def ring_l(ex_l):
    return ex_l.instance.ring


@pytest.fixture(scope="session")
def ex_r_bindings():
    return dict(EX_R_BINDINGS)


def _build_F(instance, component):
    return FundamentalTensor(tensor_from_function(instance.ring, instance.dim, (LOWER, LOWER, LOWER), component))


def _synthetic_F(name, instance):
    """A fundamental tensor lying in exactly one basic class, on the EX-L frame."""
    ring = instance.ring
    e, pe, eta = instance.e, instance.phi_e, instance.eta_e
    one = ring.one

    def h(x, y):
        return instance.metric(pe[x], pe[y])

    def G(x, y):
        return instance.metric(e[x], pe[y])

    def from_matrix(entries):
        return lambda x, y: ring.const(entries.get((x, y), 0))

    def vertical(s):
        return lambda x, y, z: s(x, y) * eta[z] + s(x, z) * eta[y]

    if name == "F1":
        theta = lambda x: one if x == 1 else ring.zero
        phi2_theta = lambda z: ring.zero if eta[z] else theta(z)
        phi_theta = lambda z: sum((pe[z][k] * theta(k) for k in range(instance.dim)), ring.zero)
        quarter = ring.parse("1/4")
        return _build_F(instance, lambda x, y, z: quarter * (
            h(x, y) * phi2_theta(z) + h(x, z) * phi2_theta(y) - G(x, y) * phi_theta(z) - G(x, z) * phi_theta(y)
        ))
    if name in ("F2", "F3"):
        # coordinates along e1+e3, e2+e4 (phi-invariant) and e1-e3 (phi-anti-invariant)
        def coordinate(weights):
            return lambda x: ring.const(weights.get(x, 0))

        plus_1, plus_2 = coordinate({1: 1, 3: 1}), coordinate({2: 1, 4: 1})
        minus_1 = coordinate({1: 1, 3: -1})
        sign = 1 if name == "F2" else -1

        def paired(plus, y, z):
            return plus(y) * minus_1(z) + plus(z) * minus_1(y)

        return _build_F(
            instance, lambda x, y, z: plus_1(x) * paired(plus_2, y, z) + sign * plus_2(x) * paired(plus_1, y, z)
        )
    if name == "F4":
        return _build_F(instance, vertical(h))
    if name == "F5":
        return _build_F(instance, vertical(G))
    if name == "F6":
        return _build_F(instance, vertical(from_matrix({(1, 1): 1, (3, 3): 1, (2, 2): -1, (4, 4): -1})))
    if name == "F8":
        return _build_F(instance, vertical(from_matrix({(1, 1): 1, (3, 3): -1})))
    if name == "F9":
        return _build_F(instance, vertical(from_matrix({(1, 2): 1, (2, 1): -1, (3, 4): -1, (4, 3): 1})))
    if name == "F10":
        k = from_matrix({(1, 1): 1, (3, 3): -1})
        return _build_F(instance, lambda x, y, z: eta[x] * k(y, z))
    if name == "F11":
        omega = lambda x: one if x == 1 else ring.zero
        return _build_F(instance, lambda x, y, z: eta[x] * (eta[y] * omega(z) + eta[z] * omega(y)))
    raise ValueError(name)


@pytest.fixture(scope="session")
def synthetic_F(ex_l):
    """Builder for single-class fundamental tensors on the EX-L frame."""
    return lambda name: _synthetic_F(name, ex_l.instance)
