import pytest

from levi_civita import (
    check_connection_properties,
    check_F_properties,
    check_lee_relations,
    check_xi_eta_identities,
    lee_forms,
    nabla_tensor,
)
from tensor_core import LOWER, SlotError, zero_tensor


def test_koszul_components_on_ex_l(ex_l):
    ring = ex_l.instance.ring
    gamma = ex_l.levi_civita.gamma
    e = ex_l.instance.e
    nabla = ex_l.levi_civita.apply

    expected_12 = tuple(ring.parse(v) for v in ("m1", "l1", "0", "l3", "0"))
    assert nabla(e[1], e[2]) == expected_12
    assert nabla(e[3], e[4]) == expected_12
    assert nabla(e[1], e[0]) == tuple(ring.parse(v) for v in ("0", "0", "-m1", "0", "-m2"))
    assert gamma[0, 1, 2] == ring.parse("-m1")
    assert gamma[0, 1, 4] == ring.parse("-m2")


def test_levi_civita_vanishes_on_abelian_group(ex_0):
    assert ex_0.levi_civita.gamma.is_zero()
    assert ex_0.F.tensor.is_zero()


def test_connection_is_torsion_free_and_metric(ex_l, ex_4):
    for analysis in (ex_l, ex_4):
        assert check_connection_properties(analysis.instance, analysis.levi_civita).ok


def test_xi_eta_identities(ex_l):
    report = check_xi_eta_identities(ex_l.instance, ex_l.levi_civita, ex_l.F)
    assert report.ok, report.failures
    nabla_eta = nabla_tensor(ex_l.levi_civita, ex_l.instance.structure.eta)
    assert nabla_eta[1, 2] == ex_l.instance.ring.parse("-m1")


def test_fundamental_tensor_on_ex_l(ex_l):
    ring = ex_l.instance.ring
    m1, m2 = ring.gen("m1"), ring.gen("m2")
    expected = {}
    for index in [(1, 0, 4), (1, 4, 0), (3, 0, 2), (3, 2, 0)]:
        expected[index] = m1
    for index in [(1, 0, 2), (1, 2, 0), (3, 0, 4), (3, 4, 0)]:
        expected[index] = m2
    for index in [(2, 0, 3), (2, 3, 0), (4, 0, 1), (4, 1, 0)]:
        expected[index] = -m1
    for index in [(2, 0, 1), (2, 1, 0), (4, 0, 3), (4, 3, 0)]:
        expected[index] = -m2
    assert dict(ex_l.F.tensor.nonzero_components()) == expected
    assert ex_l.F(ex_l.instance.e[1], ex_l.instance.e[0], ex_l.instance.e[4]) == m1


def test_fundamental_tensor_on_ex_4(ex_4):
    instance = ex_4.instance
    a = instance.ring.gen("a")
    e, pe, eta = instance.e, instance.phi_e, instance.eta_e
    for x in range(5):
        for y in range(5):
            for z in range(5):
                expected = a * (instance.metric(pe[x], pe[y]) * eta[z] + instance.metric(pe[x], pe[z]) * eta[y])
                assert ex_4.F[x, y, z] == expected


def test_F_properties_hold(ex_l, ex_0, ex_4):
    for analysis in (ex_l, ex_0, ex_4):
        report = check_F_properties(analysis.F, analysis.instance)
        assert report.ok, report.failures


def test_lee_forms(ex_l, ex_0, ex_4):
    for analysis in (ex_l, ex_0):
        lee = analysis.lee
        assert lee.theta.is_zero() and lee.theta_star.is_zero() and lee.omega.is_zero()

    ring = ex_4.instance.ring
    lee = ex_4.lee
    assert dict(lee.theta.nonzero_components()) == {(0,): ring.parse("4*a")}
    assert lee.theta_star.is_zero()
    assert lee.omega.is_zero()
    assert check_lee_relations(lee, ex_4.instance).ok


def test_lee_traces_skip_the_xi_direction(ex_l, synthetic_F):
    # theta and theta* trace over H only, so omega does not leak into theta
    instance = ex_l.instance
    lee = lee_forms(synthetic_F("F11"), instance)
    assert dict(lee.omega.nonzero_components()) == {(1,): instance.ring.one}
    assert lee.theta.is_zero()
    assert lee.theta_star.is_zero()
    assert check_lee_relations(lee, instance).ok


def test_nabla_tensor_rank_limit(ex_l):
    ring = ex_l.instance.ring
    with pytest.raises(SlotError):
        nabla_tensor(ex_l.levi_civita, zero_tensor(ring, 5, (LOWER,) * 4))


def test_nabla_of_metric_is_zero(ex_l):
    assert nabla_tensor(ex_l.levi_civita, ex_l.instance.g).is_zero()
