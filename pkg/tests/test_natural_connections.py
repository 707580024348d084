import pytest

from natural_connections import (
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
from levi_civita import FundamentalTensor
from nijenhuis import ClassPreconditionError, NN_from_F, n_phi_phi_witness


def _antisymmetrized(ring, components):
    full = {}
    for (x, y, z), text in components.items():
        value = ring.parse(text)
        full[x, y, z] = value
        full[y, x, z] = -value
    return full


def test_first_connection_on_ex_l(ex_l):
    ring = ex_l.instance.ring
    e = ex_l.instance.e
    D1 = ex_l.first.coefficients
    assert D1.apply(e[1], e[2]) == tuple(ring.parse(v) for v in ("0", "l1", "0", "l3", "0"))


def test_naturality(ex_l, ex_0, ex_4):
    for analysis in (ex_l, ex_0, ex_4):
        for which in (FIRST, SECOND):
            report = check_naturality(analysis.instance, analysis.connection(which), analysis.F)
            assert report.ok, report.failures


def test_torsion_of_first_connection_on_ex_l(ex_l):
    ring = ex_l.instance.ring
    expected = _antisymmetrized(ring, {
        (1, 0, 2): "m1", (0, 2, 1): "m1", (3, 0, 4): "m1", (0, 4, 3): "m1",
        (2, 1, 0): "2*m1", (4, 3, 0): "2*m1",
        (1, 0, 4): "m2", (0, 2, 3): "m2", (3, 0, 2): "m2", (0, 4, 1): "m2",
        (4, 1, 0): "2*m2", (2, 3, 0): "2*m2",
    })
    assert dict(ex_l.torsion_first.T.nonzero_components()) == expected


def test_torsion_of_second_connection_on_ex_l(ex_l):
    ring = ex_l.instance.ring
    expected = _antisymmetrized(ring, {
        (2, 1, 0): "2*m1", (4, 3, 0): "2*m1", (4, 1, 0): "2*m2", (2, 3, 0): "2*m2",
    })
    T2 = ex_l.torsion_second.T
    assert dict(T2.nonzero_components()) == expected
    assert not T2[1, 0, 2]


def test_torsion_forms_vanish_on_ex_l(ex_l):
    for data in (ex_l.torsion_first, ex_l.torsion_second):
        assert data.t.is_zero() and data.t_star.is_zero() and data.t_hat.is_zero()


def test_torsion_on_ex_4(ex_4):
    instance = ex_4.instance
    a = instance.ring.gen("a")
    e, pe, eta = instance.e, instance.phi_e, instance.eta_e
    for data in (ex_4.torsion_first, ex_4.torsion_second):
        for x in range(5):
            for y in range(5):
                for z in range(5):
                    expected = a * (eta[y] * instance.metric(e[x], pe[z]) - eta[x] * instance.metric(e[y], pe[z]))
                    assert data.T[x, y, z] == expected
        assert data.t.is_zero()
        assert data.t_hat.is_zero()
        assert dict(data.t_star.nonzero_components()) == {(0,): instance.ring.parse("-4*a")}


def test_connections_coincide_only_when_N_phi_phi_vanishes(ex_l, ex_4, ex_0):
    assert ex_l.first.coefficients != ex_l.second.coefficients
    assert ex_4.first.coefficients == ex_4.second.coefficients
    assert ex_0.first.coefficients == ex_0.second.coefficients

    result = ex_l.coincidence
    assert not result.coincide
    assert result.witness == (1, 2)
    assert result.consistent
    assert ex_4.coincidence.coincide and ex_4.coincidence.connections_equal


@pytest.mark.parametrize("which", [FIRST, SECOND])
def test_torsion_paths_agree(ex_l, ex_4, which):
    for analysis in (ex_l, ex_4):
        T = analysis.torsion_data(which).T
        assert torsion_via_F(analysis.instance, analysis.F, which) == T
        assert torsion_via_N(analysis.instance, analysis.pair, which) == T
        assert torsion_via_N_hv(analysis.instance, analysis.pair, which) == T
        assert check_torsion_antisymmetric(analysis.torsion_data(which), analysis.instance).ok


@pytest.mark.parametrize(
    "names",
    [
        ("F1",), ("F2",), ("F3",), ("F4",), ("F5",), ("F6",), ("F8",), ("F9",), ("F10",), ("F11",),
        ("F2", "F3"),
        ("F8", "F9", "F10"),
        ("F3", "F8", "F11"),
        ("F1", "F2", "F3", "F4", "F5", "F6", "F8", "F9", "F10", "F11"),
    ],
)
def test_torsion_paths_agree_on_synthetic_F(ex_l, synthetic_F, names):
    instance = ex_l.instance
    parts = [synthetic_F(name).tensor for name in names]
    F = FundamentalTensor(sum(parts[1:], parts[0]))
    pair = NN_from_F(F, instance)
    torsions = {}
    for which in (FIRST, SECOND):
        T = torsion_via_F(instance, F, which)
        assert torsion_via_N(instance, pair, which) == T, which
        assert torsion_via_N_hv(instance, pair, which) == T, which
        torsions[which] = T
    if n_phi_phi_witness(pair, instance) is None:
        assert u1_torsion(instance, pair) == torsions[FIRST] == torsions[SECOND]


def test_torsion_paths_reject_unknown_connection(ex_l):
    with pytest.raises(ValueError):
        torsion_via_F(ex_l.instance, ex_l.F, "third")


def test_u1_torsion(ex_l, ex_4):
    assert u1_torsion(ex_4.instance, ex_4.pair) == ex_4.torsion_first.T
    with pytest.raises(ClassPreconditionError):
        u1_torsion(ex_l.instance, ex_l.pair)


def test_second_torsion_has_the_defining_property(ex_l, ex_4):
    for analysis in (ex_l, ex_4):
        assert check_t2_property(analysis.torsion_second.T, analysis.instance).ok


def test_d_eta(ex_l):
    ring = ex_l.instance.ring
    form = ex_l.d_eta
    assert form[1, 2] == ring.parse("-2*m1")
    assert form[2, 3] == ring.parse("2*m2")
    assert check_d_eta(ex_l.instance, form).ok


def test_compact_forms_on_ex_l(ex_l):
    instance = ex_l.instance
    kwargs = dict(F=ex_l.F, pair=ex_l.pair, conn=ex_l.levi_civita)
    for which_class in ("F7", "U0hat"):
        for which in (FIRST, SECOND):
            assert compact_torsion_forms(instance, which_class, which, **kwargs) == ex_l.torsion_data(which).T
    with pytest.raises(ClassPreconditionError):
        compact_torsion_forms(instance, "F3", FIRST, **kwargs)


def test_compact_F3_form_on_synthetic_F(ex_l, synthetic_F):
    instance = ex_l.instance
    F = synthetic_F("F3")
    pair = NN_from_F(F, instance)
    for which in (FIRST, SECOND):
        compact = compact_torsion_forms(instance, "F3", which, F=F, pair=pair, conn=ex_l.levi_civita)
        assert compact == torsion_via_F(instance, F, which)
    assert compact_torsion_forms(instance, "F3", FIRST, F=F, pair=pair, conn=ex_l.levi_civita) != compact


def test_compact_forms_compute_missing_inputs(ex_l):
    assert compact_torsion_forms(ex_l.instance, "F7", SECOND) == ex_l.torsion_second.T


def test_compact_forms_preconditions(ex_4):
    for which_class in ("U0hat", "F3", "F7"):
        with pytest.raises(ClassPreconditionError):
            compact_torsion_forms(ex_4.instance, which_class, FIRST)
    with pytest.raises(ValueError):
        compact_torsion_forms(ex_4.instance, "F4", FIRST)


def test_torsion_form_relations(ex_l, ex_4):
    for analysis in (ex_l, ex_4):
        report = torsion_form_relations(
            analysis.instance, analysis.torsion_first, analysis.torsion_second, analysis.lee
        )
        assert report.ok, report.failures


def test_substituted_torsion_matches_numeric_pipeline(ex_l, ex_r, ex_r_bindings):
    assert ex_l.torsion_first.T.substitute(ex_r_bindings) == ex_r.torsion_first.T
    assert ex_l.torsion_second.T.substitute(ex_r_bindings) == ex_r.torsion_second.T
