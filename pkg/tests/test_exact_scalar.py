from fractions import Fraction

import pytest

from exact_scalar import ScalarParseError, ScalarRing, SubstitutionError, parse_scalar, parse_substitution

PARAMS = ("l1", "l2", "l3", "l4", "m1", "m2")


@pytest.fixture
def ring():
    return ScalarRing(PARAMS)


def test_parse_and_format_canonical(ring):
    assert ring.format(ring.parse("2*m1")) == "2*m1"
    assert ring.format(ring.parse("-m1")) == "-m1"
    assert ring.format(ring.parse("1/2 + l1")) == "l1 + 1/2"
    assert ring.format(ring.parse("(m1 + 1)*(m1 - 1)")) == "m1*m1 - 1"
    assert ring.format(ring.parse("l1 - l1")) == "0"


def test_equal_expressions_share_one_form(ring):
    assert ring.parse("(l1 + m2)*2") == ring.parse("2*m2 + 2*l1")
    assert ring.format(ring.parse("4/6*m1")) == "2/3*m1"


def test_rational_arithmetic_is_exact(ring):
    third = ring.const(Fraction(1, 3))
    assert third + third + third == ring.one
    assert ring.to_fraction(ring.parse("3/4") * ring.parse("4/3")) == 1


@pytest.mark.parametrize("text", ["", "m3", "2**3", "m1^2", "m1/l1", "1/0", "m1 +", "m1 $ 2"])
def test_rejects_expressions_outside_the_grammar(ring, text):
    with pytest.raises(ScalarParseError):
        ring.parse(text)


def test_invalid_parameter_names():
    with pytest.raises(ScalarParseError):
        ScalarRing(["1x"])
    with pytest.raises(ScalarParseError):
        ScalarRing(["a", "a"])


def test_substitute_keeps_unbound_parameters(ring):
    value = ring.parse("2*m1 + l1")
    assert ring.format(ring.substitute(value, {"m1": "1/2"})) == "l1 + 1"
    assert ring.to_fraction(ring.substitute(value, {"m1": "1/2", "l1": "-3"})) == Fraction(-2)


def test_substitute_rejects_unknown_names(ring):
    with pytest.raises(SubstitutionError):
        ring.substitute(ring.parse("m1"), {"x": "1"})
    with pytest.raises(SubstitutionError):
        ring.substitute(ring.parse("m1"), {"m1": "one"})


def test_to_fraction_needs_a_constant(ring):
    with pytest.raises(SubstitutionError):
        ring.to_fraction(ring.parse("m1"))
    assert ring.to_fraction(ring.zero) == 0


def test_free_params(ring):
    values = [ring.parse("m1*l2"), ring.parse("3"), ring.zero]
    assert ring.free_params(values) == ("l2", "m1")


def test_parse_scalar_helper():
    assert parse_scalar("a + a", ["a"]) == ScalarRing(["a"]).parse("2*a")


def test_parse_substitution():
    assert parse_substitution("m1=1, m2=-2/3") == {"m1": "1", "m2": "-2/3"}
    assert parse_substitution("") == {}


@pytest.mark.parametrize("text", ["m1", "m1=1,m1=2", "m1=abc", "1m=2", "m1=1/0"])
def test_parse_substitution_errors(text):
    with pytest.raises(SubstitutionError):
        parse_substitution(text)
