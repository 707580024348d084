import pytest

from exact_scalar import ScalarRing
from tensor_core import (
    LOWER,
    UPPER,
    ConnectionCoefficients,
    SlotError,
    Tensor,
    contract,
    eval_vector,
    lower,
    multilinear_eval,
    outer,
    permute,
    raise_,
    serialize_components,
    tensor_from_components,
    tensor_from_function,
    unit_vector,
    zero_tensor,
)


@pytest.fixture
def ring():
    return ScalarRing(["a", "b"])


def test_components_are_row_major(ring):
    t = tensor_from_function(ring, 3, (LOWER, LOWER), lambda i, j: ring.const(10 * i + j))
    assert t[2, 1] == ring.const(21)
    assert t.entries[2 * 3 + 1] == t[2, 1]


def test_multilinear_eval_expands_arguments(ring):
    a, b = ring.gen("a"), ring.gen("b")
    g = tensor_from_components(ring, 3, (LOWER, LOWER), {(0, 1): ring.one, (1, 0): ring.one, (2, 2): a})
    x = (ring.one, b, ring.zero)
    y = (ring.zero, ring.one, ring.const(2))
    # g(x, y) = x0*y1 + x1*y0 + a*x2*y2
    assert multilinear_eval(g, x, y) == ring.one
    assert g(unit_vector(ring, 3, 2), y) == 2 * a


def test_multilinear_eval_arity(ring):
    g = zero_tensor(ring, 2, (LOWER, LOWER))
    with pytest.raises(SlotError):
        multilinear_eval(g, unit_vector(ring, 2, 0))
    with pytest.raises(SlotError):
        multilinear_eval(g, (ring.one,), (ring.one,))


def test_contract_identity_gives_dimension(ring):
    identity = tensor_from_function(ring, 5, (LOWER, UPPER), lambda i, j: ring.one if i == j else ring.zero)
    trace = contract(identity, 0, 1)
    assert trace.rank == 0
    assert trace.entries[0] == ring.const(5)


def test_contract_needs_mixed_slots(ring):
    g = zero_tensor(ring, 2, (LOWER, LOWER))
    with pytest.raises(SlotError):
        contract(g, 0, 1)
    with pytest.raises(SlotError):
        contract(g, 0, 0)


def test_lower_then_raise_is_identity(ring):
    a = ring.gen("a")
    g = tensor_from_components(ring, 2, (LOWER, LOWER), {(0, 0): ring.const(2), (1, 1): ring.one})
    g_inv = tensor_from_components(
        ring, 2, (UPPER, UPPER), {(0, 0): ring.parse("1/2"), (1, 1): ring.one}
    )
    t = tensor_from_components(ring, 2, (LOWER, UPPER), {(0, 0): a, (1, 0): ring.one, (0, 1): ring.gen("b")})
    lowered = lower(t, 1, g)
    assert lowered.valence == (LOWER, LOWER)
    assert lowered[0, 0] == 2 * a
    assert raise_(lowered, 1, g_inv) == t


def test_lower_checks_slot_kind(ring):
    g = zero_tensor(ring, 2, (LOWER, LOWER))
    with pytest.raises(SlotError):
        lower(zero_tensor(ring, 2, (LOWER, LOWER)), 0, g)
    with pytest.raises(SlotError):
        raise_(zero_tensor(ring, 2, (UPPER,)), 0, zero_tensor(ring, 2, (UPPER, UPPER)))


def test_permute_reorders_slots(ring):
    t = tensor_from_function(ring, 2, (LOWER, LOWER, UPPER), lambda i, j, k: ring.const(100 * i + 10 * j + k))
    swapped = permute(t, (1, 0, 2))
    assert swapped[0, 1, 1] == t[1, 0, 1]
    assert swapped.valence == (LOWER, LOWER, UPPER)
    with pytest.raises(SlotError):
        permute(t, (0, 0, 1))


def test_outer_product(ring):
    eta = tensor_from_components(ring, 2, (LOWER,), {(0,): ring.gen("a")})
    xi = tensor_from_components(ring, 2, (UPPER,), {(1,): ring.gen("b")})
    product_ = outer(eta, xi)
    assert product_.valence == (LOWER, UPPER)
    assert product_[0, 1] == ring.parse("a*b")
    assert product_.nonzero_components() == [((0, 1), ring.parse("a*b"))]


def test_eval_vector_and_connection_apply(ring):
    gamma = tensor_from_components(ring, 2, (LOWER, LOWER, UPPER), {(0, 1, 0): ring.gen("a")})
    conn = ConnectionCoefficients(gamma)
    e0, e1 = unit_vector(ring, 2, 0), unit_vector(ring, 2, 1)
    assert conn.apply(e0, e1) == (ring.gen("a"), ring.zero)
    assert eval_vector(gamma, e0, e1) == conn.apply(e0, e1)
    with pytest.raises(SlotError):
        ConnectionCoefficients(zero_tensor(ring, 2, (LOWER, LOWER, LOWER)))


def test_substitute_and_serialize(ring):
    t = tensor_from_components(ring, 2, (LOWER, LOWER), {(1, 0): ring.parse("a - 1"), (0, 1): ring.gen("b")})
    assert serialize_components(t) == [{"index": [0, 1], "value": "b"}, {"index": [1, 0], "value": "a - 1"}]
    numeric = t.substitute({"a": "1"})
    assert serialize_components(numeric) == [{"index": [0, 1], "value": "b"}]


def test_rejects_malformed_tensors(ring):
    with pytest.raises(SlotError):
        Tensor(ring, 2, ("x",), (ring.zero, ring.zero))
    with pytest.raises(SlotError):
        Tensor(ring, 2, (LOWER,), (ring.zero,))
    with pytest.raises(SlotError):
        zero_tensor(ring, 2, (LOWER,)) + zero_tensor(ring, 2, (UPPER,))
