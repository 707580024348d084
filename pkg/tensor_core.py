"""Dense tensors over the fixed left-invariant frame with exact entries.

Slot kinds are ``"l"`` (lower, takes a vector) and ``"u"`` (upper, takes a
covector). Entries are stored row-major, so the first slot varies slowest
and ``t[i, j, k]`` is the component on ``(e_i, e_j, e_k)``.
"""

from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from exact_scalar import RationalLike, Scalar, ScalarRing
from validation import CheckResult

LOWER = "l"
UPPER = "u"

Vector = Tuple[Scalar, ...]
Index = Tuple[int, ...]


class SlotError(ValueError):
    """Raised for slot kind mismatches, bad slot numbers or arity errors."""


@dataclass(frozen=True)
class Tensor:
    ring: ScalarRing
    dim: int
    valence: Tuple[str, ...]
    entries: Tuple[Scalar, ...]

    def __post_init__(self):
        for kind in self.valence:
            if kind not in (LOWER, UPPER):
                raise SlotError(f"Unknown slot kind '{kind}' in valence {self.valence}")
        expected = self.dim ** len(self.valence)
        if len(self.entries) != expected:
            raise SlotError(f"Tensor of valence {self.valence} over dim {self.dim} needs {expected} entries, got {len(self.entries)}")

    @property
    def rank(self) -> int:
        return len(self.valence)

    def offset(self, index: Sequence[int]) -> int:
        if len(index) != self.rank:
            raise SlotError(f"Index {tuple(index)} does not match rank {self.rank}")
        pos = 0
        for i in index:
            if not 0 <= i < self.dim:
                raise SlotError(f"Index {tuple(index)} out of range for dim {self.dim}")
            pos = pos * self.dim + i
        return pos

    def __getitem__(self, index) -> Scalar:
        if not isinstance(index, tuple):
            index = (index,)
        return self.entries[self.offset(index)]

    def __call__(self, *args: Vector) -> Scalar:
        return multilinear_eval(self, *args)

    def _check_compatible(self, other: "Tensor") -> None:
        if self.valence != other.valence or self.dim != other.dim or self.ring != other.ring:
            raise SlotError(f"Incompatible tensors: {self.valence} vs {other.valence}")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check_compatible(other)
        return Tensor(self.ring, self.dim, self.valence, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check_compatible(other)
        return Tensor(self.ring, self.dim, self.valence, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Tensor":
        return Tensor(self.ring, self.dim, self.valence, tuple(-a for a in self.entries))

    def scale(self, factor) -> "Tensor":
        return Tensor(self.ring, self.dim, self.valence, tuple(a * factor for a in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def indices(self):
        return product(range(self.dim), repeat=self.rank)

    def nonzero_components(self) -> List[Tuple[Index, Scalar]]:
        return [(index, value) for index, value in zip(self.indices(), self.entries) if value]

    def first_difference(self, other: "Tensor") -> Optional[Tuple[Index, Scalar]]:
        self._check_compatible(other)
        for index, a, b in zip(self.indices(), self.entries, other.entries):
            if a != b:
                return index, a - b
        return None

    def substitute(self, bindings: Mapping[str, RationalLike]) -> "Tensor":
        parsed = self.ring.parse_bindings(bindings)
        return Tensor(self.ring, self.dim, self.valence, tuple(self.ring.substitute(a, parsed) for a in self.entries))


@dataclass(frozen=True)
class ConnectionCoefficients:
    """``gamma[i, j, k]`` is the e_k-component of D_{e_i} e_j."""

    gamma: Tensor

    def __post_init__(self):
        if self.gamma.valence != (LOWER, LOWER, UPPER):
            raise SlotError(f"Connection coefficients need valence (l, l, u), got {self.gamma.valence}")

    @property
    def ring(self) -> ScalarRing:
        return self.gamma.ring

    @property
    def dim(self) -> int:
        return self.gamma.dim

    def apply(self, x: Vector, y: Vector) -> Vector:
        """D_x y for constant-coefficient (left-invariant) fields."""
        return tuple(self.gamma(x, y, unit_vector(self.ring, self.dim, k)) for k in range(self.dim))

    def __add__(self, potential: Tensor) -> "ConnectionCoefficients":
        return ConnectionCoefficients(self.gamma + potential)

    def __sub__(self, other: "ConnectionCoefficients") -> Tensor:
        return self.gamma - other.gamma

    def substitute(self, bindings: Mapping[str, RationalLike]) -> "ConnectionCoefficients":
        return ConnectionCoefficients(self.gamma.substitute(bindings))


def tensor_from_function(
    ring: ScalarRing,
    dim: int,
    valence: Sequence[str],
    component: Callable[..., Scalar],
) -> Tensor:
    valence = tuple(valence)
    entries = tuple(component(*index) for index in product(range(dim), repeat=len(valence)))
    return Tensor(ring, dim, valence, entries)


def zero_tensor(ring: ScalarRing, dim: int, valence: Sequence[str]) -> Tensor:
    valence = tuple(valence)
    return Tensor(ring, dim, valence, (ring.zero,) * dim ** len(valence))


def tensor_from_components(
    ring: ScalarRing,
    dim: int,
    valence: Sequence[str],
    components: Mapping[Index, Scalar],
) -> Tensor:
    """Sparse constructor, handy for hand-built tensors."""
    base = zero_tensor(ring, dim, valence)
    entries = list(base.entries)
    for index, value in components.items():
        entries[base.offset(index)] = value
    return Tensor(ring, dim, base.valence, tuple(entries))


# Vectors


def unit_vector(ring: ScalarRing, dim: int, i: int) -> Vector:
    return tuple(ring.one if k == i else ring.zero for k in range(dim))


def vec_add(*vectors: Vector) -> Vector:
    return tuple(sum(parts[1:], parts[0]) for parts in zip(*vectors))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v: Vector) -> Vector:
    return tuple(c * a for a in v)


def eval_vector(t: Tensor, *args: Vector) -> Vector:
    """Fill every slot but the last (an upper slot) and read off a vector."""
    if not t.valence or t.valence[-1] != UPPER:
        raise SlotError(f"eval_vector needs a trailing upper slot, got {t.valence}")
    return tuple(multilinear_eval(t, *args, unit_vector(t.ring, t.dim, k)) for k in range(t.dim))


# Core operations


def multilinear_eval(t: Tensor, *args: Vector) -> Scalar:
    if len(args) != t.rank:
        raise SlotError(f"Tensor of valence {t.valence} takes {t.rank} arguments, got {len(args)}")
    if not args:
        return t.entries[0]
    supports = []
    for arg in args:
        if len(arg) != t.dim:
            raise SlotError(f"Argument of length {len(arg)} for dim {t.dim}")
        support = [(i, c) for i, c in enumerate(arg) if c]
        if not support:
            return t.ring.zero
        supports.append(support)

    dim = t.dim
    entries = t.entries
    total = t.ring.zero
    for combo in product(*supports):
        pos = 0
        for i, _ in combo:
            pos = pos * dim + i
        entry = entries[pos]
        if not entry:
            continue
        coeff = combo[0][1]
        for _, c in combo[1:]:
            coeff = coeff * c
        total = total + coeff * entry
    return total


def apply_form(form: Tensor, x: Vector) -> Scalar:
    if form.valence != (LOWER,):
        raise SlotError(f"apply_form needs a (0,1) tensor, got valence {form.valence}")
    return multilinear_eval(form, x)


def contract(t: Tensor, slot_a: int, slot_b: int) -> Tensor:
    """Trace an upper slot against a lower slot."""
    for slot in (slot_a, slot_b):
        if not 0 <= slot < t.rank:
            raise SlotError(f"Slot {slot} out of range for valence {t.valence}")
    if slot_a == slot_b:
        raise SlotError("Cannot contract a slot with itself")
    if {t.valence[slot_a], t.valence[slot_b]} != {UPPER, LOWER}:
        raise SlotError(f"Contraction needs one upper and one lower slot, got {t.valence[slot_a]}/{t.valence[slot_b]}")

    keep = [s for s in range(t.rank) if s not in (slot_a, slot_b)]
    valence = tuple(t.valence[s] for s in keep)

    def component(*index: int) -> Scalar:
        total = t.ring.zero
        full = [0] * t.rank
        for s, i in zip(keep, index):
            full[s] = i
        for m in range(t.dim):
            full[slot_a] = m
            full[slot_b] = m
            total = total + t[tuple(full)]
        return total

    return tensor_from_function(t.ring, t.dim, valence, component)


def _move_index(t: Tensor, slot: int, metric: Tensor, new_kind: str) -> Tensor:
    if not 0 <= slot < t.rank:
        raise SlotError(f"Slot {slot} out of range for valence {t.valence}")
    if metric.rank != 2 or metric.dim != t.dim:
        raise SlotError(f"Metric of valence {metric.valence} does not fit tensor of dim {t.dim}")
    valence = t.valence[:slot] + (new_kind,) + t.valence[slot + 1:]

    def component(*index: int) -> Scalar:
        total = t.ring.zero
        full = list(index)
        a = index[slot]
        for m in range(t.dim):
            weight = metric[m, a]
            if not weight:
                continue
            full[slot] = m
            value = t[tuple(full)]
            if value:
                total = total + value * weight
        return total

    return tensor_from_function(t.ring, t.dim, valence, component)


def lower(t: Tensor, slot: int, g: Tensor) -> Tensor:
    if t.valence[slot] != UPPER:
        raise SlotError(f"Slot {slot} of valence {t.valence} is not upper")
    if g.valence != (LOWER, LOWER):
        raise SlotError(f"Lowering needs a (0,2) metric, got {g.valence}")
    return _move_index(t, slot, g, LOWER)


def raise_(t: Tensor, slot: int, g_inv: Tensor) -> Tensor:
    if t.valence[slot] != LOWER:
        raise SlotError(f"Slot {slot} of valence {t.valence} is not lower")
    if g_inv.valence != (UPPER, UPPER):
        raise SlotError(f"Raising needs a (2,0) inverse metric, got {g_inv.valence}")
    return _move_index(t, slot, g_inv, UPPER)


def permute(t: Tensor, order: Sequence[int]) -> Tensor:
    """``permute(t, order)[i_0, ..] = t[j]`` with ``j[order[s]] = i_s``."""
    order = tuple(order)
    if sorted(order) != list(range(t.rank)):
        raise SlotError(f"{order} is not a permutation of the {t.rank} slots")
    valence = tuple(t.valence[order[s]] for s in range(t.rank))

    def component(*index: int) -> Scalar:
        source = [0] * t.rank
        for s, i in enumerate(index):
            source[order[s]] = i
        return t[tuple(source)]

    return tensor_from_function(t.ring, t.dim, valence, component)


def outer(a: Tensor, b: Tensor) -> Tensor:
    if a.dim != b.dim or a.ring != b.ring:
        raise SlotError("Outer product of tensors over different frames")
    entries = tuple(x * y for x in a.entries for y in b.entries)
    return Tensor(a.ring, a.dim, a.valence + b.valence, entries)


def tensors_equal_check(name: str, a: Tensor, b: Tensor) -> CheckResult:
    difference = a.first_difference(b)
    if difference is None:
        return CheckResult(name, True)
    index, value = difference
    return CheckResult(name, False, witness=index, residual=a.ring.format(value))


def zero_check(name: str, t: Tensor) -> CheckResult:
    for index, value in zip(t.indices(), t.entries):
        if value:
            return CheckResult(name, False, witness=index, residual=t.ring.format(value))
    return CheckResult(name, True)


def serialize_components(t: Tensor) -> List[Dict[str, object]]:
    """Nonzero components as ``{"index": [...], "value": "..."}`` in index order."""
    return [{"index": list(index), "value": t.ring.format(value)} for index, value in t.nonzero_components()]
