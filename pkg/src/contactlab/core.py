"""Finite algebraic substrate: subsets as bit vectors, join-semilattices, contacts.

Every element of every structure in this package is a concrete subset of a
finite ground set, encoded as a Python int whose bit ``k`` marks ground point
``k``.  Ints are arbitrary precision, so a single representation covers both
machine-word and wider ground sets.  Widths are owned by the containing
structure; raw masks never travel between structures of different width.

All structures are immutable after construction and all operations are pure,
so values can be shared freely across threads or processes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

Bits = int  # subset of a ground set; bit k <-> ground point k

DEFAULT_WIDTH_CAP = 1024
WIDTH_CAP_ENV = "CONTACTLAB_WIDTH_CAP"


class CapExceededError(ValueError):
    """A requested ground-set width exceeds the configured cap."""


def width_cap() -> int:
    """Ground-width cap; overridable through CONTACTLAB_WIDTH_CAP."""
    raw = os.environ.get(WIDTH_CAP_ENV)
    if raw is None:
        return DEFAULT_WIDTH_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"{WIDTH_CAP_ENV} must be positive, got {raw!r}")
    return cap


def full_mask(width: int) -> Bits:
    return (1 << width) - 1


def iter_bits(mask: Bits) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def is_subset(x: Bits, y: Bits) -> bool:
    return x & ~y == 0


def check_width(mask: Bits, width: int) -> None:
    if mask < 0 or mask >> width:
        raise ValueError(f"bit vector {mask:#x} exceeds width {width}")


@dataclass(frozen=True)
class FreeBooleanAlgebra:
    """Boolean algebra freely generated by ``n`` elements, as a powerset.

    The ground set is the 2**n valuations of the generators; valuation ``k``
    assigns generator ``i`` (1-based) the bit ``n - i`` of ``k``.  Generator
    ``i`` is the set of valuations where its coordinate is 1, its cogenerator
    the bitwise complement.  Freeness amounts to every full product of
    literals, one per coordinate, being a distinct singleton.
    """

    n: int
    width: int
    generators: tuple[Bits, ...]
    cogenerators: tuple[Bits, ...]

    @classmethod
    def build(cls, n: int, cap: int | None = None) -> "FreeBooleanAlgebra":
        if n < 1:
            raise ValueError(f"generator count must be positive, got {n}")
        cap = width_cap() if cap is None else cap
        if 2**n > cap:
            raise CapExceededError(
                f"free algebra on {n} generators needs ground width {2**n}, "
                f"cap is {cap} (override with {WIDTH_CAP_ENV})"
            )
        width = 2**n
        gens = []
        for i in range(1, n + 1):
            mask = 0
            for k in range(width):
                if (k >> (n - i)) & 1:
                    mask |= 1 << k
            gens.append(mask)
        full = full_mask(width)
        ba = cls(n, width, tuple(gens), tuple(full ^ g for g in gens))
        ba._check_free()
        return ba

    @property
    def full(self) -> Bits:
        return full_mask(self.width)

    def complement(self, x: Bits) -> Bits:
        check_width(x, self.width)
        return self.full ^ x

    def literal(self, i: int, j: int) -> Bits:
        """Generator i (1-based) for j == 0, its complement for j == 1."""
        if not 1 <= i <= self.n or j not in (0, 1):
            raise IndexError(f"no literal ({i}, {j}) in a {self.n}-generator algebra")
        return self.generators[i - 1] if j == 0 else self.cogenerators[i - 1]

    def _check_free(self) -> None:
        seen = 0
        for g in range(self.width):
            product = self.full
            for i in range(1, self.n + 1):
                product &= self.literal(i, (g >> (self.n - i)) & 1)
            if product == 0 or product & seen:
                raise AssertionError("full literal products must partition the ground set")
            seen |= product
        if seen != self.full:
            raise AssertionError("full literal products must cover the ground set")


class FiniteJoinSemilattice:
    """Union-closed family of subsets; join is union, 0 is the empty set.

    The carrier is sorted by bit pattern, which makes indices, certificates
    and exports deterministic.  Index 0 is always the empty set and, because
    subset implies numeric <=, the last index is always the maximum element.
    """

    def __init__(self, width: int, carrier: tuple[Bits, ...]):
        if not carrier or carrier[0] != 0:
            raise ValueError("carrier must contain the empty set first")
        if list(carrier) != sorted(set(carrier)):
            raise ValueError("carrier must be strictly sorted by bit pattern")
        check_width(carrier[-1], width)
        self.width = width
        self.carrier = tuple(carrier)
        self.index = {bits: i for i, bits in enumerate(self.carrier)}
        for a in self.carrier:
            for b in self.carrier:
                if a | b not in self.index:
                    raise ValueError(
                        f"carrier not union-closed: {a:#x} | {b:#x} missing"
                    )

    @classmethod
    def from_closed_carrier(
        cls, width: int, carrier: tuple[Bits, ...]
    ) -> "FiniteJoinSemilattice":
        """Carrier already known sorted and union-closed; skips the quadratic
        re-check.  For construction paths that close the carrier themselves."""
        self = object.__new__(cls)
        self.width = width
        self.carrier = carrier
        self.index = {bits: i for i, bits in enumerate(carrier)}
        return self

    @property
    def size(self) -> int:
        return len(self.carrier)

    @property
    def zero(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.carrier) - 1

    def __repr__(self) -> str:
        return f"FiniteJoinSemilattice(width={self.width}, size={self.size})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteJoinSemilattice)
            and self.width == other.width
            and self.carrier == other.carrier
        )

    def __hash__(self) -> int:
        return hash((self.width, self.carrier))

    def join(self, x: int, y: int) -> int:
        return self.index[self.carrier[x] | self.carrier[y]]

    def leq(self, x: int, y: int) -> bool:
        return self.carrier[x] & ~self.carrier[y] == 0

    def meet(self, x: int, y: int) -> int:
        """Greatest common lower bound within the carrier.

        Common lower bounds are exactly the carrier elements inside the bit
        intersection; they are closed under union and contain 0, so their
        union is itself a common lower bound and hence the greatest one.
        """
        cap = self.carrier[x] & self.carrier[y]
        glb = 0
        for bits in self.carrier:
            if bits & ~cap == 0:
                glb |= bits
        return self.index[glb]

    def atoms(self) -> tuple[int, ...]:
        """Indices of minimal nonzero elements."""
        below = self.below_masks
        return tuple(i for i in range(1, self.size) if below[i] == 1 | (1 << i))

    @cached_property
    def leq_masks(self) -> tuple[int, ...]:
        """leq_masks[i] has bit j iff carrier[i] <= carrier[j]."""
        out = []
        for ci in self.carrier:
            mask = 0
            for j, cj in enumerate(self.carrier):
                if ci & ~cj == 0:
                    mask |= 1 << j
            out.append(mask)
        return tuple(out)

    @cached_property
    def below_masks(self) -> tuple[int, ...]:
        """below_masks[j] has bit i iff carrier[i] <= carrier[j]."""
        out = [0] * self.size
        for i, mask in enumerate(self.leq_masks):
            bit = 1 << i
            for j in iter_bits(mask):
                out[j] |= bit
        return tuple(out)


def join_closure(width: int, generators: list[Bits] | tuple[Bits, ...]) -> FiniteJoinSemilattice:
    """Smallest union-closed family containing the generators and the empty set."""
    for g in generators:
        check_width(g, width)
    seen = {0}
    frontier = [0]
    for g in generators:
        if g not in seen:
            seen.add(g)
            frontier.append(g)
    # Worklist closure: every new element is re-joined with every generator.
    while frontier:
        u = frontier.pop()
        for g in generators:
            v = u | g
            if v not in seen:
                seen.add(v)
                frontier.append(v)
    return FiniteJoinSemilattice.from_closed_carrier(width, tuple(sorted(seen)))


@dataclass(frozen=True)
class ContactRelation:
    """Symmetric relation on carrier indices, stored as per-row index masks.

    Bit ``j`` of ``rows[i]`` means index ``i`` is related to index ``j``.
    Validity (symmetry, reflexivity on nonzero, zero-freeness, monotonicity)
    is checked by ``axioms.check_weak_contact``, not assumed here.
    """

    size: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.size:
            raise ValueError(f"expected {self.size} rows, got {len(self.rows)}")

    def related(self, i: int, j: int) -> bool:
        return bool((self.rows[i] >> j) & 1)

    def related_pairs(self) -> list[tuple[int, int]]:
        """Related unordered pairs (i, j) with i < j, ascending."""
        out = []
        for i in range(self.size):
            for j in iter_bits(self.rows[i] >> (i + 1)):
                out.append((i, i + 1 + j))
        return out

    def noncontact_pairs(self) -> list[tuple[int, int]]:
        """Unrelated unordered pairs of distinct nonzero indices, ascending."""
        out = []
        for i in range(1, self.size):
            row = self.rows[i]
            for j in range(i + 1, self.size):
                if not (row >> j) & 1:
                    out.append((i, j))
        return out


def contact_from_related_pairs(
    size: int, pairs: list[tuple[int, int]] | tuple[tuple[int, int], ...]
) -> ContactRelation:
    """Relation with the given nonzero pairs related, plus the nonzero diagonal."""
    rows = [0] * size
    for i in range(1, size):
        rows[i] = 1 << i
    for i, j in pairs:
        if i == 0 or j == 0:
            raise ValueError(f"contact pair ({i}, {j}) involves the zero element")
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    return ContactRelation(size, tuple(rows))


def contact_all_except(
    size: int, noncontact: list[tuple[int, int]] | tuple[tuple[int, int], ...]
) -> ContactRelation:
    """Relation with every nonzero pair related except the given ones."""
    nonzero = full_mask(size) ^ 1
    rows = [0] + [nonzero] * (size - 1)
    for i, j in noncontact:
        if i == 0 or j == 0 or i == j:
            raise ValueError(f"({i}, {j}) is not a removable nonzero pair")
        rows[i] &= ~(1 << j)
        rows[j] &= ~(1 << i)
    return ContactRelation(size, tuple(rows))


def overlap_contact(lattice: FiniteJoinSemilattice) -> ContactRelation:
    """a and b in contact iff some nonzero carrier element lies below both."""
    rows = [0] * lattice.size
    for p in range(1, lattice.size):
        up = lattice.leq_masks[p]
        for i in iter_bits(up):
            rows[i] |= up
    return ContactRelation(lattice.size, tuple(rows))


@dataclass(frozen=True)
class ContactStructure:
    """A finite join-semilattice together with a contact relation on it."""

    lattice: FiniteJoinSemilattice
    contact: ContactRelation

    def __post_init__(self) -> None:
        if self.contact.size != self.lattice.size:
            raise ValueError(
                f"contact on {self.contact.size} indices does not match "
                f"carrier of size {self.lattice.size}"
            )

    @property
    def size(self) -> int:
        return self.lattice.size
