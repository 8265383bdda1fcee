"""Explicit witness structures built inside free Boolean algebras.

The centrepiece is ``build_separator(n)``: the join closure of the 2n+2
elements consisting of the n generators, their complements, and the two
parity products, with exactly the generator/complement pairs not in contact.
The resulting structure passes the level-(n-1) separation schema but fails it
at level n, which is what makes the family useful as a certificate corpus.

Parity products come in two normal forms.  The defining form is a product of
selector sums (``parity_products``); expanding by De Morgan gives a sum of
full literal products with the parities swapped when n is even
(``parity_products_sum_form``).  A display of the second form as a product is
a known slip in circulation; both routes are computed here and checked equal,
and the complement identity between the two products is validated at build
time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .axioms import Verdict, Witness, check_weak_contact
from .core import (
    Bits,
    ContactRelation,
    ContactStructure,
    FiniteJoinSemilattice,
    FreeBooleanAlgebra,
    contact_all_except,
    is_subset,
    iter_bits,
    join_closure,
    overlap_contact,
)


class ConstructionError(RuntimeError):
    """A structural fact asserted by a construction failed to verify."""


class OrderPreservationError(ValueError):
    """A map between ordered carriers is not order preserving."""


class ZeroReflectionError(ValueError):
    """A map sends a nonzero element to zero, or zero to nonzero."""


def build_free_algebra(n: int, cap: int | None = None) -> FreeBooleanAlgebra:
    """Free Boolean algebra on n generators over the 2^n valuation points."""
    return FreeBooleanAlgebra.build(n, cap)


def _selector_parities(n: int):
    for f in range(1 << n):
        yield f, f.bit_count() & 1


def parity_products(n: int, cap: int | None = None) -> tuple[Bits, Bits]:
    """(even, odd) parity products in the free algebra on n generators.

    The even product multiplies the selector sums of even-parity selectors,
    the odd product those of odd parity.  They are complements of each other.
    """
    ba = build_free_algebra(n, cap)
    even = odd = ba.full
    for f, parity in _selector_parities(n):
        s = 0
        for i in range(1, n + 1):
            s |= ba.literal(i, (f >> (n - i)) & 1)
        if parity:
            odd &= s
        else:
            even &= s
    return even, odd


def parity_products_sum_form(n: int, cap: int | None = None) -> tuple[Bits, Bits]:
    """The same two elements computed as sums of full literal products.

    For odd n the even product collects even-parity full products; for even n
    the parities swap.  Returned in the same (even, odd) order as
    ``parity_products``.
    """
    ba = build_free_algebra(n, cap)
    even_sum = odd_sum = 0
    for f, parity in _selector_parities(n):
        p = ba.full
        for i in range(1, n + 1):
            p &= ba.literal(i, (f >> (n - i)) & 1)
        if parity:
            odd_sum |= p
        else:
            even_sum |= p
    if n % 2:
        return even_sum, odd_sum
    return odd_sum, even_sum


@dataclass(frozen=True)
class SeparatorStructure:
    """Level-n separator: contact semilattice failing d2 exactly at level n.

    ``literal_pairs[i]`` holds the carrier indices of generator i+1 and its
    complement (the only non-contact pairs); ``even_product`` / ``odd_product``
    index the two parity products.  The carrier lives on the ambient 2^n-point
    ground set, so inclusion into the ambient powerset is literal.
    """

    n: int
    algebra: FreeBooleanAlgebra
    structure: ContactStructure
    literal_pairs: tuple[tuple[int, int], ...]
    even_product: int
    odd_product: int

    @property
    def generator_indices(self) -> tuple[int, ...]:
        flat = [i for pair in self.literal_pairs for i in pair]
        return tuple(sorted(flat + [self.even_product, self.odd_product]))

    @cached_property
    def roles(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for i, (g, cg) in enumerate(self.literal_pairs, start=1):
            out[f"gen_{i}"] = g
            out[f"cogen_{i}"] = cg
        out["even_product"] = self.even_product
        out["odd_product"] = self.odd_product
        return out

    def expected_d2_witness(self) -> Witness:
        """The designated violating instance at level n: the two parity
        products against all n literal pairs."""
        return Witness(
            "d2",
            (("a", self.odd_product), ("b", self.even_product)),
            self.literal_pairs,
        )


def build_separator(n: int, cap: int | None = None) -> SeparatorStructure:
    """Build and eagerly validate the level-n separator (n >= 2).

    Every structural fact the certificates rely on is re-verified here;
    any failure is a hard ConstructionError.
    """
    if n < 2:
        raise ValueError(f"separator needs n >= 2, got {n}")
    ba = build_free_algebra(n, cap)
    even, odd = parity_products(n, cap)
    literals = [(ba.literal(i, 0), ba.literal(i, 1)) for i in range(1, n + 1)]
    gen_masks = [m for pair in literals for m in pair] + [even, odd]

    for i, x in enumerate(gen_masks):
        for y in gen_masks[i + 1 :]:
            if is_subset(x, y) or is_subset(y, x):
                raise ConstructionError(
                    f"designated elements {x:#x} and {y:#x} are comparable"
                )

    lattice = join_closure(ba.width, gen_masks)
    idx = lattice.index
    literal_pairs = tuple((idx[g], idx[cg]) for g, cg in literals)
    contact = contact_all_except(lattice.size, literal_pairs)
    cs = ContactStructure(lattice, contact)

    if set(lattice.atoms()) != {idx[m] for m in gen_masks}:
        raise ConstructionError("designated elements are not exactly the atoms")
    if contact.noncontact_pairs() != sorted(
        tuple(sorted(p)) for p in literal_pairs
    ):
        raise ConstructionError("non-contact pairs differ from the literal pairs")
    for bits in lattice.carrier[1:]:
        if not any(is_subset(m, bits) for m in gen_masks):
            raise ConstructionError(
                f"carrier element {bits:#x} dominates no designated element"
            )
    verdict = check_weak_contact(cs)
    if not verdict.passed:
        raise ConstructionError("separator contact is not a weak contact")

    return SeparatorStructure(n, ba, cs, literal_pairs, idx[even], idx[odd])


def powerset_lattice(width: int) -> FiniteJoinSemilattice:
    """Full powerset of a ground set as a join-semilattice (2^width elements)."""
    if width > 20:
        raise ValueError(f"powerset carrier 2^{width} is unreasonably large")
    return FiniteJoinSemilattice.from_closed_carrier(width, tuple(range(1 << width)))


@dataclass(frozen=True)
class ContactMap:
    """Order-preserving, zero-reflecting assignment between carriers."""

    source: ContactStructure
    target: FiniteJoinSemilattice
    kappa: tuple[int, ...]

    def validate(self) -> None:
        src = self.source.lattice
        if len(self.kappa) != src.size:
            raise ValueError("map must assign every source element")
        for i in range(src.size):
            img = self.kappa[i]
            if (img == 0) != (i == 0):
                raise ZeroReflectionError(
                    f"element {i} maps to target {img}; only 0 may map to 0"
                )
        for x in range(src.size):
            mask = src.leq_masks[x]
            for y in iter_bits(mask):
                if not self.target.leq(self.kappa[x], self.kappa[y]):
                    raise OrderPreservationError(
                        f"{x} <= {y} in the source but images are not ordered"
                    )


def identity_map(cs: ContactStructure) -> ContactMap:
    return ContactMap(cs, cs.lattice, tuple(range(cs.size)))


def inclusion_into_ambient(sep: SeparatorStructure) -> ContactMap:
    """Inclusion of the separator carrier into the ambient powerset algebra.

    The powerset carrier sorted by bit pattern is the identity enumeration,
    so the image index of an element is its own bit mask.
    """
    target = powerset_lattice(sep.algebra.width)
    kappa = tuple(bits for bits in sep.structure.lattice.carrier)
    return ContactMap(sep.structure, target, kappa)


def min_contact_extension(cmap: ContactMap) -> ContactRelation:
    """Least weak contact on the target making the map a contact homomorphism.

    A target pair is related iff it has a common nonzero lower bound, or it
    dominates the images of some related source pair.
    """
    cmap.validate()
    target = cmap.target
    rows = list(overlap_contact(target).rows)
    up = target.leq_masks
    src_rel = cmap.source.contact
    for s1 in range(1, cmap.source.size):
        for s2 in iter_bits(src_rel.rows[s1]):
            u1 = up[cmap.kappa[s1]]
            u2 = up[cmap.kappa[s2]]
            for i in iter_bits(u1):
                rows[i] |= u2
    return ContactRelation(target.size, tuple(rows))


def check_embedding_criterion(cmap: ContactMap) -> Verdict:
    """Pass iff the map is an order embedding and every non-contact source
    pair has images meeting at zero in the target.

    A pass guarantees the minimal extension turns the map into a contact
    embedding (preserving and reflecting contact)."""
    cmap.validate()
    src = cmap.source.lattice
    target = cmap.target
    examined = 0
    for x in range(src.size):
        for y in range(src.size):
            examined += 1
            if (
                target.leq(cmap.kappa[x], cmap.kappa[y])
                and not src.leq(x, y)
            ):
                witness = Witness("order-embedding", (("a", x), ("b", y)))
                return Verdict("embedding-criterion", {}, False, witness, examined)
    for i, j in cmap.source.contact.noncontact_pairs():
        examined += 1
        if target.meet(cmap.kappa[i], cmap.kappa[j]) != 0:
            witness = Witness("meet", (("a", i), ("b", j)), ((i, j),))
            return Verdict("embedding-criterion", {}, False, witness, examined)
    return Verdict("embedding-criterion", {}, True, None, examined)


# ---------------------------------------------------------------------------
# lazy ambient-extension facts, for widths where the full powerset relation
# cannot be materialized


def ambient_related(sep: SeparatorStructure, b1: Bits, b2: Bits) -> bool:
    """Minimal-extension contact on the ambient powerset, evaluated lazily.

    On a full powerset a common nonzero lower bound is a nonempty
    intersection; the second clause scans source elements below each side.
    """
    if b1 == 0 or b2 == 0:
        return False
    if b1 & b2:
        return True
    lattice = sep.structure.lattice
    rel = sep.structure.contact
    m1 = m2 = 0
    for i, bits in enumerate(lattice.carrier):
        if bits and is_subset(bits, b1):
            m1 |= 1 << i
        if bits and is_subset(bits, b2):
            m2 |= 1 << i
    reach = 0
    for i in iter_bits(m1):
        reach |= rel.rows[i]
    return bool(reach & m2)


def ambient_extension_facts(sep: SeparatorStructure) -> dict[str, bool]:
    """Contact-embedding and non-additivity facts about the ambient extension.

    ``preserves``/``reflects``: the inclusion is a contact embedding.
    ``nonadditive``: the odd parity product contacts the even one, which
    splits into ambient atoms none of which contacts the odd product.
    """
    lattice = sep.structure.lattice
    rel = sep.structure.contact
    carrier = lattice.carrier
    preserves = True
    for i in range(1, sep.structure.size):
        for j in iter_bits(rel.rows[i]):
            if not ambient_related(sep, carrier[i], carrier[j]):
                preserves = False
    reflects = all(
        not ambient_related(sep, carrier[i], carrier[j])
        for i, j in rel.noncontact_pairs()
    )
    even_bits = carrier[sep.even_product]
    odd_bits = carrier[sep.odd_product]
    first_atom = even_bits & -even_bits
    rest = even_bits ^ first_atom
    nonadditive = (
        ambient_related(sep, odd_bits, even_bits)
        and not ambient_related(sep, odd_bits, first_atom)
        and not ambient_related(sep, odd_bits, rest)
    )
    return {"preserves": preserves, "reflects": reflects, "nonadditive": nonadditive}
