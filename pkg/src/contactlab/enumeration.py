"""Exhaustive generation of small contact semilattices up to isomorphism.

Join-semilattices with 0 are generated through their posets: posets with a
bottom element are grown one maximal element at a time (every poset arises
this way by deleting a maximal element), deduplicated per size by a canonical
form, and filtered for existence of all binary joins.  Survivors are realized
as union-closed set families through the canonical filter embedding
``a -> {m : a not below m}`` over the non-maximum carrier elements.

Canonical forms minimize the relabelled encoding over permutations that fix
the bottom and respect cheap isomorphism invariants; at the size cap of 7
this exhaustive approach is cheaper than being clever.  Contacts on a fixed
carrier are exactly the overlap relation plus an up-closed set of
non-overlapping pairs, so they are enumerated by filtering pair subsets.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from itertools import permutations, product
from typing import Any, Iterator

from .axioms import AxiomProfile, profile_of
from .core import (
    CapExceededError,
    ContactRelation,
    ContactStructure,
    FiniteJoinSemilattice,
    iter_bits,
    overlap_contact,
)
from .representation import (
    Representation,
    decide_overlap_representable,
    decide_weak_representable,
)
from . import serialize

SIZE_CAP = 7
TABLE_ORACLE_CAP = 5

# A poset on k points is a tuple ``le`` of k up-set masks: bit j of le[i]
# means i <= j.  Index 0 is always the bottom.


def _transpose(le: tuple[int, ...]) -> list[int]:
    down = [0] * len(le)
    for i, mask in enumerate(le):
        for j in iter_bits(mask):
            down[j] |= 1 << i
    return down


def _apply_perm(le: tuple[int, ...], p: list[int]) -> tuple[int, ...]:
    out = [0] * len(le)
    for i, mask in enumerate(le):
        m = 0
        for j in iter_bits(mask):
            m |= 1 << p[j]
        out[p[i]] = m
    return tuple(out)


def _class_respecting_perms(invariants: list[Any]) -> Iterator[list[int]]:
    """Permutations fixing index 0 and permuting only within groups of equal
    invariant; groups receive consecutive new indices in invariant order."""
    k = len(invariants)
    groups: dict[Any, list[int]] = {}
    for i in range(1, k):
        groups.setdefault(invariants[i], []).append(i)
    ordered = [groups[key] for key in sorted(groups)]
    starts = []
    pos = 1
    for g in ordered:
        starts.append(pos)
        pos += len(g)
    for arrangement in product(*(permutations(g) for g in ordered)):
        p = [0] * k
        for start, arranged in zip(starts, arrangement):
            for offset, old in enumerate(arranged):
                p[old] = start + offset
        yield p


def _canonical_le(le: tuple[int, ...]) -> tuple[int, ...]:
    if len(le) == 1:
        return le
    down = _transpose(le)
    inv = [(le[i].bit_count(), down[i].bit_count()) for i in range(len(le))]
    return min(_apply_perm(le, p) for p in _class_respecting_perms(inv))


def _extend_posets(classes: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """All bottomed posets one element larger, canonical, sorted."""
    out: set[tuple[int, ...]] = set()
    for le in classes:
        k = len(le)
        down = _transpose(le)
        for dset in range(1, 1 << k, 2):  # down-sets containing the bottom
            if any(down[x] & ~dset for x in iter_bits(dset)):
                continue
            grown = tuple(
                le[x] | ((1 << k) if (dset >> x) & 1 else 0) for x in range(k)
            ) + (1 << k,)
            out.add(_canonical_le(grown))
    return sorted(out)


def _is_lattice(le: tuple[int, ...]) -> bool:
    k = len(le)
    for x in range(k):
        for y in range(x + 1, k):
            ubs = le[x] & le[y]
            if not ubs:
                return False
            if not any(ubs & ~le[z] == 0 for z in iter_bits(ubs)):
                return False
    return True


def _realize(le: tuple[int, ...]) -> FiniteJoinSemilattice:
    """Union-closed family isomorphic to the lattice, via filter columns."""
    k = len(le)
    top = next(i for i in range(k) if le[i] == 1 << i)
    columns = [m for m in range(k) if m != top]
    images = []
    for a in range(k):
        img = 0
        for j, m in enumerate(columns):
            if not (le[a] >> m) & 1:
                img |= 1 << j
        images.append(img)
    if len(set(images)) != k:
        raise AssertionError("filter embedding must be injective on a lattice")
    return FiniteJoinSemilattice(len(columns), tuple(sorted(images)))


def enumerate_semilattices(
    max_size: int, cap: int = SIZE_CAP
) -> Iterator[FiniteJoinSemilattice]:
    """One join-semilattice with 0 per isomorphism class, sizes ascending."""
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    if max_size > cap:
        raise CapExceededError(f"max_size {max_size} exceeds enumeration cap {cap}")
    classes: list[tuple[int, ...]] = [(1,)]
    for size in range(1, max_size + 1):
        if size > 1:
            classes = _extend_posets(classes)
        for le in classes:
            if _is_lattice(le):
                yield _realize(le)


def enumerate_contacts(lattice: FiniteJoinSemilattice) -> Iterator[ContactRelation]:
    """Every weak contact on the lattice exactly once.

    Reflexivity and monotonicity force all overlapping pairs, so a weak
    contact is the overlap relation plus an up-closed set of non-overlapping
    pairs.  Subsets are emitted in ascending mask order, so the pure overlap
    relation comes first and the all-pairs relation last.
    """
    ov = overlap_contact(lattice)
    size = lattice.size
    optional = [
        (i, j)
        for i in range(1, size)
        for j in range(i + 1, size)
        if not ov.related(i, j)
    ]
    dominators = []
    for x, y in optional:
        mask = 0
        for q, (x1, y1) in enumerate(optional):
            if (lattice.leq(x, x1) and lattice.leq(y, y1)) or (
                lattice.leq(x, y1) and lattice.leq(y, x1)
            ):
                mask |= 1 << q
        dominators.append(mask)
    for chosen in range(1 << len(optional)):
        if any(dominators[p] & ~chosen for p in iter_bits(chosen)):
            continue
        rows = list(ov.rows)
        for p in iter_bits(chosen):
            i, j = optional[p]
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        yield ContactRelation(size, tuple(rows))


# ---------------------------------------------------------------------------
# isomorphism keys


def _canonical_structure_encoding(cs: ContactStructure) -> tuple[int, ...]:
    lattice, rel = cs.lattice, cs.contact
    k = lattice.size
    up = lattice.leq_masks
    down = lattice.below_masks
    inv = [
        (up[i].bit_count(), down[i].bit_count(), rel.rows[i].bit_count())
        for i in range(k)
    ]
    join = lattice.join
    best: tuple[int, ...] | None = None
    for p in _class_respecting_perms(inv):
        q = [0] * k
        for old, new in enumerate(p):
            q[new] = old
        enc = [k]
        for i in range(k):
            oi = q[i]
            for j in range(k):
                enc.append(p[join(oi, q[j])])
        for i in range(k):
            m = 0
            for j in iter_bits(rel.rows[q[i]]):
                m |= 1 << p[j]
            enc.append(m)
        t = tuple(enc)
        if best is None or t < best:
            best = t
    assert best is not None
    return best


def iso_class_key(cs: ContactStructure) -> str:
    """Digest shared exactly by isomorphic contact structures."""
    enc = _canonical_structure_encoding(cs)
    return hashlib.sha256(repr(enc).encode()).hexdigest()


# ---------------------------------------------------------------------------
# corpus classification


@dataclass(frozen=True)
class CorpusRecord:
    """One isomorphism class with its full profile and representability."""

    key: str
    structure: ContactStructure
    profile: AxiomProfile
    provenance: dict[str, int]

    def to_json(self) -> dict[str, Any]:
        return {
            "key": self.key,
            "size": self.structure.size,
            "structure": serialize.structure_to_json(self.structure),
            "profile": self.profile.to_json(),
            "provenance": dict(self.provenance),
        }


def _classify_lattice(
    args: tuple[FiniteJoinSemilattice, int, int, int]
) -> list[CorpusRecord]:
    lattice, d1_plus_max, d2_max, max_size = args
    provenance = {
        "max_size": max_size,
        "d1_plus_max": d1_plus_max,
        "d2_max": d2_max,
    }
    records = []
    seen: set[str] = set()
    for contact in enumerate_contacts(lattice):
        cs = ContactStructure(lattice, contact)
        key = iso_class_key(cs)
        if key in seen:
            continue
        seen.add(key)
        profile = profile_of(cs, d1_plus_max=d1_plus_max, d2_max=d2_max)
        profile = replace(
            profile,
            weak_representable=isinstance(
                decide_weak_representable(cs), Representation
            ),
            overlap_representable=isinstance(
                decide_overlap_representable(cs), Representation
            ),
        )
        records.append(CorpusRecord(key, cs, profile, provenance))
    return records


def classify_corpus(
    max_size: int,
    d1_plus_max: int = 3,
    d2_max: int = 3,
    threads: int = 1,
) -> list[CorpusRecord]:
    """Profile and representability for every class; order is deterministic
    (by carrier size, then isomorphism key) and independent of threads."""
    lattices = list(enumerate_semilattices(max_size))
    jobs = [(lat, d1_plus_max, d2_max, max_size) for lat in lattices]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_classify_lattice, jobs))
    else:
        chunks = [_classify_lattice(job) for job in jobs]
    records = [record for chunk in chunks for record in chunk]
    records.sort(key=lambda r: (r.structure.size, r.key))
    return records


def find_minimal_separators(
    max_size: int, n: int, threads: int = 1
) -> list[CorpusRecord]:
    """Smallest-carrier structures passing d1 and every d2 level below n but
    failing level n.  Empty means no separator exists up to max_size."""
    if n < 2:
        raise ValueError(f"separation level must be at least 2, got {n}")
    records = classify_corpus(max_size, d1_plus_max=1, d2_max=n, threads=threads)
    hits = [
        r
        for r in records
        if r.profile.d1
        and all(r.profile.d2[m] for m in range(n - 1))
        and not r.profile.d2[n - 1]
    ]
    if not hits:
        return []
    smallest = min(r.structure.size for r in hits)
    return [r for r in hits if r.structure.size == smallest]


def corpus_implications(records: list[CorpusRecord]) -> list[dict[str, Any]]:
    """Check every implication the corpus is expected to satisfy.

    Violations are reported, never suppressed; a violation of any of these
    on a valid corpus is a finding about the deciders or the theory and
    fails the run.
    """
    checks = [
        (
            "d1-implies-d1plus",
            lambda r: (not r.profile.d1) or all(r.profile.d1_plus),
        ),
        (
            "d1-implies-d2minus",
            lambda r: (not r.profile.d1) or r.profile.d2_minus,
        ),
        (
            "overlap-and-d1-implies-d2all-and-add",
            lambda r: (not (_has_overlap_contact(r) and r.profile.d1))
            or (r.profile.d2_all and r.profile.additive),
        ),
        (
            "weak-representable-iff-d1",
            lambda r: r.profile.weak_representable == r.profile.d1,
        ),
        (
            "overlap-representable-iff-d1-and-d2all",
            lambda r: r.profile.overlap_representable
            == (r.profile.d1 and r.profile.d2_all),
        ),
    ]
    report = []
    for name, holds in checks:
        violations = [r.key for r in records if not holds(r)]
        report.append(
            {"name": name, "checked": len(records), "violations": violations}
        )
    return report


def _has_overlap_contact(record: CorpusRecord) -> bool:
    return (
        record.structure.contact.rows
        == overlap_contact(record.structure.lattice).rows
    )


# ---------------------------------------------------------------------------
# independent oracle: enumerate raw join tables


def count_semilattice_tables(k: int) -> int:
    """Classes of size-k join-semilattices with 0, found by filtering all
    binary operation tables; independent of the poset-extension generator."""
    if k < 1:
        raise ValueError("size must be positive")
    if k > TABLE_ORACLE_CAP:
        raise CapExceededError(f"table oracle capped at size {TABLE_ORACLE_CAP}")
    if k == 1:
        return 1
    free = [(i, j) for i in range(1, k) for j in range(i + 1, k)]
    canon: set[tuple[int, ...]] = set()
    for values in product(range(k), repeat=len(free)):
        table = [[0] * k for _ in range(k)]
        for x in range(k):
            table[x][x] = x
            table[0][x] = table[x][0] = x
        for (i, j), v in zip(free, values):
            table[i][j] = table[j][i] = v
        ok = True
        for x in range(k):
            for y in range(k):
                for z in range(k):
                    if table[table[x][y]][z] != table[x][table[y][z]]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            continue
        best = min(
            tuple(
                p[table[q[i]][q[j]]]
                for i in range(k)
                for j in range(k)
            )
            for p, q in _labelled_perms(k)
        )
        canon.add(best)
    return len(canon)


def _labelled_perms(k: int) -> Iterator[tuple[list[int], list[int]]]:
    for perm in permutations(range(1, k)):
        p = [0] + list(perm)
        q = [0] * k
        for old, new in enumerate(p):
            q[new] = old
        yield p, q
