"""Structure JSON format, canonical dumps, and DOT export.

The on-disk structure format:

    {
      "version": 1,
      "ground_size": <int>,
      "carrier": [<fixed-width lowercase hex bit mask>, ...],
      "zero": 0,
      "contact": [[i, j], ...],   # related unordered nonzero pairs, i < j;
                                  # reflexive pairs are implied and omitted
      "roles": {"name": index}    # optional named elements
    }

Hex masks keep files diff-friendly and width-agnostic.  Exports are canonical
(sorted keys, sorted pair list, two-space indent, trailing newline), so a
round trip is byte-exact and files can be compared directly.
"""

from __future__ import annotations

import json
import hashlib
import re
from typing import Any

from .core import ContactStructure, FiniteJoinSemilattice, contact_from_related_pairs

SCHEMA_VERSION = 1
_HEX = re.compile(r"^[0-9a-f]+$")


class SchemaError(ValueError):
    """Input file violates the structure or certificate schema."""


def _hex_digits(ground_size: int) -> int:
    return max(1, (ground_size + 3) // 4)


def mask_to_hex(mask: int, ground_size: int) -> str:
    return f"{mask:0{_hex_digits(ground_size)}x}"


def canonical_dumps(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def structure_to_json(
    cs: ContactStructure, roles: dict[str, int] | None = None
) -> dict[str, Any]:
    lattice = cs.lattice
    payload: dict[str, Any] = {
        "version": SCHEMA_VERSION,
        "ground_size": lattice.width,
        "carrier": [mask_to_hex(bits, lattice.width) for bits in lattice.carrier],
        "zero": 0,
        "contact": [list(p) for p in cs.contact.related_pairs()],
    }
    if roles is not None:
        payload["roles"] = {name: roles[name] for name in sorted(roles)}
    return payload


def structure_from_json(data: Any) -> tuple[ContactStructure, dict[str, int]]:
    """Parse and validate; raises SchemaError naming the offending field."""
    if not isinstance(data, dict):
        raise SchemaError("structure payload must be a JSON object")
    version = data.get("version")
    if version != SCHEMA_VERSION:
        raise SchemaError(
            f"version: expected schema version {SCHEMA_VERSION}, got {version!r}"
        )
    ground = data.get("ground_size")
    if not isinstance(ground, int) or ground < 0:
        raise SchemaError(f"ground_size: expected a nonnegative int, got {ground!r}")
    raw_carrier = data.get("carrier")
    if not isinstance(raw_carrier, list) or not raw_carrier:
        raise SchemaError("carrier: expected a nonempty list of hex masks")
    carrier = []
    for pos, item in enumerate(raw_carrier):
        if not isinstance(item, str) or not _HEX.match(item):
            raise SchemaError(f"carrier[{pos}]: expected a lowercase hex string")
        carrier.append(int(item, 16))
    if data.get("zero") != 0:
        raise SchemaError("zero: the empty set is always carrier index 0")
    try:
        lattice = FiniteJoinSemilattice(ground, tuple(carrier))
    except ValueError as exc:
        raise SchemaError(f"carrier: {exc}") from exc

    raw_contact = data.get("contact")
    if not isinstance(raw_contact, list):
        raise SchemaError("contact: expected a list of index pairs")
    pairs: list[tuple[int, int]] = []
    for pos, item in enumerate(raw_contact):
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(v, int) for v in item)
        ):
            raise SchemaError(f"contact[{pos}]: expected a pair of ints")
        i, j = item
        if not (0 < i < lattice.size and 0 < j < lattice.size):
            raise SchemaError(
                f"contact[{pos}]: pair [{i}, {j}] out of range or touching zero"
            )
        if i >= j:
            raise SchemaError(
                f"contact[{pos}]: pair [{i}, {j}] must be ascending and irreflexive"
            )
        pairs.append((i, j))
    if pairs != sorted(set(pairs)):
        raise SchemaError("contact: pairs must be sorted and unique")

    roles: dict[str, int] = {}
    raw_roles = data.get("roles", {})
    if not isinstance(raw_roles, dict):
        raise SchemaError("roles: expected an object of name -> index")
    for name, idx in raw_roles.items():
        if not isinstance(idx, int) or not 0 <= idx < lattice.size:
            raise SchemaError(f"roles[{name!r}]: index {idx!r} out of range")
        roles[str(name)] = idx

    contact = contact_from_related_pairs(lattice.size, pairs)
    return ContactStructure(lattice, contact), roles


def structure_sha256(payload: dict[str, Any]) -> str:
    return hashlib.sha256(canonical_dumps(payload).encode()).hexdigest()


def load_structure_file(path: str) -> tuple[ContactStructure, dict[str, int]]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    return structure_from_json(data)


def write_structure_file(
    path: str, cs: ContactStructure, roles: dict[str, int] | None = None
) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(canonical_dumps(structure_to_json(cs, roles)))


# ---------------------------------------------------------------------------
# DOT export


def _cover_edges(lattice: FiniteJoinSemilattice) -> list[tuple[int, int]]:
    edges = []
    for i in range(lattice.size):
        above = lattice.leq_masks[i] & ~(1 << i)
        for j in range(i + 1, lattice.size):
            if not (above >> j) & 1:
                continue
            between = above & lattice.below_masks[j] & ~(1 << j)
            if not between:
                edges.append((i, j))
    return edges


def structure_to_dot(
    cs: ContactStructure, roles: dict[str, int] | None = None
) -> str:
    """Hasse diagram with non-contact pairs dashed; deterministic bytes."""
    lattice = cs.lattice
    names: dict[int, list[str]] = {}
    for name, idx in sorted((roles or {}).items()):
        names.setdefault(idx, []).append(name)
    atoms = set(lattice.atoms())
    lines = ["digraph structure {", "  rankdir=BT;", '  node [shape=box, fontname="monospace"];']
    for i, bits in enumerate(lattice.carrier):
        label = mask_to_hex(bits, lattice.width)
        if i in names:
            label += "\\n" + ",".join(names[i])
        style = ' style=filled fillcolor="lightgrey"' if i in atoms else ""
        lines.append(f'  n{i} [label="{label}"{style}];')
    for i, j in _cover_edges(lattice):
        lines.append(f"  n{i} -> n{j};")
    for i, j in cs.contact.noncontact_pairs():
        lines.append(
            f"  n{i} -> n{j} [dir=none, style=dashed, color=red, constraint=false];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def representation_to_dot(rep_payload: dict[str, Any]) -> str:
    """Bipartite element/column incidence of a representation payload."""
    columns = rep_payload["columns"]
    images = rep_payload["images"]
    lines = ["graph representation {", "  rankdir=LR;", '  node [fontname="monospace"];']
    for x in range(len(images)):
        lines.append(f'  e{x} [label="x{x}", shape=box];')
    for j, m in enumerate(columns):
        lines.append(f'  c{j} [label="m{m}", shape=ellipse];')
    for x, img_hex in enumerate(images):
        img = int(img_hex, 16)
        j = 0
        while img:
            if img & 1:
                lines.append(f"  e{x} -- c{j};")
            img >>= 1
            j += 1
    lines.append("}")
    return "\n".join(lines) + "\n"
