"""Self-contained check certificates and their re-verification.

A certificate embeds the structure it talks about, the checks that were run,
their verdicts and witnesses, and the command's expectations.  Verification
re-derives every entry from the embedded structure alone, so a certificate
can be audited without trusting the process that wrote it.  Wall-clock stats
are recorded but excluded from comparison.
"""

from __future__ import annotations

import time
from typing import Any

from . import __version__
from .axioms import (
    CHECKERS,
    Verdict,
    Witness,
    check_additive,
    check_weak_contact,
    revalidate_witness,
)
from .constructions import (
    SeparatorStructure,
    ambient_extension_facts,
    build_separator,
    check_embedding_criterion,
    inclusion_into_ambient,
    min_contact_extension,
)
from .core import ContactStructure
from .representation import (
    Representation,
    decide_overlap_representable,
    decide_weak_representable,
)
from .serialize import (
    SCHEMA_VERSION,
    SchemaError,
    structure_from_json,
    structure_to_json,
    structure_sha256,
)

MATERIALIZED_EXTENSION_MAX_N = 3


def compute_fact(cs: ContactStructure, name: str) -> Any:
    if name == "carrier_size":
        return cs.size
    if name == "ground_size":
        return cs.lattice.width
    if name == "atom_count":
        return len(cs.lattice.atoms())
    if name == "noncontact_pair_count":
        return len(cs.contact.noncontact_pairs())
    raise ValueError(f"unknown structure fact {name!r}")


def separator_extension_facts(sep: SeparatorStructure) -> dict[str, bool]:
    """Contact-embedding and non-additivity facts about the ambient extension.

    Up to n = 3 the extension relation is materialized and checked in full;
    beyond that the powerset relation is too large to store, so the same
    clauses are evaluated lazily and the global weak-contact fact is omitted.
    """
    incl = inclusion_into_ambient(sep)
    facts: dict[str, bool] = {
        "extension_embedding_criterion": check_embedding_criterion(incl).passed
    }
    rel = sep.structure.contact
    if sep.n <= MATERIALIZED_EXTENSION_MAX_N:
        ext = min_contact_extension(incl)
        ext_cs = ContactStructure(incl.target, ext)
        facts["extension_weak_contact"] = check_weak_contact(ext_cs).passed
        facts["extension_preserves"] = all(
            ext.related(incl.kappa[i], incl.kappa[j])
            for i in range(1, sep.structure.size)
            for j in range(i, sep.structure.size)
            if rel.related(i, j)
        )
        facts["extension_reflects"] = all(
            not ext.related(incl.kappa[i], incl.kappa[j])
            for i, j in rel.noncontact_pairs()
        )
        facts["extension_nonadditive"] = not check_additive(ext_cs).passed
    else:
        lazy = ambient_extension_facts(sep)
        facts["extension_preserves"] = lazy["preserves"]
        facts["extension_reflects"] = lazy["reflects"]
        facts["extension_nonadditive"] = lazy["nonadditive"]
    return facts


# ---------------------------------------------------------------------------
# entry constructors


def axiom_entry(verdict: Verdict, expected: str | None = None) -> dict[str, Any]:
    entry = verdict.to_json()
    entry["kind"] = "axiom"
    entry["expected"] = expected
    return entry


def fact_entry(name: str, value: Any, expected: Any = None) -> dict[str, Any]:
    return {"kind": "fact", "fact": name, "value": value, "expected": expected}


def witness_check_entry(
    axiom: str, params: dict[str, int], witness: Witness, valid: bool
) -> dict[str, Any]:
    return {
        "kind": "witness-check",
        "axiom": axiom,
        "params": dict(params),
        "witness": witness.to_json(),
        "valid": valid,
        "expected": True,
    }


def separator_entry(fact: str, value: bool, expected: bool = True) -> dict[str, Any]:
    return {"kind": "separator", "fact": fact, "value": value, "expected": expected}


def representation_entry(
    mode: str, outcome: str, payload: dict[str, Any]
) -> dict[str, Any]:
    return {
        "kind": "representation",
        "mode": mode,
        "outcome": outcome,
        "payload": payload,
        "expected": None,
    }


def entry_matches_expectation(entry: dict[str, Any]) -> bool:
    expected = entry.get("expected")
    if expected is None:
        return True
    if entry["kind"] == "axiom":
        return entry["verdict"] == expected
    if entry["kind"] == "witness-check":
        return entry["valid"] == expected
    return entry.get("value") == expected


def build_certificate(
    command: str,
    parameters: dict[str, Any],
    cs: ContactStructure,
    roles: dict[str, int] | None,
    entries: list[dict[str, Any]],
    started: float,
) -> dict[str, Any]:
    payload = structure_to_json(cs, roles)
    return {
        "version": SCHEMA_VERSION,
        "tool": f"contactlab {__version__}",
        "command": command,
        "parameters": parameters,
        "structure": payload,
        "structure_sha256": structure_sha256(payload),
        "entries": entries,
        "conclusion": {"ok": all(entry_matches_expectation(e) for e in entries)},
        "stats": {"elapsed_s": round(time.perf_counter() - started, 6)},
    }


# ---------------------------------------------------------------------------
# verification


def _strip_stats(entry: dict[str, Any]) -> dict[str, Any]:
    return {k: v for k, v in entry.items() if k != "stats"}


def verify_certificate(cert: Any) -> list[str]:
    """Re-derive every embedded check; returns the list of discrepancies."""
    problems: list[str] = []
    if not isinstance(cert, dict):
        raise SchemaError("certificate payload must be a JSON object")
    if cert.get("version") != SCHEMA_VERSION:
        raise SchemaError(f"version: expected {SCHEMA_VERSION}")
    for field in ("command", "parameters", "structure", "structure_sha256", "entries"):
        if field not in cert:
            raise SchemaError(f"{field}: missing certificate field")

    cs, _roles = structure_from_json(cert["structure"])
    if structure_sha256(cert["structure"]) != cert["structure_sha256"]:
        problems.append("structure_sha256 does not match the embedded structure")

    sep: SeparatorStructure | None = None
    sep_facts: dict[str, bool] | None = None

    def rebuilt_separator() -> SeparatorStructure:
        nonlocal sep
        if sep is None:
            sep = build_separator(int(cert["parameters"]["n"]))
        return sep

    for pos, entry in enumerate(cert["entries"]):
        kind = entry.get("kind")
        label = f"entries[{pos}]"
        try:
            if kind == "axiom":
                params = {k: int(v) for k, v in entry.get("params", {}).items()}
                fresh = axiom_entry(
                    CHECKERS[entry["axiom"]](cs, params), entry.get("expected")
                )
                if _strip_stats(fresh) != _strip_stats(entry):
                    problems.append(f"{label}: {entry['axiom']} does not reproduce")
            elif kind == "fact":
                value = compute_fact(cs, entry["fact"])
                if value != entry["value"]:
                    problems.append(
                        f"{label}: fact {entry['fact']} is {value}, "
                        f"recorded {entry['value']}"
                    )
            elif kind == "witness-check":
                witness = Witness.from_json(entry["witness"])
                valid = revalidate_witness(
                    cs, entry["axiom"], entry.get("params", {}), witness
                )
                if valid != entry["valid"]:
                    problems.append(f"{label}: witness revalidation differs")
            elif kind == "separator":
                fact = entry["fact"]
                if fact == "matches_canonical_construction":
                    rebuilt = rebuilt_separator()
                    value = structure_to_json(rebuilt.structure, rebuilt.roles) == (
                        cert["structure"]
                    )
                else:
                    if sep_facts is None:
                        sep_facts = separator_extension_facts(rebuilt_separator())
                    if fact not in sep_facts:
                        problems.append(f"{label}: unknown separator fact {fact!r}")
                        continue
                    value = sep_facts[fact]
                if value != entry["value"]:
                    problems.append(f"{label}: separator fact {fact} is {value}")
            elif kind == "representation":
                decide = (
                    decide_weak_representable
                    if entry["mode"] == "weak"
                    else decide_overlap_representable
                )
                result = decide(cs)
                if isinstance(result, Representation):
                    result.validate(cs)
                    outcome, payload = "success", result.to_json()
                else:
                    outcome, payload = "refusal", result.to_json()
                if outcome != entry["outcome"] or payload != entry["payload"]:
                    problems.append(f"{label}: representation does not reproduce")
            else:
                problems.append(f"{label}: unknown entry kind {kind!r}")
        except Exception as exc:  # a broken entry should name itself, not abort
            problems.append(f"{label}: re-derivation raised {exc!r}")

    recomputed_ok = all(entry_matches_expectation(e) for e in cert["entries"])
    recorded = cert.get("conclusion", {}).get("ok")
    if recorded is not None and recorded != recomputed_ok:
        problems.append("conclusion.ok does not match the recorded entries")
    return problems
