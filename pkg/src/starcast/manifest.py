"""Declarative project manifests for the CLI.

A manifest is a YAML document naming a project, its characters (with ordered
attributes), relationships with knowledge grants by attribute key, and a list
of generation jobs to run in order. Characters are referenced by name
everywhere, so the file stays reviewable; uniqueness of names within the
manifest is therefore required. Jobs may reference characters that will only
exist at run time (for example adopted discovery results), so job references
are resolved when the job runs, not at validation time.

MANIFEST_SCHEMA is the exact document mirrored at docs/manifest-schema.json.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any

import jsonschema
import yaml

from . import errors

MANIFEST_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "castctl project manifest",
    "type": "object",
    "additionalProperties": False,
    "required": ["name"],
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "output_language": {"type": "string", "minLength": 1},
        "characters": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["name"],
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "portrait": {"type": "string", "minLength": 1},
                    "attributes": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "additionalProperties": False,
                            "required": ["key"],
                            "properties": {
                                "key": {"type": "string", "minLength": 1},
                                "value": {"type": "string"},
                            },
                        },
                    },
                },
            },
        },
        "relationships": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["owner", "target"],
                "properties": {
                    "owner": {"type": "string", "minLength": 1},
                    "target": {"type": "string", "minLength": 1},
                    "description": {"type": "string"},
                    "knowledge": {
                        "type": "array",
                        "items": {"type": "string", "minLength": 1},
                    },
                },
            },
        },
        "jobs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind"],
                "properties": {
                    "kind": {"enum": ["discovery", "journal", "comment"]},
                },
                "allOf": [
                    {
                        "if": {"properties": {"kind": {"const": "discovery"}}},
                        "then": {
                            "additionalProperties": False,
                            "required": ["kind", "seed", "phrase"],
                            "properties": {
                                "kind": {"const": "discovery"},
                                "seed": {"type": "string", "minLength": 1},
                                "phrase": {"type": "string", "minLength": 1},
                                "adopt": {
                                    "type": "array",
                                    "items": {"type": "string", "minLength": 1},
                                },
                            },
                        },
                    },
                    {
                        "if": {"properties": {"kind": {"const": "journal"}}},
                        "then": {
                            "additionalProperties": False,
                            "required": ["kind", "authors", "theme"],
                            "properties": {
                                "kind": {"const": "journal"},
                                "authors": {
                                    "type": "array",
                                    "minItems": 1,
                                    "items": {"type": "string", "minLength": 1},
                                },
                                "theme": {"type": "string", "minLength": 1},
                            },
                        },
                    },
                    {
                        "if": {"properties": {"kind": {"const": "comment"}}},
                        "then": {
                            "additionalProperties": False,
                            "required": ["kind", "journal_author", "commenter"],
                            "properties": {
                                "kind": {"const": "comment"},
                                "journal_author": {"type": "string", "minLength": 1},
                                "commenter": {"type": "string", "minLength": 1},
                                "thread": {"enum": ["new", "latest"]},
                            },
                        },
                    },
                ],
            },
        },
    },
}


@dataclass(frozen=True)
class ManifestCharacter:
    name: str
    attributes: tuple[tuple[str, str], ...] = ()
    portrait: str | None = None


@dataclass(frozen=True)
class ManifestRelationship:
    owner: str
    target: str
    description: str = ""
    knowledge: tuple[str, ...] = ()


@dataclass(frozen=True)
class DiscoveryJob:
    seed: str
    phrase: str
    adopt: tuple[str, ...] = ()
    kind: str = "discovery"


@dataclass(frozen=True)
class JournalJob:
    authors: tuple[str, ...]
    theme: str
    kind: str = "journal"


@dataclass(frozen=True)
class CommentJob:
    journal_author: str
    commenter: str
    thread: str = "new"
    kind: str = "comment"


Job = DiscoveryJob | JournalJob | CommentJob


@dataclass(frozen=True)
class Manifest:
    name: str
    output_language: str = "ko"
    characters: tuple[ManifestCharacter, ...] = ()
    relationships: tuple[ManifestRelationship, ...] = ()
    jobs: tuple[Job, ...] = ()


def _json_path(error: jsonschema.ValidationError) -> str:
    parts = []
    for step in error.absolute_path:
        if isinstance(step, int):
            parts.append(f"[{step}]")
        else:
            parts.append(("." if parts else "") + str(step))
    return "".join(parts) or "(document root)"


def parse_manifest(doc: Any) -> Manifest:
    """Validate a loaded YAML document and lift it into typed form.

    Structural problems and in-manifest reference problems both raise
    ManifestInvalid with a field path in the message.
    """
    validator = jsonschema.Draft202012Validator(MANIFEST_SCHEMA)
    found = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if found:
        best = jsonschema.exceptions.best_match(found)
        raise errors.ManifestInvalid(f"{_json_path(best)}: {best.message}")

    characters = tuple(
        ManifestCharacter(
            name=item["name"],
            attributes=tuple(
                (attr["key"], attr.get("value", ""))
                for attr in item.get("attributes", [])
            ),
            portrait=item.get("portrait"),
        )
        for item in doc.get("characters", [])
    )
    names = [c.name for c in characters]
    for index, name in enumerate(names):
        if names.index(name) != index:
            raise errors.ManifestInvalid(
                f"characters[{index}].name: duplicate character name {name!r}"
            )
    known = set(names)

    relationships = []
    seen_pairs: set[tuple[str, str]] = set()
    for index, item in enumerate(doc.get("relationships", [])):
        owner, target = item["owner"], item["target"]
        for role, value in (("owner", owner), ("target", target)):
            if value not in known:
                raise errors.ManifestInvalid(
                    f"relationships[{index}].{role}: unknown character {value!r}"
                )
        if owner == target:
            raise errors.ManifestInvalid(
                f"relationships[{index}]: owner and target are both {owner!r}"
            )
        if (owner, target) in seen_pairs:
            raise errors.ManifestInvalid(
                f"relationships[{index}]: duplicate edge {owner!r} -> {target!r}"
            )
        seen_pairs.add((owner, target))
        target_keys = {
            key for c in characters if c.name == target for key, _ in c.attributes
        }
        grants = tuple(item.get("knowledge", []))
        for key in grants:
            if key not in target_keys:
                raise errors.ManifestInvalid(
                    f"relationships[{index}].knowledge: {target!r} has no attribute "
                    f"key {key!r}"
                )
        relationships.append(
            ManifestRelationship(
                owner=owner,
                target=target,
                description=item.get("description", ""),
                knowledge=grants,
            )
        )

    jobs: list[Job] = []
    for item in doc.get("jobs", []):
        kind = item["kind"]
        if kind == "discovery":
            jobs.append(
                DiscoveryJob(
                    seed=item["seed"],
                    phrase=item["phrase"],
                    adopt=tuple(item.get("adopt", [])),
                )
            )
        elif kind == "journal":
            jobs.append(JournalJob(authors=tuple(item["authors"]), theme=item["theme"]))
        else:
            jobs.append(
                CommentJob(
                    journal_author=item["journal_author"],
                    commenter=item["commenter"],
                    thread=item.get("thread", "new"),
                )
            )

    return Manifest(
        name=doc["name"],
        output_language=doc.get("output_language", "ko"),
        characters=characters,
        relationships=tuple(relationships),
        jobs=tuple(jobs),
    )


def load_manifest(path: str | Path) -> Manifest:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise errors.ManifestInvalid(f"cannot read manifest {path}: {exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise errors.ManifestInvalid(f"{path}: not valid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise errors.ManifestInvalid(f"{path}: manifest must be a mapping")
    return parse_manifest(doc)
