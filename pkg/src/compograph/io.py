"""Registry and request JSON files."""

from __future__ import annotations

import json
from pathlib import Path

from jsonschema import Draft202012Validator

from .model import Request, RequestError, Taxonomy, TaxonomyError
from .registry import Registry, load_registry

_STRINGS = {"type": "array", "items": {"type": "string"}}

_EDGE = {
    "type": "object",
    "properties": {"child": {"type": "string"}, "parent": {"type": "string"}},
    "required": ["child", "parent"],
    "additionalProperties": False,
}

REGISTRY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "propositions": _STRINGS,
        "taxonomy": {"type": "array", "items": _EDGE},
        "services": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "name": {"type": "string"},
                    "inputs": _STRINGS,
                    "outputs": _STRINGS,
                    "preconditions": _STRINGS,
                    "effects": _STRINGS,
                },
                "required": ["name", "inputs", "outputs", "preconditions", "effects"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["propositions", "taxonomy", "services"],
    "additionalProperties": False,
}

REQUEST_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {"provided": _STRINGS, "goals": _STRINGS, "initial_world": _STRINGS},
    "required": ["provided", "goals"],
    "additionalProperties": False,
}

# standalone --taxonomy file: either {"taxonomy": [...]} or a bare edge list
TAXONOMY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "oneOf": [
        {"type": "array", "items": _EDGE},
        {
            "type": "object",
            "properties": {"taxonomy": {"type": "array", "items": _EDGE}},
            "required": ["taxonomy"],
            "additionalProperties": False,
        },
    ],
}


class FormatError(ValueError):
    """Unreadable file or a document that does not match its schema."""


def _read_json(path: str | Path) -> object:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc}") from exc


def _check(doc: object, schema: dict, what: str) -> None:
    errors = sorted(Draft202012Validator(schema).iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        msgs = [f"{'/'.join(map(str, e.path)) or '<root>'}: {e.message}" for e in errors]
        raise FormatError(f"{what}: " + "; ".join(msgs))


def _taxonomy(edges: list[dict]) -> Taxonomy:
    try:
        return Taxonomy.from_pairs((e["child"], e["parent"]) for e in edges)
    except TaxonomyError as exc:
        raise FormatError(f"taxonomy: {exc}") from exc


def parse_registry_document(doc: object, approx_threshold: float | None = None) -> Registry:
    _check(doc, REGISTRY_SCHEMA, "registry")
    return load_registry(
        doc["services"], _taxonomy(doc["taxonomy"]), doc["propositions"], approx_threshold
    )


def read_registry(path: str | Path, approx_threshold: float | None = None) -> Registry:
    return parse_registry_document(_read_json(path), approx_threshold)


def read_taxonomy(path: str | Path) -> Taxonomy:
    doc = _read_json(path)
    _check(doc, TAXONOMY_SCHEMA, "taxonomy")
    return _taxonomy(doc["taxonomy"] if isinstance(doc, dict) else doc)


def parse_request_document(doc: object) -> Request:
    _check(doc, REQUEST_SCHEMA, "request")
    try:
        return Request(doc["provided"], doc["goals"], doc.get("initial_world", ()))
    except RequestError as exc:
        raise FormatError(f"request: {exc}") from exc


def read_request(path: str | Path) -> Request:
    return parse_request_document(_read_json(path))


def dumps(doc: object) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_registry(r: Registry, path: str | Path) -> None:
    Path(path).write_text(dumps(r.to_document()), encoding="utf-8")
