from __future__ import annotations

import json
from functools import cached_property
from pathlib import Path
from typing import Any

from jsonschema import Draft202012Validator
from referencing import Registry, Resource
from referencing.jsonschema import DRAFT202012

SCHEMA_VERSION = "1.0.0"


class SchemaValidator:
    def __init__(self, schema_dir: Path | None = None) -> None:
        self.schema_dir = schema_dir or Path(__file__).resolve().parents[1] / "schemas" / SCHEMA_VERSION

    def _load_schema(self, schema_name: str) -> dict[str, Any]:
        schema_path = self.schema_dir / schema_name
        return json.loads(schema_path.read_text(encoding="utf-8"))

    @cached_property
    def _registry(self) -> Registry:
        resources = [
            (path.name, Resource.from_contents(self._load_schema(path.name), default_specification=DRAFT202012))
            for path in sorted(self.schema_dir.glob("*.schema.json"))
        ]
        return Registry().with_resources(resources)

    def validate(self, payload: Any, schema_name: str) -> list[str]:
        """Error messages prefixed with the JSON path of the offending value (empty when valid)."""
        validator = Draft202012Validator(self._load_schema(schema_name), registry=self._registry)
        errors = sorted(validator.iter_errors(payload), key=lambda e: list(map(str, e.absolute_path)))
        return [f"/{'/'.join(map(str, err.absolute_path))}: {err.message}" for err in errors]
