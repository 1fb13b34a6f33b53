"""Functionality for exporting and importing models as flat key = value text blocks.

Nested models are flattened with dot-separated keys, sequences are written comma-separated and
floats use their shortest round-tripping representation, so any model survives a
dump/load cycle unchanged.
"""

import math
from collections.abc import Iterable, Mapping
from enum import Enum
from typing import Any, TypeVar

from pydantic import BaseModel

from junctionlab.exceptions import ParseError

ModelT = TypeVar("ModelT", bound=BaseModel)


def format_value(value: Any) -> str:  # noqa: ANN401
    """Format a single leaf value."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(float(value))
    if isinstance(value, Enum):
        return format_value(value.value)
    if isinstance(value, (list, tuple)):
        return ",".join(format_value(v) for v in value)
    return str(value)


def flatten(data: Mapping[str, Any], parent_key: str = "", sep: str = ".") -> dict[str, str]:
    """Recursively flattens a mapping into a dictionary with dot-separated keys."""
    fields: dict[str, str] = {}
    for key, value in data.items():
        full_key = f"{parent_key}{key}"
        if isinstance(value, BaseModel):
            fields.update(flatten_model(value, f"{full_key}{sep}", sep=sep))
        elif isinstance(value, Mapping):
            fields.update(flatten(value, f"{full_key}{sep}", sep=sep))
        elif isinstance(value, (list, tuple)) and any(isinstance(v, (BaseModel, Mapping)) for v in value):
            for i, item in enumerate(value):
                item_data = item if isinstance(item, Mapping) else _model_fields(item)
                fields.update(flatten(item_data, f"{full_key}{sep}{i}{sep}", sep=sep))
        else:
            fields[full_key] = format_value(value)
    return fields


def _model_fields(obj: BaseModel) -> dict[str, Any]:
    return {name: getattr(obj, name) for name in type(obj).model_fields}


def flatten_model(obj: BaseModel, parent_key: str = "", sep: str = ".") -> dict[str, str]:
    """Recursively flattens a pydantic model into a dictionary with dot-separated keys."""
    return flatten(_model_fields(obj), parent_key, sep)


def dumps_kv(fields: Mapping[str, str]) -> str:
    """Write a flat mapping as a key = value text block, one key per line."""
    return "".join(f"{key} = {value}\n" for key, value in fields.items())


def dump_kv(obj: BaseModel) -> str:
    """Export a model as a key = value text block."""
    return dumps_kv(flatten_model(obj))


def loads_kv(text: str | Iterable[str]) -> dict[str, str]:
    """Parse a key = value text block. Blank lines and lines starting with # are ignored."""
    lines = text.splitlines() if isinstance(text, str) else text
    fields: dict[str, str] = {}
    for line_nr, raw in enumerate(lines, start=1):
        line = raw.strip()
        if len(line) == 0 or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"Expected 'key = value', got '{line}'.", line=line_nr)
        key, value = line.split("=", 1)
        key = key.strip()
        if len(key) == 0:
            raise ParseError("Empty key.", line=line_nr, column=1)
        if key in fields:
            raise ParseError(f"Duplicate key '{key}'.", line=line_nr, column=1)
        fields[key] = value.strip()
    return fields


def unflatten(fields: Mapping[str, Any], sep: str = ".") -> dict[str, Any]:
    """Rebuild a nested dictionary from dot-separated keys."""
    nested: dict[str, Any] = {}
    for key, value in fields.items():
        parts = key.split(sep)
        node = nested
        for part in parts[:-1]:
            child = node.setdefault(part, {})
            if not isinstance(child, dict):
                raise ParseError(f"Key '{key}' nests below the scalar key '{part}'.")
            node = child
        node[parts[-1]] = value
    return nested


def _prepare_for_model(cls: type[BaseModel], data: dict[str, Any]) -> dict[str, Any]:
    """Turn comma-separated strings back into sequences where the model expects one."""
    prepared: dict[str, Any] = {}
    for name, value in data.items():
        field = cls.model_fields.get(name)
        annotation = field.annotation if field is not None else None
        if isinstance(value, dict) and isinstance(annotation, type) and issubclass(annotation, BaseModel):
            prepared[name] = _prepare_for_model(annotation, value)
        elif isinstance(value, str) and _is_sequence_annotation(annotation):
            prepared[name] = [v.strip() for v in value.split(",")] if len(value) > 0 else []
        elif value == "" and field is not None and not field.is_required():
            continue
        else:
            prepared[name] = value
    return prepared


def _is_sequence_annotation(annotation: Any) -> bool:  # noqa: ANN401
    origin = getattr(annotation, "__origin__", None)
    return origin in (tuple, list)


def load_model(cls: type[ModelT], text: str) -> ModelT:
    """Import a model from a key = value text block."""
    return cls.model_validate(_prepare_for_model(cls, unflatten(loads_kv(text))))
