"""Loading and serializing instrument definition documents.

The definition file format is JSON:

    {"id": ..., "version": ..., "title": ...,
     "sections": [{"id": ..., "title": ...,
                   "items": [{"id", "kind", "min", "max", "label", "required"}]}]}

``min``/``max`` appear only on scale items. Loading then re-serializing yields
a semantically identical document.
"""

import json
from importlib import resources

from ..errors import ParseError, SchemaError
from .model import Instrument, Item, ItemKind, Section


def load_instrument(document: str) -> Instrument:
    """Parse a definition document; raises ParseError / SchemaError."""
    if not document or not document.strip():
        raise ParseError("empty document")
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return parse_instrument(data)


def parse_instrument(data) -> Instrument:
    """Build an Instrument from parsed JSON, checking every invariant."""
    if not isinstance(data, dict):
        raise ParseError("document root must be an object")
    ident = _require_str(data, "id", "")
    version = data.get("version")
    if not isinstance(version, int) or isinstance(version, bool) or version < 1:
        raise SchemaError("version must be a positive integer", "version")
    title = _require_str(data, "title", "")
    raw_sections = data.get("sections")
    if not isinstance(raw_sections, list) or not raw_sections:
        raise SchemaError("at least one section required", "sections")

    sections = []
    seen_section_ids: set[str] = set()
    for si, raw in enumerate(raw_sections):
        path = f"sections[{si}]"
        if not isinstance(raw, dict):
            raise SchemaError("section must be an object", path)
        sid = _require_str(raw, "id", path)
        if sid in seen_section_ids:
            raise SchemaError(f"duplicate section id {sid!r}", path + ".id")
        seen_section_ids.add(sid)
        stitle = _require_str(raw, "title", path)
        raw_items = raw.get("items")
        if not isinstance(raw_items, list) or not raw_items:
            raise SchemaError("section has no items", path + ".items")
        items = []
        seen_item_ids: set[str] = set()
        for ii, raw_item in enumerate(raw_items):
            ipath = f"{path}.items[{ii}]"
            items.append(_parse_item(raw_item, ipath, seen_item_ids))
        sections.append(Section(id=sid, title=stitle, items=tuple(items)))

    return Instrument(id=ident, version=version, title=title, sections=tuple(sections))


def _parse_item(raw, path: str, seen_ids: set[str]) -> Item:
    if not isinstance(raw, dict):
        raise SchemaError("item must be an object", path)
    iid = _require_str(raw, "id", path)
    if iid in seen_ids:
        raise SchemaError(f"duplicate item id {iid!r}", path + ".id")
    seen_ids.add(iid)
    try:
        kind = ItemKind(raw.get("kind"))
    except ValueError:
        raise SchemaError(f"unknown item kind {raw.get('kind')!r}", path + ".kind") from None
    label = _require_str(raw, "label", path)
    required = raw.get("required", False)
    if not isinstance(required, bool):
        raise SchemaError("required must be a boolean", path + ".required")

    min_value = raw.get("min")
    max_value = raw.get("max")
    if kind is ItemKind.SCALE:
        for name, value in (("min", min_value), ("max", max_value)):
            if not isinstance(value, int) or isinstance(value, bool):
                raise SchemaError(f"scale item needs integer {name}", f"{path}.{name}")
        if min_value >= max_value:
            raise SchemaError("scale requires min < max", path + ".min")
    elif min_value is not None or max_value is not None:
        raise SchemaError("min/max only valid on scale items", path)

    return Item(
        id=iid,
        kind=kind,
        label=label,
        required=required,
        min_value=min_value if kind is ItemKind.SCALE else None,
        max_value=max_value if kind is ItemKind.SCALE else None,
    )


def _require_str(data: dict, key: str, path: str) -> str:
    value = data.get(key)
    if not isinstance(value, str) or not value:
        where = f"{path}.{key}" if path else key
        raise SchemaError(f"missing or empty {key}", where)
    return value


def instrument_to_dict(instrument: Instrument) -> dict:
    sections = []
    for sec in instrument.sections:
        items = []
        for item in sec.items:
            entry: dict = {"id": item.id, "kind": item.kind.value}
            if item.kind is ItemKind.SCALE:
                entry["min"] = item.min_value
                entry["max"] = item.max_value
            entry["label"] = item.label
            entry["required"] = item.required
            items.append(entry)
        sections.append({"id": sec.id, "title": sec.title, "items": items})
    return {
        "id": instrument.id,
        "version": instrument.version,
        "title": instrument.title,
        "sections": sections,
    }


def serialize_instrument(instrument: Instrument) -> str:
    return json.dumps(instrument_to_dict(instrument), indent=2) + "\n"


def builtin_instrument_text(name: str) -> str:
    """Raw text of a definition file shipped with the package (``dt``, ``sus``)."""
    return (resources.files(__package__) / "data" / f"{name}.json").read_text("utf-8")


def builtin_instrument(name: str) -> Instrument:
    return load_instrument(builtin_instrument_text(name))
