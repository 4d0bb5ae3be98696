"""Deterministic serialization of reports.

Every float is rendered with %.17g (17 significant digits round-trip
doubles exactly), keys keep construction order, and no timestamps or
environment data are embedded, so identical inputs produce identical
bytes. JSON documents carry schema_version and a schema name matching a
file in zetaconv/schemas/.
"""

from __future__ import annotations

import math
from importlib import resources

SCHEMA_VERSION = 1


def format_float(x: float) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return '"nan"'
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        return "%.17g" % x
    return str(x)


def dumps(obj, indent: int = 0) -> str:
    """JSON text with %.17g floats and stable key order."""
    import numpy as np

    if isinstance(obj, np.bool_):
        obj = bool(obj)
    elif isinstance(obj, np.integer):
        obj = int(obj)
    elif isinstance(obj, np.floating):
        obj = float(obj)
    pad = " " * indent
    child = indent + 2
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return _escape(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f"{' ' * child}{_escape(str(k))}: {dumps(v, child)}" for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(format_float(v) if isinstance(v, float) else str(v) for v in seq) + "]"
        items = ",\n".join(f"{' ' * child}{dumps(v, child)}" for v in seq)
        return "[\n" + items + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _escape(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append("\\u%04x" % ord(ch))
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def json_document(schema: str, body: dict) -> str:
    doc = {"schema": schema, "schema_version": SCHEMA_VERSION}
    doc.update(body)
    return dumps(doc) + "\n"


def csv_lines(header_meta: dict, columns: list[str], rows) -> str:
    """CSV with a single '# key=value ...' metadata comment line on top.

    Column order is frozen by the caller and documented in the README.
    """
    meta = " ".join(
        f"{k}={format_float(v) if isinstance(v, float) else v}" for k, v in header_meta.items()
    )
    out = [f"# {meta}", ",".join(columns)]
    for row in rows:
        out.append(
            ",".join(format_float(v) if isinstance(v, float) else str(v) for v in row)
        )
    return "\n".join(out) + "\n"


def load_schema(name: str) -> dict:
    """Parse a shipped JSON schema (schemas/<name>.schema.json)."""
    import json

    text = resources.files("zetaconv.schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)
