"""Deterministic serialization: 17-significant-digit text, CSV, canonical JSON.

Every artifact writer in the package routes through this module so that a
repeated run of any command produces bytewise-identical files. Floats are
rendered with repr-faithful %.17g, newlines are always "\n", and nothing
here ever emits a timestamp or an absolute path.
"""
from __future__ import annotations

import hashlib
import math
from typing import Iterable

__all__ = [
    "fmt17", "write_csv", "canonical_json", "write_json",
    "sha256_file", "write_manifest",
]


def fmt17(x) -> str:
    """Render a float with 17 significant digits (round-trip exact)."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return fmt17(v)
    return str(v)


def write_csv(path, header: Iterable[str], rows: Iterable) -> None:
    """Write rows of numbers/strings as CSV with deterministic formatting."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def canonical_json(obj, indent: int = 0) -> str:
    """Serialize nested dict/list/scalar data with %.17g floats.

    Non-finite floats become the strings "inf", "-inf", "nan". Dict keys keep
    insertion order (writers are responsible for a stable field order) and
    must be strings.
    """
    pad = " " * indent
    inner = " " * (indent + 2)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if math.isfinite(obj):
            return fmt17(obj)
        return '"%s"' % fmt17(obj)
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        out = out.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
        return '"%s"' % out
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for k, v in obj.items():
            if not isinstance(k, str):
                raise TypeError(f"JSON object keys must be strings, got {k!r}")
            items.append('%s%s: %s' % (inner, canonical_json(k), canonical_json(v, indent + 2)))
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        flat = all(isinstance(v, (int, float, bool, str, type(None))) for v in seq)
        if flat and len(seq) <= 16:
            return "[" + ", ".join(canonical_json(v) for v in seq) + "]"
        items = [inner + canonical_json(v, indent + 2) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    # numpy scalars and arrays reduce to the cases above
    if hasattr(obj, "item") and not hasattr(obj, "__len__"):
        return canonical_json(obj.item(), indent)
    if hasattr(obj, "tolist"):
        return canonical_json(obj.tolist(), indent)
    raise TypeError(f"cannot serialize {type(obj).__name__} canonically")


def write_json(path, obj) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(canonical_json(obj) + "\n")


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(path, subcommand: str, parameters: dict, outputs: Iterable) -> None:
    """Record a run: tool version, subcommand, parameters, output digests.

    Output entries keep only basenames so the manifest does not depend on
    where the command was invoked.
    """
    import os

    from . import __version__

    entries = []
    for out in outputs:
        entries.append({
            "path": os.path.basename(str(out)),
            "sha256": sha256_file(out),
            "bytes": os.path.getsize(out),
        })
    doc = {
        "tool": "pogorelov",
        "version": __version__,
        "subcommand": subcommand,
        "parameters": parameters,
        "outputs": entries,
    }
    write_json(path, doc)
