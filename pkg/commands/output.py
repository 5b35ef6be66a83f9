# commands/output.py
# Emisión de informes: JSON canónico (claves ordenadas, sin NaN) o CSV de una fila

import csv
import io
import json
import math

from utils.errors import NumericalError


def flatten(doc, prefix=""):
    """{"a": {"b": 1}, "c": [2, 3]} -> {"a.b": 1, "c.0": 2, "c.1": 3}"""
    out = {}
    if isinstance(doc, dict):
        items = doc.items()
    elif isinstance(doc, (list, tuple)):
        items = enumerate(doc)
    else:
        return {prefix: doc}
    for key, value in items:
        name = f"{prefix}.{key}" if prefix else str(key)
        if isinstance(value, (dict, list, tuple)) and value:
            out.update(flatten(value, name))
        else:
            out[name] = value
    return out


def _check_finite(doc):
    for key, value in flatten(doc).items():
        if isinstance(value, float) and not math.isfinite(value):
            raise NumericalError(f"campo no finito en el informe: {key} = {value!r}", diagnostics={"field": key})


def to_json(doc):
    _check_finite(doc)
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def to_csv(doc):
    _check_finite(doc)
    row = flatten(doc)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=sorted(row), lineterminator="\n")
    writer.writeheader()
    writer.writerow(row)
    return buf.getvalue()


def render(doc, fmt="json"):
    if fmt == "csv":
        return to_csv(doc)
    return to_json(doc)


def emit(doc, fmt="json", output=None, stream=None):
    text = render(doc, fmt)
    if output:
        with open(output, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        stream.write(text)
    return text
