"""Plain matrix text format and the relation JSON document.

Matrix text::

    # optional comment lines
    2 4
    1 1 1 1
    0 1 2 3

Relation JSON keeps one table (array of row arrays) per element and the
coefficients in the same order. :func:`dump_relation` is the canonical
serializer; golden files are written with it, so comparisons can be done
on the text itself.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .errors import DimensionError
from .exact import IntMatrix
from .nfold import BrickVector
from .relation import PrimitiveRelation


class ParseError(ValueError):
    """Input text is not a well-formed matrix or relation document."""


def parse_matrix(text: str) -> IntMatrix:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty matrix file")
    try:
        header = [int(t) for t in lines[0].split()]
        if len(header) != 2:
            raise ParseError(f"header must be 'rows cols', got {lines[0]!r}")
        rows, cols = header
        body = [[int(t) for t in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"non-integer token: {exc}") from None
    if rows < 0 or cols < 0:
        raise ParseError("negative dimensions")
    if len(body) != rows:
        raise ParseError(f"header says {rows} rows, found {len(body)}")
    for i, r in enumerate(body):
        if len(r) != cols:
            raise ParseError(f"row {i + 1} has {len(r)} entries, expected {cols}")
    return IntMatrix.from_rows(body, cols=cols)


def format_matrix(m: IntMatrix) -> str:
    lines = [f"{m.rows} {m.cols}"]
    lines += [" ".join(str(x) for x in m.row(i)) for i in range(m.rows)]
    return "\n".join(lines) + "\n"


def read_matrix(path: str | Path) -> IntMatrix:
    return parse_matrix(Path(path).read_text())


def relation_to_dict(rel: PrimitiveRelation) -> dict:
    return {
        "base_matrix": rel.base_matrix.to_rows(),
        "copies": rel.copies,
        "elements": [x.table() for x in rel.elements],
        "coefficients": list(rel.coefficients),
    }


def relation_from_dict(doc: dict) -> PrimitiveRelation:
    try:
        base = IntMatrix.from_rows(doc["base_matrix"])
        copies = doc["copies"]
        tables = doc["elements"]
        coefficients = doc["coefficients"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed relation document: {exc!r}") from None
    if not isinstance(copies, int) or copies < 1:
        raise ParseError(f"copies must be a positive integer, got {copies!r}")
    if not all(isinstance(h, int) and not isinstance(h, bool) for h in coefficients):
        raise ParseError("coefficients must be integers")
    try:
        elements = [BrickVector.from_table(t, brick_len=base.cols) for t in tables]
        return PrimitiveRelation(base, copies, tuple(elements), tuple(coefficients))
    except (DimensionError, TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from None


def dump_relation(rel: PrimitiveRelation) -> str:
    doc = relation_to_dict(rel)
    elements = ",\n".join("    " + json.dumps(t) for t in doc["elements"])
    return (
        "{\n"
        f'  "base_matrix": {json.dumps(doc["base_matrix"])},\n'
        f'  "copies": {doc["copies"]},\n'
        '  "elements": [\n'
        f"{elements}\n"
        "  ],\n"
        f'  "coefficients": {json.dumps(doc["coefficients"])}\n'
        "}\n"
    )


def load_relation(text: str) -> PrimitiveRelation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("relation document must be a JSON object")
    return relation_from_dict(doc)


def read_relation(path: str | Path) -> PrimitiveRelation:
    return load_relation(Path(path).read_text())


GOLDEN = ("base_a34", "a3m_m5", "a3m_m6", "a3m_m7", "a3m_m7_switched")


def golden_text(name: str) -> str:
    """Text of a shipped golden relation file (see :data:`GOLDEN`)."""
    return resources.files("graverlift.data").joinpath(f"{name}.json").read_text()


def golden_relation(name: str) -> PrimitiveRelation:
    return load_relation(golden_text(name))


def bound_to_dict(result) -> dict:
    return {"formula": result.formula_id, "params": dict(result.params), "value": str(result.value)}
