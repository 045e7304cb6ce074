"""Readers for Cayley table files and Rees spec files."""

from __future__ import annotations

import json
from pathlib import Path

from .errors import FormatError
from .semigroup import ReesSpec, Semigroup, as_group, semigroup_from_table


def parse_table_text(text: str) -> Semigroup:
    """First line ``n``, then ``n`` lines of ``n`` space-separated ids."""
    lines = [(k, line) for k, line in enumerate(text.splitlines(), start=1) if line.strip()]
    if not lines:
        raise FormatError("empty table file", 1)
    k0, first = lines[0]
    try:
        n = int(first.strip())
    except ValueError:
        raise FormatError(f"expected the order, got {first.strip()!r}", k0, 1) from None
    if n < 1:
        raise FormatError("order must be positive", k0, 1)
    rows = lines[1:]
    if len(rows) != n:
        raise FormatError(f"expected {n} rows, found {len(rows)}", rows[-1][0] if rows else k0)
    table = []
    for lineno, line in rows:
        fields = line.split()
        if len(fields) != n:
            raise FormatError(f"expected {n} entries, found {len(fields)}", lineno)
        row = []
        for col, f in enumerate(fields, start=1):
            try:
                v = int(f)
            except ValueError:
                raise FormatError(f"malformed number {f!r}", lineno, col) from None
            if not 0 <= v < n:
                raise FormatError(f"entry {v} not in [0, {n})", lineno, col)
            row.append(v)
        table.append(row)
    return semigroup_from_table(n, table)


def parse_table_file(path) -> Semigroup:
    return parse_table_text(Path(path).read_text())


def rees_spec_from_dict(data: dict) -> ReesSpec:
    try:
        rows = data["group_table"]
        group = as_group(semigroup_from_table(len(rows), rows))
        return ReesSpec(group, int(data["lambda_size"]), int(data["i_size"]), data["sandwich"])
    except KeyError as exc:
        raise FormatError(f"missing field {exc.args[0]!r}") from None
    except TypeError as exc:
        raise FormatError(str(exc)) from None


def parse_rees_text(text: str) -> ReesSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise FormatError("rees spec must be an object")
    return rees_spec_from_dict(data)


def parse_rees_file(path) -> ReesSpec:
    return parse_rees_text(Path(path).read_text())


def rees_spec_to_dict(spec: ReesSpec) -> dict:
    return {
        "group_table": [list(r) for r in spec.group.table],
        "lambda_size": spec.lambda_size,
        "i_size": spec.i_size,
        "sandwich": [list(r) for r in spec.sandwich],
    }
