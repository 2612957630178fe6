"""Canonical JSON forms: rationals as "p/q" strings, matrices as row arrays."""

from __future__ import annotations

import json

from .exact_linalg import Matrix, format_rational


def vector_to_json(v) -> list:
    return [format_rational(x) for x in v]


def matrix_to_json(a: Matrix) -> list:
    return [vector_to_json(a.row(i)) for i in range(a.rows)]


def dumps(payload) -> str:
    """Byte-stable JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"
