"""JSON scheme files.

Layout: ``{"q", "K", "N", "L", "T", "F", "D", "E", "provenance"}`` with
matrices as lists of integer rows.  For ``T > 1``, ``D`` has ``N T``
columns and coordinate ``t N + n`` is server ``n`` in slot ``t``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .errors import ShapeError
from .fq_linalg import FieldSpec, FqMatrix
from .scheme import Scheme

KEYS = ("q", "K", "N", "L", "T", "F", "D", "E", "provenance")


def scheme_to_dict(s: Scheme) -> dict:
    return {
        "q": s.q,
        "K": s.K,
        "N": s.N,
        "L": s.L,
        "T": s.T,
        "F": s.F.tolist(),
        "D": s.D.tolist(),
        "E": s.E.tolist(),
        "provenance": s.provenance,
    }


def scheme_from_dict(d: dict) -> Scheme:
    missing = [k for k in KEYS[:8] if k not in d]
    if missing:
        raise ShapeError(f"scheme file lacks {missing}")
    field = FieldSpec(int(d["q"]))
    K, N, L, T = (int(d[k]) for k in "KNLT")

    def mat(name, rows, cols):
        m = FqMatrix(d[name], field) if d[name] else FqMatrix.zeros(rows, cols, field)
        if m.shape != (rows, cols):
            raise ShapeError(f"{name} is {m.shape}, header says {(rows, cols)}")
        return m

    F = mat("F", K, L)
    D = mat("D", K, N * T)
    E = mat("E", N * T, L)
    return Scheme(F, D, E, T, dict(d.get("provenance") or {}))


def dumps(s: Scheme) -> str:
    """Canonical text: compact matrix rows, fixed key order."""
    d = scheme_to_dict(s)
    lines = ["{"]
    items = list(d.items())
    for i, (k, v) in enumerate(items):
        end = "," if i + 1 < len(items) else ""
        if k in ("F", "D", "E"):
            rows = [json.dumps(r, separators=(",", ":")) for r in v]
            if rows:
                body = ",\n    ".join(rows)
                lines.append(f'  "{k}": [\n    {body}\n  ]{end}')
            else:
                lines.append(f'  "{k}": []{end}')
        else:
            lines.append(f'  "{k}": {json.dumps(v, sort_keys=True)}{end}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> Scheme:
    return scheme_from_dict(json.loads(text))


def save_scheme(s: Scheme, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(s))


def load_scheme(path: Union[str, Path]) -> Scheme:
    return loads(Path(path).read_text())
