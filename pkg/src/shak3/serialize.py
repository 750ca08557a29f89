"""JSON transport: job files in, reports out.

Integers beyond the 53-bit safe range travel as decimal strings; rationals
travel as {"num", "den"} in lowest terms with den > 0.
"""

from __future__ import annotations

import hashlib
import json
import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Optional

from .errors import InvalidInput, ShaK3Error
from .lattice import IntLattice

JOB_SCHEMA = "sha-k3/job/1"
REPORT_SCHEMA = "sha-k3/report/1"
SAFE_INT = 2**53


def encode(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x) if abs(x) >= SAFE_INT else x
    if isinstance(x, Fraction):
        return {"num": encode(x.numerator), "den": encode(x.denominator)}
    if isinstance(x, float):
        if math.isinf(x):
            return "infinite"
        raise TypeError("floats are not transported")
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    raise TypeError(f"cannot encode {type(x).__name__}")


def dumps(report: dict, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(encode(report), indent=2, ensure_ascii=False) + "\n"
    return json.dumps(encode(report), separators=(",", ":"), ensure_ascii=False) + "\n"


def digest(raw: bytes) -> str:
    return "sha256:" + hashlib.sha256(raw).hexdigest()


@contextmanager
def blame(field: str):
    """Attach ``field`` to library errors raised inside the block."""
    try:
        yield
    except InvalidInput as exc:
        inner = exc.field
        if inner is not None and inner.startswith(field):
            raise
        if inner is None or field.endswith(inner):
            path = field
        else:
            path = f"{field}.{inner}"
        raise InvalidInput(exc.detail, path) from exc
    except ShaK3Error as exc:
        if getattr(exc, "field", None) is None:
            exc.field = field
        raise


def parse_int(x, field: str) -> int:
    if isinstance(x, bool):
        raise InvalidInput("expected an integer, got a boolean", field)
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x, 10)
        except ValueError:
            pass
    raise InvalidInput(f"expected an integer, got {json.dumps(x)}", field)


def parse_vector(x, field: str) -> List[int]:
    if not isinstance(x, list):
        raise InvalidInput("expected a list of integers", field)
    return [parse_int(v, f"{field}[{i}]") for i, v in enumerate(x)]


def parse_matrix(x, field: str, ncols: Optional[int] = None) -> List[List[int]]:
    if not isinstance(x, list) or not x:
        raise InvalidInput("expected a non-empty list of rows", field)
    rows = [parse_vector(r, f"{field}[{i}]") for i, r in enumerate(x)]
    width = ncols if ncols is not None else len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise InvalidInput(f"row {i} has {len(r)} entries, expected {width}", field)
    return rows


def parse_rational_vector(x, field: str) -> List[Fraction]:
    if not isinstance(x, dict) or "num" not in x or "den" not in x:
        raise InvalidInput('expected {"num": [...], "den": n}', field)
    num = parse_vector(x["num"], f"{field}.num")
    den = parse_int(x["den"], f"{field}.den")
    if den < 1:
        raise InvalidInput("den must be >= 1", f"{field}.den")
    return [Fraction(n, den) for n in num]


def parse_gram(x, field: str) -> IntLattice:
    rows = parse_matrix(x, field)
    with blame(field):
        if len(rows) != len(rows[0]):
            raise InvalidInput("gram matrix is not square")
        return IntLattice(rows)


@dataclass
class Job:
    raw: dict
    digest: str

    def has(self, key: str) -> bool:
        return key in self.raw and self.raw[key] is not None

    def require(self, key: str):
        if not self.has(key):
            raise InvalidInput("required field is missing", key)
        return self.raw[key]

    def int(self, key: str, default=None) -> int:
        if not self.has(key):
            if default is None:
                raise InvalidInput("required field is missing", key)
            return default
        return parse_int(self.raw[key], key)


def load_job(raw_bytes: bytes) -> Job:
    try:
        data = json.loads(raw_bytes.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"not valid JSON: {exc}", "<file>") from exc
    if not isinstance(data, dict):
        raise InvalidInput("top level must be an object", "<file>")
    schema = data.get("schema", JOB_SCHEMA)
    if schema != JOB_SCHEMA:
        raise InvalidInput(f"unsupported schema {schema!r}, expected {JOB_SCHEMA!r}", "schema")
    return Job(data, digest(raw_bytes))
