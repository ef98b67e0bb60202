"""Bank files, signal and matrix files, and atomic writes.

Floats go through ``repr``, which is the shortest decimal string that
reads back to the same double, so JSON and CSV round trips are bit-exact.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from . import registry
from .errors import InputError, IOFailure
from .filterbank import FilterBank
from .separable2d import FiniteSequence2D
from .sequences import FiniteSequence

OFFSET_PREFIX = "# offset="
MAX_SPAN = 10_000_000


def atomic_write(path, text: str) -> None:
    """Write ``text`` to a temporary file next to ``path`` and rename it into place."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", newline="") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc.strerror or exc}") from exc


def _read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise IOFailure(f"cannot read {path}: {exc.strerror or exc}") from exc


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def write_json(obj, path) -> None:
    atomic_write(path, dumps(obj))


def read_json(path) -> dict:
    try:
        return json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


# -- filter banks ------------------------------------------------------------

def bank_to_dict(bank: FilterBank, note: str | None = None) -> dict:
    d = bank.to_dict()
    if note:
        d["note"] = note
    return d


def bank_from_dict(d) -> FilterBank:
    try:
        return FilterBank.from_dict(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed filter bank: {exc}") from exc


def load_bank(spec: str) -> FilterBank:
    """A registry name or the path of a bank JSON file."""
    if spec in registry.REGISTRY:
        return registry.get(spec)
    if not Path(spec).exists():
        raise InputError(f"{spec!r} is neither a built-in bank ({', '.join(registry.names())}) "
                         "nor an existing file")
    return bank_from_dict(read_json(spec))


def save_bank(bank: FilterBank, path, note: str | None = None) -> None:
    write_json(bank_to_dict(bank, note), path)


# -- signals -----------------------------------------------------------------

def format_signal(x: FiniteSequence) -> str:
    lines = [f"{OFFSET_PREFIX}{x.offset}", "index,value"]
    lines += [f"{k},{float(v)!r}" for k, v in zip(x.indices, x.taps)]
    return "\n".join(lines) + "\n"


def parse_signal(text: str, source: str = "<signal>") -> FiniteSequence:
    """Rows ``index,value`` in any order; ``#`` lines and an optional header are skipped."""
    values: dict[int, float] = {}
    rows = csv.reader(line for line in text.splitlines() if not line.lstrip().startswith("#"))
    for lineno, row in enumerate(rows, 1):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise InputError(f"{source}: row {lineno} must have two columns, got {len(row)}")
        a, b = (c.strip() for c in row)
        if lineno == 1 and a.lower() == "index":
            continue
        try:
            k, v = int(a), float(b)
        except ValueError:
            raise InputError(f"{source}: row {lineno} is not 'index,value'") from None
        if not np.isfinite(v):
            raise InputError(f"{source}: row {lineno} has a non-finite value")
        if k in values:
            raise InputError(f"{source}: duplicate index {k}")
        values[k] = v
    if values and max(values) - min(values) >= MAX_SPAN:
        raise InputError(f"{source}: index span exceeds {MAX_SPAN}")
    return FiniteSequence.from_mapping(values)


def read_signal(path) -> FiniteSequence:
    return parse_signal(_read_text(path), str(path))


def write_signal(x: FiniteSequence, path) -> None:
    atomic_write(path, format_signal(x))


# -- 2-D arrays --------------------------------------------------------------

def format_matrix(x: FiniteSequence2D) -> str:
    """Plain-text matrix, one comma-separated row per line, under ``# offset=<r>,<c>``."""
    lines = [f"{OFFSET_PREFIX}{x.offset[0]},{x.offset[1]}"]
    lines += [",".join(repr(float(v)) for v in row) for row in x.taps]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str, source: str = "<matrix>") -> FiniteSequence2D:
    offset = (0, 0)
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if line.startswith(OFFSET_PREFIX):
            try:
                r, c = (int(v) for v in line[len(OFFSET_PREFIX):].split(","))
            except ValueError:
                raise InputError(f"{source}: line {lineno} must read '# offset=<r>,<c>'") from None
            offset = (r, c)
        elif line and not line.startswith("#"):
            try:
                rows.append([float(v) for v in next(csv.reader([line]))])
            except ValueError:
                raise InputError(f"{source}: line {lineno} is not a numeric row") from None
    if not rows:
        return FiniteSequence2D(offset, np.zeros((1, 1)))
    if len({len(r) for r in rows}) != 1:
        raise InputError(f"{source}: rows have different lengths")
    taps = np.array(rows)
    if not np.all(np.isfinite(taps)):
        raise InputError(f"{source}: non-finite value")
    return FiniteSequence2D(offset, taps)


def read_matrix(path) -> FiniteSequence2D:
    return parse_matrix(_read_text(path), str(path))


def write_matrix(x: FiniteSequence2D, path) -> None:
    atomic_write(path, format_matrix(x))
