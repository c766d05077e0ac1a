"""Embedded canonical data: side normals, vertices, pairing arrays,
manifold records, digit decryption, and the dimension-6 certification
matrices.  Every file is checksummed against the manifest at load time.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .lorentz import Vec


class DataIntegrityError(RuntimeError):
    pass


@lru_cache(maxsize=1)
def _manifest() -> dict[str, str]:
    root = resources.files(__package__) / "data"
    return json.loads((root / "manifest.json").read_text())


@lru_cache(maxsize=None)
def _read(name: str) -> str:
    root = resources.files(__package__) / "data"
    raw = (root / name).read_bytes()
    want = _manifest().get(name)
    if want is None:
        raise DataIntegrityError(f"{name} missing from manifest")
    got = hashlib.sha256(raw).hexdigest()
    if got != want:
        raise DataIntegrityError(f"checksum mismatch for {name}")
    return raw.decode()


def _int_rows(name: str) -> list[tuple[int, ...]]:
    return [tuple(int(t) for t in line.split())
            for line in _read(name).splitlines() if line.strip()]


@lru_cache(maxsize=1)
def p6_side_normals() -> tuple[Vec, ...]:
    rows = _int_rows("p6_side_normals.txt")
    if len(rows) != 27:
        raise DataIntegrityError("expected 27 side normals")
    return tuple(rows)


@lru_cache(maxsize=1)
def p6_vertices() -> tuple[tuple[Vec, ...], tuple[Vec, ...]]:
    rows = _int_rows("p6_vertices.txt")
    if len(rows) != 99:
        raise DataIntegrityError("expected 99 vertices")
    return tuple(rows[:72]), tuple(rows[72:])


@lru_cache(maxsize=1)
def digit_signs() -> dict[str, tuple[int, ...]]:
    out: dict[str, tuple[int, ...]] = {}
    for line in _read("digit_signs.txt").splitlines():
        parts = line.split()
        if not parts:
            continue
        out[parts[0]] = tuple(int(t) for t in parts[1:])
    if len(out) != 64:
        raise DataIntegrityError("expected 64 digit rows")
    return out


@dataclass(frozen=True)
class ManifoldRecord:
    """Published record for one of the nine glued manifolds."""

    id: int
    code: str
    orientable: bool
    cusps: int
    homology: tuple[str, ...]
    cusp_homology: tuple[tuple[str, ...], ...]


@lru_cache(maxsize=1)
def manifold_records() -> tuple[ManifoldRecord, ...]:
    data = json.loads(_read("manifolds.json"))
    out = []
    for rec in data:
        out.append(ManifoldRecord(
            id=rec["id"], code=rec["code"], orientable=rec["orientable"],
            cusps=rec["cusps"], homology=tuple(rec["homology"]),
            cusp_homology=tuple(tuple(c) for c in rec["cusp_homology"])))
    if [r.id for r in out] != list(range(1, 10)):
        raise DataIntegrityError("manifold records must cover ids 1..9")
    return tuple(out)


def manifold_record(mid: int) -> ManifoldRecord:
    recs = manifold_records()
    if not 1 <= mid <= 9:
        raise ValueError("manifold id must be between 1 and 9")
    return recs[mid - 1]


def pairing_array_text(mid: int) -> str:
    if not 1 <= mid <= 9:
        raise ValueError("manifold id must be between 1 and 9")
    return _read(f"arrays/m{mid}.txt")


@lru_cache(maxsize=1)
def code_matrix_m1() -> tuple[tuple[int, ...], ...]:
    rows = _int_rows("m1_code_matrix.txt")
    if len(rows) != 6 or any(len(r) != 27 for r in rows):
        raise DataIntegrityError("expected a 6 x 27 bit matrix")
    return tuple(rows)


@lru_cache(maxsize=1)
def sideperm_action_m1() -> tuple[tuple[int, ...], ...]:
    rows = _int_rows("m1_sideperm_action.txt")
    if len(rows) != 21 or any(len(r) != 21 for r in rows):
        raise DataIntegrityError("expected a 21 x 21 bit matrix")
    return tuple(rows)


@lru_cache(maxsize=1)
def order4_action_m1() -> tuple[tuple[int, ...], ...]:
    rows = _int_rows("m1_order4_action.txt")
    if len(rows) != 21 or any(len(r) != 21 for r in rows):
        raise DataIntegrityError("expected a 21 x 21 bit matrix")
    return tuple(rows)


@lru_cache(maxsize=1)
def independent_sets_m1() -> tuple[frozenset[int], ...]:
    """The 36 column index sets, converted to 0-based indices."""
    rows = _int_rows("m1_independent_sets.txt")
    if len(rows) != 36:
        raise DataIntegrityError("expected 36 column sets")
    return tuple(frozenset(i - 1 for i in row) for row in rows)
