"""Persisted catalog of classified surfaces.

Layout under a root directory:

    index.json                 classification index, one entry per surface
    surfaces/n7_T2.txt         triangulation text format, one per line
    coords/manifold_1_7_1.txt  coordinates of realized surfaces
    meshes/manifold_1_7_1.off  optional OFF exports
    manifests/*.json           one manifest per mutating run

Surfaces are named manifold_<genus-tag>_<n>_<ordinal>: the genus tag is
the orientable genus or '<g>n' for non-orientable genus g, and the ordinal
is the 1-based position in the canonical (sorted lex-minimal) order of all
surfaces with that vertex count.  Index entries carry the invariant bundle
and realization status; counts in the index must match the surface files
line for line.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .classification import SurfaceRecord
from .complexes import TriangleSet, verify_surface
from .formats import dump_complex, parse_complex

_TYPE_ORDER_KEY = {
    # orientable first (by genus), then non-orientable (by genus)
    "S2": (0, 0), "T2": (0, 1), "RP2": (1, 1), "K2": (1, 2),
}


def type_sort_key(name: str) -> tuple[int, int]:
    """Table ordering: orientable by genus, then non-orientable by genus."""
    if name in _TYPE_ORDER_KEY:
        return _TYPE_ORDER_KEY[name]
    # names like M(3,-) / M(3,+)
    genus = int(name[2 : name.index(",")])
    return (0 if name.endswith("+)") else 1, genus)


def summary_line(counts: dict[str, int]) -> str:
    parts = [f"{t}:{counts[t]}" for t in sorted(counts, key=type_sort_key)]
    parts.append(f"total:{sum(counts.values())}")
    return " ".join(parts)


@dataclass
class CatalogEntry:
    name: str
    n: int
    type_name: str
    token: str
    file: str
    line: int
    f_vector: tuple[int, int, int]
    degree_sequence: tuple[int, ...]
    as_determinant: int
    automorphism_order: int
    neighborly: bool
    orientable: bool
    genus: int
    euler_characteristic: int
    realization: dict | None = None

    def to_json(self) -> dict:
        d = {
            "name": self.name,
            "n": self.n,
            "type": self.type_name,
            "token": self.token,
            "file": self.file,
            "line": self.line,
            "f_vector": list(self.f_vector),
            "degree_sequence": list(self.degree_sequence),
            "as_determinant": self.as_determinant,
            "automorphism_order": self.automorphism_order,
            "neighborly": self.neighborly,
            "orientable": self.orientable,
            "genus": self.genus,
            "euler_characteristic": self.euler_characteristic,
        }
        if self.realization is not None:
            d["realization"] = self.realization
        return d

    @classmethod
    def from_json(cls, d: dict) -> "CatalogEntry":
        return cls(
            name=d["name"],
            n=d["n"],
            type_name=d["type"],
            token=d["token"],
            file=d["file"],
            line=d["line"],
            f_vector=tuple(d["f_vector"]),
            degree_sequence=tuple(d["degree_sequence"]),
            as_determinant=d["as_determinant"],
            automorphism_order=d["automorphism_order"],
            neighborly=d["neighborly"],
            orientable=d["orientable"],
            genus=d["genus"],
            euler_characteristic=d["euler_characteristic"],
            realization=d.get("realization"),
        )


class Catalog:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.index_path = self.root / "index.json"
        self.entries: dict[int, list[CatalogEntry]] = {}
        if self.index_path.exists():
            self.load()

    def load(self):
        data = json.loads(self.index_path.read_text())
        self.entries = {
            int(n): [CatalogEntry.from_json(e) for e in lst]
            for n, lst in data.get("entries", {}).items()
        }

    def save(self):
        self.root.mkdir(parents=True, exist_ok=True)
        data = {
            "format": "surfcensus-catalog-1",
            "tool_version": __version__,
            "entries": {
                str(n): [e.to_json() for e in lst]
                for n, lst in sorted(self.entries.items())
            },
        }
        self.index_path.write_text(json.dumps(data, indent=1) + "\n")

    # -- writing -------------------------------------------------------------

    def store_records(self, n: int, records: list[SurfaceRecord]):
        """Write per-(n,type) surface files and rebuild the index rows for n.

        Records must arrive in canonical order; ordinals and line numbers
        follow from it, so identical inputs yield byte-identical files.
        """
        (self.root / "surfaces").mkdir(parents=True, exist_ok=True)
        by_token: dict[str, list[str]] = {}
        entries: list[CatalogEntry] = []
        lines: dict[str, int] = {}
        for ordinal, rec in enumerate(records, start=1):
            token = rec.type.token
            by_token.setdefault(token, []).append(dump_complex(rec.complex))
            lines[token] = lines.get(token, 0) + 1
            entries.append(
                CatalogEntry(
                    name=f"manifold_{rec.type.genus_tag}_{n}_{ordinal}",
                    n=n,
                    type_name=rec.type.name,
                    token=token,
                    file=f"surfaces/n{n}_{token}.txt",
                    line=lines[token],
                    f_vector=rec.key.f_vector,
                    degree_sequence=rec.key.degree_sequence,
                    as_determinant=rec.key.as_determinant,
                    automorphism_order=rec.automorphism_order,
                    neighborly=rec.neighborly,
                    orientable=rec.type.orientable,
                    genus=rec.type.genus,
                    euler_characteristic=rec.type.euler_characteristic,
                )
            )
        for token, rows in sorted(by_token.items()):
            path = self.root / "surfaces" / f"n{n}_{token}.txt"
            path.write_text("".join(r + "\n" for r in rows))
        self.entries[n] = entries
        self.save()

    # -- reading -------------------------------------------------------------

    def complexes(self, n: int, token: str | None = None) -> list[tuple[CatalogEntry, TriangleSet]]:
        out = []
        cache: dict[str, list[str]] = {}
        for e in self.entries.get(n, []):
            if token is not None and e.token != token:
                continue
            if e.file not in cache:
                cache[e.file] = (self.root / e.file).read_text().splitlines()
            out.append((e, parse_complex(cache[e.file][e.line - 1], n=e.n, lineno=e.line)))
        return out

    def set_realization(self, n: int, name: str, info: dict):
        for e in self.entries.get(n, []):
            if e.name == name:
                e.realization = info
                break
        else:
            raise KeyError(f"no catalog entry {name}")
        self.save()

    # -- integrity and reporting ----------------------------------------------

    def check(self) -> list[str]:
        """Integrity problems: missing files, count mismatches, bad entries."""
        problems = []
        for n, lst in sorted(self.entries.items()):
            per_file: dict[str, int] = {}
            for e in lst:
                per_file[e.file] = max(per_file.get(e.file, 0), e.line)
            for fname, maxline in sorted(per_file.items()):
                path = self.root / fname
                if not path.exists():
                    problems.append(f"missing surface file {fname}")
                    continue
                lines = [l for l in path.read_text().splitlines() if l.strip()]
                if len(lines) != maxline:
                    problems.append(
                        f"{fname}: {len(lines)} lines but index expects {maxline}"
                    )
            for e in lst:
                path = self.root / e.file
                if not path.exists():
                    continue
                lines = path.read_text().splitlines()
                if e.line > len(lines):
                    problems.append(f"{e.name}: line {e.line} beyond end of {e.file}")
                    continue
                try:
                    c = parse_complex(lines[e.line - 1], n=e.n, lineno=e.line)
                except ValueError as exc:
                    problems.append(f"{e.name}: {exc}")
                    continue
                if not verify_surface(c):
                    problems.append(f"{e.name}: not a triangulated surface")
        return problems

    def report(self) -> dict:
        """Counts by n and type, plus first-appearance n per type."""
        by_n: dict[int, dict[str, int]] = {}
        first: dict[str, int] = {}
        for n, lst in sorted(self.entries.items()):
            counts: dict[str, int] = {}
            for e in lst:
                counts[e.type_name] = counts.get(e.type_name, 0) + 1
                if e.type_name not in first or n < first[e.type_name]:
                    first[e.type_name] = n
            by_n[n] = counts
        realized = {
            n: sum(
                1
                for e in lst
                if e.realization and e.realization.get("status") not in (None, "unrealized")
            )
            for n, lst in sorted(self.entries.items())
        }
        return {
            "totals": {n: sum(c.values()) for n, c in by_n.items()},
            "counts": by_n,
            "first_appearance": dict(
                sorted(first.items(), key=lambda kv: type_sort_key(kv[0]))
            ),
            "realized": realized,
        }


def write_manifest(root: Path, command: str, config: dict, counts: dict, wall_time: float) -> Path:
    """Record everything needed to reproduce a run bit-exactly."""
    mdir = root / "manifests"
    mdir.mkdir(parents=True, exist_ok=True)
    stamp = time.strftime("%Y%m%dT%H%M%S")
    payload = {
        "command": command,
        "config": config,
        "tool_version": __version__,
        "numpy_version": np.__version__,
        "wall_time_s": round(wall_time, 3),
        "counts": counts,
    }
    path = mdir / f"{command}-{stamp}-{int(time.time() * 1000) % 1000:03d}.json"
    path.write_text(json.dumps(payload, indent=1) + "\n")
    return path
