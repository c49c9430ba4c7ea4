"""File formats: triangulation text lines, coordinate files, OFF meshes.

Triangulation text format, one complex per line:

    1,2,3;1,2,4;1,3,4;2,3,4

Triangles are separated by ';', vertices inside a triangle by ','.  Both
levels must be strictly increasing; violations are reported with 1-based
line and column positions.  Partial complexes (labels missing from 1..n)
parse fine -- the enumerator grows complexes incrementally -- and only
fail surface verification later.

Coordinate file format, one line per vertex:

    <vertex-id> <x> <y> <z>

with whitespace-separated decimal integers.
"""

from __future__ import annotations

from typing import Iterable, TextIO

from .complexes import MAX_GROUND_SET, TriangleSet


class ParseError(ValueError):
    """Input rejection with position information."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def parse_complex(text: str, n: int | None = None, lineno: int = 1) -> TriangleSet:
    """Parse one triangulation line.

    When n is omitted it is inferred as the largest label present.
    """
    text = text.strip()
    if not text:
        raise ParseError("empty complex", lineno, 1)
    triangles: list[tuple[int, int, int]] = []
    col = 1
    prev_tri = None
    for chunk in text.split(";"):
        parts = chunk.split(",")
        if len(parts) != 3:
            raise ParseError(f"triangle {chunk!r} does not have 3 vertices", lineno, col)
        verts = []
        vcol = col
        for p in parts:
            try:
                v = int(p)
            except ValueError:
                raise ParseError(f"bad vertex label {p!r}", lineno, vcol) from None
            if v < 1 or (n is not None and v > n) or v > MAX_GROUND_SET:
                hi = n if n is not None else MAX_GROUND_SET
                raise ParseError(f"vertex {v} outside 1..{hi}", lineno, vcol)
            verts.append(v)
            vcol += len(p) + 1
        tri = (verts[0], verts[1], verts[2])
        if not (tri[0] < tri[1] < tri[2]):
            raise ParseError(f"triangle {chunk!r} not strictly increasing", lineno, col)
        if prev_tri is not None and tri <= prev_tri:
            kind = "duplicate" if tri == prev_tri else "unsorted"
            raise ParseError(f"{kind} triangle {chunk!r}", lineno, col)
        prev_tri = tri
        triangles.append(tri)
        col += len(chunk) + 1
    if n is None:
        n = max(t[2] for t in triangles)
    return TriangleSet(n, tuple(triangles))


def dump_complex(c: TriangleSet) -> str:
    return ";".join(",".join(str(v) for v in t) for t in c.triangles)


def read_complexes(fh: TextIO, n: int | None = None) -> list[TriangleSet]:
    """Parse a whole file, one complex per non-empty line."""
    out = []
    for i, line in enumerate(fh, start=1):
        if line.strip():
            out.append(parse_complex(line, n=n, lineno=i))
    return out


def write_complexes(fh: TextIO, complexes: Iterable[TriangleSet]) -> int:
    count = 0
    for c in complexes:
        fh.write(dump_complex(c) + "\n")
        count += 1
    return count


def parse_coordinates(fh: TextIO) -> dict[int, tuple[int, int, int]]:
    """Read a coordinate file into a vertex -> integer point map."""
    coords: dict[int, tuple[int, int, int]] = {}
    for i, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ParseError("expected '<vertex> <x> <y> <z>'", i, 1)
        try:
            v, x, y, z = (int(p) for p in parts)
        except ValueError:
            raise ParseError(f"non-integer field in {line.strip()!r}", i, 1) from None
        if v in coords:
            raise ParseError(f"duplicate vertex {v}", i, 1)
        coords[v] = (x, y, z)
    return coords


def write_coordinates(fh: TextIO, coords: dict[int, tuple[int, int, int]]) -> None:
    for v in sorted(coords):
        x, y, z = coords[v]
        fh.write(f"{v} {x} {y} {z}\n")


def write_off(fh: TextIO, c: TriangleSet, coords: dict[int, tuple[int, int, int]]) -> None:
    """OFF export: counts line 'n f2 0', float vertices, 0-based faces."""
    fh.write("OFF\n")
    fh.write(f"{c.n} {len(c.triangles)} 0\n")
    for v in range(1, c.n + 1):
        x, y, z = coords[v]
        fh.write(f"{float(x)} {float(y)} {float(z)}\n")
    for a, b, d in c.triangles:
        fh.write(f"3 {a - 1} {b - 1} {d - 1}\n")
