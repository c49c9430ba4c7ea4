"""Abstract 2-dimensional simplicial complexes on a labeled ground set.

A complex lives on the ground set {1, ..., n} and is stored as a
lexicographically sorted tuple of vertex triples.  Everything downstream
(search order, canonical forms, file formats) is defined in terms of that
sorted-triple representation, so the invariants here are strict: triples
strictly increasing, no duplicates, labels within range.

A closed complex is one in which every edge lies in exactly two triangles
(the pseudomanifold property).  A closed, connected complex whose vertex
links are all single circles is a triangulated closed surface.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Tri = tuple[int, int, int]

MAX_GROUND_SET = 64


def edge_index(u: int, v: int, n: int) -> int:
    """Dense index of the pair u < v among the C(n,2) pairs in lex order.

    (1,2) -> 0, (1,3) -> 1, ..., (1,n) -> n-2, (2,3) -> n-1, ...
    """
    if not (1 <= u < v <= n):
        raise ValueError(f"edge ({u},{v}) out of range for n={n}")
    return (u - 1) * n - u * (u + 1) // 2 + v - 1


def edge_from_index(idx: int, n: int) -> tuple[int, int]:
    """Inverse of edge_index for the same n."""
    if not (0 <= idx < n * (n - 1) // 2):
        raise ValueError(f"edge index {idx} out of range for n={n}")
    u = 1
    while edge_index(u, n, n) < idx:
        u += 1
    v = idx - edge_index(u, u + 1, n) + u + 1
    return u, v


def _check_triangle(t: Sequence[int], n: int) -> Tri:
    if len(t) != 3:
        raise ValueError(f"triangle {t!r} does not have 3 vertices")
    a, b, c = t
    if not (1 <= a < b < c <= n):
        raise ValueError(f"triangle {tuple(t)} not strictly increasing in 1..{n}")
    return (a, b, c)


@dataclass(frozen=True)
class TriangleSet:
    """A 2-complex: ground-set size and sorted, duplicate-free triangles."""

    n: int
    triangles: tuple[Tri, ...]

    def __post_init__(self):
        if not (3 <= self.n <= MAX_GROUND_SET):
            raise ValueError(f"ground-set size {self.n} outside 3..{MAX_GROUND_SET}")
        prev = None
        for t in self.triangles:
            _check_triangle(t, self.n)
            if prev is not None and t <= prev:
                raise ValueError(f"triangles not strictly sorted at {t}")
            prev = t

    @classmethod
    def from_triangles(cls, triangles: Iterable[Sequence[int]], n: int | None = None) -> "TriangleSet":
        """Build from any iterable of triples; sorts and validates."""
        tris = sorted(tuple(sorted(t)) for t in triangles)
        if n is None:
            n = max((t[2] for t in tris), default=3)
        return cls(n, tuple(tris))  # type: ignore[arg-type]

    def __len__(self) -> int:
        return len(self.triangles)

    def __iter__(self):
        return iter(self.triangles)

    def edges(self) -> set[tuple[int, int]]:
        out = set()
        for a, b, c in self.triangles:
            out.add((a, b))
            out.add((a, c))
            out.add((b, c))
        return out

    def vertices(self) -> set[int]:
        out = set()
        for t in self.triangles:
            out.update(t)
        return out

    def relabeled(self, perm: dict[int, int]) -> "TriangleSet":
        """Apply a vertex bijection (a dict 1..n -> 1..n) and resort."""
        return TriangleSet.from_triangles(
            [tuple(perm[v] for v in t) for t in self.triangles], self.n
        )


@dataclass(frozen=True)
class VertexLink:
    """Edges opposite a center vertex in the triangles containing it."""

    center: int
    link_edges: frozenset[tuple[int, int]]


def edge_sum_vector(c: TriangleSet) -> list[int]:
    """Per-edge triangle multiplicities, indexed by edge_index."""
    counts = [0] * (c.n * (c.n - 1) // 2)
    for a, b, c3 in c.triangles:
        counts[edge_index(a, b, c.n)] += 1
        counts[edge_index(a, c3, c.n)] += 1
        counts[edge_index(b, c3, c.n)] += 1
    return counts


def vertex_link(c: TriangleSet, v: int) -> VertexLink:
    """The link of v: exactly the pairs {a,b} with {v,a,b} a triangle."""
    if not (1 <= v <= c.n):
        raise ValueError(f"vertex {v} out of range for n={c.n}")
    edges = set()
    for t in c.triangles:
        if v in t:
            a, b = (x for x in t if x != v)
            edges.add((a, b))
    return VertexLink(v, frozenset(edges))


def link_is_single_circle(link: VertexLink) -> bool:
    """True iff the link edges form one cycle through all link vertices.

    Cycles have length >= 3 by construction (simplicial complexes carry no
    repeated edges), so a degree-2 check plus a single closed walk suffices.
    """
    edges = link.link_edges
    if len(edges) < 3:
        return False
    adj: dict[int, list[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if any(len(nb) != 2 for nb in adj.values()):
        return False
    # walk from an arbitrary vertex; a single cycle visits every link vertex
    start = next(iter(adj))
    prev, cur = None, start
    seen = 0
    while True:
        seen += 1
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
        if cur == start:
            break
    return seen == len(adj)


def is_closed(sums: Sequence[int]) -> bool:
    """True iff every edge multiplicity is 0 or 2 and something is there."""
    any_two = False
    for s in sums:
        if s == 2:
            any_two = True
        elif s != 0:
            return False
    return any_two


def is_connected(c: TriangleSet) -> bool:
    """Connectivity of the triangle graph (adjacency = shared edge), plus
    the requirement that all n ground-set labels actually occur."""
    if not c.triangles:
        return False
    if len(c.vertices()) != c.n:
        return False
    by_edge: dict[tuple[int, int], list[int]] = {}
    for i, (a, b, d) in enumerate(c.triangles):
        for e in ((a, b), (a, d), (b, d)):
            by_edge.setdefault(e, []).append(i)
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        a, b, d = c.triangles[i]
        for e in ((a, b), (a, d), (b, d)):
            for j in by_edge[e]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
    return len(seen) == len(c.triangles)


def verify_surface(c: TriangleSet) -> bool:
    """Full surface check: closed, connected on all n vertices, and every
    vertex link a single circle."""
    if not c.triangles:
        return False
    if not is_closed(edge_sum_vector(c)):
        return False
    if not is_connected(c):
        return False
    return all(link_is_single_circle(vertex_link(c, v)) for v in range(1, c.n + 1))


def f_vector(c: TriangleSet) -> tuple[int, int, int]:
    """(f0, f1, f2) = (n, #edges, #triangles)."""
    return c.n, len(c.edges()), len(c.triangles)


def euler_characteristic(c: TriangleSet) -> int:
    f0, f1, f2 = f_vector(c)
    return f0 - f1 + f2
