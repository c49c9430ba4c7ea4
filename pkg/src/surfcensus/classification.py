"""Combinatorial classification of verified surfaces.

Deduplication up to relabeling runs through an invariant funnel: the
f-vector, the sorted vertex-degree sequence, and the exact determinant
det(A A^T) of the 0/1 vertex-triangle incidence matrix A.  Complexes whose
invariants agree are compared by an extension test: map one triangle onto
a target triangle in all ways and propagate across shared edges.  On a
closed surface such a map is rigid -- the image of one ordered triangle
determines the whole vertex bijection -- so each seed either propagates to
a full isomorphism or dies.

Topology comes for free from the Euler characteristic plus an
orientability sweep: genus and homology of a closed surface are functions
of (chi, orientable).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

from .complexes import (
    TriangleSet,
    Tri,
    euler_characteristic,
    f_vector,
)


# ---------------------------------------------------------------------------
# invariants


def degree_sequence(c: TriangleSet) -> tuple[int, ...]:
    """Number of neighbors of each vertex, sorted ascending."""
    nbrs: dict[int, set[int]] = {}
    for a, b, d in c.triangles:
        nbrs.setdefault(a, set()).update((b, d))
        nbrs.setdefault(b, set()).update((a, d))
        nbrs.setdefault(d, set()).update((a, b))
    return tuple(sorted(len(s) for s in nbrs.values()))


def bareiss_determinant(matrix: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination over the integers.

    All intermediate quantities are exact integers; the final pivot is the
    determinant.  Used as an equality key, so no rounding is tolerable.
    """
    m = [row[:] for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i = m[i]
            row_k = m[k]
            lead = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - lead * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def as_determinant(c: TriangleSet) -> int:
    """det(A A^T) for the n x f2 vertex-triangle incidence matrix A.

    (A A^T)[u][v] counts triangles containing both u and v, so the product
    is assembled directly from the complex.
    """
    n = c.n
    m = [[0] * n for _ in range(n)]
    for t in c.triangles:
        for u in t:
            for v in t:
                m[u - 1][v - 1] += 1
    return bareiss_determinant(m)


@dataclass(frozen=True)
class InvariantKey:
    """Relabeling-invariant bundle used to bucket candidate duplicates."""

    f_vector: tuple[int, int, int]
    degree_sequence: tuple[int, ...]
    as_determinant: int


def invariant_key(c: TriangleSet) -> InvariantKey:
    return InvariantKey(f_vector(c), degree_sequence(c), as_determinant(c))


# ---------------------------------------------------------------------------
# isomorphism by edge propagation

class _Tables:
    """Adjacency tables for the propagation search, built once per complex."""

    __slots__ = ("n", "tris", "tri_set", "across", "nbr_deg")

    def __init__(self, c: TriangleSet):
        self.n = c.n
        self.tris = c.triangles
        self.tri_set = set(c.triangles)
        # across[(u,v)] -> the (at most two) third vertices over edge {u,v}
        across: dict[tuple[int, int], list[int]] = {}
        for a, b, d in c.triangles:
            across.setdefault((a, b), []).append(d)
            across.setdefault((a, d), []).append(b)
            across.setdefault((b, d), []).append(a)
        self.across = across
        nbr: dict[int, set[int]] = {}
        for a, b, d in c.triangles:
            nbr.setdefault(a, set()).update((b, d))
            nbr.setdefault(b, set()).update((a, d))
            nbr.setdefault(d, set()).update((a, b))
        self.nbr_deg = {v: len(s) for v, s in nbr.items()}


def _third(tab: _Tables, u: int, v: int, w: int) -> int | None:
    """Third vertex of the triangle across edge {u,v} from w, if closed."""
    e = (u, v) if u < v else (v, u)
    pair = tab.across.get(e)
    if pair is None or len(pair) != 2:
        return None
    return pair[0] if pair[1] == w else pair[1] if pair[0] == w else None


def _propagate(src: _Tables, dst: _Tables, seed_src: Tri, seed_dst: tuple[int, int, int]):
    """Extend seed triangle correspondence across shared edges.

    Returns the vertex map (dict) on success, None on conflict.  Rigidity
    of closed surfaces makes the outcome deterministic per seed.
    """
    vmap: dict[int, int] = {}
    for a, b in zip(seed_src, seed_dst):
        if vmap.get(a, b) != b:
            return None
        vmap[a] = b
    if len(set(seed_dst)) != 3:
        return None
    sa, sb, sc = seed_src
    stack = [(sa, sb, sc), (sa, sc, sb), (sb, sc, sa)]
    matched = {tuple(sorted(seed_src))}
    used_dst = {vmap[sa], vmap[sb], vmap[sc]}
    while stack:
        u, v, w = stack.pop()  # walk across edge {u,v}, away from w
        x = _third(src, u, v, w)
        if x is None:
            continue
        t = tuple(sorted((u, v, x)))
        if t in matched:
            continue
        y = _third(dst, vmap[u], vmap[v], vmap[w])
        if y is None:
            return None
        cur = vmap.get(x)
        if cur is None:
            if y in used_dst:
                return None
            vmap[x] = y
            used_dst.add(y)
        elif cur != y:
            return None
        matched.add(t)
        stack.append((u, x, v))
        stack.append((v, x, u))
    if len(matched) != len(src.tris):
        return None
    # confirm the full triangle sets correspond (guards exotic inputs)
    for a, b, d in src.tris:
        if tuple(sorted((vmap[a], vmap[b], vmap[d]))) not in dst.tri_set:
            return None
    return vmap


def _iso_map(a: TriangleSet, b: TriangleSet):
    """A vertex bijection mapping a onto b, or None."""
    if len(a.triangles) != len(b.triangles) or a.n != b.n:
        return None
    src = _Tables(a)
    dst = _Tables(b)
    seed = a.triangles[0]
    d_seed = tuple(sorted(src.nbr_deg[v] for v in seed))
    for tb in b.triangles:
        if tuple(sorted(dst.nbr_deg[v] for v in tb)) != d_seed:
            continue
        p, q, r = tb
        for image in ((p, q, r), (p, r, q), (q, p, r), (q, r, p), (r, p, q), (r, q, p)):
            if any(src.nbr_deg[s] != dst.nbr_deg[t] for s, t in zip(seed, image)):
                continue
            vmap = _propagate(src, dst, seed, image)
            if vmap is not None:
                return vmap
    return None


def are_isomorphic(a: TriangleSet, b: TriangleSet) -> bool:
    """Combinatorial equivalence, with a fast invariant pre-reject."""
    if invariant_key(a) != invariant_key(b):
        return False
    return _iso_map(a, b) is not None


def automorphism_group_order(c: TriangleSet) -> int:
    """Count vertex bijections fixing the complex.

    Each automorphism sends the first triangle to a unique ordered
    triangle, so counting successful seeds counts the group.
    """
    tab = _Tables(c)
    seed = c.triangles[0]
    count = 0
    for tb in c.triangles:
        p, q, r = tb
        for image in ((p, q, r), (p, r, q), (q, p, r), (q, r, p), (r, p, q), (r, q, p)):
            if _propagate(tab, tab, seed, image) is not None:
                count += 1
    return count


# ---------------------------------------------------------------------------
# canonical form

def _link_cycle(c: TriangleSet, v: int) -> list[int]:
    """Neighbors of v in cyclic order (assumes the link is one circle)."""
    adj: dict[int, list[int]] = {}
    for t in c.triangles:
        if v in t:
            a, b = (x for x in t if x != v)
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
    start = min(adj)
    cycle = [start]
    prev, cur = None, start
    while True:
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
        if cur == start:
            break
        cycle.append(cur)
    return cycle


def _star_seeds(c: TriangleSet) -> Iterator[dict[int, int]]:
    """Partial labelings that realize the canonical star of vertex 1.

    In a lex-minimal labeling vertex 1 has minimum degree k and its star is
    the fixed beginning pattern, which pins labels 1..k+1 once a center, a
    link vertex (label 2) and a direction are chosen.  Everything else is
    left to the completion search.
    """
    nbrs: dict[int, set[int]] = {v: set() for v in c.vertices()}
    for a, b, d in c.triangles:
        nbrs[a].update((b, d))
        nbrs[b].update((a, d))
        nbrs[d].update((a, b))
    degs = {v: len(s) for v, s in nbrs.items()}
    k = min(degs.values())
    for center, d in degs.items():
        if d != k:
            continue
        cycle = _link_cycle(c, center)
        m = len(cycle)
        for i in range(m):
            for step in (1, -1):
                # label 2 at cycle[i]; labels 3,5,7,... walk one way from
                # its 'step' neighbor, labels 4,6,8,... walk the other way
                labeling = {center: 1, cycle[i]: 2}
                lo = (i + step) % m   # gets label 3, then 5, 7, ...
                hi = (i - step) % m   # gets label 4, then 6, 8, ...
                label = 3
                a, b = lo, hi
                while label <= k + 1:
                    if label % 2 == 1:
                        labeling[cycle[a]] = label
                        a = (a + step) % m
                    else:
                        labeling[cycle[b]] = label
                        b = (b - step) % m
                    label += 1
                if len(labeling) == k + 1:
                    yield labeling


def canonical_form(c: TriangleSet) -> TriangleSet:
    """Lexicographically smallest triangle list over all relabelings.

    Branch and bound: seed with every canonical star of a minimum-degree
    vertex, then assign the remaining labels one at a time.  With labels
    1..m placed, the sorted list of fully labeled triangles below the
    sentinel (2,3,m+1) is a committed prefix of the final output -- every
    not-yet-labeled triangle sorts at or after that sentinel -- so prefixes
    are compared against the best complete list found so far.
    """
    verts = sorted(c.vertices())
    best: list[Tri] | None = None

    def relabel_all(labeling: dict[int, int]) -> list[Tri]:
        return sorted(
            tuple(sorted((labeling[a], labeling[b], labeling[d])))  # type: ignore[misc]
            for a, b, d in c.triangles
        )

    def committed(labeling: dict[int, int], m: int) -> list[Tri]:
        sentinel = (2, 3, m + 1)
        out = []
        for a, b, d in c.triangles:
            if a in labeling and b in labeling and d in labeling:
                t = tuple(sorted((labeling[a], labeling[b], labeling[d])))
                if t < sentinel:
                    out.append(t)
        out.sort()
        return out  # type: ignore[return-value]

    def extend(labeling: dict[int, int], m: int):
        nonlocal best
        if m == c.n:
            full = relabel_all(labeling)
            if best is None or full < best:
                best = full
            return
        prefix = committed(labeling, m)
        if best is not None:
            bp = best[: len(prefix)]
            if prefix > bp:
                return
        for v in verts:
            if v not in labeling:
                labeling[v] = m + 1
                extend(labeling, m + 1)
                del labeling[v]

    for seed in _star_seeds(c):
        extend(dict(seed), max(seed.values()))
    assert best is not None
    return TriangleSet(c.n, tuple(best))


# ---------------------------------------------------------------------------
# topology

def orientability(c: TriangleSet) -> bool:
    """Propagate triangle orientations; a parity conflict means
    non-orientable.

    Orientation of a sorted triple (v0,v1,v2) is the cyclic order
    v0->v1->v2; the sign says whether that order or its reverse is used.
    Two triangles sharing an edge must traverse it in opposite directions.
    """
    tris = c.triangles
    by_edge: dict[tuple[int, int], list[int]] = {}
    for i, (a, b, d) in enumerate(tris):
        for e in ((a, b), (a, d), (b, d)):
            by_edge.setdefault(e, []).append(i)

    def direction(t: Tri, e: tuple[int, int]) -> int:
        # +1 if the ascending cyclic order traverses e from min to max
        v0, v1, v2 = t
        if e == (v0, v1) or e == (v1, v2):
            return 1
        return -1  # edge (v0, v2) is traversed v2 -> v0

    sign = [0] * len(tris)
    sign[0] = 1
    stack = [0]
    while stack:
        i = stack.pop()
        a, b, d = tris[i]
        for e in ((a, b), (a, d), (b, d)):
            pair = by_edge[e]
            for j in pair:
                if j == i:
                    continue
                need = -sign[i] * direction(tris[i], e) * direction(tris[j], e)
                if sign[j] == 0:
                    sign[j] = need
                    stack.append(j)
                elif sign[j] != need:
                    return False
    return True


@dataclass(frozen=True)
class TopologicalType:
    """Closed-surface type determined by chi and orientability."""

    euler_characteristic: int
    orientable: bool
    genus: int
    h1_rank: int
    h1_torsion: bool
    h2_rank: int

    @property
    def homology(self) -> tuple[str, str, str]:
        h1 = f"Z^{self.h1_rank}" if self.h1_rank else "0"
        if self.h1_torsion:
            h1 = f"{h1}+Z2" if self.h1_rank else "Z2"
        return ("Z", h1, "Z" if self.h2_rank else "0")

    @property
    def name(self) -> str:
        if self.orientable:
            return {0: "S2", 1: "T2"}.get(self.genus, f"M({self.genus},+)")
        return {1: "RP2", 2: "K2"}.get(self.genus, f"M({self.genus},-)")

    @property
    def token(self) -> str:
        """Filesystem-safe type token (S2, T2, RP2, K2, M3p, M3m, ...)."""
        if self.orientable:
            return {0: "S2", 1: "T2"}.get(self.genus, f"M{self.genus}p")
        return {1: "RP2", 2: "K2"}.get(self.genus, f"M{self.genus}m")

    @property
    def genus_tag(self) -> str:
        """Genus label used in manifold names: '2' orientable, '2n' not."""
        return str(self.genus) if self.orientable else f"{self.genus}n"


def topological_type(chi: int, orientable: bool) -> TopologicalType:
    if orientable:
        if chi % 2 != 0 or chi > 2:
            raise ValueError(f"no orientable closed surface has chi={chi}")
        g = (2 - chi) // 2
        return TopologicalType(chi, True, g, 2 * g, False, 1)
    if chi > 1:
        raise ValueError(f"no non-orientable closed surface has chi={chi}")
    g = 2 - chi
    return TopologicalType(chi, False, g, g - 1, True, 0)


def surface_type(c: TriangleSet) -> TopologicalType:
    return topological_type(euler_characteristic(c), orientability(c))


_HEAWOOD_EXCEPTIONS = {(True, 2), (False, 2), (False, 3)}  # M(2,+), K2, M(3,-)


def heawood_min_vertices(t: TopologicalType) -> int:
    """Minimum vertex count to triangulate the surface.

    ceil((7 + sqrt(49 - 24*chi)) / 2), one more for the three surfaces
    that need an extra vertex.
    """
    disc = 49 - 24 * t.euler_characteristic
    s = math.isqrt(disc)
    if s * s == disc:
        bound = (7 + s + 1) // 2
    else:
        bound = (7 + s) // 2 + 1
    if (t.orientable, t.genus) in _HEAWOOD_EXCEPTIONS:
        bound += 1
    return bound


def is_neighborly(c: TriangleSet) -> bool:
    """1-skeleton is the complete graph K_n."""
    _, f1, _ = f_vector(c)
    return f1 == c.n * (c.n - 1) // 2


# ---------------------------------------------------------------------------
# deduplication

@dataclass(frozen=True)
class SurfaceRecord:
    """One equivalence class: canonical complex plus its classification."""

    complex: TriangleSet
    key: InvariantKey
    type: TopologicalType
    automorphism_order: int
    neighborly: bool


class Deduplicator:
    """Streaming isomorph rejection.

    Surfaces arrive one by one; each is bucketed by its invariant key and
    compared against the class representatives already in the bucket.  The
    stored representative is the first member seen, which for a stream in
    lexicographic order is the class's lex-minimal labeling.
    """

    def __init__(self):
        self.buckets: dict[InvariantKey, list[TriangleSet]] = {}
        self.count_raw = 0

    def add(self, c: TriangleSet) -> bool:
        """Returns True when c opens a new equivalence class."""
        self.count_raw += 1
        key = invariant_key(c)
        bucket = self.buckets.setdefault(key, [])
        for rep in bucket:
            if _iso_map(c, rep) is not None:
                return False
        bucket.append(c)
        return True

    def representatives(self) -> list[TriangleSet]:
        reps = [c for bucket in self.buckets.values() for c in bucket]
        reps.sort(key=lambda c: c.triangles)
        return reps

    def records(self, canonicalize: bool = False) -> list[SurfaceRecord]:
        """Classified records, sorted by canonical triangle list.

        canonicalize=True re-derives the lex-minimal labeling of every
        representative; leave it False when the input stream was already
        lexicographic (the representatives then are canonical as-is).
        """
        out = []
        for rep in self.representatives():
            cx = canonical_form(rep) if canonicalize else rep
            out.append(make_record(cx))
        out.sort(key=lambda r: r.complex.triangles)
        return out


def make_record(cx: TriangleSet) -> SurfaceRecord:
    return SurfaceRecord(
        complex=cx,
        key=invariant_key(cx),
        type=surface_type(cx),
        automorphism_order=automorphism_group_order(cx),
        neighborly=is_neighborly(cx),
    )


def deduplicate(stream: Iterable[TriangleSet], canonicalize: bool = False) -> list[SurfaceRecord]:
    """Collapse a stream of verified surfaces to one record per class."""
    dedup = Deduplicator()
    for c in stream:
        dedup.add(c)
    return dedup.records(canonicalize=canonicalize)
