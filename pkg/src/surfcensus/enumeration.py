"""Backtracking generation of all triangulated surfaces on n vertices.

The search walks triangle sets in strictly increasing lexicographic order.
Up to relabeling, the star of vertex 1 in a lex-minimal triangulation is a
fixed beginning segment B_k (k = deg(1)), so the run seeds one segment at
a time and extends it with triangles from (2,3,4) upward.

State per branch: the edge multiplicity vector (entries 0/1/2; pushing an
entry past 2 backtracks) and, per vertex, its link -- always a disjoint
union of paths and circles because link degrees equal edge multiplicities.
Links are tracked incrementally via path-endpoint records so circle
closures are detected in O(1).

Pruning:
  * edge overflow (an edge would be in three triangles);
  * link anomaly (a circle plus extra edges at one vertex);
  * degree bounds: in lex order a circle shorter than k closing means the
    completion has a vertex of degree < k and is a duplicate of an earlier
    segment's output; in mixed order no degree or link may exceed k;
  * symmetry exclusions around the segment's reflection: triangles 23j
    (odd j, 5 <= j <= k) never occur in lex-minimal completions, and after
    23i (even i, 6 <= i <= k) the triangles 24j (odd 3 <= j <= i-3) are
    excluded;
  * deadline cuts: each open edge must be closed by a triangle later in
    lex order, so scanning past the last triangle containing it kills the
    branch;
  * closed states are emitted and never extended (only vertex-disjoint
    growth could follow, which cannot reach a connected surface).

Closed, connected candidates using all n vertices whose links are single
circles are emitted; isomorph rejection is a separate downstream pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .classification import Deduplicator, heawood_min_vertices, topological_type
from .complexes import TriangleSet, Tri, edge_index, is_connected

Sink = Callable[[tuple[Tri, ...]], None]


def beginning_segment(k: int) -> TriangleSet:
    """The canonical lex-minimal star of vertex 1 with degree k.

    123, 124, then 1 j (j+2) for 3 <= j <= k-1, closed by 1 k (k+1).
    The link of vertex 1 is a single k-circle on {2, ..., k+1}.
    """
    if k < 3:
        raise ValueError(f"beginning segment needs degree >= 3, got {k}")
    tris = [(1, 2, 3), (1, 2, 4)]
    tris += [(1, j, j + 2) for j in range(3, k)]
    tris.append((1, k, k + 1))
    return TriangleSet.from_triangles(tris, n=k + 1)


def max_triangle_count(n: int) -> int:
    """Largest f2 any closed surface on n vertices can have.

    Walks chi downward while some surface type still fits n vertices per
    the minimum-vertex bound (exceptions included); f2 = 2n - 2*chi.
    """
    chi = 2
    chi_min = 2
    while True:
        fits = False
        for orientable in (True, False):
            try:
                t = topological_type(chi, orientable)
            except ValueError:
                continue
            if heawood_min_vertices(t) <= n:
                fits = True
        if not fits:
            break
        chi_min = chi
        chi -= 1
    return 2 * n - 2 * chi_min


@dataclass
class EnumerationConfig:
    n: int
    mode: str = "lex"  # "lex" | "mixed"
    emit_isomorphic_duplicates: bool = False
    partition: tuple[int, int] | None = None  # (index, count) subtree stripe

    def __post_init__(self):
        if not (4 <= self.n <= 64):
            raise ValueError(f"n={self.n} outside supported range 4..64")
        if self.mode not in ("lex", "mixed"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.partition is not None:
            i, m = self.partition
            if not (m >= 1 and 0 <= i < m):
                raise ValueError(f"bad partition {self.partition}")


class SearchState:
    """Mutable backtracking state for one beginning segment.

    Owned by exactly one search; never shared.  All mutations made by
    add_triangle are reverted by undo_triangle with the returned record.
    """

    def __init__(self, n: int, k: int, mode: str):
        self.n = n
        self.k = k
        self.mode = mode
        ne = n * (n - 1) // 2
        # static tables -----------------------------------------------------
        tris: list[Tri] = []
        for a in range(1, n - 1):
            for b in range(a + 1, n):
                for c in range(b + 1, n + 1):
                    tris.append((a, b, c))
        self.tri_verts = tris  # index order == lex order
        self.tri_index = {t: i for i, t in enumerate(tris)}
        self.tri_edges = [
            (edge_index(a, b, n), edge_index(a, c, n), edge_index(b, c, n))
            for a, b, c in tris
        ]
        edge_last = [-1] * ne
        for i, (e1, e2, e3) in enumerate(self.tri_edges):
            edge_last[e1] = edge_last[e2] = edge_last[e3] = i
        self.edge_last = edge_last
        deadline: list[tuple[int, ...]] = [()] * len(tris)
        for e, i in enumerate(edge_last):
            deadline[i] = deadline[i] + (e,)
        self.deadline_after = deadline
        self.first_candidate = self.tri_index[(2, 3, 4)]
        self.max_f2 = max_triangle_count(n)
        self.max_f1 = 3 * self.max_f2 // 2
        # symmetry exclusion tables for this segment; the 23i-then-234 pair
        # needs no tracking (123 and 234 pin edge 23 at multiplicity two,
        # so no 23i can follow 234 anyway)
        banned = [False] * len(tris)
        rule2_j = [0] * len(tris)  # t == (2,4,j), odd j >= 5
        rule2_23i = [0] * len(tris)  # t == (2,3,i), even i, 6 <= i <= k
        for i, (a, b, c) in enumerate(tris):
            if a == 2 and b == 3 and c % 2 == 1 and 5 <= c <= k:
                banned[i] = True
            if a == 2 and b == 4 and c % 2 == 1 and c >= 5:
                rule2_j[i] = c
            if a == 2 and b == 3 and c % 2 == 0 and 6 <= c <= k:
                rule2_23i[i] = c
        self.sym_banned = banned
        self.rule2_j = rule2_j
        self.rule2_23i = rule2_23i
        # dynamic state ------------------------------------------------------
        self.count = [0] * ne
        self.open_edges = 0
        self.used_edges = 0
        self.chosen: list[int] = []
        m = n + 1
        self.ep: list[dict[int, tuple[int, int]]] = [dict() for _ in range(m)]
        self.link_edges = [0] * m
        self.link_verts = [0] * m
        self.closed_circles = [0] * m
        self.circle_edges = [0] * m
        self.max_even_23i = 0

    # -- link bookkeeping ---------------------------------------------------

    def _link_add(self, v: int, x: int, y: int):
        """Insert edge {x,y} into link(v); returns (undo, closed_len).

        closed_len is the length of a circle completed by this edge, or 0.
        Assumes x and y currently have link degree <= 1 at v (guaranteed by
        the edge multiplicity pre-check).
        """
        ep = self.ep[v]
        px = ep.get(x)
        py = ep.get(y)
        self.link_edges[v] += 1
        closed_len = 0
        new_verts = 0
        if px is None and py is None:
            ep[x] = (y, 1)
            ep[y] = (x, 1)
            undo = (v, ((x, None), (y, None)), 2, 0)
            new_verts = 2
        elif px is not None and py is None:
            w, length = px
            del ep[x]
            saved_w = ep.get(w)
            ep[w] = (y, length + 1)
            ep[y] = (w, length + 1)
            undo = (v, ((x, px), (y, None), (w, saved_w)), 1, 0)
            new_verts = 1
        elif px is None:
            w, length = py  # type: ignore[misc]
            del ep[y]
            saved_w = ep.get(w)
            ep[w] = (x, length + 1)
            ep[x] = (w, length + 1)
            undo = (v, ((y, py), (x, None), (w, saved_w)), 1, 0)
            new_verts = 1
        elif px[0] == y:
            # x and y are the two ends of one path: the circle closes
            closed_len = px[1] + 1
            del ep[x]
            del ep[y]
            self.closed_circles[v] += 1
            self.circle_edges[v] += closed_len
            undo = (v, ((x, px), (y, py)), 0, closed_len)
        else:
            w1, l1 = px
            w2, l2 = py  # type: ignore[misc]
            del ep[x]
            del ep[y]
            s1 = ep.get(w1)
            s2 = ep.get(w2)
            total = l1 + l2 + 1
            ep[w1] = (w2, total)
            ep[w2] = (w1, total)
            undo = (v, ((x, px), (y, py), (w1, s1), (w2, s2)), 0, 0)
        self.link_verts[v] += new_verts
        return undo, closed_len

    def _link_undo(self, undo):
        v, entries, new_verts, closed_len = undo
        ep = self.ep[v]
        for key, old in reversed(entries):
            if old is None:
                ep.pop(key, None)
            else:
                ep[key] = old
        self.link_edges[v] -= 1
        self.link_verts[v] -= new_verts
        if closed_len:
            self.closed_circles[v] -= 1
            self.circle_edges[v] -= closed_len

    # -- triangle add / undo --------------------------------------------------

    def add_triangle(self, i: int):
        """Apply triangle index i; returns (ok, record).

        ok is False when a prune rule fires after the update (link anomaly,
        short circle in lex mode, degree/link cap in mixed mode); the
        caller must undo with the record either way.
        """
        count = self.count
        a, b, c = self.tri_verts[i]
        delta_open = 0
        delta_used = 0
        for e in self.tri_edges[i]:
            old = count[e]
            count[e] = old + 1
            if old == 0:
                delta_open += 1
                delta_used += 1
            else:
                delta_open -= 1
        self.open_edges += delta_open
        self.used_edges += delta_used
        undos = []
        ok = True
        k = self.k
        lex = self.mode == "lex"
        for v, x, y in ((a, b, c), (b, a, c), (c, a, b)):
            u, closed_len = self._link_add(v, x, y)
            undos.append(u)
            if closed_len and lex and closed_len < k:
                ok = False
            cc = self.closed_circles[v]
            if cc and (cc > 1 or self.link_edges[v] > self.circle_edges[v]):
                ok = False  # circle plus extra edges: pinch forming
            if not lex and (self.link_edges[v] > k or self.link_verts[v] > k):
                ok = False
        self.chosen.append(i)
        prev_even = self.max_even_23i
        r2i = self.rule2_23i[i]
        if r2i > self.max_even_23i:
            self.max_even_23i = r2i
        return ok, (i, delta_open, delta_used, tuple(undos), prev_even)

    def undo_triangle(self, record):
        i, delta_open, delta_used, undos, prev_even = record
        self.chosen.pop()
        self.max_even_23i = prev_even
        for u in reversed(undos):
            self._link_undo(u)
        count = self.count
        for e in self.tri_edges[i]:
            count[e] -= 1
        self.open_edges -= delta_open
        self.used_edges -= delta_used

    # -- queries (the testable pruning contracts) ----------------------------

    def chosen_triangles(self) -> tuple[Tri, ...]:
        return tuple(self.tri_verts[i] for i in self.chosen)

    def is_closed_state(self) -> bool:
        return self.open_edges == 0 and bool(self.chosen)


def prune_edge_overflow(state: SearchState, t: Tri) -> bool:
    """True iff adding t would push some edge multiplicity past two."""
    i = state.tri_index[t]
    return any(state.count[e] >= 2 for e in state.tri_edges[i])


def prune_link_anomaly(state: SearchState) -> bool:
    """True iff some vertex link holds a closed circle plus extra edges."""
    for v in range(1, state.n + 1):
        cc = state.closed_circles[v]
        if cc and (cc > 1 or state.link_edges[v] > state.circle_edges[v]):
            return True
    return False


def prune_degree_bounds(state: SearchState) -> bool:
    """Mode-dependent degree rule.

    lex: some link closed into a circle shorter than k.
    mixed: some vertex degree or link edge count exceeds k.
    """
    k = state.k
    if state.mode == "lex":
        for v in range(1, state.n + 1):
            if state.closed_circles[v] == 1 and state.circle_edges[v] < k:
                return True
        return False
    for v in range(1, state.n + 1):
        if state.link_edges[v] > k or state.link_verts[v] > k:
            return True
    return False


def prune_symmetry_exclusions(state: SearchState, t: Tri) -> bool:
    """Reflection-symmetry exclusions relative to the beginning segment."""
    k = state.k
    a, b, c = t
    if a == 2 and b == 3 and c % 2 == 1 and 5 <= c <= k:
        return True
    # pair rule: 23i chosen (even 6 <= i <= k) bans 24j (odd 3 <= j <= i-3)
    j = None
    if (a, b, c) == (2, 3, 4):
        j = 3  # the sorted form of "24j" at j=3
    elif a == 2 and b == 4 and c % 2 == 1:
        j = c
    if j is not None:
        for idx in state.chosen:
            ta, tb, tc = state.tri_verts[idx]
            if ta == 2 and tb == 3 and tc % 2 == 0 and 6 <= tc <= k and j <= tc - 3:
                return True
    return False


def finalize_candidate(state: SearchState) -> TriangleSet | None:
    """Check a closed state: surface on exactly n vertices, or nothing."""
    if not state.is_closed_state():
        return None
    n = state.n
    for v in range(1, n + 1):
        if state.closed_circles[v] != 1:
            return None
        if state.link_edges[v] != state.circle_edges[v]:
            return None
        if state.circle_edges[v] < 3:
            return None
    c = TriangleSet(n, state.chosen_triangles())
    if not is_connected(c):
        return None
    return c


def _segment_search(state: SearchState, sink: Sink, partition: tuple[int, int] | None):
    """Depth-first extension of the seeded beginning segment."""
    n = state.n
    count = state.count
    tri_edges = state.tri_edges
    tri_verts = state.tri_verts
    edge_last = state.edge_last
    deadline_after = state.deadline_after
    sym_banned = state.sym_banned
    rule2_j = state.rule2_j
    closed_circles = state.closed_circles
    link_edges = state.link_edges
    ntris = len(tri_verts)
    k = state.k
    mixed = state.mode == "mixed"
    max_f2 = state.max_f2
    max_f1 = state.max_f1
    first_candidate = state.first_candidate
    part_i, part_m = partition if partition else (0, 1)

    def emit_if_surface():
        for v in range(1, n + 1):
            if closed_circles[v] != 1 or link_edges[v] != state.circle_edges[v]:
                return
        tris = state.chosen_triangles()
        c = TriangleSet(n, tris)
        if is_connected(c):
            sink(tris)

    def rec(last: int, depth: int):
        if state.open_edges == 0:
            emit_if_surface()
            return  # only vertex-disjoint growth could follow: sterile
        # feasibility arithmetic
        room = max_f2 - len(state.chosen)
        if room <= 0 or state.open_edges > 3 * room or state.used_edges > max_f1:
            return
        if last >= 0:
            for e in tri_edges[last]:
                if count[e] == 1 and edge_last[e] <= last:
                    return  # an edge of the newest triangle can never close
        ordinal = 0
        start = last + 1 if last >= first_candidate else first_candidate
        for i in range(start, ntris):
            e1, e2, e3 = tri_edges[i]
            if count[e1] == 2 or count[e2] == 2 or count[e3] == 2:
                pass
            elif sym_banned[i]:
                pass
            elif rule2_j[i] and state.max_even_23i >= rule2_j[i] + 3:
                pass
            else:
                a, b, c = tri_verts[i]
                if closed_circles[a] or closed_circles[b] or closed_circles[c]:
                    pass
                elif mixed and (
                    link_edges[a] >= k or link_edges[b] >= k or link_edges[c] >= k
                ):
                    pass
                else:
                    take = True
                    if depth == 0 and part_m > 1:
                        take = ordinal % part_m == part_i
                        ordinal += 1
                    if take:
                        ok, record = state.add_triangle(i)
                        if ok:
                            rec(i, depth + 1)
                        state.undo_triangle(record)
            for e in deadline_after[i]:
                if count[e] == 1:
                    return  # open edge with no closer left in lex order

    rec(max(state.chosen) if state.chosen else -1, 0)


def enumerate_raw(config: EnumerationConfig, sink: Sink) -> None:
    """Run the backtracking, feeding every verified surface to sink.

    Lex mode seeds segments B_3 upward (the whole emission sequence is
    strictly lex-increasing); mixed mode seeds B_{n-1} downward with the
    degree cap active, so each class surfaces in the segment matching its
    maximum vertex degree.
    """
    n = config.n
    ks = range(3, n) if config.mode == "lex" else range(n - 1, 2, -1)
    for k in ks:
        state = SearchState(n, k, config.mode)
        for t in beginning_segment(k).triangles:
            ok, _ = state.add_triangle(state.tri_index[t])
            if not ok:
                raise AssertionError("beginning segment must be prune-free")
        _segment_search(state, sink, config.partition)


def enumerate_surfaces(config: EnumerationConfig) -> Iterator[TriangleSet]:
    """All triangulated surfaces on exactly n vertices.

    By default one lex-minimal representative per combinatorial
    equivalence class, in canonical order.  With
    emit_isomorphic_duplicates=True the raw verified stream is yielded
    instead (every labeled candidate the search produces, pre-dedup).
    """
    if config.emit_isomorphic_duplicates:
        raw: list[TriangleSet] = []
        enumerate_raw(config, lambda tris: raw.append(TriangleSet(config.n, tris)))
        return iter(raw)
    records = enumerate_records(config)
    return iter([r.complex for r in records])


def enumerate_records(config: EnumerationConfig):
    """Enumerate and classify in one pass; returns SurfaceRecords."""
    dedup = Deduplicator()
    n = config.n
    dedup_add = dedup.add
    enumerate_raw(config, lambda tris: dedup_add(TriangleSet(n, tris)))
    # a lex stream is globally sorted, so first-seen members are already
    # canonical; mixed segments are only locally sorted
    return dedup.records(canonicalize=(config.mode != "lex"))
