"""Randomized geometric realization of orientable surfaces in 3-space.

The realization test is purely combinatorial-geometric: a labeled set of
integer points realizes a triangulation iff every geometric triangle is
disjoint from every combinatorially disjoint edge.  All decisions reduce
to signs of exact integer 3x3 determinants (orient3d); any zero sign marks
the draw as non-general-position and the whole try is rejected, so no
boundary-contact case ever needs interpretation.

Coordinates are drawn with Philox4x64-10, a counter-based generator with
2^256 counter space: the draw for (seed, stream, try) keys the generator
with seed and stream (64 bits each) and starts the counter at try * 2^64,
so tries, streams and parallel workers can never overlap and every draw is
reproducible in isolation.

Two equivalent embedding-test paths exist: a pure-Python exact path (any
magnitude), and a numpy int64 path used when all coordinates are small
enough that no determinant can overflow.  Both apply the identical
predicate rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .complexes import TriangleSet, verify_surface
from .classification import orientability

Point = tuple[int, int, int]


class Degenerate(Enum):
    """Sentinel outcome for a zero orientation sign."""

    DEGENERATE = "degenerate"

    def __bool__(self):
        raise TypeError("Degenerate is not a truth value; test identity instead")


DEGENERATE = Degenerate.DEGENERATE


@dataclass(frozen=True)
class CoordinateAssignment:
    """Integer 3-D points indexed by vertex id 1..n."""

    n: int
    points: tuple[Point, ...]

    def __post_init__(self):
        if len(self.points) != self.n:
            raise ValueError(f"expected {self.n} points, got {len(self.points)}")
        if len(set(self.points)) != self.n:
            raise ValueError("coordinate assignment has coinciding points")

    def __getitem__(self, v: int) -> Point:
        return self.points[v - 1]

    def as_dict(self) -> dict[int, Point]:
        return {v + 1: p for v, p in enumerate(self.points)}

    @classmethod
    def from_dict(cls, coords: dict[int, Point]) -> "CoordinateAssignment":
        n = max(coords)
        if sorted(coords) != list(range(1, n + 1)):
            raise ValueError("coordinate map must cover vertices 1..n")
        return cls(n, tuple(tuple(int(x) for x in coords[v]) for v in range(1, n + 1)))  # type: ignore[arg-type]

    def max_norm(self) -> int:
        return max(abs(x) for p in self.points for x in p)


@dataclass(frozen=True)
class RealizationConfig:
    cube_side: int = 32768
    seed: int = 0
    max_tries: int = 1000
    delta: int = 8
    recycle: bool = False

    def __post_init__(self):
        if self.cube_side < 2:
            raise ValueError("cube side must be at least 2")
        if self.max_tries < 1:
            raise ValueError("max_tries must be positive")
        if self.delta < 0:
            raise ValueError("perturbation radius must be nonnegative")


class Provenance(Enum):
    FRESH = "fresh"
    RECYCLED = "recycled"
    PERTURBED = "perturbed"
    SHRUNK = "shrunk"


@dataclass(frozen=True)
class RealizationResult:
    coords: CoordinateAssignment
    tries_used: int
    provenance: Provenance


def orient3d(p: Point, q: Point, r: Point, s: Point) -> int:
    """Sign of det(q-p, r-p, s-p), exact over the integers."""
    ax = q[0] - p[0]
    ay = q[1] - p[1]
    az = q[2] - p[2]
    bx = r[0] - p[0]
    by = r[1] - p[1]
    bz = r[2] - p[2]
    cx = s[0] - p[0]
    cy = s[1] - p[1]
    cz = s[2] - p[2]
    det = ax * (by * cz - bz * cy) - ay * (bx * cz - bz * cx) + az * (bx * cy - by * cx)
    if det > 0:
        return 1
    if det < 0:
        return -1
    return 0


def triangle_segment_disjoint(
    a: Point, b: Point, c: Point, p: Point, q: Point
) -> bool | Degenerate:
    """Closed triangle abc versus closed segment pq, by orientation signs.

    Returns DEGENERATE as soon as any required sign is zero (collinear
    triangle included: every orient3d against a degenerate triangle is 0).
    """
    s1 = orient3d(a, b, c, p)
    if s1 == 0:
        return DEGENERATE
    s2 = orient3d(a, b, c, q)
    if s2 == 0:
        return DEGENERATE
    if s1 == s2:
        return True  # both endpoints strictly on one side of the plane
    u = orient3d(p, q, a, b)
    if u == 0:
        return DEGENERATE
    v = orient3d(p, q, b, c)
    if v == 0:
        return DEGENERATE
    w = orient3d(p, q, c, a)
    if w == 0:
        return DEGENERATE
    # the crossing point of pq with the plane lies inside abc iff the
    # three side orientations agree
    return not (u == v == w)


def _disjoint_pairs(c: TriangleSet) -> list[tuple[tuple[int, int, int], tuple[int, int]]]:
    """All (triangle, vertex-disjoint edge) pairs of the triangulation."""
    edges = sorted(c.edges())
    pairs = []
    for t in c.triangles:
        ts = set(t)
        for e in edges:
            if e[0] not in ts and e[1] not in ts:
                pairs.append((t, e))
    return pairs


_FAST_LIMIT = 1 << 19  # 3*(bits+1)+3 < 63 keeps the int64 path overflow-free


class EmbeddingTester:
    """Reusable embedding test for one triangulation.

    Precomputes the (triangle, disjoint edge) index arrays once; testing a
    coordinate assignment is then a handful of vectorized determinant
    batches.  Falls back to exact big-integer arithmetic when coordinates
    are too large for the int64 path.
    """

    def __init__(self, c: TriangleSet):
        self.complex = c
        self.pairs = _disjoint_pairs(c)
        # (0,3)/(0,2) shapes matter: the tetrahedron has no disjoint pairs
        self.tri_idx = np.array(
            [[v - 1 for v in t] for t, _ in self.pairs], dtype=np.intp
        ).reshape(-1, 3)
        self.edge_idx = np.array(
            [[v - 1 for v in e] for _, e in self.pairs], dtype=np.intp
        ).reshape(-1, 2)

    def __call__(self, points) -> bool:
        pts = np.asarray(points, dtype=np.int64)
        if abs(pts).max(initial=0) <= _FAST_LIMIT:
            return self._test_fast(pts)
        return self._test_exact([tuple(int(x) for x in row) for row in pts])

    def _test_fast(self, pts) -> bool:
        a = pts[self.tri_idx[:, 0]]
        b = pts[self.tri_idx[:, 1]]
        c = pts[self.tri_idx[:, 2]]
        p = pts[self.edge_idx[:, 0]]
        q = pts[self.edge_idx[:, 1]]
        ab = b - a
        ac = c - a
        nrm = np.cross(ab, ac)
        s1 = np.einsum("ij,ij->i", nrm, p - a)
        s2 = np.einsum("ij,ij->i", nrm, q - a)
        if np.any(s1 == 0) or np.any(s2 == 0):
            return False
        crossing = (s1 > 0) != (s2 > 0)
        if not np.any(crossing):
            return True
        pc = p[crossing]
        qc = q[crossing]
        d = qc - pc
        u = np.einsum("ij,ij->i", np.cross(d, a[crossing] - pc), b[crossing] - pc)
        v = np.einsum("ij,ij->i", np.cross(d, b[crossing] - pc), c[crossing] - pc)
        w = np.einsum("ij,ij->i", np.cross(d, c[crossing] - pc), a[crossing] - pc)
        if np.any(u == 0) or np.any(v == 0) or np.any(w == 0):
            return False
        pierced = ((u > 0) & (v > 0) & (w > 0)) | ((u < 0) & (v < 0) & (w < 0))
        return not np.any(pierced)

    def batch(self, pts):
        """Per-row verdicts for a (B, n, 3) int64 stack of coordinate draws.

        Identical predicate rules as the single test; only the numpy call
        overhead is amortized.  Callers guarantee the int64 magnitude cap.
        """
        a = pts[:, self.tri_idx[:, 0]]
        b = pts[:, self.tri_idx[:, 1]]
        c = pts[:, self.tri_idx[:, 2]]
        p = pts[:, self.edge_idx[:, 0]]
        q = pts[:, self.edge_idx[:, 1]]
        nrm = np.cross(b - a, c - a)
        s1 = np.einsum("bpj,bpj->bp", nrm, p - a)
        s2 = np.einsum("bpj,bpj->bp", nrm, q - a)
        bad = ((s1 == 0) | (s2 == 0)).any(axis=1)
        crossing = ((s1 > 0) != (s2 > 0)) & ~bad[:, None]
        rows, cols = np.nonzero(crossing)
        if rows.size:
            pa = p[rows, cols]
            d = q[rows, cols] - pa
            av = a[rows, cols] - pa
            bv = b[rows, cols] - pa
            cv = c[rows, cols] - pa
            u = np.einsum("mj,mj->m", np.cross(d, av), bv)
            v = np.einsum("mj,mj->m", np.cross(d, bv), cv)
            w = np.einsum("mj,mj->m", np.cross(d, cv), av)
            zero2 = (u == 0) | (v == 0) | (w == 0)
            pierced = ((u > 0) & (v > 0) & (w > 0)) | ((u < 0) & (v < 0) & (w < 0))
            bad[rows[zero2 | pierced]] = True
        return ~bad

    def _test_exact(self, pts: list[Point]) -> bool:
        for (t, e) in self.pairs:
            r = triangle_segment_disjoint(
                pts[t[0] - 1], pts[t[1] - 1], pts[t[2] - 1], pts[e[0] - 1], pts[e[1] - 1]
            )
            if r is not True:
                return False
        return True


def is_embedding(c: TriangleSet, coords: CoordinateAssignment) -> bool:
    """True iff coords realize c with no crossings and no degeneracies."""
    if coords.n < c.n:
        raise ValueError("coordinate assignment does not cover all vertices")
    return EmbeddingTester(c)(coords.points)


def _philox(seed: int, stream: int, counter: int):
    key = ((seed & (2**64 - 1)) << 64) | (stream & (2**64 - 1))
    return np.random.Generator(np.random.Philox(key=key, counter=counter << 64))


class _CounterDraws:
    """Fast counter-addressed draws from one (seed, stream) Philox.

    Resetting counter and buffer position in place reproduces exactly what
    a freshly constructed Philox(key, counter=t << 64) would emit, without
    the per-try construction cost.
    """

    def __init__(self, seed: int, stream: int):
        key = ((seed & (2**64 - 1)) << 64) | (stream & (2**64 - 1))
        self._ph = np.random.Philox(key=key)

    def points(self, counter: int, n: int, k: int):
        st = self._ph.state
        st["state"]["counter"][:] = 0
        st["state"]["counter"][1] = counter
        st["buffer_pos"] = 4
        st["has_uint32"] = 0
        self._ph.state = st
        return np.random.Generator(self._ph).integers(0, k, size=(n, 3))


def random_coordinates(
    n: int, config: RealizationConfig, stream: int = 0, counter: int = 0
) -> CoordinateAssignment:
    """Uniform integer points in {0..k-1}^3, addressed by (seed, stream, counter).

    Identical arguments always reproduce the identical assignment; distinct
    counters use disjoint Philox counter blocks.  Coinciding points are
    replaced by further draws from the same block (vanishingly rare for
    realistic cube sides).
    """
    gen = _philox(config.seed, stream, counter)
    k = config.cube_side
    pts = gen.integers(0, k, size=(n, 3))
    rows = [tuple(int(x) for x in row) for row in pts]
    while len(set(rows)) != n:
        seen: set[Point] = set()
        for i, row in enumerate(rows):
            while row in seen:
                row = tuple(int(x) for x in gen.integers(0, k, size=3))  # type: ignore[assignment]
            seen.add(row)
            rows[i] = row
    return CoordinateAssignment(n, tuple(rows))


def random_realize(
    c: TriangleSet,
    config: RealizationConfig,
    stream: int = 0,
    tester: EmbeddingTester | None = None,
) -> RealizationResult | None:
    """Draw coordinates until one assignment embeds c, or give up.

    Only orientable inputs are meaningful: a closed non-orientable surface
    has no embedding in 3-space at all.
    """
    if not verify_surface(c):
        raise ValueError("input is not a triangulated closed surface")
    if not orientability(c):
        raise ValueError("non-orientable surfaces have no embedding in R^3")
    if tester is None:
        tester = EmbeddingTester(c)
    k = config.cube_side
    draws = _CounterDraws(config.seed, stream)
    use_batch = k - 1 + config.delta <= _FAST_LIMIT
    batch_size = 64
    buf = np.empty((batch_size, c.n, 3), dtype=np.int64)
    t = 0
    while t < config.max_tries:
        m = min(batch_size, config.max_tries - t)
        for r in range(m):
            buf[r] = draws.points(t + r, c.n, k)
        if use_batch:
            verdicts = tester.batch(buf[:m])
        else:
            verdicts = [tester(buf[r]) for r in range(m)]
        for r in range(m):
            if not verdicts[r]:
                continue
            rows = tuple(tuple(int(x) for x in row) for row in buf[r])
            if len(set(rows)) != c.n:
                continue  # coinciding points: not general position
            return RealizationResult(
                CoordinateAssignment(c.n, rows), t + r + 1, Provenance.FRESH
            )
        t += m
    return None


def recycle(
    pool: Sequence[CoordinateAssignment], targets: Sequence[TriangleSet]
) -> list[tuple[int, int]]:
    """All (target index, pool index) pairs where the pooled coordinates
    already embed the target, in target-major order."""
    hits = []
    for ti, c in enumerate(targets):
        tester = EmbeddingTester(c)
        for pi, coords in enumerate(pool):
            if tester(coords.points):
                hits.append((ti, pi))
    return hits


def perturb(
    coords: CoordinateAssignment, delta: int, rng: np.random.Generator
) -> CoordinateAssignment:
    """Offset every coordinate by an independent uniform draw from [-delta, delta]."""
    if delta == 0:
        return coords
    offsets = rng.integers(-delta, delta + 1, size=(coords.n, 3))
    pts = [
        (p[0] + int(o[0]), p[1] + int(o[1]), p[2] + int(o[2]))
        for p, o in zip(coords.points, offsets)
    ]
    if len(set(pts)) != coords.n:
        return coords  # collision: keep the original rather than fail
    return CoordinateAssignment(coords.n, tuple(pts))


def _translate_nonnegative(points: list[Point]) -> list[Point]:
    mins = [min(p[i] for p in points) for i in range(3)]
    return [(p[0] - mins[0], p[1] - mins[1], p[2] - mins[2]) for p in points]


def shrink(c: TriangleSet, coords: CoordinateAssignment) -> CoordinateAssignment:
    """Deterministic coordinate reduction preserving the embedding.

    Translate into the nonnegative orthant, then halve-and-round while the
    result still embeds, then walk single coordinates toward zero.  The
    output max-norm never exceeds the input's.
    """
    tester = EmbeddingTester(c)
    if not tester(coords.points):
        raise ValueError("shrink requires an embedding to start from")
    # integer translation leaves every orientation sign unchanged
    pts = _translate_nonnegative(list(coords.points))

    def distinct(rows):
        return len(set(rows)) == len(rows)

    while True:
        halved = [((x + 1) // 2, (y + 1) // 2, (z + 1) // 2) for x, y, z in pts]
        if halved == pts or not distinct(halved) or not tester(halved):
            break
        pts = halved
    changed = True
    while changed:
        changed = False
        for i in range(len(pts)):
            for axis in range(3):
                val = pts[i][axis]
                if val == 0:
                    continue
                cand = list(pts[i])
                cand[axis] = val - 1
                candidate = pts[:i] + [tuple(cand)] + pts[i + 1 :]
                if distinct(candidate) and tester(candidate):
                    pts = candidate  # type: ignore[assignment]
                    changed = True
        pts = _translate_nonnegative(pts)
    result = CoordinateAssignment(coords.n, tuple(pts))
    assert tester(result.points)
    if result.max_norm() > coords.max_norm():
        # translation widened a skewed input beyond its original norm and
        # the walk could not recover; the input itself is the fixed point
        return coords
    return result
