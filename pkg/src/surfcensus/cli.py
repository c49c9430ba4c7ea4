"""Command-line pipeline: enumerate, classify, realize, verify, report.

Global flags come before the subcommand:

    surfcensus [--catalog DIR] [--threads N] [--quiet] enumerate --n 8 ...

Exit codes: 0 success, 1 runtime or I/O failure (including a rejected
verification), 2 usage errors.  Configuration is flags-only; no
environment variables are consulted, so a manifest plus the same argv
reproduces a run exactly.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import sys
import time
from pathlib import Path

import numpy as np

from .catalog import Catalog, summary_line, type_sort_key, write_manifest
from .classification import Deduplicator, make_record, orientability, surface_type
from .complexes import TriangleSet, verify_surface
from .enumeration import EnumerationConfig, enumerate_raw
from .formats import (
    dump_complex,
    parse_complex,
    parse_coordinates,
    write_coordinates,
    write_off,
)
from .realization import (
    CoordinateAssignment,
    EmbeddingTester,
    RealizationConfig,
    is_embedding,
    perturb,
    random_realize,
    shrink,
    _philox,
)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="surfcensus",
        description="census of triangulated closed surfaces on few vertices",
    )
    p.add_argument("--catalog", metavar="DIR", help="catalog directory to read/update")
    p.add_argument("--threads", type=int, default=1, help="worker count (default 1)")
    p.add_argument("--quiet", action="store_true", help="suppress progress summaries")
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("enumerate", help="enumerate all surfaces on n vertices")
    pe.add_argument("--n", type=int, required=True, help="ground-set size (4..64)")
    pe.add_argument("--order", choices=("lex", "mixed"), default="mixed")
    pe.add_argument("--raw", action="store_true", help="emit the pre-dedup stream")
    pe.add_argument("--partition", metavar="I/M", help="run only subtree stripe I of M")
    pe.add_argument("--out", metavar="PATH", help="write surfaces here (default stdout)")

    pc = sub.add_parser("classify", help="deduplicate and type a surface file")
    pc.add_argument("--in", dest="infile", required=True, metavar="FILE")
    pc.add_argument("--report", required=True, metavar="JSON")

    pr = sub.add_parser("realize", help="random realization of orientable surfaces")
    pr.add_argument("--in", dest="infile", metavar="FILE", help="surface file (else catalog)")
    pr.add_argument("--n", type=int, help="catalog vertex count to target")
    pr.add_argument("--type", dest="type_token", metavar="TOKEN", help="catalog type filter (e.g. T2)")
    pr.add_argument("--cube", type=int, default=32768, help="cube side k (default 32768)")
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--max-tries", type=int, default=1000)
    pr.add_argument("--recycle", action="store_true")
    pr.add_argument("--delta", type=int, default=8, help="perturbation radius")
    pr.add_argument("--shrink", action="store_true", help="round successes down")
    pr.add_argument("--off", action="store_true", help="also export OFF meshes")
    pr.add_argument("--out-dir", metavar="DIR", help="where to write coordinates")

    pv = sub.add_parser("verify", help="check coordinates against a triangulation")
    pv.add_argument("--complex", dest="complex_ref", required=True, metavar="FILE:LINE")
    pv.add_argument("--coords", required=True, metavar="FILE")

    pp = sub.add_parser("report", help="summarize a catalog")
    pp.add_argument("--json", metavar="PATH", help="also write the report as JSON")
    return p


# ---------------------------------------------------------------------------
# enumerate

def _enum_worker(args):
    n, mode, part = args
    dedup = Deduplicator()
    enumerate_raw(
        EnumerationConfig(n, mode=mode, partition=part),
        lambda tris: dedup.add(TriangleSet(n, tris)),
    )
    return [c.triangles for c in dedup.representatives()]


def _enumerate_classes(n: int, mode: str, threads: int) -> Deduplicator:
    dedup = Deduplicator()
    if threads <= 1:
        enumerate_raw(
            EnumerationConfig(n, mode=mode),
            lambda tris: dedup.add(TriangleSet(n, tris)),
        )
        return dedup
    jobs = [(n, mode, (i, threads)) for i in range(threads)]
    with multiprocessing.Pool(threads) as pool:
        rep_lists = pool.map(_enum_worker, jobs)
    merged = sorted(t for reps in rep_lists for t in reps)
    for tris in merged:
        dedup.add(TriangleSet(n, tris))
    return dedup


def _cmd_enumerate(args, parser) -> int:
    if not (4 <= args.n <= 64):
        parser.error(f"--n must be in 4..64, got {args.n}")
    partition = None
    if args.partition:
        try:
            i, m = args.partition.split("/")
            partition = (int(i), int(m))
        except ValueError:
            parser.error("--partition expects I/M, e.g. 0/4")
        if not (0 <= partition[0] < partition[1]):
            parser.error(f"--partition stripe {args.partition} out of range")
    if partition and args.catalog:
        parser.error("--partition produces a partial run; write it with --out")
    t0 = time.time()
    counts: dict[str, int] = {}

    if args.raw:
        sinkfile = open(args.out, "w") if args.out else sys.stdout
        total = 0

        def sink(tris):
            nonlocal total
            total += 1
            sinkfile.write(";".join(",".join(map(str, t)) for t in tris) + "\n")

        try:
            enumerate_raw(EnumerationConfig(args.n, mode=args.order, partition=partition), sink)
        finally:
            if args.out:
                sinkfile.close()
        if not args.quiet:
            print(f"raw:{total} [{time.time() - t0:.1f}s]", file=sys.stderr)
        return 0

    if partition:
        dedup = Deduplicator()
        enumerate_raw(
            EnumerationConfig(args.n, mode=args.order, partition=partition),
            lambda tris: dedup.add(TriangleSet(args.n, tris)),
        )
    else:
        dedup = _enumerate_classes(args.n, args.order, args.threads)
    records = dedup.records(canonicalize=(args.order != "lex"))
    for r in records:
        counts[r.type.name] = counts.get(r.type.name, 0) + 1
    wall = time.time() - t0

    if args.out:
        with open(args.out, "w") as fh:
            for r in records:
                fh.write(dump_complex(r.complex) + "\n")
    if args.catalog:
        cat = Catalog(args.catalog)
        cat.store_records(args.n, records)
        write_manifest(
            cat.root,
            "enumerate",
            {"n": args.n, "order": args.order, "threads": args.threads},
            counts,
            wall,
        )
    if not args.out and not args.catalog:
        for r in records:
            print(dump_complex(r.complex))
    if not args.quiet:
        print(f"{summary_line(counts)} [{wall:.1f}s]", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# classify

def _cmd_classify(args, parser) -> int:
    path = Path(args.infile)
    if not path.exists():
        print(f"classify: no such file {path}", file=sys.stderr)
        return 1
    dedup_by_n: dict[int, Deduplicator] = {}
    class_lines: dict[int, list[tuple[int, str]]] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                c = parse_complex(line, lineno=lineno)
            except ValueError as exc:
                print(f"classify: {exc}", file=sys.stderr)
                return 1
            if not verify_surface(c):
                print(f"classify: line {lineno} is not a triangulated surface", file=sys.stderr)
                return 1
            dd = dedup_by_n.setdefault(c.n, Deduplicator())
            if dd.add(c):
                class_lines.setdefault(c.n, []).append((lineno, surface_type(c).name))
    report: dict = {"totals": {}, "per_type": {}}
    all_counts: dict[str, int] = {}
    for n in sorted(dedup_by_n):
        records = dedup_by_n[n].records(canonicalize=True)
        report["totals"][str(n)] = len(records)
        per_type: dict[str, dict] = {}
        for lineno, tname in class_lines[n]:
            d = per_type.setdefault(tname, {"count": 0, "lines": []})
            d["count"] += 1
            d["lines"].append(lineno)
        report["per_type"][str(n)] = dict(
            sorted(per_type.items(), key=lambda kv: type_sort_key(kv[0]))
        )
        for tname, d in per_type.items():
            all_counts[tname] = all_counts.get(tname, 0) + d["count"]
        if args.catalog:
            Catalog(args.catalog).store_records(n, records)
    Path(args.report).write_text(json.dumps(report, indent=1) + "\n")
    if not args.quiet:
        print(summary_line(all_counts), file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# realize

def _realize_worker(job):
    idx, n, triangles, cfg = job
    c = TriangleSet(n, triangles)
    res = random_realize(c, cfg, stream=idx)
    if res is None:
        return idx, None, 0
    return idx, res.coords.points, res.tries_used


def _cmd_realize(args, parser) -> int:
    if bool(args.infile) == bool(args.catalog):
        parser.error("realize needs exactly one of --in FILE or a --catalog")
    cfg = RealizationConfig(
        cube_side=args.cube,
        seed=args.seed,
        max_tries=args.max_tries,
        delta=args.delta,
        recycle=args.recycle,
    )
    targets: list[tuple[str, TriangleSet]] = []
    cat = None
    if args.infile:
        with open(args.infile) as fh:
            for lineno, line in enumerate(fh, start=1):
                if line.strip():
                    targets.append((f"line{lineno}", parse_complex(line, lineno=lineno)))
        out_dir = Path(args.out_dir) if args.out_dir else Path(args.infile).parent
    else:
        cat = Catalog(args.catalog)
        if args.n is None:
            parser.error("catalog realization needs --n")
        for entry, c in cat.complexes(args.n, token=args.type_token):
            targets.append((entry.name, c))
        out_dir = Path(args.out_dir) if args.out_dir else cat.root / "coords"
    out_dir.mkdir(parents=True, exist_ok=True)

    t0 = time.time()
    orientable_jobs = []
    skipped = 0
    for idx, (name, c) in enumerate(targets):
        if orientability(c):
            orientable_jobs.append((idx, c.n, c.triangles, cfg))
        else:
            skipped += 1
    if args.threads > 1 and len(orientable_jobs) > 1:
        with multiprocessing.Pool(args.threads) as pool:
            raw_results = pool.map(_realize_worker, orientable_jobs)
    else:
        raw_results = [_realize_worker(j) for j in orientable_jobs]

    results: dict[int, dict] = {}
    pool_coords: list[tuple[int, CoordinateAssignment]] = []
    for idx, points, tries in raw_results:
        if points is None:
            results[idx] = {"status": "unrealized", "tries": cfg.max_tries}
        else:
            coords = CoordinateAssignment(targets[idx][1].n, points)
            results[idx] = {"status": "fresh", "tries": tries, "coords": coords}
            pool_coords.append((idx, coords))

    if cfg.recycle and pool_coords:
        for idx, _, _, _ in orientable_jobs:
            if results[idx]["status"] != "unrealized":
                continue
            c = targets[idx][1]
            tester = EmbeddingTester(c)
            for pi, (src_idx, coords) in enumerate(pool_coords):
                if coords.n != c.n:
                    continue
                if tester(coords.points):
                    results[idx] = {"status": "recycled", "from": targets[src_idx][0], "coords": coords}
                    break
                wiggled = perturb(coords, cfg.delta, _philox(cfg.seed, 2**32 + idx, pi))
                if tester(wiggled.points):
                    results[idx] = {"status": "perturbed", "from": targets[src_idx][0], "coords": wiggled}
                    break

    realized = 0
    for idx, (name, c) in enumerate(targets):
        info = results.get(idx)
        if info is None or "coords" not in info:
            if cat is not None and info is not None:
                cat.set_realization(args.n, name, {"status": "unrealized", "max_tries": cfg.max_tries})
            continue
        coords = info.pop("coords")
        if args.shrink:
            coords = shrink(c, coords)
            info["status"] = "shrunk"
        realized += 1
        coords_file = out_dir / f"{name}.txt"
        with open(coords_file, "w") as fh:
            write_coordinates(fh, coords.as_dict())
        if args.off:
            mesh_dir = coords_file.parent if cat is None else cat.root / "meshes"
            mesh_dir.mkdir(parents=True, exist_ok=True)
            with open(mesh_dir / f"{name}.off", "w") as fh:
                write_off(fh, c, coords.as_dict())
        if cat is not None:
            rec = dict(info)
            rec["coords_file"] = str(coords_file.relative_to(cat.root)) if coords_file.is_relative_to(cat.root) else str(coords_file)
            cat.set_realization(args.n, name, rec)
    wall = time.time() - t0
    if cat is not None:
        write_manifest(
            cat.root,
            "realize",
            {
                "n": args.n,
                "type": args.type_token,
                "cube": cfg.cube_side,
                "seed": cfg.seed,
                "max_tries": cfg.max_tries,
                "recycle": cfg.recycle,
                "delta": cfg.delta,
                "shrink": args.shrink,
            },
            {"targets": len(targets), "realized": realized, "non_orientable": skipped},
            wall,
        )
    if not args.quiet:
        print(
            f"realized:{realized}/{len(targets) - skipped} non-orientable-skipped:{skipped} [{wall:.1f}s]",
            file=sys.stderr,
        )
    return 0


# ---------------------------------------------------------------------------
# verify

def _cmd_verify(args, parser) -> int:
    ref = args.complex_ref
    if ":" not in ref:
        parser.error("--complex expects FILE:LINE")
    fname, _, lineno_s = ref.rpartition(":")
    try:
        lineno = int(lineno_s)
    except ValueError:
        parser.error(f"bad line number {lineno_s!r}")
    lines = Path(fname).read_text().splitlines()
    if not (1 <= lineno <= len(lines)):
        print(f"verify: {fname} has no line {lineno}", file=sys.stderr)
        return 1
    c = parse_complex(lines[lineno - 1], lineno=lineno)
    if not verify_surface(c):
        print("REJECTED (not a triangulated surface)")
        return 1
    with open(args.coords) as fh:
        coord_map = parse_coordinates(fh)
    missing = [v for v in range(1, c.n + 1) if v not in coord_map]
    if missing:
        print(f"verify: coordinates missing for vertices {missing}", file=sys.stderr)
        return 1
    coords = CoordinateAssignment.from_dict({v: coord_map[v] for v in range(1, c.n + 1)})
    if is_embedding(c, coords):
        print("ACCEPTED")
        return 0
    print("REJECTED (crossing or degenerate configuration)")
    return 1


# ---------------------------------------------------------------------------
# report

def _cmd_report(args, parser) -> int:
    if not args.catalog:
        parser.error("report needs --catalog")
    cat = Catalog(args.catalog)
    problems = cat.check()
    if problems:
        for p in problems:
            print(f"report: {p}", file=sys.stderr)
        return 1
    rep = cat.report()
    if args.json:
        Path(args.json).write_text(json.dumps(rep, indent=1) + "\n")
    if rep["totals"]:
        types = sorted(
            {t for counts in rep["counts"].values() for t in counts},
            key=type_sort_key,
        )
        header = ["n"] + types + ["total"]
        print("  ".join(f"{h:>8}" for h in header))
        for n in sorted(rep["counts"]):
            counts = rep["counts"][n]
            row = [str(n)] + [str(counts.get(t, "")) for t in types] + [str(rep["totals"][n])]
            print("  ".join(f"{v:>8}" for v in row))
        print()
        firsts = ", ".join(f"{t} at n={n}" for t, n in rep["first_appearance"].items())
        print(f"first appearance: {firsts}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "enumerate":
            return _cmd_enumerate(args, parser)
        if args.command == "classify":
            return _cmd_classify(args, parser)
        if args.command == "realize":
            return _cmd_realize(args, parser)
        if args.command == "verify":
            return _cmd_verify(args, parser)
        if args.command == "report":
            return _cmd_report(args, parser)
    except (OSError, ValueError) as exc:
        print(f"surfcensus: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
