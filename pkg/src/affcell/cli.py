"""Command line front end.

    affcell build-cache --type g2 --weights 5,2 --radius 10
    affcell kl          --type g2 --weights 5,2 --radius 6 --element s1s2s1
    affcell cells       --type b2 --weights 7,2,1 --zone A1 --radius 14
    affcell verify      --type g2 --weights 5,2 --radius 22 --cell all
    affcell render      --type g2 --weights 5,2 --radius 12 --out g2.svg

Exit codes: 0 success, 1 operational error, 2 verification failure,
3 non-generic parameters.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .celldata import (
    NonGenericError,
    ZoneError,
    descriptors_for,
    genericity_check,
    with_overrides,
)
from .cells import (
    cell_partition,
    compare_partitions,
    default_margin,
    descriptor_check,
    left_edges,
    lusztig_star_check,
    parabolic_class_check,
    right_edges,
    strip_construction,
    strip_left_cells,
)
from .coxeter import CoxeterSystem
from .hecke import TruncationError
from .klbasis import CacheError, HeaderMismatchError, KLCache

log = logging.getLogger("affcell")

EXIT_OK, EXIT_IO, EXIT_FAIL, EXIT_NONGENERIC = 0, 1, 2, 3
CACHE_ENV = "AFFCELL_CACHE_DIR"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    kind: str
    weights: tuple[int, ...]
    zone: Optional[str]
    radius: int
    cache: Optional[Path] = None
    fmt: str = "text"
    margin: Optional[int] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        need = 2 if self.kind == "g2" else 3
        if len(self.weights) != need:
            raise UsageError(f"{self.kind} takes {need} weights, got {len(self.weights)}")
        if any(w <= 0 for w in self.weights):
            raise UsageError("weights must be positive")
        if self.radius < 0:
            raise UsageError("radius must be >= 0")

    @property
    def system(self) -> CoxeterSystem:
        return CoxeterSystem(self.kind, self.weights)

    def cache_path(self) -> Path:
        if self.cache is not None:
            return self.cache
        root = Path(os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "affcell")
        return root / f"{self.kind}_{'-'.join(map(str, self.weights))}.jsonl"


# ---------------------------------------------------------------------------
# output helpers


def _emit(cfg: RunConfig, payload: dict, rows: list[dict], text: str, out=None):
    out = out or sys.stdout
    if cfg.fmt == "json":
        json.dump(payload, out, indent=1, sort_keys=True, default=str)
        out.write("\n")
    elif cfg.fmt == "csv":
        buf = io.StringIO()
        cols = sorted({k for r in rows for k in r})
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: str(v) for k, v in r.items()})
        out.write(buf.getvalue())
    else:
        out.write(text.rstrip("\n") + "\n")


def _zone(cfg: RunConfig) -> str:
    return genericity_check(cfg.system, cfg.zone)


def _table(cfg: RunConfig, zone: str):
    table = descriptors_for(cfg.kind, zone)
    path = cfg.extra.get("table")
    if path:
        data = json.loads(Path(path).read_text())
        table = with_overrides(table, data.get("classes"), data.get("order"))
    return table


def load_cache(cfg: RunConfig, build: bool = True) -> KLCache:
    return open_cache(cfg, build)[0]


def open_cache(cfg: RunConfig, build: bool = True) -> tuple[KLCache, bool]:
    """Open the persisted cache, extending it to ``cfg.radius`` if needed.

    New layers are appended as they finish, so an interrupted build resumes.
    Returns the cache and whether it was already complete.
    """
    system = cfg.system
    path = cfg.cache_path()
    if path.exists():
        cache = KLCache.load(path, system, cfg.radius)
        if cache.built_upto >= cfg.radius:
            log.info("cache hit: %s (complete to length %d)", path, cache.built_upto)
            return cache.truncate(cfg.radius), True
        if not build:
            raise CacheError(f"{path} only covers length {cache.built_upto}; run build-cache")
        log.info("resuming %s from length %d", path, cache.built_upto)
    else:
        if not build:
            raise CacheError(f"no cache at {path}; run build-cache")
        cache = KLCache(system, cfg.radius)
    if cache.header()["radius"] != _header_radius(path):
        cache.save(path)  # rewrites the header and the finished layers
    t0 = time.perf_counter()

    def on_layer(n, layer):
        cache.append_layer(path, layer)
        log.info("layer %d: %d elements (%.1fs)", n, len(layer), time.perf_counter() - t0)

    cache.build(cfg.radius, on_layer=on_layer)
    return cache.truncate(cfg.radius), False


def _header_radius(path: Path) -> Optional[int]:
    if not path.exists():
        return None
    with open(path) as fh:
        try:
            return int(json.loads(fh.readline()).get("radius"))
        except (ValueError, TypeError, AttributeError):
            return None


# ---------------------------------------------------------------------------
# commands


def cmd_build_cache(cfg: RunConfig) -> int:
    _zone(cfg)
    path = cfg.cache_path()
    cache, hit = open_cache(cfg)
    payload = {
        "type": cfg.kind,
        "weights": list(cfg.weights),
        "radius": cfg.radius,
        "elements": len(cache.ball),
        "path": str(path),
        "cache_hit": hit,
    }
    _emit(cfg, payload, [payload], f"{len(cache.ball)} elements of length <= {cfg.radius} in {path}")
    return EXIT_OK


def cmd_kl(cfg: RunConfig) -> int:
    cache = load_cache(cfg)
    grp = cache.system.group
    if cfg.extra.get("element"):
        ws = [grp.parse(cfg.extra["element"])]
    else:
        ws = list(cache.ball.elements)
    rows, lines = [], []
    for w in ws:
        h = cache.c_element(w)
        for y in h.support():
            rows.append({"w": str(w), "y": str(y), "p": h.coeff(y).to_text()})
        lines.append(f"C[{w}] = {h!r}")
    payload = {"radius": cfg.radius, "elements": [{"w": w.to_json(), "c": cache.c_element(w).to_json()} for w in ws]}
    _emit(cfg, payload, rows, "\n".join(lines))
    return EXIT_OK


def cmd_cells(cfg: RunConfig) -> int:
    zone = _zone(cfg)
    table = _table(cfg, zone)
    cache = load_cache(cfg)
    ball = cache.ball
    margin = default_margin(table) if cfg.margin is None else cfg.margin
    if margin > cfg.radius:
        raise UsageError(f"margin {margin} exceeds radius {cfg.radius}")
    cert = cfg.radius - margin
    L = left_edges(cache)
    R = right_edges(cache, L)
    two = cell_partition(cache, "two-sided", margin, _edges=(L, R))
    left = cell_partition(cache, "left", margin, _edges=(L, R))
    strips = strip_construction(table, ball)
    swapped = strip_construction(table, ball, swap_pairs=True)
    two.names = [_name_of(blk, strips, ball, cert) for blk in two.blocks]
    sl = [c for blk in strips.values() for c in strip_left_cells(blk, ball)]
    diffs = {
        "two-sided": compare_partitions(strips.values(), two.blocks, ball, cert),
        "left": compare_partitions(sl, left.blocks, ball, cert),
        "pair order": [] if strips == swapped else ["<-> pairs give different strips"],
    }
    checks = descriptor_check(table, strips, ball, cert)
    checks.append(parabolic_class_check(cache, table))
    checks.append(lusztig_star_check(cache, margin, (left, two)))
    ok = not any(diffs.values()) and all(c.passed for c in checks)
    payload = {
        "type": cfg.kind,
        "weights": list(cfg.weights),
        "zone": zone,
        "radius": cfg.radius,
        "certified_radius": cert,
        "computed": two.to_json(),
        "names": two.names,
        "strips": {k: sorted(ball.elements[i].to_json() for i in v if ball.length[i] <= cert)
                   for k, v in strips.items()},
        "diffs": diffs,
        "checks": [c.to_json() for c in checks],
        "passed": ok,
    }
    rows = [{"check": f"diff {k}", "status": "pass" if not v else "fail", "witness": _brief(v)}
            for k, v in diffs.items()]
    rows += [{"check": c.name, "status": c.status, "witness": c.witness or ""} for c in checks]
    lines = [f"{cfg.kind} {cfg.weights} zone {zone}: radius {cfg.radius}, certified to length {cert}"]
    for name in strips:
        n = sum(1 for i in strips[name] if ball.length[i] <= cert)
        lines.append(f"  {name}: {n} elements")
    lines += [f"  {r['check']}: {r['status']}" + (f" ({r['witness']})" if r["witness"] else "") for r in rows]
    lines.append("PASS" if ok else "FAIL")
    _emit(cfg, payload, rows, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def _brief(diffs: list[str], keep: int = 2) -> str:
    more = f" (+{len(diffs) - keep} more)" if len(diffs) > keep else ""
    return "; ".join(diffs[:keep]) + more


def _name_of(block, strips, ball, cert) -> Optional[str]:
    inner = {i for i in block if ball.length[i] <= cert}
    for name, s in strips.items():
        if inner and inner <= s:
            return name
    return None


def cmd_verify(cfg: RunConfig) -> int:
    from .cellular import CellContext, finite_cells_g2, verify_theorem

    zone = _zone(cfg)
    table = _table(cfg, zone)
    cache = load_cache(cfg)
    strips = strip_construction(table, cache.ball)
    sel = cfg.extra.get("cell", "all")
    special = {"finite-" + cfg.kind: c for c, v in table.special.items()}
    if sel == "all":
        names = list(table.descriptors) + list(table.special)
    elif sel in special:
        names = [special[sel]]
    else:
        name = "c" + sel.lstrip("c~")
        if name not in table.descriptors and name not in table.special:
            raise UsageError(f"no cell {sel!r} in zone {zone}; cells: {sorted(table.classes)}")
        names = [name]
    budget = cfg.extra.get("budget")
    reports = []
    for name in names:
        t0 = time.perf_counter()
        if name in table.special:
            rep = finite_cells_g2(cache, table, strips)
        else:
            rep = verify_theorem(CellContext(cache, table, name, strips), sample_budget=budget,
                                 seed=cfg.extra.get("seed", 0))
        log.info("%s: %s (%.1fs)", rep.cell, "pass" if rep.passed else "FAIL", time.perf_counter() - t0)
        reports.append(rep)
    ok = all(r.passed for r in reports)
    payload = {
        "type": cfg.kind,
        "weights": list(cfg.weights),
        "zone": zone,
        "radius": cfg.radius,
        "reports": [r.to_json() for r in reports],
        "passed": ok,
    }
    rows = [{"cell": r.cell, "check": c.name, "status": c.status, "witness": c.witness or "",
             "radius": r.radius, "tau_degree_bound": r.tau_degree_bound}
            for r in reports for c in r.checks]
    lines = []
    for r in reports:
        lines.append(f"{r.cell}: radius {r.radius}, tau-degree bound {r.tau_degree_bound}")
        for c in r.checks:
            lines.append(f"  {c.name}: {c.status}" + (f" ({c.witness})" if c.witness else ""))
        if "form_text" in r.info:
            lines.append("  form: " + r.info["form_text"].replace("\n", "\n        "))
    pending = [f"{r.cell}/{c}" for r in reports for c in r.inconclusive]
    payload["inconclusive"] = pending
    if not ok:
        lines.append("FAIL")
    elif pending:
        lines.append(f"PASS ({len(pending)} inconclusive at radius {cfg.radius}: {', '.join(pending)})")
        log.warning("inconclusive at radius %d: %s", cfg.radius, ", ".join(pending))
    else:
        lines.append("PASS")
    _emit(cfg, payload, rows, "\n".join(lines))
    if cfg.extra.get("report"):
        Path(cfg.extra["report"]).write_text(json.dumps(payload, indent=1, sort_keys=True, default=str) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# alcove picture

# Walls of the fundamental alcove: s1 and s2 through the origin meeting at
# pi/m12, s3 perpendicular to the s1 wall.  Each wall is (normal, offset).
def _walls(kind: str):
    m12 = 6 if kind == "g2" else 4
    t = math.pi / m12
    return [
        ((1.0, 0.0), 0.0),
        ((-math.cos(t), math.sin(t)), 0.0),
        ((0.0, 1.0), 1.0),
    ], [(0.0, 0.0), (0.0, 1.0), (math.tan(t), 1.0)]


def _reflect(p, wall):
    (nx, ny), c = wall
    d = p[0] * nx + p[1] * ny - c
    return (p[0] - 2 * d * nx, p[1] - 2 * d * ny)


PALETTE = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33",
           "#a65628", "#f781bf", "#999999", "#66c2a5", "#fc8d62", "#8da0cb"]


def alcove_svg(ball, labels: dict[int, str], order: list[str], scale: float = 40.0) -> str:
    walls, base = _walls(ball.group.kind)
    polys = []
    for i, word in enumerate(ball.words):
        pts = base
        for s in reversed(word):  # w A = s_{i1}(...(s_{ik} A))
            pts = [_reflect(p, walls[s]) for p in pts]
        polys.append(pts)
    xs = [p[0] for q in polys for p in q]
    ys = [p[1] for q in polys for p in q]
    x0, y0 = min(xs), min(ys)
    W, H = (max(xs) - x0) * scale + 20, (max(ys) - y0) * scale + 20
    used = [n for n in order if n in set(labels.values())]
    color = {n: PALETTE[k % len(PALETTE)] for k, n in enumerate(used)}
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W:.1f}" height="{H + 20 * len(used):.1f}">']
    for i, pts in enumerate(polys):
        # flip y so the picture reads upwards
        coords = " ".join(f"{(x - x0) * scale + 10:.2f},{H - ((y - y0) * scale + 10):.2f}" for x, y in pts)
        out.append(f'<polygon points="{coords}" fill="{color[labels[i]]}" stroke="#000" stroke-width="0.3">'
                   f"<title>{ball.elements[i]}</title></polygon>")
    for k, n in enumerate(used):
        y = H + 20 * k + 14
        out.append(f'<rect x="10" y="{y - 10:.1f}" width="12" height="12" fill="{color[n]}"/>')
        out.append(f'<text x="28" y="{y:.1f}" font-size="12">{n}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_render(cfg: RunConfig) -> int:
    zone = _zone(cfg)
    table = _table(cfg, zone)
    ball = cfg.system.group.ball(cfg.radius)
    strips = strip_construction(table, ball)
    labels = {i: name for name, blk in strips.items() for i in blk}
    svg = alcove_svg(ball, labels, list(strips))
    out = cfg.extra.get("out")
    if out:
        Path(out).write_text(svg)
        log.info("wrote %s (%d alcoves, %d cells)", out, len(ball), len(set(labels.values())))
    else:
        sys.stdout.write(svg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _weights(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights must look like 5,2 or 7,2,1, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", dest="kind", choices=["g2", "b2"], required=True)
    common.add_argument("--weights", type=_weights, required=True, help="a,b for g2; a,b,c for b2")
    common.add_argument("--zone", help="parameter zone (required for b2: A1-A5, B1, B2, C1-C3)")
    common.add_argument("--radius", type=int, default=10)
    common.add_argument("--cache", type=Path, help=f"cache file (default under ${CACHE_ENV})")
    common.add_argument("--format", dest="fmt", choices=["json", "csv", "text"], default="text")
    common.add_argument("--margin", type=int, help="certification margin (default 1 + max l(w_Gamma))")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="affcell", description="Kazhdan-Lusztig cells of G2~ and B2~ with unequal parameters.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("build-cache", parents=[common], help="build or extend the KL cache")
    k = sub.add_parser("kl", parents=[common], help="dump KL basis elements")
    k.add_argument("--element", help="only this element, e.g. s1s2s1")
    c = sub.add_parser("cells", parents=[common], help="compare computed cells with the tables")
    c.add_argument("--table", help="JSON with replacement class expressions / order")
    v = sub.add_parser("verify", parents=[common], help="verify the affine cellular structure")
    v.add_argument("--cell", default="all", help="c3, all, or finite-g2")
    v.add_argument("--budget", type=int, default=400, help="sampled pairs for multiplicativity (0 = all)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--report", help="also write the JSON report here")
    v.add_argument("--table", help=argparse.SUPPRESS)
    r = sub.add_parser("render", parents=[common], help="SVG of the alcoves coloured by two-sided cell")
    r.add_argument("--out", help="output file (default stdout)")
    r.add_argument("--table", help=argparse.SUPPRESS)
    return p


COMMANDS = {
    "build-cache": cmd_build_cache,
    "kl": cmd_kl,
    "cells": cmd_cells,
    "verify": cmd_verify,
    "render": cmd_render,
}


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    extra = {k: getattr(args, k) for k in ("element", "table", "cell", "seed", "report", "out") if hasattr(args, k)}
    if hasattr(args, "budget"):
        extra["budget"] = args.budget or None
    try:
        cfg = RunConfig(args.kind, args.weights, args.zone, args.radius, args.cache, args.fmt, args.margin, extra)
        return COMMANDS[args.command](cfg)
    except NonGenericError as e:
        print(f"affcell: non-generic parameters: {e}", file=sys.stderr)
        return EXIT_NONGENERIC
    except (UsageError, ZoneError, HeaderMismatchError, CacheError, TruncationError, OSError, ValueError) as e:
        print(f"affcell: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
