"""Command-line driver: build codes, run statement checks, spreads and blocking sets.

Exit codes: 0 verified/complete, 1 counterexample found, 2 budget exhausted or
search inconclusive, 3 parameter error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import blocking, codes, geometry, spectrum, theorems
from .errors import BudgetExceeded, ParameterError
from .galois import is_prime

log = logging.getLogger("pgcodes")

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INCONCLUSIVE, EXIT_PARAM = 0, 1, 2, 3


@dataclass
class ExperimentConfig:
    command: str
    n: int
    p: int
    h: int
    k: int | None
    budget_cells: int
    budget_steps: int
    exhaustive_budget: int
    samples: int
    t_max: int
    seed: int
    workers: int
    fmt: str
    out: str | None

    @property
    def q(self) -> int:
        return self.p**self.h

    def validate(self) -> None:
        if not is_prime(self.p):
            raise ParameterError(f"p={self.p} is not prime")
        if self.h < 1:
            raise ParameterError(f"h={self.h} must be >= 1")
        if self.n < 1:
            raise ParameterError(f"n={self.n} must be >= 1")
        if self.k is not None and not 0 <= self.k <= self.n:
            raise ParameterError(f"k={self.k} outside [0, {self.n}]")
        if self.workers < 1:
            raise ParameterError("workers must be >= 1")

    def check_cells(self, d: int, n: int | None = None, q: int | None = None) -> None:
        n = self.n if n is None else n
        q = self.q if q is None else q
        cells = geometry.count_subspaces(n, q, d) * geometry.theta(n, q)
        if cells > self.budget_cells:
            raise BudgetExceeded(f"{d}-spaces of PG({n},{q}) need {cells} cells > --budget-cells {self.budget_cells}")

    def search(self) -> spectrum.SearchConfig:
        return spectrum.SearchConfig(
            exhaustive_budget=self.exhaustive_budget, budget_steps=self.budget_steps,
            samples=self.samples, t_max=self.t_max, seed=self.seed, workers=self.workers,
        )


# -- output ------------------------------------------------------------------------


def _text_lines(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        width = max((len(str(k)) for k in obj), default=0)
        for key, val in obj.items():
            if isinstance(val, (dict, list)) and val and not _is_flat_list(val):
                lines.append(f"{pad}{str(key):<{width}} :")
                lines.extend(_text_lines(val, indent + 1))
            else:
                lines.append(f"{pad}{str(key):<{width}} : {_scalar(val)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, dict):
                lines.extend(_text_lines(item, indent))
                lines.append("")
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return lines


def _is_flat_list(val) -> bool:
    return isinstance(val, list) and all(not isinstance(x, (dict, list)) for x in val)


def _scalar(val) -> str:
    if isinstance(val, list):
        return "[" + ", ".join(str(x) for x in val) + "]"
    if isinstance(val, dict):
        return "{}"
    return "-" if val is None else str(val)


def _suite_table(report: dict) -> list[str]:
    rows = [("id", "verdict", "hypotheses", "note")]
    for ident, rep in report["results"].items():
        rows.append((ident, rep["verdict"], "met" if rep["hypotheses_met"] else "not met", rep["note"] or ""))
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    return [f"{a:<{widths[0]}}  {b:<{widths[1]}}  {c:<{widths[2]}}  {d}".rstrip() for a, b, c, d in rows]


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt == "text":
        head = _suite_table(report) + [""] if "results" in report else []
        return "\n".join(head + _text_lines(report)) + "\n"
    if fmt == "csv":
        return "\n".join(_csv_rows(report)) + "\n"
    raise ParameterError(f"unknown format {fmt!r}")


def _csv_rows(report: dict, prefix: str = "") -> list[str]:
    """Flattened key,value pairs."""
    rows = [] if prefix else ["key,value"]
    for key, val in report.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            rows.extend(_csv_rows(val, name + "."))
        else:
            text = " ".join(map(str, val)) if isinstance(val, list) else ("" if val is None else str(val))
            rows.append(f"{name},\"{text}\"" if "," in text else f"{name},{text}")
    return rows


def emit(report: dict, cfg: ExperimentConfig) -> None:
    text = render(report, cfg.fmt)
    if cfg.out:
        Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.out).write_text(text)
        log.info("wrote %s", cfg.out)
    else:
        sys.stdout.write(text)


# -- commands ---------------------------------------------------------------------------


def cmd_build(cfg: ExperimentConfig) -> int:
    k = cfg.n - 1 if cfg.k is None else cfg.k
    cfg.check_cells(k)
    t0 = time.perf_counter()
    code = codes.build_code(cfg.n, cfg.q, k)
    dcode = codes.dual(code)
    manifest = {
        "schema": theorems.SCHEMA_VERSION,
        "instance": {"n": cfg.n, "p": cfg.p, "h": cfg.h, "q": cfg.q, "k": k},
        "length": code.length,
        "dim": code.dim,
        "dual_dim": dcode.dim,
        "hull_dim": codes.hull(code).dim,
        "information_set": list(code.pivots),
        "theta": {f"theta_{m}": geometry.theta(m, cfg.q) for m in range(cfg.n + 1)},
        "num_k_spaces": geometry.count_subspaces(cfg.n, cfg.q, k),
        "hypothesis_flags": theorems.hypothesis_flags(cfg.n, cfg.q, k),
    }
    if cfg.out:
        outdir = Path(cfg.out)
        outdir.mkdir(parents=True, exist_ok=True)
        codes.write_matrix(code, outdir / "generator.txt")
        codes.write_matrix(dcode, outdir / "dual.txt")
        if cfg.fmt == "csv":
            code.space.write_points_csv(outdir / "points.csv")
            code.space.write_subspaces_csv(k, outdir / f"subspaces_{k}.csv")
        manifest["files"] = sorted(p.name for p in outdir.iterdir() if p.name != "manifest.json")
        manifest["timing"] = {"wall_time_s": round(time.perf_counter() - t0, 3)}
        (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        log.info("wrote %s", outdir)
    else:
        manifest["timing"] = {"wall_time_s": round(time.perf_counter() - t0, 3)}
        sys.stdout.write(render(manifest, "text" if cfg.fmt == "text" else "json"))
    return EXIT_OK


def cmd_verify(cfg: ExperimentConfig, ident: str) -> int:
    k = cfg.n - 1 if cfg.k is None else cfg.k
    cfg.check_cells(k)
    if cfg.n - k != k:
        cfg.check_cells(cfg.n - k)
    report = theorems.verify(ident, cfg.n, cfg.q, k, cfg.search())
    emit(report, cfg)
    return theorems.EXIT_CODES[report["verdict"]]


def cmd_suite(cfg: ExperimentConfig) -> int:
    k = cfg.n - 1 if cfg.k is None else cfg.k
    for d in range(cfg.n + 1):
        cfg.check_cells(d)
    report = theorems.theorem_suite(cfg.n, cfg.q, k, cfg.search())
    emit(report, cfg)
    verdicts = {r["verdict"] for r in report["results"].values()}
    if theorems.FAILED in verdicts:
        return EXIT_COUNTEREXAMPLE
    return EXIT_INCONCLUSIVE if theorems.SEARCHED in verdicts else EXIT_OK


def cmd_spectrum(cfg: ExperimentConfig) -> int:
    k = cfg.n - 1 if cfg.k is None else cfg.k
    cfg.check_cells(k)
    code = codes.build_code(cfg.n, cfg.q, k)
    try:
        dist = spectrum.full_spectrum(code, cfg.exhaustive_budget, cfg.workers)
    except BudgetExceeded as exc:
        log.error("%s", exc)
        return EXIT_INCONCLUSIVE
    report = {"schema": theorems.SCHEMA_VERSION, "code": code.label, "distribution": dist.to_dict()}
    emit(report, cfg)
    return EXIT_OK


def cmd_spread(cfg: ExperimentConfig) -> int:
    amb_n = (cfg.n + 1) * cfg.h - 1
    cfg.check_cells(0, amb_n, cfg.p)
    spread = blocking.desarguesian_spread(cfg.n, cfg.p, cfg.h)
    m = len(spread.elements)
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    mode = "all pairs"
    if len(pairs) > cfg.samples:
        rng = np.random.default_rng(cfg.seed)
        pick = rng.choice(len(pairs), size=cfg.samples, replace=False)
        pairs = [pairs[i] for i in sorted(pick)]
        mode = f"{cfg.samples} sampled pairs"
    closure = [blocking.span_closure(spread, i, j) for i, j in pairs]
    report = {
        "schema": theorems.SCHEMA_VERSION,
        "instance": {"n": cfg.n, "p": cfg.p, "h": cfg.h, "q": cfg.q},
        "ambient": f"PG({amb_n},{cfg.p})",
        "ambient_points": spread.ambient.num_points,
        "elements": m,
        "element_dim": cfg.h - 1,
        "points_per_element": int(spread.element_points.shape[1]),
        "partition_verified": spread.check_partition(),
        "span_closure": {"pairs_checked": len(pairs), "mode": mode, "all_closed": all(closure)},
    }
    emit(report, cfg)
    ok = report["partition_verified"] and all(closure)
    return EXIT_OK if ok else EXIT_COUNTEREXAMPLE


def cmd_blocking(cfg: ExperimentConfig, subspace_file: str | None, export: str | None, random_u: bool) -> int:
    k = cfg.n - 1 if cfg.k is None else cfg.k
    amb_n = (cfg.n + 1) * cfg.h - 1
    cfg.check_cells(cfg.n - k)
    cfg.check_cells(0, amb_n, cfg.p)
    spread = blocking.desarguesian_spread(cfg.n, cfg.p, cfg.h)
    if subspace_file:
        u = blocking.read_subspace(subspace_file, cfg.p)
        source = subspace_file
    elif random_u:
        rng = np.random.default_rng(cfg.seed)
        while True:
            rows = rng.integers(0, cfg.p, size=(cfg.h * k + 1, amb_n + 1))
            u = geometry.Subspace.from_rows(spread.ambient.field, rows)
            if u.dim == cfg.h * k:
                break
        source = f"random (seed {cfg.seed})"
    else:
        u = _subfield_subspace(cfg, k, spread)
        source = "subgeometry over F_p"
    if u.n != amb_n:
        raise ParameterError(f"U lives in PG({u.n},{cfg.p}), expected PG({amb_n},{cfg.p})")
    pts, rep = blocking.linear_blocking_set(cfg.n, cfg.p, cfg.h, k, u, spread)
    small, lemma = blocking.smallness_bound(k, cfg.q)
    report = {
        "schema": theorems.SCHEMA_VERSION,
        "instance": {"n": cfg.n, "p": cfg.p, "h": cfg.h, "q": cfg.q, "k": k},
        "U": {"source": source, "dim": u.dim, "basis": [list(r) for r in u.basis]},
        "points": list(pts.indices),
        "certificate": rep.to_dict(),
        "bounds": {"small_below": small, "residue_lemma_below": lemma},
    }
    if export:
        blocking.write_point_set(pts, export)
    emit(report, cfg)
    nonempty = rep.nonempty_residues
    if rep.is_small and rep.is_minimal and cfg.p > 2 and set(nonempty) - {1}:
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK if rep.is_blocking else EXIT_COUNTEREXAMPLE


def _subfield_subspace(cfg: ExperimentConfig, k: int, spread: blocking.Spread):
    """F_p-span of the unit vectors e_0..e_n, then x * e_j, truncated to dimension hk."""
    h, amb = cfg.h, (cfg.n + 1) * cfg.h
    offsets = [j * h for j in range(cfg.n + 1)] + [j * h + i for i in range(1, h) for j in range(cfg.n + 1)]
    rows = []
    for off in offsets[: h * k + 1]:
        v = [0] * amb
        v[off] = 1
        rows.append(v)
    return geometry.Subspace.from_rows(spread.ambient.field, rows)


# -- argument parsing -----------------------------------------------------------------


def _common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--p", type=int, required=True)
    sub.add_argument("--h", type=int, default=1)
    sub.add_argument("--k", type=int, default=None, help="subspace dimension (default n-1)")
    sub.add_argument("--budget-cells", type=int, default=geometry.DEFAULT_CELL_BUDGET)
    sub.add_argument("--budget-steps", type=int, default=spectrum.DEFAULT_SEARCH_STEPS)
    sub.add_argument("--exhaustive-budget", type=int, default=spectrum.DEFAULT_EXHAUSTIVE_BUDGET)
    sub.add_argument("--samples", type=int, default=spectrum.DEFAULT_SAMPLES)
    sub.add_argument("--t-max", type=int, default=spectrum.DEFAULT_SPARSE_T)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--workers", type=int, default=1)
    sub.add_argument("--format", dest="fmt", choices=("json", "text", "csv"), default="json")
    sub.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pgcodes", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    subs = parser.add_subparsers(dest="command", required=True)

    _common(subs.add_parser("build", help="generator/dual matrices and a manifest"))
    v = subs.add_parser("verify", help="check one statement on an instance")
    v.add_argument("statement", help="statement id, see `pgcodes manifest`")
    _common(v)
    _common(subs.add_parser("suite", help="every statement on one instance"))
    _common(subs.add_parser("spectrum", help="exact weight distribution"))
    _common(subs.add_parser("spread", help="Desarguesian spread and span closure"))
    b = subs.add_parser("blocking", help="certify a linear blocking set B(U)")
    _common(b)
    b.add_argument("--subspace-file", default=None, help="rows over F_p spanning U")
    b.add_argument("--random-subspace", action="store_true", help="seeded random hk-space U")
    b.add_argument("--export-points", default=None, help="write B(U) as a point-set file")
    subs.add_parser("manifest", help="list statement ids")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARAM if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.command == "manifest":
        sys.stdout.write(json.dumps(theorems.manifest(), indent=2) + "\n")
        return EXIT_OK
    cfg = ExperimentConfig(
        command=args.command, n=args.n, p=args.p, h=args.h, k=args.k,
        budget_cells=args.budget_cells, budget_steps=args.budget_steps,
        exhaustive_budget=args.exhaustive_budget, samples=args.samples, t_max=args.t_max,
        seed=args.seed, workers=args.workers, fmt=args.fmt, out=args.out,
    )
    try:
        cfg.validate()
        if args.command == "build":
            return cmd_build(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.statement)
        if args.command == "suite":
            return cmd_suite(cfg)
        if args.command == "spectrum":
            return cmd_spectrum(cfg)
        if args.command == "spread":
            return cmd_spread(cfg)
        if args.command == "blocking":
            return cmd_blocking(cfg, args.subspace_file, args.export_points, args.random_subspace)
    except ParameterError as exc:
        log.error("parameter error: %s", exc)
        return EXIT_PARAM
    except BudgetExceeded as exc:
        log.error("budget exceeded: %s", exc)
        return EXIT_INCONCLUSIVE
    return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
