"""Command-line front end.

Evaluates the distribution formulas on grids, solves the inverse
(median-from-mean) problem, runs seeded Monte Carlo validations, and
emits the CSV/JSON tables behind the four standard figures.  Every table
carries a metadata block sufficient to regenerate it.

Exit codes: 0 success, 2 usage or domain error, 3 numerical
non-convergence.  Failures print one machine-readable JSON line on the
error stream.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, mc, metadist, phacking, power
from .errors import BracketError, ConvergenceError, DomainError, QuadratureError
from .metadist import LIMIT, MetaDistParams, SampleSize, is_limit
from .phacking import HackingParams
from .power import PowerParams
from .quadrature import QuadratureConfig

__all__ = ["GridSpec", "OutputTable", "main"]

_DEFAULT_GRID = "0.001:0.999:199"
_DEFAULT_DRAWS = 1_000_000
_DEFAULT_SEED = 42
_DEFAULT_STREAMS = 4

# numeric stand-in for the limiting regime inside purely numeric tables
_LIMIT_CELL = math.inf


@dataclass(frozen=True)
class GridSpec:
    """Closed uniform evaluation grid.

    A degenerate single-point grid (points == 1, start == stop) is
    accepted so single evaluations share the grid syntax.
    """

    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.points < 1:
            raise DomainError(f"grid needs at least one point, got {self.points}")
        if self.points == 1:
            if self.start != self.stop:
                raise DomainError("a single-point grid requires start == stop")
        elif not self.start < self.stop:
            raise DomainError(
                f"grid start {self.start} must be below stop {self.stop}"
            )

    def values(self) -> np.ndarray:
        if self.points == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.points)

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = text.split(":")
        if len(parts) != 3:
            raise DomainError(f"grid {text!r} is not of the form start:stop:points")
        try:
            start, stop = float(parts[0]), float(parts[1])
            points = int(parts[2])
        except ValueError as exc:
            raise DomainError(f"grid {text!r} has non-numeric components") from exc
        return cls(start=start, stop=stop, points=points)


@dataclass
class OutputTable:
    """Rectangular numeric table plus the metadata to regenerate it."""

    column_names: list[str]
    rows: list[list[float]]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        width = len(self.column_names)
        for row in self.rows:
            if len(row) != width:
                raise DomainError("table rows must all match the header width")

    def to_csv(self) -> str:
        lines = ["# metadata: " + json.dumps(self.metadata, sort_keys=True)]
        lines.append(",".join(self.column_names))
        for row in self.rows:
            lines.append(",".join(format(v, ".17g") for v in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "columns": self.column_names,
            "rows": self.rows,
            "metadata": self.metadata,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise DomainError(f"unknown output format {fmt!r}")


def _base_metadata(command: str, quad: QuadratureConfig, **params) -> dict:
    return {
        "command": command,
        "package": "pvalmeta",
        "version": __version__,
        "quadrature": {
            "abs_tol": quad.abs_tol,
            "rel_tol": quad.rel_tol,
            "max_subdivisions": quad.max_subdivisions,
        },
        "parameters": params,
    }


def _n_label(n: SampleSize) -> str:
    return "limit" if is_limit(n) else str(n)


def _n_cell(n: SampleSize) -> float:
    return _LIMIT_CELL if is_limit(n) else float(n)


# ---------------------------------------------------------------------------
# Table builders (importable; the CLI handlers are thin wrappers)
# ---------------------------------------------------------------------------


def build_curve_table(
    kind: str,
    p_medians: list[float],
    n: SampleSize,
    grid: GridSpec,
    quad: QuadratureConfig,
) -> OutputTable:
    """pdf or cdf curves, one value column per median parameter."""
    if kind not in ("pdf", "cdf"):
        raise DomainError(f"unknown curve kind {kind!r}")
    ps = grid.values()
    if np.any(ps <= 0.0) or np.any(ps >= 1.0):
        raise DomainError("evaluation grid must lie strictly inside (0, 1)")
    columns = ["p"]
    data = [ps]
    for pm in p_medians:
        params = MetaDistParams(p_median=pm, n=n)
        fn = metadist.pdf if kind == "pdf" else metadist.cdf
        data.append(np.asarray(fn(ps, params), dtype=float))
        columns.append(f"{kind}_pm{pm:g}")
    rows = [list(map(float, row)) for row in zip(*data)]
    meta = _base_metadata(
        kind,
        quad,
        p_median=p_medians,
        n=_n_label(n),
        grid=f"{grid.start}:{grid.stop}:{grid.points}",
    )
    return OutputTable(column_names=columns, rows=rows, metadata=meta)


def build_hack_table(
    p_median: float,
    n: SampleSize,
    m_max: int,
    quad: QuadratureConfig,
    mc_draws: int | None = None,
    seed: int = _DEFAULT_SEED,
    stream_count: int = _DEFAULT_STREAMS,
) -> OutputTable:
    """Expected minimum p-value per trial count, optionally with MC columns.

    When Monte Carlo columns are requested, trial count m uses an
    independent substream family derived from seed + m.
    """
    base = MetaDistParams(p_median=p_median, n=n)
    curve = phacking.hacking_curve(base, m_max, quad)
    columns = ["m", "expected_min_pvalue"]
    rows: list[list[float]] = [[float(m), value] for m, value in curve]
    meta = _base_metadata(
        "hack", quad, p_median=p_median, n=_n_label(n), m_max=m_max
    )
    if mc_draws is not None:
        columns += ["mc_mean", "mc_standard_error"]
        for row in rows:
            m = int(row[0])
            cfg = mc.MCConfig(draws=mc_draws, seed=seed + m, stream_count=stream_count)
            emp = mc.sample_min_pvalues(HackingParams(base=base, m=m), cfg)
            se = float(emp.sorted_samples.std(ddof=1)) / math.sqrt(emp.draw_count)
            row += [emp.mean(), se]
        meta["parameters"].update(
            draws=mc_draws, seed=seed, stream_count=stream_count, seed_per_m="seed + m"
        )
    return OutputTable(column_names=columns, rows=rows, metadata=meta)


_STATS_QUANTILES = (0.05, 0.25, 0.5, 0.75, 0.95)


def build_stats_table(
    p_median: float | None,
    mean_target: float | None,
    n: SampleSize,
    quad: QuadratureConfig,
    sweep_n: list[SampleSize] | None = None,
    below: float | None = None,
) -> OutputTable:
    """Summary statistics; exactly one of p_median / mean_target drives it.

    With `sweep_n`, one row per sample size (mean_target is re-solved for
    each), which is the diagnostic surface for claims whose sample size
    is unstated.  `below` adds the probability mass under that threshold.
    """
    if (p_median is None) == (mean_target is None):
        raise DomainError("provide exactly one of p_median (--pm) or mean target (--mean)")
    sizes = sweep_n if sweep_n else [n]
    columns = [
        "n",
        "p_median",
        "mean_pvalue",
        "std",
        "mean_abs_deviation",
    ] + [f"quantile_{int(100 * q)}" for q in _STATS_QUANTILES]
    if below is not None:
        columns.append(f"prob_below_{below:g}")
    rows = []
    solved = {}
    for size in sizes:
        if mean_target is not None:
            pm = metadist.solve_median_for_mean(mean_target, size, quad)
            solved[_n_label(size)] = pm
        else:
            pm = p_median
        params = MetaDistParams(p_median=pm, n=size)
        stats = metadist.dispersion_stats(params, _STATS_QUANTILES, quad)
        row = [
            _n_cell(size),
            pm,
            stats.mean,
            stats.std,
            stats.mad,
            *[value for _, value in stats.quantiles],
        ]
        if below is not None:
            row.append(float(metadist.cdf(below, params)))
        rows.append(row)
    meta = _base_metadata(
        "stats",
        quad,
        p_median=p_median,
        mean_target=mean_target,
        n=_n_label(n),
        sweep_n=[_n_label(s) for s in sizes] if sweep_n else None,
        below=below,
        quantile_levels=list(_STATS_QUANTILES),
        n_limit_encoding="inf",
    )
    if solved:
        meta["parameters"]["solved_p_median"] = solved
    return OutputTable(column_names=columns, rows=rows, metadata=meta)


def build_power_table(
    p_level: float, n: int, grid: GridSpec, quad: QuadratureConfig
) -> OutputTable:
    """Projected-power expression on a grid, with the diagnostic integral."""
    params = PowerParams(p_level=p_level, n=n)
    bs = grid.values()
    if np.any(bs <= 0.0) or np.any(bs >= 1.0):
        raise DomainError("power grid must lie strictly inside (0, 1)")
    rows = []
    negatives = 0
    for b in bs:
        b = float(b)
        if b == 0.5:
            b = 0.5 + 1e-12
        ev = power.power_metadensity_detailed(b, params)
        negatives += ev.negative
        rows.append([b, ev.value])
    integral = power.power_metadensity_integral(params, quad)
    meta = _base_metadata(
        "power",
        quad,
        p_level=p_level,
        n=n,
        grid=f"{grid.start}:{grid.stop}:{grid.points}",
    )
    meta["diagnostics"] = {
        "integral_over_unit_interval": integral.value,
        "integral_error_bound": integral.error_bound,
        "negative_evaluations": negatives,
    }
    return OutputTable(column_names=["beta_c", "power_metadensity"], rows=rows, metadata=meta)


def build_mc_check_table(
    p_median: float | None,
    mean_target: float | None,
    n: SampleSize,
    m: int,
    draws: int,
    seed: int,
    stream_count: int,
    quad: QuadratureConfig,
) -> OutputTable:
    """One-row summary comparing a seeded sample against the analytic law."""
    if (p_median is None) == (mean_target is None):
        raise DomainError("provide exactly one of p_median (--pm) or mean target (--mean)")
    if mean_target is not None:
        pm = metadist.solve_median_for_mean(mean_target, n, quad)
    else:
        pm = p_median
    params = MetaDistParams(p_median=pm, n=n)
    cfg = mc.MCConfig(draws=draws, seed=seed, stream_count=stream_count)
    if m == 1:
        emp = mc.sample_pvalues(params, cfg)
        ks = mc.ks_distance(emp, lambda x: metadist.cdf(x, params))
        analytic_mean = metadist.mean_true_pvalue(params, quad)
    else:
        hp = HackingParams(base=params, m=m)
        emp = mc.sample_min_pvalues(hp, cfg)
        ks = mc.ks_distance(emp, lambda x: phacking.cdf_min(x, hp))
        analytic_mean = phacking.expected_min(hp, quad)
    row = [
        float(draws),
        float(seed),
        float(stream_count),
        float(m),
        pm,
        ks,
        emp.median(),
        emp.mean(),
        analytic_mean,
    ]
    columns = [
        "draws",
        "seed",
        "stream_count",
        "m",
        "p_median",
        "ks_distance",
        "empirical_median",
        "empirical_mean",
        "analytic_mean",
    ]
    meta = _base_metadata(
        "mc-check",
        quad,
        p_median=p_median,
        mean_target=mean_target,
        n=_n_label(n),
        m=m,
        draws=draws,
        seed=seed,
        stream_count=stream_count,
    )
    if mean_target is not None:
        meta["parameters"]["solved_p_median"] = pm
    return OutputTable(column_names=columns, rows=[row], metadata=meta)


# ---------------------------------------------------------------------------
# Figure tables
# ---------------------------------------------------------------------------

_FIG1_PM, _FIG1_N, _FIG1_MMAX = 0.15, 20, 20
_FIG2_PM = 0.15
_FIG2_SIZES = (5, 10, 30, 100)
_FIG3_MEAN, _FIG3_N, _FIG3_BINS = 0.11, 20, 50
_FIG4_PMS = (0.05, 0.15, 0.25, 0.4, 0.5)
_FIG4_SEAM_N, _FIG4_SEAM_EPS = 30, 1e-4


def build_figure_tables(
    quad: QuadratureConfig,
    draws: int = _DEFAULT_DRAWS,
    seed: int = _DEFAULT_SEED,
    stream_count: int = _DEFAULT_STREAMS,
) -> dict[str, OutputTable]:
    """The four figure tables, keyed by file stem."""
    tables: dict[str, OutputTable] = {}

    # hacking curve
    tables["fig1"] = build_hack_table(_FIG1_PM, _FIG1_N, _FIG1_MMAX, quad)
    tables["fig1"].metadata["figure"] = 1

    # finite-n curves converging on the limiting one
    grid = GridSpec.parse(_DEFAULT_GRID)
    ps = grid.values()
    columns = ["p"]
    data = [ps]
    for size in _FIG2_SIZES:
        data.append(metadist.pdf(ps, MetaDistParams(_FIG2_PM, size)))
        columns.append(f"pdf_n{size}")
    data.append(metadist.pdf(ps, MetaDistParams(_FIG2_PM, LIMIT)))
    columns.append("pdf_limit")
    meta = _base_metadata(
        "figures", quad, p_median=_FIG2_PM, sizes=list(_FIG2_SIZES), grid=_DEFAULT_GRID
    )
    meta["figure"] = 2
    tables["fig2"] = OutputTable(
        column_names=columns,
        rows=[list(map(float, row)) for row in zip(*data)],
        metadata=meta,
    )

    # Monte Carlo histogram against the analytic density
    pm3 = metadist.solve_median_for_mean(_FIG3_MEAN, _FIG3_N, quad)
    params3 = MetaDistParams(pm3, _FIG3_N)
    cfg = mc.MCConfig(draws=draws, seed=seed, stream_count=stream_count)
    emp = mc.sample_pvalues(params3, cfg)
    ks = mc.ks_distance(emp, lambda x: metadist.cdf(x, params3))
    edges = np.linspace(0.0, 1.0, _FIG3_BINS + 1)
    counts, _ = np.histogram(emp.sorted_samples, bins=edges)
    density = counts / (emp.draw_count * (1.0 / _FIG3_BINS))
    centers = 0.5 * (edges[:-1] + edges[1:])
    analytic = metadist.pdf(centers, params3)
    meta = _base_metadata(
        "figures",
        quad,
        mean_target=_FIG3_MEAN,
        solved_p_median=pm3,
        n=_FIG3_N,
        draws=draws,
        seed=seed,
        stream_count=stream_count,
        bins=_FIG3_BINS,
        bin_range=[0.0, 1.0],
    )
    meta["figure"] = 3
    meta["diagnostics"] = {"ks_distance": ks}
    tables["fig3"] = OutputTable(
        column_names=["bin_center", "mc_density", "analytic_pdf"],
        rows=[
            [float(c), float(d), float(a)]
            for c, d, a in zip(centers, density, analytic)
        ],
        metadata=meta,
    )

    # density families across the median parameter, with the near-uniform seam
    columns = ["p"]
    data = [ps]
    for pm in _FIG4_PMS:
        data.append(metadist.pdf(ps, MetaDistParams(pm, LIMIT)))
        columns.append(f"pdf_pm{pm:g}")
    for sign, tag in ((-1.0, "below"), (1.0, "above")):
        pm = 0.5 + sign * _FIG4_SEAM_EPS
        data.append(metadist.pdf(ps, MetaDistParams(pm, _FIG4_SEAM_N)))
        columns.append(f"pdf_pm_half_{tag}_n{_FIG4_SEAM_N}")
    meta = _base_metadata(
        "figures",
        quad,
        p_medians=list(_FIG4_PMS),
        seam_n=_FIG4_SEAM_N,
        seam_eps=_FIG4_SEAM_EPS,
        grid=_DEFAULT_GRID,
    )
    meta["figure"] = 4
    tables["fig4"] = OutputTable(
        column_names=columns,
        rows=[list(map(float, row)) for row in zip(*data)],
        metadata=meta,
    )
    return tables


def write_figures(
    out_dir: str | Path,
    quad: QuadratureConfig,
    draws: int = _DEFAULT_DRAWS,
    seed: int = _DEFAULT_SEED,
    stream_count: int = _DEFAULT_STREAMS,
) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}
    for stem, table in build_figure_tables(quad, draws, seed, stream_count).items():
        path = out / f"{stem}.csv"
        path.write_text(table.to_csv())
        paths[stem] = path
    return paths


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------


def _emit_error(code: int, kind: str, message: str) -> None:
    line = json.dumps({"error": {"code": code, "kind": kind, "message": message}})
    print(line, file=sys.stderr)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error(2, "usage", message)
        raise SystemExit(2)


def _parse_n(text: str) -> SampleSize:
    if text.strip().lower() == "limit":
        return LIMIT
    try:
        return int(text)
    except ValueError as exc:
        raise DomainError(f"--n must be an integer or 'limit', got {text!r}") from exc


def _parse_pm_list(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise DomainError(f"--pm expects comma-separated reals, got {text!r}") from exc
    if not values:
        raise DomainError("--pm received no values")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pvalmeta", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, grid_default=_DEFAULT_GRID):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="write the table to this path")
        p.add_argument(
            "--quad-tol",
            type=float,
            default=None,
            help="absolute quadrature tolerance override",
        )
        if grid_default is not None:
            p.add_argument("--grid", default=grid_default, help="start:stop:points")

    for kind in ("pdf", "cdf"):
        p = sub.add_parser(kind, help=f"{kind} curves of the meta-distribution")
        p.add_argument("--pm", required=True, help="median p-value(s), comma separated")
        p.add_argument("--n", required=True, help="sample size or 'limit'")
        add_common(p)

    p = sub.add_parser("hack", help="expected minimum p-value across trials")
    p.add_argument("--pm", required=True, type=float)
    p.add_argument("--n", required=True)
    p.add_argument("--mmax", required=True, type=int)
    p.add_argument("--mc", action="store_true", help="add Monte Carlo columns")
    p.add_argument("--draws", type=int, default=_DEFAULT_DRAWS)
    p.add_argument("--seed", type=int, default=_DEFAULT_SEED)
    p.add_argument("--streams", type=int, default=_DEFAULT_STREAMS)
    add_common(p, grid_default=None)

    p = sub.add_parser("stats", help="mean, dispersion, and quantile summaries")
    p.add_argument("--pm", type=float, default=None)
    p.add_argument("--mean", type=float, default=None)
    p.add_argument("--n", required=True)
    p.add_argument(
        "--sweep-n",
        default=None,
        help="comma-separated sample sizes (or 'limit') for a per-n diagnostic sweep",
    )
    p.add_argument(
        "--below",
        type=float,
        default=None,
        help="also report the probability mass below this p-value",
    )
    add_common(p, grid_default=None)

    p = sub.add_parser("power", help="projected-power expression on a grid")
    p.add_argument("--ps", required=True, type=float, help="level p-value in (1/2, 1)")
    p.add_argument("--n", required=True, type=int)
    add_common(p)

    p = sub.add_parser("mc-check", help="seeded Monte Carlo vs analytic comparison")
    p.add_argument("--pm", type=float, default=None)
    p.add_argument("--mean", type=float, default=None)
    p.add_argument("--n", required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--draws", type=int, default=_DEFAULT_DRAWS)
    p.add_argument("--seed", type=int, default=_DEFAULT_SEED)
    p.add_argument("--streams", type=int, default=_DEFAULT_STREAMS)
    add_common(p, grid_default=None)

    p = sub.add_parser("figures", help="emit the four standard figure tables as CSV")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--draws", type=int, default=_DEFAULT_DRAWS)
    p.add_argument("--seed", type=int, default=_DEFAULT_SEED)
    p.add_argument("--streams", type=int, default=_DEFAULT_STREAMS)
    p.add_argument(
        "--quad-tol", type=float, default=None, help="absolute quadrature tolerance override"
    )
    return parser


def _quad_from(args) -> QuadratureConfig:
    tol = getattr(args, "quad_tol", None)
    if tol is None:
        return QuadratureConfig()
    return QuadratureConfig(abs_tol=tol)


def _deliver(table: OutputTable, args) -> None:
    text = table.render(args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dispatch(args) -> int:
    quad = _quad_from(args)
    if args.command in ("pdf", "cdf"):
        table = build_curve_table(
            args.command,
            _parse_pm_list(args.pm),
            _parse_n(args.n),
            GridSpec.parse(args.grid),
            quad,
        )
        _deliver(table, args)
    elif args.command == "hack":
        table = build_hack_table(
            args.pm,
            _parse_n(args.n),
            args.mmax,
            quad,
            mc_draws=args.draws if args.mc else None,
            seed=args.seed,
            stream_count=args.streams,
        )
        _deliver(table, args)
    elif args.command == "stats":
        sweep = (
            [_parse_n(part) for part in args.sweep_n.split(",")]
            if args.sweep_n
            else None
        )
        table = build_stats_table(
            args.pm, args.mean, _parse_n(args.n), quad, sweep_n=sweep, below=args.below
        )
        _deliver(table, args)
    elif args.command == "power":
        table = build_power_table(args.ps, args.n, GridSpec.parse(args.grid), quad)
        _deliver(table, args)
    elif args.command == "mc-check":
        table = build_mc_check_table(
            args.pm,
            args.mean,
            _parse_n(args.n),
            args.m,
            args.draws,
            args.seed,
            args.streams,
            quad,
        )
        _deliver(table, args)
    elif args.command == "figures":
        paths = write_figures(
            args.out_dir, quad, draws=args.draws, seed=args.seed, stream_count=args.streams
        )
        summary = {stem: str(path) for stem, path in sorted(paths.items())}
        sys.stdout.write(json.dumps({"written": summary}) + "\n")
    else:  # pragma: no cover - argparse enforces the choice
        raise DomainError(f"unknown command {args.command!r}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _dispatch(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (DomainError, BracketError) as exc:
        _emit_error(2, "domain", str(exc))
        return 2
    except (ConvergenceError, QuadratureError) as exc:
        _emit_error(3, "numerics", str(exc))
        return 3


if __name__ == "__main__":
    sys.exit(main())
