"""Deterministic rendering of the four standard figures from CSV tables.

Schema per figure id:

    1: columns m, expected_min_pvalue (extra columns ignored)
    2: column p plus at least two pdf_* curve columns
    3: columns bin_center, mc_density, analytic_pdf
    4: column p plus at least one pdf_pm* curve column

The horizontal axis is fixed to [0, 1] for the density figures and to
the trial range for figure 1; vertical limits are derived from the data
by a fixed rule and reported back, so regenerated figures are comparable
across runs.  Output bytes depend only on the CSV bytes and the spec.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["FigureSpec", "RenderResult", "SchemaError", "render"]

_FIGSIZE = (7.0, 4.5)
_DPI = 150

# vertical limits for density figures ignore the spike below this p, where
# the limiting density diverges and would squash the bulk of the curves
_BULK_P = 0.05


class SchemaError(ValueError):
    """The CSV does not match the expected schema for the figure id."""


@dataclass(frozen=True)
class FigureSpec:
    input_csv: Path
    figure_id: int
    output_image: Path

    def __post_init__(self):
        if self.figure_id not in (1, 2, 3, 4):
            raise SchemaError(f"figure id must be 1..4, got {self.figure_id}")
        object.__setattr__(self, "input_csv", Path(self.input_csv))
        object.__setattr__(self, "output_image", Path(self.output_image))


@dataclass(frozen=True)
class RenderResult:
    output_image: Path
    figure_id: int
    ylim: tuple[float, float]
    series: tuple[str, ...]


def _read_table(path: Path) -> tuple[dict, list[str], np.ndarray]:
    if not path.exists():
        raise SchemaError(f"input CSV {path} does not exist")
    metadata: dict = {}
    lines = path.read_text().splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            _, _, rest = line.partition("# metadata: ")
            if rest:
                try:
                    metadata = json.loads(rest)
                except json.JSONDecodeError:
                    pass
            continue
        if line.strip():
            body.append(line)
    if not body:
        raise SchemaError(f"input CSV {path} has no header row")
    header = body[0].split(",")
    try:
        rows = np.array(
            [[float(cell) for cell in line.split(",")] for line in body[1:]], dtype=float
        )
    except ValueError as exc:
        raise SchemaError(f"non-numeric cell in {path}: {exc}") from exc
    if rows.ndim != 2 or rows.shape[0] == 0 or rows.shape[1] != len(header):
        raise SchemaError(f"{path} is not a rectangular numeric table under its header")
    return metadata, header, rows


def _require(header: list[str], names: list[str], path: Path) -> None:
    missing = [name for name in names if name not in header]
    if missing:
        raise SchemaError(
            f"{path} is missing required column(s) {missing}; found {header}"
        )


def _col(header: list[str], rows: np.ndarray, name: str) -> np.ndarray:
    return rows[:, header.index(name)]


def _curve_columns(header: list[str], prefix: str) -> list[str]:
    return [name for name in header if name.startswith(prefix)]


def _bulk_max(p: np.ndarray, curves: list[np.ndarray]) -> float:
    keep = p >= _BULK_P
    if not keep.any():
        keep = np.ones_like(p, dtype=bool)
    return float(max(curve[keep].max() for curve in curves))


def render(spec: FigureSpec) -> RenderResult:
    """Render the figure and return the recorded axis limits and series."""
    metadata, header, rows = _read_table(spec.input_csv)
    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    try:
        if spec.figure_id == 1:
            _require(header, ["m", "expected_min_pvalue"], spec.input_csv)
            m = _col(header, rows, "m")
            values = _col(header, rows, "expected_min_pvalue")
            ax.plot(m, values, marker="o", color="#4477aa")
            series = ("expected_min_pvalue",)
            ylim = (0.0, float(values.max()) * 1.05)
            ax.set_xlim(float(m.min()), float(m.max()))
            ax.set_xlabel("trials m")
            ax.set_ylabel("expected minimum p-value")
            ax.set_title("Expected minimum p-value across repeated trials")
        elif spec.figure_id in (2, 4):
            prefix = "pdf_"
            _require(header, ["p"], spec.input_csv)
            names = _curve_columns(header, prefix)
            minimum = 2 if spec.figure_id == 2 else 1
            if len(names) < minimum:
                raise SchemaError(
                    f"{spec.input_csv} needs at least {minimum} '{prefix}*' column(s) "
                    f"for figure {spec.figure_id}; found {names}"
                )
            p = _col(header, rows, "p")
            curves = [_col(header, rows, name) for name in names]
            for name, curve in zip(names, curves):
                ax.plot(p, curve, label=name.removeprefix(prefix), linewidth=1.4)
            series = tuple(names)
            ylim = (0.0, _bulk_max(p, curves) * 1.05)
            ax.set_xlim(0.0, 1.0)
            ax.set_xlabel("p-value")
            ax.set_ylabel("density")
            ax.legend(fontsize=8)
            if spec.figure_id == 2:
                ax.set_title("Finite-sample densities approaching the limiting one")
            else:
                ax.set_title("Density families across the median parameter")
        else:
            _require(header, ["bin_center", "mc_density", "analytic_pdf"], spec.input_csv)
            centers = _col(header, rows, "bin_center")
            mc_density = _col(header, rows, "mc_density")
            analytic = _col(header, rows, "analytic_pdf")
            width = float(centers[1] - centers[0]) if len(centers) > 1 else 0.02
            ax.bar(
                centers,
                mc_density,
                width=width * 0.96,
                color="#bbccee",
                label="Monte Carlo",
            )
            ax.plot(centers, analytic, color="#cc3311", linewidth=1.8, label="analytic")
            series = ("mc_density", "analytic_pdf")
            ylim = (0.0, float(max(mc_density.max(), analytic.max())) * 1.05)
            ax.set_xlim(0.0, 1.0)
            ax.set_xlabel("p-value")
            ax.set_ylabel("density")
            ax.legend(fontsize=8)
            ax.set_title("Sampled p-values against the analytic density")
        ax.set_ylim(*ylim)
        spec.output_image.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.output_image, format="png", metadata={"Software": None})
    finally:
        plt.close(fig)
    return RenderResult(
        output_image=spec.output_image,
        figure_id=spec.figure_id,
        ylim=(float(ylim[0]), float(ylim[1])),
        series=series,
    )
