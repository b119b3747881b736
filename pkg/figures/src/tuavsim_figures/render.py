"""Render campaign CSV results into coverage figures.

Consumes only the fixed CSV contract of the simulation runner (metadata header
lines prefixed with ``#``, then the column set below); it never recomputes any
statistic. One plotted series per scenario label, with shaded confidence bands
from the ci_low/ci_high columns.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

DISTANCE_SWEEP = "distance_sweep"
ACCESSIBILITY_SWEEP = "accessibility_sweep"
KINDS = (DISTANCE_SWEEP, ACCESSIBILITY_SWEEP)

REQUIRED_COLUMNS = (
    "sweep_value",
    "scenario",
    "p_cov",
    "ci_low",
    "ci_high",
    "n_samples",
    "replications",
    "seed",
    "tuav_absent_fraction",
)

_X_LABELS = {
    DISTANCE_SWEEP: "macro station to cluster-center distance (m)",
    ACCESSIBILITY_SWEEP: "rooftop accessibility (fraction of buildings)",
}
_TITLES = {
    DISTANCE_SWEEP: "Coverage vs. macro-station distance",
    ACCESSIBILITY_SWEEP: "Coverage vs. rooftop accessibility",
}


class SchemaError(ValueError):
    """Raised when a results CSV does not match the expected contract."""


@dataclass(frozen=True)
class FigureSpec:
    input_csv: Path
    kind: str
    output_path: Path
    title: str | None = None
    label_overrides: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"kind must be one of {KINDS}, got {self.kind!r}")


def load_results(path: Path) -> tuple[dict[str, str], list[dict]]:
    """Parse a results CSV into (metadata, rows), validating the column set."""
    try:
        text = Path(path).read_text()
    except FileNotFoundError:
        raise SchemaError(f"input CSV not found: {path}")
    metadata: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[dict] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if "=" in body:
                key, _, value = body.partition("=")
                metadata[key.strip()] = value.strip()
            continue
        cells = line.split(",")
        if header is None:
            header = [c.strip() for c in cells]
            missing = [c for c in REQUIRED_COLUMNS if c not in header]
            if missing:
                raise SchemaError(f"missing column {missing[0]!r}")
            unexpected = [c for c in header if c not in REQUIRED_COLUMNS]
            if unexpected:
                raise SchemaError(f"unexpected column {unexpected[0]!r}")
            continue
        if len(cells) != len(header):
            raise SchemaError(f"row has {len(cells)} cells, header has {len(header)}")
        record = dict(zip(header, cells))
        try:
            rows.append(
                {
                    "sweep_value": float(record["sweep_value"]),
                    "scenario": record["scenario"],
                    "p_cov": float(record["p_cov"]),
                    "ci_low": float(record["ci_low"]),
                    "ci_high": float(record["ci_high"]),
                }
            )
        except ValueError as e:
            raise SchemaError(f"unparseable row {line!r}: {e}")
    if header is None:
        raise SchemaError("CSV has no header line")
    if not rows:
        raise SchemaError("CSV has no data rows")
    return metadata, rows


def series_by_scenario(rows: list[dict]) -> dict[str, list[dict]]:
    out: dict[str, list[dict]] = {}
    for row in rows:
        out.setdefault(row["scenario"], []).append(row)
    for points in out.values():
        points.sort(key=lambda r: r["sweep_value"])
    return dict(sorted(out.items()))


def build_figure(spec: FigureSpec, metadata: dict[str, str], rows: list[dict]):
    """One line plus CI band per scenario label; returns the matplotlib figure."""
    series = series_by_scenario(rows)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for label, points in series.items():
        x = [p["sweep_value"] for p in points]
        y = [p["p_cov"] for p in points]
        lo = [p["ci_low"] for p in points]
        hi = [p["ci_high"] for p in points]
        shown = spec.label_overrides.get(label, label)
        (line,) = ax.plot(x, y, marker="o", markersize=3, label=shown)
        ax.fill_between(x, lo, hi, alpha=0.2, color=line.get_color())
    ax.set_xlabel(_X_LABELS[spec.kind])
    ax.set_ylabel("coverage probability")
    ax.set_ylim(0.0, 1.0)
    ax.set_title(spec.title or _TITLES[spec.kind])
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    seed = metadata.get("seed", "unknown")
    n = metadata.get("samples_final", "")
    footnote = f"seed {seed}" + (f", {n} samples per reported point" if n else "")
    fig.text(0.99, 0.01, footnote, ha="right", va="bottom", fontsize=7, color="0.4")
    fig.tight_layout(rect=(0, 0.03, 1, 1))
    return fig


def render(spec: FigureSpec) -> Path:
    """File-to-file: read the CSV, write the figure, return the output path."""
    metadata, rows = load_results(spec.input_csv)
    fig = build_figure(spec, metadata, rows)
    out = Path(spec.output_path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="Render a campaign results CSV as a coverage figure"
    )
    parser.add_argument("--csv", required=True, help="input results CSV")
    parser.add_argument("--kind", required=True, choices=KINDS, help="sweep kind of the CSV")
    parser.add_argument("--out", required=True, help="output figure path (e.g. .png)")
    parser.add_argument("--title", default=None, help="title override")
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec(
            input_csv=Path(args.csv),
            kind=args.kind,
            output_path=Path(args.out),
            title=args.title,
        )
        render(spec)
    except SchemaError as e:
        print(f"schema error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
