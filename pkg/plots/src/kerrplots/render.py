"""Render the kerrcircuit CSV outputs as static figures.

Two kinds of input are understood:

* a level-spacing table with header ``b0,E31,E42,E32`` -> three-line plot;
* a sweep table with header ``omega_ex,gamma5,value`` (plus '#'-prefixed
  metadata lines) -> heatmap, with failed cells (empty value) masked out.

Rendering is deterministic: fixed figure size, dpi, colormap, and PNG
metadata, so identical inputs produce byte-identical images.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

_FIGSIZE = (6.0, 4.0)
_DPI = 120
_CMAP = "viridis"
_PNG_METADATA = {"Software": "kerrplots"}

_LEVELS_COLUMNS = ["b0", "E31", "E42", "E32"]
_SWEEP_COLUMNS = ["omega_ex", "gamma5", "value"]


class SchemaError(ValueError):
    """Input CSV does not match a known schema; names the offending columns."""


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    output_path: str
    kind: str = "auto"  # line | heatmap | auto (from the header)
    title: str = ""
    value_label: str = "value"


def _read_rows(path: Path) -> tuple[list[str], list[list[str]]]:
    if not path.exists():
        raise SchemaError(f"input CSV not found: {path}")
    header: list[str] | None = None
    rows: list[list[str]] = []
    for raw in path.read_text().splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip(","):
            continue
        cells = [c.strip() for c in line.split(",")]
        if header is None:
            header = cells
        else:
            rows.append(cells)
    if header is None:
        raise SchemaError(f"{path}: no header row found")
    return header, rows


def _check_header(header: list[str], expected: list[str], path: Path) -> None:
    if header != expected:
        missing = [c for c in expected if c not in header]
        unexpected = [c for c in header if c not in expected]
        raise SchemaError(
            f"{path}: header mismatch; expected columns {expected}, "
            f"missing {missing or 'none'}, unexpected {unexpected or 'none'}"
        )


def _detect_kind(header: list[str]) -> str:
    if header == _LEVELS_COLUMNS:
        return "line"
    if header == _SWEEP_COLUMNS:
        return "heatmap"
    raise SchemaError(
        f"unrecognized header {header}; expected {_LEVELS_COLUMNS} or {_SWEEP_COLUMNS}"
    )


def _render_levels(path: Path, spec: FigureSpec, ax) -> None:
    header, rows = _read_rows(path)
    _check_header(header, _LEVELS_COLUMNS, path)
    try:
        data = np.array([[float(c) for c in row] for row in rows])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric cell in levels table ({exc})")
    if data.ndim != 2 or data.shape[1] != 4:
        raise SchemaError(f"{path}: expected 4 columns, got shape {data.shape}")
    for idx, (label, style) in enumerate(
        [("E31", "-"), ("E42", "--"), ("E32", "-o")], start=1
    ):
        ax.plot(data[:, 0], data[:, idx], style, label=label, markersize=3)
    ax.set_xlabel("b0")
    ax.set_ylabel("level spacing (GHz)")
    ax.legend()


def _render_sweep(path: Path, spec: FigureSpec, fig, ax) -> None:
    header, rows = _read_rows(path)
    _check_header(header, _SWEEP_COLUMNS, path)
    xs, ys, vs = [], [], []
    for row in rows:
        if len(row) != 3:
            raise SchemaError(f"{path}: expected 3 cells per row, got {row}")
        xs.append(float(row[0]))
        ys.append(float(row[1]))
        vs.append(float(row[2]) if row[2] else np.nan)  # empty cell = failure
    x_vals = sorted(set(xs))
    y_vals = sorted(set(ys))
    if len(xs) != len(x_vals) * len(y_vals):
        raise SchemaError(
            f"{path}: {len(xs)} rows do not fill a {len(x_vals)}x{len(y_vals)} grid"
        )
    grid = np.full((len(y_vals), len(x_vals)), np.nan)
    xi = {v: i for i, v in enumerate(x_vals)}
    yi = {v: i for i, v in enumerate(y_vals)}
    for x, y, v in zip(xs, ys, vs):
        grid[yi[y], xi[x]] = v
    masked = np.ma.masked_invalid(grid)
    mesh = ax.pcolormesh(x_vals, np.array(y_vals) * 1e3, masked, cmap=_CMAP,
                         shading="nearest")
    fig.colorbar(mesh, ax=ax, label=spec.value_label)
    ax.set_xlabel("Omega_Ex (GHz)")
    ax.set_ylabel("gamma5 (MHz)")


def render(spec: FigureSpec) -> Path:
    """Render one figure; returns the written path."""
    path = Path(spec.csv_path)
    header, _ = _read_rows(path)
    kind = spec.kind if spec.kind != "auto" else _detect_kind(header)

    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    try:
        if kind == "line":
            _render_levels(path, spec, ax)
        elif kind == "heatmap":
            _render_sweep(path, spec, fig, ax)
        else:
            raise SchemaError(f"unknown figure kind {kind!r}")
        if spec.title:
            ax.set_title(spec.title)
        out = Path(spec.output_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, format="png", metadata=dict(_PNG_METADATA))
        return out
    finally:
        plt.close(fig)


def load_spec_file(path: str) -> list[FigureSpec]:
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    figures = doc.get("figure", [])
    if not figures:
        raise SchemaError(f"{path}: no [[figure]] tables found")
    specs = []
    for i, entry in enumerate(figures):
        try:
            specs.append(
                FigureSpec(
                    csv_path=entry["csv"],
                    output_path=entry["out"],
                    kind=entry.get("kind", "auto"),
                    title=entry.get("title", ""),
                    value_label=entry.get("value_label", "value"),
                )
            )
        except KeyError as exc:
            raise SchemaError(f"{path}: figure #{i + 1} is missing key {exc}")
    return specs


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="kerrplots", description="Render kerrcircuit CSV outputs to PNG."
    )
    parser.add_argument("--spec", metavar="TOML", help="file of [[figure]] tables")
    parser.add_argument("--csv", metavar="PATH", help="single input CSV")
    parser.add_argument("--out", metavar="PATH", help="single output PNG")
    parser.add_argument("--kind", default="auto", choices=["auto", "line", "heatmap"])
    parser.add_argument("--title", default="")
    args = parser.parse_args(argv)

    if bool(args.spec) == bool(args.csv and args.out):
        print("error: pass either --spec or both --csv and --out", file=sys.stderr)
        return 2
    try:
        specs = (
            load_spec_file(args.spec)
            if args.spec
            else [FigureSpec(args.csv, args.out, kind=args.kind, title=args.title)]
        )
        for spec in specs:
            print(render(spec))
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
