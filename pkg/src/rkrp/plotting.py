"""Optional figure rendering for benchmark CSVs.

Kept separate from the sweeps so the default output stays plain CSV;
the CLI calls in here only when asked to. Uses the non-interactive
Agg backend, writing a PNG next to the delimited output.
"""

from __future__ import annotations

import csv
import math

_MARKERS = ("o", "s", "^", "x", "D")


def render_benchmark_png(csv_path, png_path, value_col: str,
                         ylabel: str, logy: bool) -> None:
    """Plot value_col against the param column, one line per kind."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    series: dict[str, list[tuple[float, float]]] = {}
    with open(csv_path, newline="") as fh:
        for row in csv.DictReader(fh):
            value = float(row[value_col])
            if math.isnan(value) or (logy and value <= 0.0):
                continue
            series.setdefault(row["kind"], []).append((float(row["param"]), value))

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for i, (kind, points) in enumerate(sorted(series.items())):
        points.sort()
        ax.plot([p for p, _ in points], [v for _, v in points],
                marker=_MARKERS[i % len(_MARKERS)], label=kind)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel("param")
    ax.set_ylabel(ylabel)
    ax.grid(True, which="both", alpha=0.3)
    if series:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
