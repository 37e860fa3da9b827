"""Deterministic file writers: CSV, JSON summaries, SVG plots and the run manifest."""
from __future__ import annotations

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  pylint: disable=wrong-import-position
import numpy as np  # noqa: E402  pylint: disable=wrong-import-position

from .const import CSV_SIGNIFICANT_DIGITS, INTEGRATION_VERSION  # noqa: E402

_LOGGER = logging.getLogger(__name__)

# Fixed ids and no timestamp so reruns produce identical SVG bytes
matplotlib.rcParams["svg.hashsalt"] = "auxnet"
matplotlib.rcParams["svg.fonttype"] = "none"


def format_number(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{CSV_SIGNIFICANT_DIGITS}g}"
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Comma-separated, header row, LF endings, 17 significant digits."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_number(value) for value in row])
    _LOGGER.debug("wrote %s", path)
    return path


def jsonable(value: Any) -> Any:
    """numpy scalars, complex numbers and NaN mapped onto plain JSON values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": jsonable(float(value.real)), "im": jsonable(float(value.imag))}
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if math.isnan(value) or math.isinf(value) else value
    if isinstance(value, Path):
        return value.as_posix()
    return value


def write_json(path: Path, data: Any) -> Path:
    path.write_text(json.dumps(jsonable(data), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _LOGGER.debug("wrote %s", path)
    return path


def write_plot(
    path: Path,
    curves: Sequence[tuple[Sequence[float], Sequence[float], str]],
    *,
    xlabel: str,
    ylabel: str,
    title: str = "",
    scatter: bool = False,
) -> Path:
    """Static line (or scatter) chart of (x, y, label) curves."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    try:
        for x, y, label in curves:
            if scatter:
                ax.scatter(x, y, s=6, label=label or None)
            else:
                ax.plot(x, y, linewidth=1.2, label=label or None)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        if any(label for _, _, label in curves):
            ax.legend(fontsize="small")
        ax.grid(True, linewidth=0.3)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    _LOGGER.debug("wrote %s", path)
    return path


def write_manifest(
    path: Path,
    *,
    scenario: str,
    parameters: dict[str, Any],
    defaults_filled: Sequence[str],
    files: Sequence[str],
    runtime: float,
) -> Path:
    """Plain-text record of the run; parameters filled from defaults are marked."""
    lines = [
        f"auxnet {INTEGRATION_VERSION}",
        f"scenario: {scenario}",
        "parameters:",
    ]
    for key in sorted(parameters):
        marker = "  (default)" if key in defaults_filled else ""
        rendered = json.dumps(jsonable(parameters[key]), sort_keys=True)
        lines.append(f"  {key} = {rendered}{marker}")
    lines.append("files:")
    lines.extend(f"  {name}" for name in files)
    lines.append(f"runtime_seconds: {runtime:.3f}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
