"""Report, data-file and figure writers for the command-line front end.

Reports are an ordered key/value tree serialized as YAML; delimited data
files are plain comma-separated text with a header row.  Floats are
written with shortest round-trip repr and no timestamps or timings are
embedded, so identical runs produce byte-identical files.  Figures are
rendered next to the data they display.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import yaml


def write_report(path, tree: dict) -> None:
    """Serialize an ordered key/value tree; keys keep insertion order."""
    text = yaml.safe_dump(tree, sort_keys=False, default_flow_style=False)
    Path(path).write_text(text)


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_delimited(path, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n")


def convergence_summary(record) -> dict:
    """Flatten a convergence record for embedding in report trees."""
    out = {
        "status": record.status,
        "resolutions": [list(map(int, r)) for r in record.resolutions],
        "values": [float(v) for v in record.values],
    }
    est = record.error_estimate
    out["error_estimate"] = None if not np.isfinite(est) else float(est)
    out["observed_order"] = (None if record.observed_order is None
                             else float(record.observed_order))
    out["richardson_estimate"] = (None if record.richardson_estimate is None
                                  else float(record.richardson_estimate))
    return out


def figure_sweep(path, sweep_coord, expected, calculated, xlabel="z") -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(sweep_coord, expected, "k--", label="analytic field")
    ax.plot(sweep_coord, calculated, "o", ms=4, label="reconstructed")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("f")
    ax.legend(frameon=False)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def figure_slice(path, x_vals, z_vals, grid, label) -> None:
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    mesh = ax.pcolormesh(x_vals, z_vals, grid.T, shading="auto", cmap="RdBu_r")
    fig.colorbar(mesh, ax=ax, label=label)
    ax.set_xlabel("x")
    ax.set_ylabel("z")
    ax.set_aspect("equal")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def figure_convergence(path, resolutions, values) -> None:
    n_radial = [r[0] for r in resolutions]
    diffs = [abs(values[i + 1] - values[i]) for i in range(len(values) - 1)]
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ax.loglog(n_radial[1:], diffs, "o-")
    ax.set_xlabel("radial nodes")
    ax.set_ylabel("successive change")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def figure_collapse(path, sigmas, estimates, limit) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ax.semilogx(sigmas, estimates, "o-", label="mollified integral")
    ax.axhline(limit, color="k", ls="--", label="cone-collapse limit")
    ax.set_xlabel("mollifier width")
    ax.set_ylabel("estimate")
    ax.legend(frameon=False)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def figure_boundary(path, radii, values) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ax.semilogx(radii, values, "o-")
    ax.set_xlabel("face radius")
    ax.set_ylabel("boundary term")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
