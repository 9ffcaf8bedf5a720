"""Report emission: delimited output, rendered figures, and the run manifest.

Every CSV is written with deterministic 12-significant-digit formatting, and
each run directory gets a manifest.json recording the configuration hash,
package and library versions, the seed, and a content hash per emitted file.
Figures are rendered with the Agg backend and stripped of variable metadata
so identical runs produce bit-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import scipy  # noqa: E402

from . import __version__  # noqa: E402


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_csv(path: Path, header: list[str], rows) -> Path:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def save_figure(fig, path: Path) -> Path:
    fig.savefig(path, dpi=150, metadata={"Software": None})
    plt.close(fig)
    return path


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(out_dir: Path, command: str, config_text: str, seed: int, files) -> Path:
    manifest = {
        "command": command,
        "config_sha256": hashlib.sha256(config_text.encode()).hexdigest(),
        "seed": seed,
        "versions": {
            "twpasim": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "matplotlib": matplotlib.__version__,
        },
        "outputs": {p.name: sha256_file(p) for p in sorted(files)},
    }
    path = out_dir / "manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def line_figure(path: Path, x, ys, labels, xlabel, ylabel, title, logy=False):
    """One-panel line plot with a shared x axis."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for y, label in zip(ys, labels):
        ax.plot(x, y, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if logy:
        ax.set_yscale("log")
    if any(labels):
        ax.legend(frameon=False)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    return save_figure(fig, path)


def band_figure(path: Path, x, y_low, y_high, line_label, xlabel, ylabel, title):
    """Shaded band between two curves, e.g. a loss-envelope noise estimate."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.fill_between(x, y_low, y_high, alpha=0.35, label=line_label)
    ax.plot(x, y_low, lw=0.8)
    ax.plot(x, y_high, lw=0.8)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend(frameon=False)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    return save_figure(fig, path)
