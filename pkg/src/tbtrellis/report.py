"""Figures and TSV summaries written next to the textual CLI output."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .spans import Span  # noqa: E402
from .trellis_core import Trellis  # noqa: E402

__all__ = ["plot_profile", "plot_profile_grid", "plot_spans", "trellis_report", "census_report"]


def plot_profile(ax, profile: Sequence[int], p: int = 2):
    """Bar chart of log_p |V_i|."""
    ax.bar(range(len(profile)), profile, color="tab:blue")
    ax.set_xlabel("index i")
    ax.set_ylabel(f"log_{p} |V_i|")
    ax.set_xticks(range(len(profile)))


def plot_profile_grid(ax, profiles: Sequence[Sequence[int]], names: Sequence[str]):
    """One row per profile, annotated cells."""
    ax.imshow(profiles, cmap="Blues", aspect="auto", vmin=0)
    for r, prof in enumerate(profiles):
        for c, v in enumerate(prof):
            ax.text(c, r, str(v), ha="center", va="center", fontsize=8)
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names, fontsize=8)
    ax.set_xticks(range(len(profiles[0])))
    ax.set_xlabel("index i")


def plot_spans(ax, spans: Sequence[Span], n: int):
    """Each span as a circular arc over Z_n; degenerate spans as full rings."""
    ax.set_aspect("equal")
    ax.axis("off")
    for i in range(n):
        t = 2 * math.pi * i / n
        ax.text(1.15 * math.cos(t), 1.15 * math.sin(t), str(i), ha="center", va="center", fontsize=8)
    for k, s in enumerate(spans):
        r = 0.95 - 0.6 * k / max(len(spans), 1)
        if s.is_full:
            t0, t1 = 0.0, 2 * math.pi
        elif s.is_empty:
            continue
        else:
            t0 = 2 * math.pi * s.a / n
            t1 = t0 + 2 * math.pi * max(s.l, 0.15) / n
        steps = 60
        xs = [r * math.cos(t0 + (t1 - t0) * j / steps) for j in range(steps + 1)]
        ys = [r * math.sin(t0 + (t1 - t0) * j / steps) for j in range(steps + 1)]
        ax.plot(xs, ys, lw=2)
        ax.plot([xs[0]], [ys[0]], "o", ms=3, color="k")
    ax.set_xlim(-1.3, 1.3)
    ax.set_ylim(-1.3, 1.3)


def _save(fig, path: Path) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return str(path)


def trellis_report(T: Trellis, outdir: Path, stem: str = "trellis") -> list[str]:
    from .analysis import is_reduced
    from .factorization import span_distribution

    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    fig, ax = plt.subplots(figsize=(5, 3))
    plot_profile(ax, T.vdims, p=T.p)
    ax.set_title("state-complexity profile")
    written.append(_save(fig, outdir / f"{stem}_profile.png"))
    rows = [("index", "vdim")] + [(str(i), str(r)) for i, r in enumerate(T.vdims)]
    if is_reduced(T):
        dist = span_distribution(T, check=False)
        fig, ax = plt.subplots(figsize=(4, 4))
        plot_spans(ax, list(dist), T.n)
        ax.set_title(f"span distribution ({len(dist)} spans)")
        written.append(_save(fig, outdir / f"{stem}_spans.png"))
        rows += [("span", "multiplicity")] + [(str(s), str(m)) for s, m in dist.items()]
    tsv = outdir / f"{stem}_report.tsv"
    tsv.write_text("".join("\t".join(r) + "\n" for r in rows))
    written.append(str(tsv))
    return written


def census_report(shapes, outdir: Path, stem: str = "code") -> list[str]:
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    if shapes:
        fig, ax = plt.subplots(figsize=(6, 1 + 0.4 * len(shapes)))
        plot_profile_grid(ax, [s.profile for s in shapes], [s.label() for s in shapes])
        ax.set_title("minimal span sets")
        written.append(_save(fig, outdir / f"{stem}_minimal_profiles.png"))
    tsv = outdir / f"{stem}_census.tsv"
    lines = ["shape\tprofile\tcount\n"]
    for s in shapes:
        lines.append(f"{s.label()}\t{' '.join(map(str, s.profile))}\t{len(s.trellises)}\n")
    tsv.write_text("".join(lines))
    written.append(str(tsv))
    return written
