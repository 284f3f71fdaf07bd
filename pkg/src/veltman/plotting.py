"""Frame diagrams: covering R-edges as solid arrows, non-forced S_x pairs as dashed arcs."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import FancyArrowPatch  # noqa: E402

from .semantics import VeltmanFrame  # noqa: E402


def _layout(frame: VeltmanFrame) -> dict[int, tuple[float, float]]:
    # deeper worlds (longer R-chains above them) sit lower
    layers: dict[int, list[int]] = {}
    for w in frame.worlds:
        layers.setdefault(frame.depths[w], []).append(w)
    pos = {}
    for d, ws in layers.items():
        for k, w in enumerate(ws):
            pos[w] = (k - (len(ws) - 1) / 2, -d)
    return pos


def covering_edges(frame: VeltmanFrame) -> list[tuple[int, int]]:
    up = frame.up
    return sorted(
        (x, y) for x, y in frame.R if not any(y in up[z] for z in up[x])
    )


def extra_s_pairs(frame: VeltmanFrame) -> list[tuple[int, int, int]]:
    """``(x, y, z)`` with ``y S_x z`` not implied by reflexivity or ``yRz``."""
    return sorted(
        (x, y, z)
        for x in frame.worlds
        for y, z in frame.S[x]
        if y != z and (y, z) not in frame.R
    )


def draw_frame(frame: VeltmanFrame, path, valuation=None, title: str | None = None,
               highlight=()) -> None:
    pos = _layout(frame)
    fig, ax = plt.subplots(figsize=(4 + 0.6 * frame.n, 3 + 0.6 * max(frame.depths)))
    for x, y in covering_edges(frame):
        ax.add_patch(FancyArrowPatch(
            pos[x], pos[y], arrowstyle="-|>", mutation_scale=14, color="black",
            shrinkA=14, shrinkB=14,
        ))
    for x, y, z in extra_s_pairs(frame):
        ax.add_patch(FancyArrowPatch(
            pos[y], pos[z], arrowstyle="-|>", mutation_scale=12, color="tab:blue",
            linestyle="--", connectionstyle="arc3,rad=0.3", shrinkA=14, shrinkB=14,
        ))
        mx, my = (pos[y][0] + pos[z][0]) / 2, (pos[y][1] + pos[z][1]) / 2
        ax.text(mx, my + 0.12, f"S{x}", color="tab:blue", fontsize=8, ha="center")
    labels: dict[int, list[str]] = {}
    for name, worlds in sorted((valuation or {}).items()):
        if name.startswith("#"):
            continue
        for w in worlds:
            labels.setdefault(w, []).append(name)
    for w, (px, py) in pos.items():
        color = "tab:red" if w in highlight else "white"
        ax.scatter([px], [py], s=500, c=color, edgecolors="black", zorder=3)
        ax.text(px, py, str(w), ha="center", va="center", zorder=4)
        if w in labels:
            ax.text(px + 0.18, py - 0.22, ",".join(labels[w]), fontsize=8, color="tab:green")
    xs = [p[0] for p in pos.values()]
    ys = [p[1] for p in pos.values()]
    ax.set_xlim(min(xs) - 1, max(xs) + 1)
    ax.set_ylim(min(ys) - 0.8, max(ys) + 0.8)
    ax.set_axis_off()
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
