"""Rendering partitioned graphs to image files.

The drawings put each connected component in its own cell of a square
grid, with the component's vertices on a circle, and color every vertex by
its block.  Component/block interplay is the whole story for independent
transversals — a transversal must pick one vertex per color class while
components tie the choices together — so this layout makes the structure
of the constructions (unions of complete bipartite graphs threaded through
the blocks) visible at a glance.

Layout is fully deterministic: components in minimum-vertex order,
vertices placed in ascending id order, no randomness.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib import colormaps
from matplotlib.collections import LineCollection

from .graph import PartitionedGraph, components


def _positions(g: PartitionedGraph) -> dict[int, tuple[float, float]]:
    comps = components(g)
    cols = max(1, math.ceil(math.sqrt(len(comps))))
    spacing = 3.0
    pos: dict[int, tuple[float, float]] = {}
    for idx, comp in enumerate(comps):
        cx = (idx % cols) * spacing
        cy = -(idx // cols) * spacing
        vs = sorted(comp.vertices)
        if len(vs) == 1:
            pos[vs[0]] = (cx, cy)
            continue
        radius = 1.0
        for t, v in enumerate(vs):
            angle = 2 * math.pi * t / len(vs) + math.pi / 2
            pos[v] = (cx + radius * math.cos(angle), cy + radius * math.sin(angle))
    return pos


def render_graph(
    g: PartitionedGraph,
    path: str,
    *,
    title: str | None = None,
    dpi: int = 150,
) -> None:
    """Draw the graph to `path` (format from the extension, e.g. .png):
    one circle of vertices per component, vertex colors by block."""
    pos = _positions(g)
    cmap = colormaps["tab20"] if g.r > 10 else colormaps["tab10"]
    colors = [cmap(g.block_of[v] % cmap.N) for v in range(g.n)]
    xs = [pos[v][0] for v in range(g.n)]
    ys = [pos[v][1] for v in range(g.n)]
    fig, ax = plt.subplots(figsize=(8, 8))
    segments = [(pos[u], pos[v]) for (u, v) in g.sorted_edges()]
    ax.add_collection(
        LineCollection(segments, colors="0.7", linewidths=0.8, zorder=1)
    )
    ax.scatter(xs, ys, c=colors, s=120, zorder=2, edgecolors="black", linewidths=0.5)
    if g.n <= 200:
        for v in range(g.n):
            ax.annotate(
                str(v),
                pos[v],
                ha="center",
                va="center",
                fontsize=5,
                zorder=3,
            )
    handles = [
        plt.Line2D(
            [], [], marker="o", linestyle="", markersize=6,
            markerfacecolor=cmap(b % cmap.N), markeredgecolor="black",
            label=f"block {b}",
        )
        for b in range(min(g.r, 20))
    ]
    ax.legend(handles=handles, loc="upper right", fontsize=6, framealpha=0.9)
    if title:
        ax.set_title(title)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
