"""DOT emission and matplotlib figure rendering.

Figures are a side channel: report-producing commands can render a picture
of the structure they just computed to a file, next to the JSON they print.
Rendering is deterministic (fixed layouts, no timestamps).
"""

from __future__ import annotations

import math
from typing import List, Optional, Sequence, Tuple

from .natbits import Nat, nat_label
from .structures import vertex_set


def _quote(s: str) -> str:
    return '"' + s.replace('"', r'\"') + '"'


def graph_dot(pres, vertices: Sequence[Nat],
              highlight: Optional[List[Tuple[Nat, ...]]] = None) -> str:
    """DOT for the induced subgraph on `vertices`; edges inside highlighted
    copies are drawn bold."""
    vs = vertex_set(vertices)
    hot = set()
    for copy in highlight or []:
        cv = vertex_set(copy)
        for i in range(len(cv)):
            for j in range(i + 1, len(cv)):
                hot.add((cv[i], cv[j]))
    lines = ["graph image {"]
    for v in vs:
        lines.append(f"  {_quote(nat_label(v))};")
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            if pres.adjacent(vs[i], vs[j]):
                style = ' [style=bold,color=red]' if (vs[i], vs[j]) in hot else ""
                lines.append(f"  {_quote(nat_label(vs[i]))} -- {_quote(nat_label(vs[j]))}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def ldiag_dot(pres, index_max: int) -> str:
    """DOT for the diagram prefix on indices 0..index_max, one rank per level."""
    lv = pres.levels
    lines = ["digraph ldiag {", "  rankdir=BT;"]
    for i in range(lv):
        ids = [i + lv * n for n in range(index_max + 1)]
        names = " ".join(_quote(f"L{i}:{n}") for n in range(index_max + 1))
        lines.append(f"  {{ rank=same; {names} }}")
        del ids
    for i in range(lv - 1):
        for n in range(index_max + 1):
            for m in range(index_max + 1):
                if pres.adjacent(i + lv * n, (i + 1) + lv * m):
                    lines.append(f"  {_quote(f'L{i}:{n}')} -> {_quote(f'L{i+1}:{m}')};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _mpl():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def graph_figure(pres, vertices: Sequence[Nat], path: str,
                 highlight: Optional[List[Tuple[Nat, ...]]] = None,
                 title: str = "") -> None:
    """Circular layout of the induced subgraph, highlighted copies in red."""
    plt = _mpl()
    vs = vertex_set(vertices)
    n = max(len(vs), 1)
    poss = {v: (math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n))
            for i, v in enumerate(vs)}
    hot = set()
    for copy in highlight or []:
        cv = vertex_set(copy)
        for i in range(len(cv)):
            for j in range(i + 1, len(cv)):
                hot.add((cv[i], cv[j]))
    fig, ax = plt.subplots(figsize=(5, 5))
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            if pres.adjacent(vs[i], vs[j]):
                x = [poss[vs[i]][0], poss[vs[j]][0]]
                y = [poss[vs[i]][1], poss[vs[j]][1]]
                if (vs[i], vs[j]) in hot:
                    ax.plot(x, y, color="crimson", linewidth=2.2, zorder=2)
                else:
                    ax.plot(x, y, color="grey", linewidth=0.9, zorder=1)
    for v in vs:
        ax.scatter(*poss[v], s=160, color="#336699", zorder=3)
        ax.annotate(nat_label(v), poss[v], ha="center", va="center",
                    fontsize=7, color="white", zorder=4)
    ax.set_title(title)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(path, dpi=130, bbox_inches="tight")
    plt.close(fig)


def ldiag_figure(pres, index_max: int, path: str, title: str = "") -> None:
    """Levels as rows, succession as upward segments."""
    plt = _mpl()
    lv = pres.levels
    fig, ax = plt.subplots(figsize=(6, 1.6 * lv))
    for i in range(lv - 1):
        for n in range(index_max + 1):
            for m in range(index_max + 1):
                if pres.adjacent(i + lv * n, (i + 1) + lv * m):
                    ax.plot([n, m], [i, i + 1], color="grey", linewidth=1.0, zorder=1)
    for i in range(lv):
        for n in range(index_max + 1):
            ax.scatter(n, i, s=130, color="#336699", zorder=2)
            ax.annotate(str(n), (n, i), ha="center", va="center",
                        fontsize=7, color="white", zorder=3)
    ax.set_yticks(range(lv))
    ax.set_yticklabels([f"L{i}" for i in range(lv)])
    ax.set_xticks(range(index_max + 1))
    ax.set_title(title)
    ax.spines[["top", "right"]].set_visible(False)
    fig.savefig(path, dpi=130, bbox_inches="tight")
    plt.close(fig)


def copies_figure(listing: Sequence[Tuple[int, Tuple[Nat, ...]]], path: str,
                  title: str = "") -> None:
    """Copy index against the top vertex of each copy (log scale)."""
    plt = _mpl()
    xs, ys = [], []
    for j, vs in listing:
        top = vs[-1]
        if isinstance(top, int):
            xs.append(j)
            ys.append(max(top, 1))
    fig, ax = plt.subplots(figsize=(6, 3.4))
    ax.scatter(xs, ys, s=14, color="#336699")
    ax.set_yscale("log", base=2)
    ax.set_xlabel("copy index")
    ax.set_ylabel("top vertex")
    ax.set_title(title)
    fig.savefig(path, dpi=130, bbox_inches="tight")
    plt.close(fig)
