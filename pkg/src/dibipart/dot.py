"""Graphviz DOT export, optionally overlaying a two-part partition."""

from __future__ import annotations

from .digraph import Digraph

PART_STYLE = {
    1: 'style=filled fillcolor="#9ecae1"',
    2: 'style=filled fillcolor="#fdae6b"',
    0: 'style=dashed color="#999999"',
}


def to_dot(d: Digraph, v1=None, v2=None, name="D") -> str:
    """DOT text for ``d``; digons become one ``dir=both`` edge.

    With ``v1``/``v2`` given, vertices are filled by part and vertices in
    neither part drawn dashed.  Output is deterministic.
    """
    v1 = set(v1 or ())
    v2 = set(v2 or ())
    overlay = bool(v1 or v2)
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    for v in range(d.n):
        label = d.labels[v] if d.labels is not None else v
        attrs = [f'label="{label}"']
        if overlay:
            part = 1 if v in v1 else 2 if v in v2 else 0
            attrs.append(PART_STYLE[part])
        lines.append(f"  {v} [{' '.join(attrs)}];")
    for u, w in d.arcs():
        if d.has_arc(w, u):
            if u < w:
                lines.append(f"  {u} -> {w} [dir=both];")
        else:
            lines.append(f"  {u} -> {w};")
    lines.append("}")
    return "\n".join(lines) + "\n"
