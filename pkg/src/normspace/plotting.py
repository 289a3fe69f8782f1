"""Unit-sphere figures for planar quasinorms.

Spheres are sampled as closed polylines u / ||u|| over uniform angles.  SVG
output is written by hand with fixed number formatting so reruns are
byte-identical (fixed 800x800 canvas, viewBox tight to the largest gauge
radius plus 5%, no external assets).  CSV emits angle, x, y, spec rows; the
report path additionally renders a matplotlib figure next to the CSV.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .quasinorm import NormSpec, evaluate_many

__all__ = ["sphere_polyline", "write_csv", "write_png", "write_svg"]

SAMPLES = 720
_STROKES = (
    ("#1b6ca8", ""),  # solid
    ("#b02a30", "14,8"),  # dashed
    ("#2d7f3f", "3,7"),  # dotted
    ("#7d4b9e", "14,6,3,6"),  # dash-dot
    ("#b0731f", "7,5"),
    ("#4d4d4d", "2,4"),
)


def sphere_polyline(spec: NormSpec, samples: int = SAMPLES) -> np.ndarray:
    """Closed polyline of the unit sphere: rows (angle, x, y)."""
    if spec.dim != 2:
        raise ValueError("plotting supports dimension 2")
    angles = np.arange(samples) * (2.0 * math.pi / samples)
    u = np.column_stack([np.cos(angles), np.sin(angles)])
    radii = 1.0 / evaluate_many(spec, u)
    return np.column_stack([angles, u * radii[:, None]])


def write_csv(specs: list[NormSpec], labels: list[str], path,
              samples: int = SAMPLES) -> None:
    """Delimited sphere samples: one angle,x,y,spec row per sample point."""
    lines = ["angle,x,y,spec"]
    for spec, label in zip(specs, labels):
        for angle, x, y in sphere_polyline(spec, samples):
            lines.append(f"{angle:.17g},{x:.17g},{y:.17g},{label}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_svg(specs: list[NormSpec], labels: list[str], path,
              samples: int = SAMPLES) -> None:
    """Byte-stable SVG of the unit spheres with distinct stroke styles."""
    polys = [sphere_polyline(spec, samples) for spec in specs]
    radius = max(float(np.abs(poly[:, 1:]).max()) for poly in polys)
    half = radius * 1.05
    stroke_w = 2.0 * half / 400.0
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" '
        f'viewBox="{-half:.6f} {-half:.6f} {2 * half:.6f} {2 * half:.6f}">',
    ]
    for k, (poly, label) in enumerate(zip(polys, labels)):
        color, dash = _STROKES[k % len(_STROKES)]
        parts = [
            f"{'M' if i == 0 else 'L'} {x:.6f} {-y:.6f}"
            for i, (_, x, y) in enumerate(poly)
        ]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(
            f'  <path d="{" ".join(parts)} Z" fill="none" stroke="{color}" '
            f'stroke-width="{stroke_w:.6f}"{dash_attr}>'
            f"<title>{label}</title></path>"
        )
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")


def write_png(specs: list[NormSpec], labels: list[str], path,
              samples: int = SAMPLES) -> None:
    """Matplotlib rendering of the same curves, for the report path."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 6))
    styles = ("-", "--", ":", "-.")
    for k, (spec, label) in enumerate(zip(specs, labels)):
        poly = sphere_polyline(spec, samples)
        xs = np.append(poly[:, 1], poly[0, 1])
        ys = np.append(poly[:, 2], poly[0, 2])
        ax.plot(xs, ys, styles[k % len(styles)], linewidth=1.4, label=label)
    ax.set_aspect("equal")
    ax.axhline(0.0, color="0.85", linewidth=0.6, zorder=0)
    ax.axvline(0.0, color="0.85", linewidth=0.6, zorder=0)
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
