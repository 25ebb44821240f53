"""CSV export and static SVG plots of training trajectories.

SVG output is written by hand (no plotting backend) with fixed number
formatting, so identical trajectories always give byte-identical files.
"""

import os
from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .errors import ReportIOError
from .harness import IterationRecord

RUN_HEADER = "iteration,objective,mi_xt_bits,entropy_t_bits,weight_delta"
AGGREGATE_HEADER = "iteration,mean_mi_xt_bits,mean_entropy_t_bits,mean_objective"

# matplotlib's tab10 cycle
RUN_COLORS = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


@dataclass(frozen=True)
class PlotStyle:
    width: int = 640
    height: int = 480
    start_marker_color: str = "green"
    end_marker_color: str = "red"
    point_color: str = "#4c72b0"
    run_colors: tuple = RUN_COLORS

    def __post_init__(self):
        if self.start_marker_color != "green" or self.end_marker_color != "red":
            raise ValueError("start/end markers are always green/red")
        if len(self.run_colors) < 10:
            raise ValueError("run color cycle needs at least 10 colors")


def _fmt(v):
    return format(float(v), ".17g")


def _write(path, text):
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ReportIOError(path, exc) from exc
    return path


def run_csv_text(run):
    lines = [RUN_HEADER]
    for r in run.records:
        lines.append(",".join([str(r.iteration), _fmt(r.objective), _fmt(r.mi_xt),
                               _fmt(r.entropy_t), _fmt(r.weight_delta)]))
    return "\n".join(lines) + "\n"


def aggregate_csv_text(agg):
    lines = [AGGREGATE_HEADER]
    for i in range(agg.length):
        lines.append(",".join([str(i), _fmt(agg.mean_mi[i]), _fmt(agg.mean_entropy[i]),
                               _fmt(agg.mean_objective[i])]))
    return "\n".join(lines) + "\n"


def export_csv(runs, aggregate, out_dir):
    """Write ``run_<sim>_<rep>.csv`` per run and ``aggregate_<sim>.csv``.

    Returns the list of written paths.
    """
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise ReportIOError(out_dir, exc) from exc
    written = []
    for run in runs:
        path = os.path.join(out_dir, f"run_{run.sim_id}_{run.repetition_index}.csv")
        written.append(_write(path, run_csv_text(run)))
    sim = aggregate.sim_id if aggregate.sim_id is not None else runs[0].sim_id
    path = os.path.join(out_dir, f"aggregate_{sim}.csv")
    written.append(_write(path, aggregate_csv_text(aggregate)))
    return written


def read_run_csv(path):
    """Parse a run CSV back into a list of IterationRecord."""
    with open(path) as fh:
        header = fh.readline().strip()
        if header != RUN_HEADER:
            raise ValueError(f"{path}: unexpected header {header!r}")
        records = []
        for line in fh:
            if not line.strip():
                continue
            it, obj, mi, h, dw = line.strip().split(",")
            records.append(IterationRecord(int(it), float(obj), float(mi), float(h), float(dw)))
    return records


class _Frame:
    """Linear map from a data box to a pixel box (y axis pointing up)."""

    MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 20, 35, 50

    def __init__(self, x0, y0, width, height, xs, ys):
        self.left = x0 + self.MARGIN_LEFT
        self.right = x0 + width - self.MARGIN_RIGHT
        self.top = y0 + self.MARGIN_TOP
        self.bottom = y0 + height - self.MARGIN_BOTTOM
        self.xlim = _padded(xs)
        self.ylim = _padded(ys)

    def px(self, x):
        lo, hi = self.xlim
        return self.left + (x - lo) / (hi - lo) * (self.right - self.left)

    def py(self, y):
        lo, hi = self.ylim
        return self.bottom - (y - lo) / (hi - lo) * (self.bottom - self.top)

    def points(self, xs, ys):
        return " ".join(f"{self.px(x):.2f},{self.py(y):.2f}" for x, y in zip(xs, ys))

    def axes(self, xlabel, ylabel, title=None):
        out = [
            f'<rect x="{self.left:.2f}" y="{self.top:.2f}" width="{self.right - self.left:.2f}" '
            f'height="{self.bottom - self.top:.2f}" fill="none" stroke="black" stroke-width="1"/>'
        ]
        for v in np.linspace(*self.xlim, 5):
            x = self.px(v)
            out.append(f'<line x1="{x:.2f}" y1="{self.bottom:.2f}" x2="{x:.2f}" '
                       f'y2="{self.bottom + 5:.2f}" stroke="black"/>')
            out.append(f'<text x="{x:.2f}" y="{self.bottom + 18:.2f}" font-size="11" '
                       f'text-anchor="middle">{v:.3g}</text>')
        for v in np.linspace(*self.ylim, 5):
            y = self.py(v)
            out.append(f'<line x1="{self.left - 5:.2f}" y1="{y:.2f}" x2="{self.left:.2f}" '
                       f'y2="{y:.2f}" stroke="black"/>')
            out.append(f'<text x="{self.left - 8:.2f}" y="{y + 4:.2f}" font-size="11" '
                       f'text-anchor="end">{v:.3g}</text>')
        cx = 0.5 * (self.left + self.right)
        cy = 0.5 * (self.top + self.bottom)
        out.append(f'<text class="xlabel" x="{cx:.2f}" y="{self.bottom + 40:.2f}" font-size="13" '
                   f'text-anchor="middle">{escape(xlabel)}</text>')
        out.append(f'<text class="ylabel" x="{self.left - 52:.2f}" y="{cy:.2f}" font-size="13" '
                   f'text-anchor="middle" transform="rotate(-90 {self.left - 52:.2f} {cy:.2f})">'
                   f'{escape(ylabel)}</text>')
        if title:
            out.append(f'<text class="title" x="{cx:.2f}" y="{self.top - 12:.2f}" font-size="14" '
                       f'text-anchor="middle">{escape(title)}</text>')
        return out


def _padded(values):
    values = np.asarray(values, dtype=float)
    lo, hi = float(values.min()), float(values.max())
    span = hi - lo
    if span <= 0:
        span = max(abs(lo), 1.0) * 0.1
        lo, hi = lo - span / 2, hi + span / 2
    return lo - 0.05 * span, hi + 0.05 * span


def _svg(width, height, body):
    head = ('<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}" font-family="sans-serif">')
    bg = f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>'
    return "\n".join([head, bg, *body, "</svg>"]) + "\n"


def information_plane_svg(aggregate, style=PlotStyle(), title=None):
    if aggregate.length < 1:
        raise ValueError("aggregate trajectory is empty")
    xs = np.asarray(aggregate.mean_mi[:aggregate.length], dtype=float)
    ys = np.asarray(aggregate.mean_entropy[:aggregate.length], dtype=float)
    frame = _Frame(0, 0, style.width, style.height, xs, ys)
    if title is None and aggregate.sim_id is not None:
        title = f"Simulation {aggregate.sim_id}"
    body = frame.axes("I[X;T] (bits)", "H[T] (bits)", title)
    body.append(f'<polyline class="trajectory" points="{frame.points(xs, ys)}" fill="none" '
                f'stroke="{style.point_color}" stroke-width="1" stroke-opacity="0.5"/>')
    for x, y in zip(xs[1:-1], ys[1:-1]):
        body.append(f'<circle class="point" cx="{frame.px(x):.2f}" cy="{frame.py(y):.2f}" '
                    f'r="3" fill="{style.point_color}"/>')
    body.append(f'<circle class="start" cx="{frame.px(xs[0]):.2f}" cy="{frame.py(ys[0]):.2f}" '
                f'r="6" fill="{style.start_marker_color}"/>')
    body.append(f'<circle class="end" cx="{frame.px(xs[-1]):.2f}" cy="{frame.py(ys[-1]):.2f}" '
                f'r="6" fill="{style.end_marker_color}"/>')
    return _svg(style.width, style.height, body)


def render_information_plane(aggregate, out, style=PlotStyle(), title=None):
    """Mean (I[X;T], H[T]) per iteration; green start marker, red end marker."""
    return _write(out, information_plane_svg(aggregate, style, title))


_PANELS = (
    ("a", "iteration", "mi_xt", "iteration", "I[X;T] (bits)"),
    ("b", "iteration", "entropy_t", "iteration", "H[T] (bits)"),
    ("c", "iteration", "weight_delta", "iteration", "weight change (L2)"),
    ("d", "mi_xt", "entropy_t", "I[X;T] (bits)", "H[T] (bits)"),
)


def dynamics_panels_svg(runs, style=PlotStyle()):
    runs = list(runs)
    if not runs:
        raise ValueError("need at least one run")
    w, h = style.width, style.height
    body = []
    for i, (tag, xname, yname, xlabel, ylabel) in enumerate(_PANELS):
        x0, y0 = (i % 2) * w, (i // 2) * h
        xs_all = np.concatenate([r.column(xname) for r in runs])
        ys_all = np.concatenate([r.column(yname) for r in runs])
        frame = _Frame(x0, y0, w, h, xs_all, ys_all)
        body.append(f'<g class="panel" id="panel-{tag}">')
        body.extend(frame.axes(xlabel, ylabel, f"({tag})"))
        for j, run in enumerate(runs):
            color = style.run_colors[j % len(style.run_colors)]
            pts = frame.points(run.column(xname), run.column(yname))
            body.append(f'<polyline class="run" data-repetition="{run.repetition_index}" '
                        f'points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        body.append("</g>")
    return _svg(2 * w, 2 * h, body)


def render_dynamics_panels(runs, out, style=PlotStyle()):
    """Four panels: (a) I[X;T], (b) H[T], (c) weight change vs iteration, (d) information plane."""
    return _write(out, dynamics_panels_svg(runs, style))
