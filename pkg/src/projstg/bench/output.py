"""CSV and SVG emission for sweep results."""

import csv
import math
from pathlib import Path
from xml.sax.saxutils import escape

from ..exceptions import InvalidArgumentError
from ..metrics import CurvePoint, TrialRecord

RECORD_FIELDS = ("method", "sweep_x", "N", "D", "K", "sigma", "seed", "recovered",
                 "tpr", "fdr", "l2_error")
CURVE_FIELDS = ("method", "sweep_x", "success_rate", "ci_low", "ci_high", "trials")


def fmt(value):
    """Fixed text form: ints verbatim, booleans as 1/0, floats to 12 significant digits."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if value.is_integer() and abs(value) < 1e15:
            return str(int(value))
        return format(value, ".12g")
    return str(value)


def _write(path, header, rows):
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def emit_records_csv(records, path):
    return _write(path, RECORD_FIELDS, (
        (r.method, r.sweep_x, r.N, r.D, r.K, float(r.sigma), r.seed, r.recovered,
         float(r.tpr), float(r.fdr), float(r.l2_error)) for r in records))


def emit_curves_csv(curves, path):
    return _write(path, CURVE_FIELDS, (
        (c.method, c.x, float(c.success_rate), float(c.ci_low), float(c.ci_high), c.trials)
        for c in curves))


def emit_csv(rows, path):
    """Write trial records or curve points, picking the schema from the row type."""
    rows = list(rows)
    if rows and isinstance(rows[0], CurvePoint):
        return emit_curves_csv(rows, path)
    return emit_records_csv(rows, path)


def _num(text):
    v = float(text)
    return int(v) if v.is_integer() and "." not in text and "e" not in text.lower() else v


def read_records_csv(path):
    with Path(path).open(newline="", encoding="utf-8") as fh:
        return [TrialRecord(method=r["method"], sweep_x=_num(r["sweep_x"]), N=int(r["N"]),
                            D=int(r["D"]), K=int(r["K"]), sigma=float(r["sigma"]),
                            seed=int(r["seed"]), recovered=r["recovered"] == "1",
                            tpr=float(r["tpr"]), fdr=float(r["fdr"]),
                            l2_error=float(r["l2_error"]))
                for r in csv.DictReader(fh)]


def read_curves_csv(path):
    with Path(path).open(newline="", encoding="utf-8") as fh:
        return [CurvePoint(method=r["method"], x=_num(r["sweep_x"]),
                           success_rate=float(r["success_rate"]), ci_low=float(r["ci_low"]),
                           ci_high=float(r["ci_high"]), trials=int(r["trials"]))
                for r in csv.DictReader(fh)]


# ---------------------------------------------------------------------------
# SVG
# ---------------------------------------------------------------------------

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf")
_DASHES = ("none", "8,4", "2,3", "10,3,2,3", "4,4", "12,2,2,2,2,2", "1,1")

W, H = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 64, 150, 24, 52


def emit_plot(curves, path, x_label="N", title=None):
    """Success-rate curves with shaded confidence bands as a standalone SVG."""
    curves = list(curves)
    if not curves:
        raise InvalidArgumentError("no curves to plot")
    methods = list(dict.fromkeys(c.method for c in curves))
    xs = sorted({c.x for c in curves})
    x0, x1 = xs[0], xs[-1]
    span = (x1 - x0) or 1.0
    pw, ph = W - LEFT - RIGHT, H - TOP - BOTTOM

    def px(x):
        if x1 == x0:
            return LEFT + pw / 2
        return LEFT + pw * (x - x0) / span

    def py(v):
        return TOP + ph * (1.0 - v)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
           f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">',
           f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>']
    if title:
        out.append(f'<text x="{LEFT + pw / 2:.2f}" y="16" text-anchor="middle">{escape(title)}</text>')

    # axes and ticks
    out.append(f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for v in (0.0, 0.25, 0.5, 0.75, 1.0):
        y = py(v)
        out.append(f'<line x1="{LEFT - 4}" y1="{y:.2f}" x2="{LEFT + pw}" y2="{y:.2f}" '
                   f'stroke="#dddddd"/>')
        out.append(f'<text x="{LEFT - 8}" y="{y + 4:.2f}" text-anchor="end">{v:g}</text>')
    step = max(1, math.ceil(len(xs) / 10))
    for x in xs[::step]:
        out.append(f'<line x1="{px(x):.2f}" y1="{TOP + ph}" x2="{px(x):.2f}" '
                   f'y2="{TOP + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{px(x):.2f}" y="{TOP + ph + 18}" text-anchor="middle">'
                   f'{escape(fmt(x))}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.2f}" y="{H - 12}" text-anchor="middle">'
               f'{escape(x_label)}</text>')
    out.append(f'<text x="16" y="{TOP + ph / 2:.2f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {TOP + ph / 2:.2f})">Probability of success</text>')

    for i, m in enumerate(methods):
        color, dash = _COLORS[i % len(_COLORS)], _DASHES[i % len(_DASHES)]
        pts = sorted((c for c in curves if c.method == m), key=lambda c: c.x)
        upper = [f"{px(c.x):.2f},{py(c.ci_high):.2f}" for c in pts]
        lower = [f"{px(c.x):.2f},{py(c.ci_low):.2f}" for c in reversed(pts)]
        out.append(f'<polygon class="band" data-method="{escape(m)}" points="{" ".join(upper + lower)}" '
                   f'fill="{color}" fill-opacity="0.15" stroke="none"/>')
        line = " ".join(f"{px(c.x):.2f},{py(c.success_rate):.2f}" for c in pts)
        out.append(f'<polyline class="curve" data-method="{escape(m)}" points="{line}" fill="none" '
                   f'stroke="{color}" stroke-width="2" stroke-dasharray="{dash}"/>')
        ly = TOP + 12 + 18 * i
        lx = LEFT + pw + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 28}" y2="{ly}" stroke="{color}" '
                   f'stroke-width="2" stroke-dasharray="{dash}"/>')
        out.append(f'<text x="{lx + 34}" y="{ly + 4}">{escape(m)}</text>')
    out.append("</svg>")

    path = Path(path)
    path.write_text("\n".join(out) + "\n", encoding="utf-8")
    return path
