import math
from typing import Callable, Sequence
from xml.sax.saxutils import escape

from sysid.models.experiment import ExperimentResult, PlotSeries

__all__ = ["gnuplot_script", "svg_plot"]

WIDTH, HEIGHT = 800, 500
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 90, 170, 40, 60
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")


def _number(value: float) -> str:
    return f"{value:.10g}"


def _usable(result: ExperimentResult) -> tuple[bool, bool]:
    """Log axes only when every plotted value is positive"""
    xs = [x for series in result.series for x in series.x]
    ys = [y for series in result.series for y in series.y if math.isfinite(y)]
    return result.log_x and all(x > 0 for x in xs), result.log_y and all(y > 0 for y in ys)


def gnuplot_script(result: ExperimentResult, header: Sequence[str] = ()) -> str:
    """
    A gnuplot script with the data inlined, so it references no file at all

    Args:
        result (ExperimentResult): The series to draw
        header (Sequence[str]): Comment lines written first, e.g. the seed and the config hash
    """
    log_x, log_y = _usable(result)
    lines = [f"# {line}" for line in header]
    lines.append(f'set title "{result.kind}"')
    lines.append(f'set xlabel "{result.x_label}"')
    lines.append(f'set ylabel "{result.y_label}"')
    if log_x:
        lines.append("set logscale x")
    if log_y:
        lines.append("set logscale y")
    lines.append("set key outside right")
    plots = []
    for index, series in enumerate(result.series):
        block = f"$data{index}"
        lines.append(f"{block} << EOD")
        lines.extend(f"{_number(x)} {_number(y)}" for x, y in zip(series.x, series.y) if math.isfinite(y))
        lines.append("EOD")
        plots.append(f'{block} using 1:2 with linespoints title "{series.label}"')
    if plots:
        lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


def _scale(values: list[float], log: bool, start: float, length: float) -> tuple[Callable[[float], float], float, float]:
    transformed = [math.log10(value) if log else value for value in values]
    low, high = min(transformed), max(transformed)
    if high == low:
        low, high = low - 1.0, high + 1.0

    def position(value: float) -> float:
        value = math.log10(value) if log else value
        return start + (value - low) / (high - low) * length

    bounds = (10**low, 10**high) if log else (low, high)
    return position, *bounds


def svg_plot(result: ExperimentResult, header: Sequence[str] = ()) -> str:
    """A self-contained SVG line chart of the result's series, same content as `gnuplot_script`"""
    log_x, log_y = _usable(result)
    series: list[PlotSeries] = [item for item in result.series if item.x]
    plot_width = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_height = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        *(f"<!-- {escape(line)} -->" for line in header),
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">'
        f"{escape(result.kind)}</text>",
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_width}" height="{plot_height}" fill="none"'
        ' stroke="black"/>',
    ]
    xs = [x for item in series for x in item.x]
    ys = [y for item in series for y in item.y if math.isfinite(y)]
    if xs and ys:
        x_position, x_low, x_high = _scale(xs, log_x, MARGIN_LEFT, plot_width)
        y_position, y_low, y_high = _scale(ys, log_y, MARGIN_TOP + plot_height, -plot_height)
        bottom = MARGIN_TOP + plot_height
        parts += [
            f'<text x="{MARGIN_LEFT}" y="{bottom + 18}" font-family="sans-serif" font-size="11">{_number(x_low)}</text>',
            f'<text x="{MARGIN_LEFT + plot_width}" y="{bottom + 18}" text-anchor="end" font-family="sans-serif"'
            f' font-size="11">{_number(x_high)}</text>',
            f'<text x="{MARGIN_LEFT - 6}" y="{bottom}" text-anchor="end" font-family="sans-serif" font-size="11">'
            f"{_number(y_low)}</text>",
            f'<text x="{MARGIN_LEFT - 6}" y="{MARGIN_TOP + 10}" text-anchor="end" font-family="sans-serif"'
            f' font-size="11">{_number(y_high)}</text>',
        ]
        for index, item in enumerate(series):
            color = COLORS[index % len(COLORS)]
            points = " ".join(
                f"{x_position(x):.2f},{y_position(y):.2f}" for x, y in zip(item.x, item.y) if math.isfinite(y)
            )
            parts.append(f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"/>')
            legend_y = MARGIN_TOP + 16 * (index + 1)
            legend_x = MARGIN_LEFT + plot_width + 12
            parts.append(
                f'<line x1="{legend_x}" y1="{legend_y - 4}" x2="{legend_x + 20}" y2="{legend_y - 4}"'
                f' stroke="{color}" stroke-width="2"/>'
            )
            parts.append(
                f'<text x="{legend_x + 26}" y="{legend_y}" font-family="sans-serif" font-size="12">'
                f"{escape(item.label)}</text>"
            )
    parts += [
        f'<text x="{MARGIN_LEFT + plot_width / 2}" y="{HEIGHT - 16}" text-anchor="middle" font-family="sans-serif"'
        f' font-size="13">{escape(result.x_label)}{" (log)" if log_x else ""}</text>',
        f'<text x="20" y="{MARGIN_TOP + plot_height / 2}" text-anchor="middle" font-family="sans-serif"'
        f' font-size="13" transform="rotate(-90 20 {MARGIN_TOP + plot_height / 2})">'
        f'{escape(result.y_label)}{" (log)" if log_y else ""}</text>',
        "</svg>",
    ]
    return "\n".join(parts) + "\n"
