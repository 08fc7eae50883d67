"""Self-contained SVG line charts of indicator series.

Output is a pure function of the input series: fixed canvas, fixed [0, 1]
value axis, coordinates rounded to two decimals, no timestamps or ids.
Each series is one ``<polyline>``; legend swatches use ``<line>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

from disagreement import catalog
from disagreement.aggregate import IndicatorSeries

WIDTH, HEIGHT = 720, 420
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 56, 170, 40, 48

BLUE = "#1f4e9c"
BLACK = "#111111"


@dataclass(frozen=True)
class LineStyle:
    color: str
    dash: str | None = None
    width: float = 1.8

    def attrs(self) -> str:
        a = f'fill="none" stroke="{self.color}" stroke-width="{self.width}"'
        if self.dash:
            a += f' stroke-dasharray="{self.dash}"'
        return a


SOLID_BLUE = LineStyle(BLUE)
DASHED_BLACK = LineStyle(BLACK, "6 4")
DASHED_BLUE = LineStyle(BLUE, "6 4")
DOTTED_BLACK = LineStyle(BLACK, "1.5 3")
SOLID_BLACK = LineStyle(BLACK)

SECTOR_STYLES = {
    "D_INDU": SOLID_BLUE,
    "D_SERV": DASHED_BLACK,
    "D_RETA": DASHED_BLUE,
    "D_BUIL": DOTTED_BLACK,
}
_CYCLE = (SOLID_BLUE, DASHED_BLACK, DASHED_BLUE, DOTTED_BLACK, SOLID_BLACK, LineStyle("#7a7a7a", "8 3 2 3"))


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def line_chart(title: str, lines: Sequence[tuple[str, IndicatorSeries, LineStyle]]) -> str:
    """Render labelled series on a shared monthly axis."""
    periods = sorted({p for _, s, _ in lines for p in s.periods})
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    if periods:
        first, last = periods[0].ordinal, periods[-1].ordinal
    else:
        first = last = 0
    span = max(last - first, 1)

    def x(p) -> float:
        return MARGIN_LEFT + (p.ordinal - first) / span * plot_w

    def y(v: float) -> float:
        return MARGIN_TOP + (1.0 - v) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]
    for i in range(6):
        v = i / 5
        out.append(
            f'<line x1="{MARGIN_LEFT}" y1="{_fmt(y(v))}" x2="{MARGIN_LEFT + plot_w}" y2="{_fmt(y(v))}" '
            f'stroke="#dddddd" stroke-width="0.6"/>'
        )
        out.append(
            f'<text x="{MARGIN_LEFT - 6}" y="{_fmt(y(v) + 4)}" text-anchor="end">{v:.1f}</text>'
        )
    out.append(
        f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP + plot_h}" x2="{MARGIN_LEFT + plot_w}" '
        f'y2="{MARGIN_TOP + plot_h}" stroke="{BLACK}" stroke-width="1"/>'
    )
    out.append(
        f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{MARGIN_TOP + plot_h}" '
        f'stroke="{BLACK}" stroke-width="1"/>'
    )
    step = max(1, -(-len(range(first, last + 1)) // 8))
    for n in range(first, last + 1, step):
        p = catalog.Period.from_ordinal(n)
        out.append(
            f'<text x="{_fmt(x(p))}" y="{MARGIN_TOP + plot_h + 16}" text-anchor="middle">{p}</text>'
        )
    for label, series, style in lines:
        pts = " ".join(f"{_fmt(x(p))},{_fmt(y(v))}" for p, v in series.points)
        out.append(f'<polyline points="{pts}" {style.attrs()}><title>{escape(label)}</title></polyline>')
    lx = MARGIN_LEFT + plot_w + 14
    for i, (label, _, style) in enumerate(lines):
        ly = MARGIN_TOP + 10 + 18 * i
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 28}" y2="{ly}" {style.attrs()}/>')
        out.append(f'<text x="{lx + 34}" y="{ly + 4}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _geo_name(code: str) -> str:
    g = catalog.GEOS.get(code)
    return g.name if g else code


def sector_chart(geo: str, indicators: dict[str, IndicatorSeries]) -> str | None:
    """Industry, services, retail and building disagreement for one geo."""
    lines = [
        (ind[2:], indicators[ind], SECTOR_STYLES[ind])
        for ind in catalog.BUSINESS_SECTORS
        if ind in indicators and len(indicators[ind])
    ]
    if not lines:
        return None
    return line_chart(f"{_geo_name(geo)}: sector disagreement", lines)


def business_consumer_chart(
    geo: str, indicators: dict[str, IndicatorSeries], reference: IndicatorSeries | None
) -> str | None:
    """Business vs consumer disagreement, with a reference business line (normally the EU)."""
    lines = []
    if catalog.D_BUSI in indicators:
        lines.append(("Business", indicators[catalog.D_BUSI], SOLID_BLACK))
    if catalog.D_CONS in indicators:
        lines.append(("Consumer", indicators[catalog.D_CONS], DASHED_BLUE))
    if not lines:
        return None
    if reference is not None and len(reference):
        lines.append((f"{_geo_name(reference.geo)} business", reference, DOTTED_BLACK))
    return line_chart(f"{_geo_name(geo)}: business vs consumer disagreement", lines)


def question_chart(geo: str, survey: str, indicators: dict[str, IndicatorSeries]) -> str | None:
    """One line per question of a survey."""
    present = [q.indicator for q in catalog.questions_of(survey) if q.indicator in indicators]
    if not present:
        return None
    lines = [(ind, indicators[ind], _CYCLE[i % len(_CYCLE)]) for i, ind in enumerate(present)]
    return line_chart(f"{_geo_name(geo)}: {survey} question disagreement", lines)
