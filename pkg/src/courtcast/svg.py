"""Headless SVG rendering of composed frames.

One frame in, one self-contained SVG document out, built with plain string
assembly. Output is deterministic for a given bundle: collections are
drawn in sorted order and every coordinate is formatted to one decimal.
"""

from __future__ import annotations

import math

from .analytics import (
    DefenseAssignment,
    HotMark,
    OffensePayload,
    ShotChartPayload,
    ShotLabelPayload,
    TeamPanelPayload,
)
from .ingest import GameMeta
from .model import ColorBin, LayerId, Outcome, Team, Zone
from .session import FrameBundle

# Five-step palette for league-relative shooting bins.
BIN_COLORS = {
    ColorBin.DARK_BLUE: "#1d3f8f",
    ColorBin.BLUE: "#5276d6",
    ColorBin.YELLOW: "#e3c84b",
    ColorBin.ORANGE: "#e08a2e",
    ColorBin.RED: "#d2413a",
}

HOT_COLOR = BIN_COLORS[ColorBin.RED]
COLD_COLOR = BIN_COLORS[ColorBin.BLUE]
NEUTRAL_COLOR = "#6b6b6b"

BALL_DEFENDER_COLOR = "#12306e"  # dark blue ring and connector
HELPER_COLOR = "#5276d6"
FOCUS_FILL = "#5276d6"
HANDLER_CIRCLE_COLOR = "#d2413a"  # open space around the handler reads red
OPEN_CIRCLE_COLOR = "#9a9a9a"

COURT_LINE = "#444444"
PANEL_W = 250

_ZONE_ORDER = (
    Zone.RIM,
    Zone.MID_LEFT,
    Zone.MID_RIGHT,
    Zone.CORNER3_LEFT,
    Zone.CORNER3_RIGHT,
    Zone.THREE_LEFT,
    Zone.THREE_RIGHT,
)


def _f(v: float) -> str:
    return f"{v:.1f}"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")


class _Canvas:
    def __init__(self, meta: GameMeta, scale: float, margin: float) -> None:
        self.geom = meta.geometry
        self.scale = scale
        self.margin = margin

    def x(self, ft: float) -> float:
        return self.margin + ft * self.scale

    def y(self, ft: float) -> float:
        return self.margin + ft * self.scale

    def px(self, ft: float) -> float:
        return ft * self.scale


def _court(c: _Canvas) -> list[str]:
    g = c.geom
    out = [
        f'<rect x="{_f(c.x(0))}" y="{_f(c.y(0))}" width="{_f(c.px(g.length_ft))}" '
        f'height="{_f(c.px(g.width_ft))}" fill="#fbf7ef" stroke="{COURT_LINE}" stroke-width="2"/>',
        f'<line x1="{_f(c.x(g.mid_x))}" y1="{_f(c.y(0))}" x2="{_f(c.x(g.mid_x))}" '
        f'y2="{_f(c.y(g.width_ft))}" stroke="{COURT_LINE}"/>',
        f'<circle cx="{_f(c.x(g.mid_x))}" cy="{_f(c.y(g.mid_y))}" r="{_f(c.px(6.0))}" '
        f'fill="none" stroke="{COURT_LINE}"/>',
    ]
    # Three-point outline per end: two corner lines plus the arc between
    # their intersections with the arc circle.
    dx = math.sqrt(g.three_pt_arc_ft**2 - g.corner_three_ft**2)
    for hoop in g.hoop_centers:
        hx, hy = hoop
        out.append(
            f'<circle cx="{_f(c.x(hx))}" cy="{_f(c.y(hy))}" r="{_f(c.px(0.75))}" '
            f'fill="none" stroke="{COURT_LINE}" stroke-width="2"/>'
        )
        bx = g.baseline_x(hoop)
        ix = hx + dx if hx < g.mid_x else hx - dx
        lo, hi = hy - g.corner_three_ft, hy + g.corner_three_ft
        for yy in (lo, hi):
            out.append(
                f'<line x1="{_f(c.x(bx))}" y1="{_f(c.y(yy))}" x2="{_f(c.x(ix))}" '
                f'y2="{_f(c.y(yy))}" stroke="{COURT_LINE}"/>'
            )
        r = _f(c.px(g.three_pt_arc_ft))
        sweep = 1 if hx < g.mid_x else 0
        out.append(
            f'<path d="M {_f(c.x(ix))} {_f(c.y(lo))} A {r} {r} 0 0 {sweep} '
            f'{_f(c.x(ix))} {_f(c.y(hi))}" fill="none" stroke="{COURT_LINE}"/>'
        )
    return out


def _players(c: _Canvas, bundle: FrameBundle, colors: dict[Team, str]) -> list[str]:
    out = []
    for p in sorted(bundle.frame.players, key=lambda p: (p.team.value, p.player_id)):
        out.append(
            f'<circle cx="{_f(c.x(p.x))}" cy="{_f(c.y(p.y))}" r="9" '
            f'fill="{colors[p.team]}" stroke="#ffffff" stroke-width="1.5"/>'
        )
        out.append(
            f'<text x="{_f(c.x(p.x))}" y="{_f(c.y(p.y) + 3.5)}" text-anchor="middle" '
            f'font-size="9" fill="#ffffff">{_esc(p.player_id)}</text>'
        )
    bx, by, bz = bundle.frame.ball
    out.append(
        f'<circle cx="{_f(c.x(bx))}" cy="{_f(c.y(by))}" r="{_f(4.0 + 0.3 * bz)}" '
        f'fill="#b35c1e" stroke="#5e2f0d"/>'
    )
    return out


def _offense_layer(c: _Canvas, payload: OffensePayload, bundle: FrameBundle) -> list[str]:
    out = []
    positions = {p.player_id: p for p in bundle.frame.players}
    for pid, entry in sorted(payload.players.items()):
        if len(entry.trail) >= 2:
            pts = " ".join(f"{_f(c.x(x))},{_f(c.y(y))}" for x, y in entry.trail)
            out.append(
                f'<polyline points="{pts}" fill="none" stroke="#8a5a2b" '
                f'stroke-width="2" stroke-opacity="0.55"/>'
            )
        pos = positions.get(pid)
        if pos is None:
            continue
        color = HANDLER_CIRCLE_COLOR if entry.is_handler else OPEN_CIRCLE_COLOR
        out.append(
            f'<circle cx="{_f(c.x(pos.x))}" cy="{_f(c.y(pos.y))}" '
            f'r="{_f(c.px(entry.open_radius_ft))}" fill="none" stroke="{color}" '
            f'stroke-width="1.5" stroke-dasharray="5,4"/>'
        )
    return out


def _defense_layer(c: _Canvas, payload: DefenseAssignment, bundle: FrameBundle) -> list[str]:
    out = []
    positions = {p.player_id: p for p in bundle.frame.players}
    if payload.focus_area:
        pts = " ".join(f"{_f(c.x(x))},{_f(c.y(y))}" for x, y in payload.focus_area)
        out.append(f'<polygon points="{pts}" fill="{FOCUS_FILL}" fill-opacity="0.25" stroke="none"/>')
    for did, hid in payload.connector_lines:
        d, h = positions.get(did), positions.get(hid)
        if d and h:
            out.append(
                f'<line x1="{_f(c.x(d.x))}" y1="{_f(c.y(d.y))}" x2="{_f(c.x(h.x))}" '
                f'y2="{_f(c.y(h.y))}" stroke="{BALL_DEFENDER_COLOR}" stroke-width="2"/>'
            )
    for pid in sorted(payload.ball_defenders):
        p = positions.get(pid)
        if p:
            out.append(
                f'<circle cx="{_f(c.x(p.x))}" cy="{_f(c.y(p.y))}" r="12" fill="none" '
                f'stroke="{BALL_DEFENDER_COLOR}" stroke-width="3"/>'
            )
    for pid in sorted(payload.helpers):
        p = positions.get(pid)
        if p:
            out.append(
                f'<circle cx="{_f(c.x(p.x))}" cy="{_f(c.y(p.y))}" r="12" fill="none" '
                f'stroke="{HELPER_COLOR}" stroke-width="2" stroke-dasharray="3,3"/>'
            )
    return out


def _shot_labels(c: _Canvas, payload: ShotLabelPayload, bundle: FrameBundle) -> list[str]:
    out = []
    for s in payload.static:
        tag = "MADE" if s.outcome is Outcome.MADE else "MISSED"
        color = "#1c7a2d" if s.outcome is Outcome.MADE else "#a32424"
        x, y = c.x(s.loc[0]), c.y(s.loc[1])
        out.append(
            f'<text x="{_f(x)}" y="{_f(y - 14)}" text-anchor="middle" font-size="12" '
            f'font-weight="bold" fill="{color}">{tag}</text>'
        )
        out.append(
            f'<text x="{_f(x)}" y="{_f(y - 2)}" text-anchor="middle" font-size="10" '
            f'fill="#333333">game {s.game_fg_pct:.1f}% season {s.season_fg_pct:.1f}%</text>'
        )
    positions = {p.player_id: p for p in bundle.frame.players}
    mark_colors = {HotMark.HOT: HOT_COLOR, HotMark.COLD: COLD_COLOR, HotMark.NEUTRAL: NEUTRAL_COLOR}
    for d in sorted(payload.dynamic, key=lambda d: d.player_id):
        p = positions.get(d.player_id)
        if p is None:
            continue
        out.append(
            f'<text x="{_f(c.x(p.x))}" y="{_f(c.y(p.y) - 12)}" text-anchor="middle" '
            f'font-size="10" font-weight="bold" fill="{mark_colors[d.mark]}">'
            f"{d.zone_pct:.1f}%</text>"
        )
    return out


def _panel_box(x: float, y: float, w: float, h: float, title: str) -> list[str]:
    return [
        f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" '
        f'fill="#ffffff" stroke="#bbbbbb"/>',
        f'<text x="{_f(x + 8)}" y="{_f(y + 16)}" font-size="12" font-weight="bold" '
        f'fill="#222222">{_esc(title)}</text>',
    ]


def _shot_chart_panel(x: float, y: float, payload: ShotChartPayload) -> list[str]:
    rows = len(_ZONE_ORDER)
    h = 40 + rows * 16 + 22
    out = _panel_box(x, y, PANEL_W - 10, h, f"shooting: {payload.player_id}")
    yy = y + 34
    for zone in _ZONE_ORDER:
        b = payload.zone_bins[zone]
        out.append(
            f'<rect x="{_f(x + 8)}" y="{_f(yy - 9)}" width="11" height="11" '
            f'fill="{BIN_COLORS[b]}" stroke="#888888"/>'
        )
        out.append(
            f'<text x="{_f(x + 26)}" y="{_f(yy)}" font-size="10" fill="#333333">'
            f"{zone.value.lower()}</text>"
        )
        yy += 16
    p = payload.panel
    out.append(
        f'<text x="{_f(x + 8)}" y="{_f(yy + 4)}" font-size="10" fill="#333333">'
        f"today: {p.points} pts, {p.fgm}/{p.fga} fg, {p.tpm}/{p.tpa} 3pt</text>"
    )
    return out


def _team_panel(x: float, y: float, payload: TeamPanelPayload, meta: GameMeta) -> list[str]:
    h = 40 + len(payload.rows) * 16
    out = _panel_box(x, y, PANEL_W - 10, h, f"{meta.home_team} vs {meta.away_team}")
    yy = y + 34
    for row in payload.rows:
        hv = f"{row.home_value:.1f}" if isinstance(row.home_value, float) else str(row.home_value)
        av = f"{row.away_value:.1f}" if isinstance(row.away_value, float) else str(row.away_value)
        hw = "bold" if row.leader is Team.HOME else "normal"
        aw = "bold" if row.leader is Team.AWAY else "normal"
        out.append(
            f'<text x="{_f(x + 8)}" y="{_f(yy)}" font-size="10" fill="#333333">{_esc(row.name)}</text>'
        )
        out.append(
            f'<text x="{_f(x + 110)}" y="{_f(yy)}" font-size="10" font-weight="{hw}" '
            f'fill="#222222">{hv}</text>'
        )
        out.append(
            f'<text x="{_f(x + 170)}" y="{_f(yy)}" font-size="10" font-weight="{aw}" '
            f'fill="#222222">{av}</text>'
        )
        for bin_, bx in ((row.home_bin, x + 140), (row.away_bin, x + 200)):
            if bin_ is not None:
                out.append(
                    f'<rect x="{_f(bx)}" y="{_f(yy - 8)}" width="10" height="10" '
                    f'fill="{BIN_COLORS[bin_]}" stroke="#888888"/>'
                )
        yy += 16
    return out


def render_frame(bundle: FrameBundle, meta: GameMeta, *, scale: float = 8.0) -> str:
    """Render one composed frame to a standalone SVG document."""
    margin = 24.0
    c = _Canvas(meta, scale, margin)
    g = meta.geometry
    has_panel = LayerId.SHOT_CHART in bundle.layers or LayerId.TEAM_PANEL in bundle.layers
    width = 2 * margin + c.px(g.length_ft) + (PANEL_W if has_panel else 0)
    height = 2 * margin + c.px(g.width_ft)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}" font-family="sans-serif">',
        f'<rect x="0" y="0" width="{_f(width)}" height="{_f(height)}" fill="#f2efe9"/>',
    ]
    parts += _court(c)

    # Underlays first so dots stay legible.
    defense = bundle.layers.get(LayerId.DEFENSE)
    if isinstance(defense, DefenseAssignment):
        parts += _defense_layer(c, defense, bundle)
    offense = bundle.layers.get(LayerId.OFFENSE)
    if isinstance(offense, OffensePayload):
        parts += _offense_layer(c, offense, bundle)
    parts += _players(c, bundle, meta.team_colors)
    labels = bundle.layers.get(LayerId.SHOT_LABEL)
    if isinstance(labels, ShotLabelPayload):
        parts += _shot_labels(c, labels, bundle)

    chart = bundle.layers.get(LayerId.SHOT_CHART)
    if isinstance(chart, ShotChartPayload):
        for m in chart.shot_markers:
            mx, my = c.x(m.loc[0]), c.y(m.loc[1])
            if m.made:
                parts.append(f'<circle cx="{_f(mx)}" cy="{_f(my)}" r="4" fill="#1c7a2d"/>')
            else:
                parts.append(
                    f'<path d="M {_f(mx - 4)} {_f(my - 4)} L {_f(mx + 4)} {_f(my + 4)} '
                    f'M {_f(mx - 4)} {_f(my + 4)} L {_f(mx + 4)} {_f(my - 4)}" '
                    f'stroke="#a32424" stroke-width="2" fill="none"/>'
                )

    panel_x = 2 * margin + c.px(g.length_ft) - 14
    panel_y = margin
    if isinstance(chart, ShotChartPayload):
        parts += _shot_chart_panel(panel_x, panel_y, chart)
        panel_y += 40 + len(_ZONE_ORDER) * 16 + 22 + 12
    team = bundle.layers.get(LayerId.TEAM_PANEL)
    if isinstance(team, TeamPanelPayload):
        parts += _team_panel(panel_x, panel_y, team, meta)

    f = bundle.frame
    parts.append(
        f'<text x="{_f(margin)}" y="16" font-size="11" fill="#555555">'
        f"period {f.period}, clock {f.game_clock_s:.1f}s, t={f.t_ms}ms</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
