/**
 * Pure scene renderer: ViewState in, SVG markup out.
 *
 * Same state yields the same string, so tests can snapshot the scene.
 * Court geometry comes from HELLO; every overlay is drawn only from its
 * payload in the latest frame bundle.
 */

import type {
  ColorBin,
  DefensePayload,
  HelloMsg,
  OffensePayload,
  ShotChartPayload,
  ShotLabelPayload,
  TeamPanelPayload,
  WireBundle,
  WireGeometry,
} from "./protocol.js";
import type { ViewState } from "./state.js";

export const BIN_COLORS: Record<ColorBin, string> = {
  DARK_BLUE: "#1d3f8f",
  BLUE: "#5276d6",
  YELLOW: "#e3c84b",
  ORANGE: "#e08a2e",
  RED: "#d2413a",
};

const HOT_COLOR = BIN_COLORS.RED;
const COLD_COLOR = BIN_COLORS.BLUE;
const NEUTRAL_COLOR = "#6b6b6b";
const BALL_DEFENDER_COLOR = "#12306e";
const HELPER_COLOR = "#5276d6";
const HANDLER_CIRCLE_COLOR = "#d2413a";
const OPEN_CIRCLE_COLOR = "#9a9a9a";
const COURT_LINE = "#444444";
const SCALE = 8;
const MARGIN = 24;
const PANEL_W = 250;

const ZONE_ORDER = [
  "RIM",
  "MID_LEFT",
  "MID_RIGHT",
  "CORNER3_LEFT",
  "CORNER3_RIGHT",
  "THREE_LEFT",
  "THREE_RIGHT",
] as const;

function f(v: number): string {
  return v.toFixed(1);
}

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function px(ft: number): number {
  return ft * SCALE;
}

function cx(ft: number): number {
  return MARGIN + ft * SCALE;
}

function cy(ft: number): number {
  return MARGIN + ft * SCALE;
}

function court(g: WireGeometry): string[] {
  const midX = g.length_ft / 2;
  const out = [
    `<rect x="${f(cx(0))}" y="${f(cy(0))}" width="${f(px(g.length_ft))}" height="${f(px(g.width_ft))}" fill="#fbf7ef" stroke="${COURT_LINE}" stroke-width="2"/>`,
    `<line x1="${f(cx(midX))}" y1="${f(cy(0))}" x2="${f(cx(midX))}" y2="${f(cy(g.width_ft))}" stroke="${COURT_LINE}"/>`,
    `<circle cx="${f(cx(midX))}" cy="${f(cy(g.width_ft / 2))}" r="${f(px(6))}" fill="none" stroke="${COURT_LINE}"/>`,
  ];
  const dx = Math.sqrt(g.three_pt_arc_ft ** 2 - g.corner_three_ft ** 2);
  for (const [hx, hy] of g.hoop_centers) {
    out.push(
      `<circle cx="${f(cx(hx))}" cy="${f(cy(hy))}" r="${f(px(0.75))}" fill="none" stroke="${COURT_LINE}" stroke-width="2"/>`,
    );
    const bx = hx < midX ? 0 : g.length_ft;
    const ix = hx < midX ? hx + dx : hx - dx;
    const lo = hy - g.corner_three_ft;
    const hi = hy + g.corner_three_ft;
    for (const yy of [lo, hi]) {
      out.push(
        `<line x1="${f(cx(bx))}" y1="${f(cy(yy))}" x2="${f(cx(ix))}" y2="${f(cy(yy))}" stroke="${COURT_LINE}"/>`,
      );
    }
    const r = f(px(g.three_pt_arc_ft));
    const sweep = hx < midX ? 1 : 0;
    out.push(
      `<path d="M ${f(cx(ix))} ${f(cy(lo))} A ${r} ${r} 0 0 ${sweep} ${f(cx(ix))} ${f(cy(hi))}" fill="none" stroke="${COURT_LINE}"/>`,
    );
  }
  return out;
}

function defenseLayer(p: DefensePayload, bundle: WireBundle): string[] {
  const out: string[] = [];
  const where = new Map(bundle.frame.players.map((pl) => [pl.player_id, pl]));
  if (p.focus_area && p.focus_area.length >= 3) {
    const pts = p.focus_area.map(([x, y]) => `${f(cx(x))},${f(cy(y))}`).join(" ");
    out.push(`<polygon points="${pts}" fill="${HELPER_COLOR}" fill-opacity="0.25" stroke="none"/>`);
  }
  for (const [did, hid] of p.connector_lines) {
    const d = where.get(did);
    const h = where.get(hid);
    if (d && h) {
      out.push(
        `<line x1="${f(cx(d.x))}" y1="${f(cy(d.y))}" x2="${f(cx(h.x))}" y2="${f(cy(h.y))}" stroke="${BALL_DEFENDER_COLOR}" stroke-width="2" class="connector"/>`,
      );
    }
  }
  for (const pid of p.ball_defenders) {
    const pl = where.get(pid);
    if (pl) {
      out.push(
        `<circle cx="${f(cx(pl.x))}" cy="${f(cy(pl.y))}" r="12" fill="none" stroke="${BALL_DEFENDER_COLOR}" stroke-width="3"/>`,
      );
    }
  }
  for (const pid of p.helpers) {
    const pl = where.get(pid);
    if (pl) {
      out.push(
        `<circle cx="${f(cx(pl.x))}" cy="${f(cy(pl.y))}" r="12" fill="none" stroke="${HELPER_COLOR}" stroke-width="2" stroke-dasharray="3,3"/>`,
      );
    }
  }
  return out;
}

function offenseLayer(p: OffensePayload, bundle: WireBundle): string[] {
  const out: string[] = [];
  const where = new Map(bundle.frame.players.map((pl) => [pl.player_id, pl]));
  for (const pid of Object.keys(p.players).sort()) {
    const entry = p.players[pid];
    if (!entry) continue;
    if (entry.trail.length >= 2) {
      const pts = entry.trail.map(([x, y]) => `${f(cx(x))},${f(cy(y))}`).join(" ");
      out.push(
        `<polyline points="${pts}" fill="none" stroke="#8a5a2b" stroke-width="2" stroke-opacity="0.55"/>`,
      );
    }
    const pl = where.get(pid);
    if (!pl) continue;
    const color = entry.is_handler ? HANDLER_CIRCLE_COLOR : OPEN_CIRCLE_COLOR;
    out.push(
      `<circle cx="${f(cx(pl.x))}" cy="${f(cy(pl.y))}" r="${f(px(entry.open_radius_ft))}" fill="none" stroke="${color}" stroke-width="1.5" stroke-dasharray="5,4"/>`,
    );
  }
  return out;
}

function players(bundle: WireBundle, colors: Record<string, string>): string[] {
  const out: string[] = [];
  for (const p of bundle.frame.players) {
    out.push(
      `<circle cx="${f(cx(p.x))}" cy="${f(cy(p.y))}" r="9" fill="${colors[p.team] ?? "#777777"}" stroke="#ffffff" stroke-width="1.5" class="player-dot"/>`,
    );
    out.push(
      `<text x="${f(cx(p.x))}" y="${f(cy(p.y) + 3.5)}" text-anchor="middle" font-size="9" fill="#ffffff">${esc(p.player_id)}</text>`,
    );
  }
  const [bx, by, bz] = bundle.frame.ball;
  out.push(
    `<circle cx="${f(cx(bx))}" cy="${f(cy(by))}" r="${f(4 + 0.3 * bz)}" fill="#b35c1e" stroke="#5e2f0d" class="ball"/>`,
  );
  return out;
}

function shotLabels(p: ShotLabelPayload, bundle: WireBundle): string[] {
  const out: string[] = [];
  for (const s of p.static) {
    const tag = s.outcome === "MADE" ? "MADE" : "MISSED";
    const color = s.outcome === "MADE" ? "#1c7a2d" : "#a32424";
    const x = cx(s.loc[0]);
    const y = cy(s.loc[1]);
    out.push(
      `<text x="${f(x)}" y="${f(y - 14)}" text-anchor="middle" font-size="12" font-weight="bold" fill="${color}">${tag}</text>`,
    );
    out.push(
      `<text x="${f(x)}" y="${f(y - 2)}" text-anchor="middle" font-size="10" fill="#333333">game ${s.game_fg_pct.toFixed(1)}% season ${s.season_fg_pct.toFixed(1)}%</text>`,
    );
  }
  const where = new Map(bundle.frame.players.map((pl) => [pl.player_id, pl]));
  const markColor = { HOT: HOT_COLOR, COLD: COLD_COLOR, NEUTRAL: NEUTRAL_COLOR } as const;
  for (const d of p.dynamic) {
    const pl = where.get(d.player_id);
    if (!pl) continue;
    out.push(
      `<text x="${f(cx(pl.x))}" y="${f(cy(pl.y) - 12)}" text-anchor="middle" font-size="10" font-weight="bold" fill="${markColor[d.mark]}">${d.zone_pct.toFixed(1)}%</text>`,
    );
  }
  return out;
}

function panelBox(x: number, y: number, w: number, h: number, title: string): string[] {
  return [
    `<rect x="${f(x)}" y="${f(y)}" width="${f(w)}" height="${f(h)}" fill="#ffffff" stroke="#bbbbbb" class="panel"/>`,
    `<text x="${f(x + 8)}" y="${f(y + 16)}" font-size="12" font-weight="bold" fill="#222222">${esc(title)}</text>`,
  ];
}

function shotChartPanel(x: number, y: number, p: ShotChartPayload): string[] {
  const h = 40 + ZONE_ORDER.length * 16 + 22;
  const out = panelBox(x, y, PANEL_W - 10, h, `shooting: ${p.player_id}`);
  let yy = y + 34;
  for (const zone of ZONE_ORDER) {
    const bin = p.zone_bins[zone];
    if (bin) {
      out.push(
        `<rect x="${f(x + 8)}" y="${f(yy - 9)}" width="11" height="11" fill="${BIN_COLORS[bin]}" stroke="#888888"/>`,
      );
    }
    out.push(
      `<text x="${f(x + 26)}" y="${f(yy)}" font-size="10" fill="#333333">${zone.toLowerCase()}</text>`,
    );
    yy += 16;
  }
  const b = p.panel;
  out.push(
    `<text x="${f(x + 8)}" y="${f(yy + 4)}" font-size="10" fill="#333333">today: ${b.points} pts, ${b.fgm}/${b.fga} fg, ${b.tpm}/${b.tpa} 3pt</text>`,
  );
  return out;
}

function teamPanel(x: number, y: number, p: TeamPanelPayload, hello: HelloMsg): string[] {
  const h = 40 + p.rows.length * 16;
  const out = panelBox(x, y, PANEL_W - 10, h, `${hello.home_team} vs ${hello.away_team}`);
  let yy = y + 34;
  for (const row of p.rows) {
    const hv = Number.isInteger(row.home_value) ? String(row.home_value) : row.home_value.toFixed(1);
    const av = Number.isInteger(row.away_value) ? String(row.away_value) : row.away_value.toFixed(1);
    const hw = row.leader === "HOME" ? "bold" : "normal";
    const aw = row.leader === "AWAY" ? "bold" : "normal";
    out.push(`<text x="${f(x + 8)}" y="${f(yy)}" font-size="10" fill="#333333">${esc(row.name)}</text>`);
    out.push(
      `<text x="${f(x + 110)}" y="${f(yy)}" font-size="10" font-weight="${hw}" fill="#222222">${hv}</text>`,
    );
    out.push(
      `<text x="${f(x + 170)}" y="${f(yy)}" font-size="10" font-weight="${aw}" fill="#222222">${av}</text>`,
    );
    for (const [bin, bx] of [
      [row.home_bin, x + 140],
      [row.away_bin, x + 200],
    ] as const) {
      if (bin) {
        out.push(
          `<rect x="${f(bx)}" y="${f(yy - 8)}" width="10" height="10" fill="${BIN_COLORS[bin]}" stroke="#888888"/>`,
        );
      }
    }
    yy += 16;
  }
  return out;
}

/** Render the current frame; an empty-court placeholder before the first frame. */
export function renderScene(state: ViewState): string {
  const hello = state.hello;
  if (!hello) {
    return `<svg xmlns="http://www.w3.org/2000/svg" width="400" height="80"><text x="12" y="40" font-size="14" fill="#555555">waiting for stream</text></svg>`;
  }
  const g = hello.geometry;
  const bundle = state.bundle;
  const hasPanel =
    bundle !== null && (bundle.layers.SHOT_CHART !== undefined || bundle.layers.TEAM_PANEL !== undefined);
  const width = 2 * MARGIN + px(g.length_ft) + (hasPanel ? PANEL_W : 0);
  const height = 2 * MARGIN + px(g.width_ft);
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${f(width)}" height="${f(height)}" viewBox="0 0 ${f(width)} ${f(height)}" font-family="sans-serif">`,
    `<rect x="0" y="0" width="${f(width)}" height="${f(height)}" fill="#f2efe9"/>`,
    ...court(g),
  ];
  if (bundle) {
    if (bundle.layers.DEFENSE) parts.push(...defenseLayer(bundle.layers.DEFENSE, bundle));
    if (bundle.layers.OFFENSE) parts.push(...offenseLayer(bundle.layers.OFFENSE, bundle));
    parts.push(...players(bundle, hello.team_colors));
    if (bundle.layers.SHOT_LABEL) parts.push(...shotLabels(bundle.layers.SHOT_LABEL, bundle));
    const chart = bundle.layers.SHOT_CHART;
    if (chart) {
      for (const m of chart.shot_markers) {
        const mx = cx(m.loc[0]);
        const my = cy(m.loc[1]);
        parts.push(
          m.made
            ? `<circle cx="${f(mx)}" cy="${f(my)}" r="4" fill="#1c7a2d"/>`
            : `<path d="M ${f(mx - 4)} ${f(my - 4)} L ${f(mx + 4)} ${f(my + 4)} M ${f(mx - 4)} ${f(my + 4)} L ${f(mx + 4)} ${f(my - 4)}" stroke="#a32424" stroke-width="2" fill="none"/>`,
        );
      }
    }
    let panelY = MARGIN;
    const panelX = 2 * MARGIN + px(g.length_ft) - 14;
    if (chart) {
      parts.push(...shotChartPanel(panelX, panelY, chart));
      panelY += 40 + ZONE_ORDER.length * 16 + 22 + 12;
    }
    if (bundle.layers.TEAM_PANEL) {
      parts.push(...teamPanel(panelX, panelY, bundle.layers.TEAM_PANEL, hello));
    }
    const fr = bundle.frame;
    parts.push(
      `<text x="${f(MARGIN)}" y="16" font-size="11" fill="#555555">period ${fr.period}, clock ${fr.game_clock_s.toFixed(1)}s, t=${fr.t_ms}ms</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}
