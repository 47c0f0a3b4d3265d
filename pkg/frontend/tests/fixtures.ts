/** Hand-built wire messages used by the render and UI tests. */

import type {
  FrameMsg,
  HelloMsg,
  LayerStateMsg,
  WireBox,
  WireBundle,
} from "../src/protocol.js";

export function helloFixture(): HelloMsg {
  return {
    type: "HELLO",
    home_team: "Home",
    away_team: "Away",
    team_colors: { HOME: "#c8102e", AWAY: "#1d428a" },
    frame_rate_hz: 25.0,
    first_t_ms: 0,
    last_t_ms: 51960,
    geometry: {
      length_ft: 94.0,
      width_ft: 50.0,
      hoop_centers: [
        [5.25, 25.0],
        [88.75, 25.0],
      ],
      three_pt_arc_ft: 23.75,
      corner_three_ft: 22.0,
      corner_depth_ft: 14.0,
      rim_zone_ft: 8.0,
    },
    layers: [],
    enabled: ["SHOT_LABEL", "OFFENSE", "DEFENSE", "SHOT_CHART", "TEAM_PANEL"],
  };
}

function box(points: number, fgm: number, fga: number): WireBox {
  return {
    points,
    fgm,
    fga,
    tpm: 0,
    tpa: 1,
    ftm: 1,
    fta: 2,
    rebounds: 3,
    assists: 2,
    blocks: 0,
    steals: 1,
    turnovers: 2,
    fouls: 1,
  };
}

/** One frame carrying every layer payload: 10 players, one connector line,
 * a 3-point focus hull, live labels, chart and team panels. */
export function bundleFixture(): WireBundle {
  const home: [string, number, number][] = [
    ["H1", 10.0, 25.0],
    ["H2", 18.0, 12.0],
    ["H3", 18.0, 38.0],
    ["H4", 30.0, 8.0],
    ["H5", 30.0, 42.0],
  ];
  const away: [string, number, number][] = [
    ["A1", 12.0, 24.0],
    ["A2", 14.0, 30.0],
    ["A3", 20.0, 14.0],
    ["A4", 31.0, 10.0],
    ["A5", 31.0, 40.0],
  ];
  return {
    frame: {
      t_ms: 4000,
      period: 1,
      game_clock_s: 716.0,
      ball: [10.0, 25.0, 2.5],
      players: [
        ...away.map(([player_id, x, y]) => ({ team: "AWAY" as const, player_id, x, y })),
        ...home.map(([player_id, x, y]) => ({ team: "HOME" as const, player_id, x, y })),
      ],
    },
    events_fired: [],
    layers: {
      SHOT_LABEL: {
        static: [
          {
            loc: [8.0, 22.0],
            outcome: "MADE",
            game_fg_pct: 100.0,
            season_fg_pct: 52.5,
            created_at_ms: 1000,
            expires_at_ms: 6000,
          },
        ],
        dynamic: [
          { player_id: "H1", zone: "RIM", zone_pct: 61.5, mark: "HOT" },
          { player_id: "H2", zone: "MID_RIGHT", zone_pct: 33.0, mark: "COLD" },
        ],
      },
      OFFENSE: {
        players: {
          H1: {
            trail: [
              [8.0, 25.0],
              [9.0, 25.0],
              [10.0, 25.0],
            ],
            open_radius_ft: 1.1,
            is_handler: true,
          },
          H2: { trail: [], open_radius_ft: 3.2, is_handler: false },
        },
      },
      DEFENSE: {
        ball_defenders: ["A1"],
        helpers: ["A2"],
        connector_lines: [["A1", "H1"]],
        focus_area: [
          [12.0, 24.0],
          [14.0, 30.0],
          [16.0, 22.0],
        ],
      },
      SHOT_CHART: {
        player_id: "H1",
        zone_bins: {
          RIM: "RED",
          MID_LEFT: "YELLOW",
          MID_RIGHT: "BLUE",
          CORNER3_LEFT: "DARK_BLUE",
          CORNER3_RIGHT: "ORANGE",
          THREE_LEFT: "YELLOW",
          THREE_RIGHT: "YELLOW",
        },
        shot_markers: [
          { loc: [8.0, 22.0], made: true },
          { loc: [20.0, 30.0], made: false },
        ],
        panel: box(5, 2, 4),
      },
      TEAM_PANEL: {
        rows: [
          { name: "points", home_value: 12, away_value: 10, leader: "HOME", home_bin: null, away_bin: null },
          { name: "fg pct", home_value: 50.0, away_value: 41.7, leader: "HOME", home_bin: "ORANGE", away_bin: "BLUE" },
          { name: "3pt pct", home_value: 0.0, away_value: 33.3, leader: "AWAY", home_bin: "DARK_BLUE", away_bin: "YELLOW" },
          { name: "ft pct", home_value: 50.0, away_value: 100.0, leader: "AWAY", home_bin: "DARK_BLUE", away_bin: "RED" },
          { name: "rebounds", home_value: 3, away_value: 3, leader: null, home_bin: null, away_bin: null },
          { name: "assists", home_value: 2, away_value: 1, leader: "HOME", home_bin: null, away_bin: null },
          { name: "blocks", home_value: 0, away_value: 0, leader: null, home_bin: null, away_bin: null },
          { name: "steals", home_value: 1, away_value: 2, leader: "AWAY", home_bin: null, away_bin: null },
          { name: "turnovers", home_value: 2, away_value: 1, leader: "AWAY", home_bin: null, away_bin: null },
        ],
      },
    },
    box: { home: box(12, 5, 10), away: box(10, 4, 11) },
  };
}

export function frameFixture(): FrameMsg {
  return { type: "FRAME", bundle: bundleFixture() };
}

export function layerStateFixture(enabled: HelloMsg["enabled"]): LayerStateMsg {
  return { type: "LAYER_STATE", enabled, playing: false, rate: 1.0 };
}
