/**
 * Wire types for the replay stream.
 *
 * One JSON object per WebSocket text frame, discriminated by "type".
 * These interfaces mirror the server's canonical encoding field for field;
 * the client treats the server as the single source of truth and never
 * computes analytics locally.
 */

export type TeamId = "HOME" | "AWAY";

export type LayerId =
  | "SHOT_LABEL"
  | "OFFENSE"
  | "DEFENSE"
  | "SHOT_CHART"
  | "TEAM_PANEL";

export const ALL_LAYER_IDS: readonly LayerId[] = [
  "SHOT_LABEL",
  "OFFENSE",
  "DEFENSE",
  "SHOT_CHART",
  "TEAM_PANEL",
];

export type ColorBin = "DARK_BLUE" | "BLUE" | "YELLOW" | "ORANGE" | "RED";
export type HotMark = "HOT" | "COLD" | "NEUTRAL";

export type Point = [number, number];

export interface WireGeometry {
  length_ft: number;
  width_ft: number;
  hoop_centers: [Point, Point];
  three_pt_arc_ft: number;
  corner_three_ft: number;
  corner_depth_ft: number;
  rim_zone_ft: number;
}

export interface WirePlayer {
  team: TeamId;
  player_id: string;
  x: number;
  y: number;
}

export interface WireFrame {
  t_ms: number;
  period: number;
  game_clock_s: number;
  ball: [number, number, number];
  players: WirePlayer[];
}

export interface WireEvent {
  t_ms: number;
  team: TeamId | null;
  player_id: string;
  action: string;
  outcome: string;
  loc: Point | null;
}

export interface WireBox {
  points: number;
  fgm: number;
  fga: number;
  tpm: number;
  tpa: number;
  ftm: number;
  fta: number;
  rebounds: number;
  assists: number;
  blocks: number;
  steals: number;
  turnovers: number;
  fouls: number;
}

export interface StaticShotLabel {
  loc: Point;
  outcome: "MADE" | "MISSED";
  game_fg_pct: number;
  season_fg_pct: number;
  created_at_ms: number;
  expires_at_ms: number;
}

export interface DynamicShotLabel {
  player_id: string;
  zone: string;
  zone_pct: number;
  mark: HotMark;
}

export interface ShotLabelPayload {
  static: StaticShotLabel[];
  dynamic: DynamicShotLabel[];
}

export interface OffenseEntry {
  trail: Point[];
  open_radius_ft: number;
  is_handler: boolean;
}

export interface OffensePayload {
  players: Record<string, OffenseEntry>;
}

export interface DefensePayload {
  ball_defenders: string[];
  helpers: string[];
  connector_lines: [string, string][];
  focus_area: Point[] | null;
}

export interface ShotMarker {
  loc: Point;
  made: boolean;
}

export interface ShotChartPayload {
  player_id: string;
  zone_bins: Record<string, ColorBin>;
  shot_markers: ShotMarker[];
  panel: WireBox;
}

export interface StatRow {
  name: string;
  home_value: number;
  away_value: number;
  leader: TeamId | null;
  home_bin: ColorBin | null;
  away_bin: ColorBin | null;
}

export interface TeamPanelPayload {
  rows: StatRow[];
}

export interface LayerPayloads {
  SHOT_LABEL?: ShotLabelPayload;
  OFFENSE?: OffensePayload;
  DEFENSE?: DefensePayload;
  SHOT_CHART?: ShotChartPayload;
  TEAM_PANEL?: TeamPanelPayload;
}

export interface WireBundle {
  frame: WireFrame;
  events_fired: WireEvent[];
  layers: LayerPayloads;
  box: { home: WireBox; away: WireBox };
}

export interface LayerDescriptor {
  layer_id: LayerId;
  context_id: string;
  scenario: string;
  data: string;
  task: string;
  marks: string[];
}

export interface HelloMsg {
  type: "HELLO";
  home_team: string;
  away_team: string;
  team_colors: Record<TeamId, string>;
  frame_rate_hz: number;
  first_t_ms: number;
  last_t_ms: number;
  geometry: WireGeometry;
  layers: LayerDescriptor[];
  enabled: LayerId[];
}

export interface FrameMsg {
  type: "FRAME";
  bundle: WireBundle;
}

export interface LayerStateMsg {
  type: "LAYER_STATE";
  enabled: LayerId[];
  playing: boolean;
  rate: number;
}

export interface EventMsg {
  type: "EVENT";
  event: WireEvent;
}

export interface ErrorMsg {
  type: "ERROR";
  code: string;
  detail: string;
}

export interface EndMsg {
  type: "END";
}

export type ServerMessage =
  | HelloMsg
  | FrameMsg
  | LayerStateMsg
  | EventMsg
  | ErrorMsg
  | EndMsg;

export type ClientCommand =
  | { type: "TOGGLE"; layer_id: LayerId; on: boolean }
  | { type: "PLAY" }
  | { type: "PAUSE" }
  | { type: "SEEK"; t_ms: number }
  | { type: "RATE"; multiplier: number }
  | { type: "PING" };

const SERVER_TYPES = new Set(["HELLO", "FRAME", "LAYER_STATE", "EVENT", "ERROR", "END"]);

/** Parse one incoming text frame; throws on anything that is not a server message. */
export function decodeServer(raw: string): ServerMessage {
  let obj: unknown;
  try {
    obj = JSON.parse(raw);
  } catch {
    throw new Error("malformed JSON from server");
  }
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
    throw new Error("expected a JSON object");
  }
  const type = (obj as { type?: unknown }).type;
  if (typeof type !== "string" || !SERVER_TYPES.has(type)) {
    throw new Error(`unknown server message type: ${String(type)}`);
  }
  return obj as ServerMessage;
}

export function encodeCommand(cmd: ClientCommand): string {
  return JSON.stringify(cmd);
}
