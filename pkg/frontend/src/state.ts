/**
 * Single reducer for everything that can change the view.
 *
 * Socket messages and local UI actions funnel through reduce(); the enabled
 * layer set and transport state come only from the server's LAYER_STATE and
 * HELLO, never from optimistic local updates.
 */

import type {
  ClientCommand,
  HelloMsg,
  LayerId,
  ServerMessage,
  WireBundle,
} from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "closed";

export interface ViewState {
  status: ConnectionStatus;
  hello: HelloMsg | null;
  enabled: ReadonlySet<LayerId>;
  bundle: WireBundle | null;
  playing: boolean;
  rate: number;
  ended: boolean;
  lastError: { code: string; detail: string } | null;
  commandLog: readonly string[];
}

export type UiEvent =
  | { kind: "socket"; msg: ServerMessage }
  | { kind: "status"; status: ConnectionStatus }
  | { kind: "sent"; command: ClientCommand };

const LOG_LIMIT = 50;

export function initialState(): ViewState {
  return {
    status: "connecting",
    hello: null,
    enabled: new Set(),
    bundle: null,
    playing: false,
    rate: 1.0,
    ended: false,
    lastError: null,
    commandLog: [],
  };
}

function log(entries: readonly string[], line: string): readonly string[] {
  const next = [...entries, line];
  return next.length > LOG_LIMIT ? next.slice(next.length - LOG_LIMIT) : next;
}

export function describeCommand(cmd: ClientCommand): string {
  switch (cmd.type) {
    case "TOGGLE":
      return `${cmd.on ? "show" : "hide"} ${cmd.layer_id}`;
    case "SEEK":
      return `seek ${cmd.t_ms}ms`;
    case "RATE":
      return `rate x${cmd.multiplier}`;
    default:
      return cmd.type.toLowerCase();
  }
}

export function reduce(state: ViewState, ev: UiEvent): ViewState {
  switch (ev.kind) {
    case "status":
      return { ...state, status: ev.status };
    case "sent":
      // transport and toggle indicators change only on the server echo
      return { ...state, commandLog: log(state.commandLog, `> ${describeCommand(ev.command)}`) };
    case "socket":
      return applyServer(state, ev.msg);
  }
}

function applyServer(state: ViewState, msg: ServerMessage): ViewState {
  switch (msg.type) {
    case "HELLO":
      return { ...state, hello: msg, enabled: new Set(msg.enabled) };
    case "FRAME":
      return { ...state, bundle: msg.bundle };
    case "LAYER_STATE":
      return {
        ...state,
        enabled: new Set(msg.enabled),
        playing: msg.playing,
        rate: msg.rate,
      };
    case "EVENT":
      return state;
    case "ERROR":
      return {
        ...state,
        lastError: { code: msg.code, detail: msg.detail },
        commandLog: log(state.commandLog, `! ${msg.code}: ${msg.detail}`),
      };
    case "END":
      return { ...state, ended: true, playing: false };
  }
}
