/**
 * Free-text command box: a typed stand-in for voice control.
 *
 * "show defense", "hide labels", "play", "pause", "seek 12000",
 * "seek 12.5s", "rate 2". Unrecognized text maps to null.
 */

import type { ClientCommand, LayerId } from "./protocol.js";

const LAYER_WORDS: Record<string, LayerId> = {
  label: "SHOT_LABEL",
  labels: "SHOT_LABEL",
  "shot label": "SHOT_LABEL",
  "shot labels": "SHOT_LABEL",
  offense: "OFFENSE",
  trail: "OFFENSE",
  trails: "OFFENSE",
  defense: "DEFENSE",
  defence: "DEFENSE",
  chart: "SHOT_CHART",
  "shot chart": "SHOT_CHART",
  shooting: "SHOT_CHART",
  panel: "TEAM_PANEL",
  stats: "TEAM_PANEL",
  "team panel": "TEAM_PANEL",
};

export function parseCommand(text: string): ClientCommand | null {
  const t = text.trim().toLowerCase().replace(/\s+/g, " ");
  if (t === "") return null;
  if (t === "play" || t === "resume") return { type: "PLAY" };
  if (t === "pause" || t === "stop") return { type: "PAUSE" };

  const toggle = /^(show|hide) (.+)$/.exec(t);
  if (toggle) {
    const layer = LAYER_WORDS[toggle[2]!];
    if (!layer) return null;
    return { type: "TOGGLE", layer_id: layer, on: toggle[1] === "show" };
  }

  const seek = /^(?:seek|go to) (\d+(?:\.\d+)?)(s)?$/.exec(t);
  if (seek) {
    const n = Number(seek[1]);
    const ms = seek[2] === "s" ? Math.round(n * 1000) : Math.round(n);
    return { type: "SEEK", t_ms: ms };
  }

  const rate = /^(?:rate|speed) x?(\d+(?:\.\d+)?)x?$/.exec(t);
  if (rate) {
    return { type: "RATE", multiplier: Number(rate[1]) };
  }
  return null;
}
