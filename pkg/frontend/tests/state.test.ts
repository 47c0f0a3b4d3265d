import { describe, expect, it } from "vitest";

import { initialState, reduce, type ViewState } from "../src/state.js";
import { frameFixture, helloFixture, layerStateFixture } from "./fixtures.js";

function opened(): ViewState {
  let s = reduce(initialState(), { kind: "status", status: "open" });
  s = reduce(s, { kind: "socket", msg: helloFixture() });
  return s;
}

describe("reducer", () => {
  it("starts empty and disconnected", () => {
    const s = initialState();
    expect(s.status).toBe("connecting");
    expect(s.enabled.size).toBe(0);
    expect(s.bundle).toBeNull();
  });

  it("HELLO seeds metadata and the enabled set", () => {
    const s = opened();
    expect(s.hello?.home_team).toBe("Home");
    expect([...s.enabled].sort()).toEqual([
      "DEFENSE",
      "OFFENSE",
      "SHOT_CHART",
      "SHOT_LABEL",
      "TEAM_PANEL",
    ]);
  });

  it("LAYER_STATE is the only source of the enabled set", () => {
    let s = opened();
    s = reduce(s, { kind: "socket", msg: layerStateFixture(["DEFENSE"]) });
    expect([...s.enabled]).toEqual(["DEFENSE"]);
    s = reduce(s, { kind: "socket", msg: layerStateFixture([]) });
    expect(s.enabled.size).toBe(0);
  });

  it("sending a toggle does not change the enabled set before the echo", () => {
    const s = opened();
    const after = reduce(s, {
      kind: "sent",
      command: { type: "TOGGLE", layer_id: "DEFENSE", on: false },
    });
    expect(after.enabled).toEqual(s.enabled);
    expect(after.playing).toBe(s.playing);
    expect(after.commandLog.at(-1)).toBe("> hide DEFENSE");
  });

  it("FRAME replaces the bundle and nothing else", () => {
    const s = opened();
    const after = reduce(s, { kind: "socket", msg: frameFixture() });
    expect(after.bundle?.frame.t_ms).toBe(4000);
    expect(after.enabled).toEqual(s.enabled);
  });

  it("LAYER_STATE carries transport state", () => {
    let s = opened();
    s = reduce(s, {
      kind: "socket",
      msg: { type: "LAYER_STATE", enabled: ["DEFENSE"], playing: true, rate: 4.0 },
    });
    expect(s.playing).toBe(true);
    expect(s.rate).toBe(4.0);
  });

  it("ERROR lands in the log and lastError", () => {
    const s = reduce(opened(), {
      kind: "socket",
      msg: { type: "ERROR", code: "OUT_OF_RANGE", detail: "seek beyond the end" },
    });
    expect(s.lastError?.code).toBe("OUT_OF_RANGE");
    expect(s.commandLog.at(-1)).toContain("OUT_OF_RANGE");
  });

  it("END stops playback", () => {
    let s = opened();
    s = reduce(s, {
      kind: "socket",
      msg: { type: "LAYER_STATE", enabled: [], playing: true, rate: 1.0 },
    });
    s = reduce(s, { kind: "socket", msg: { type: "END" } });
    expect(s.ended).toBe(true);
    expect(s.playing).toBe(false);
  });

  it("never mutates its input", () => {
    const before = opened();
    Object.freeze(before);
    Object.freeze(before.commandLog);
    const after = reduce(before, { kind: "socket", msg: frameFixture() });
    expect(after).not.toBe(before);
    expect(before.bundle).toBeNull();
  });
});
