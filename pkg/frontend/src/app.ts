/**
 * Page shell: one socket, one reducer, one render pass per change.
 *
 * The DOM reflects ViewState and nothing else. Toggle indicators and the
 * transport readout update only when the server's LAYER_STATE (or HELLO)
 * comes back, so the page can never show a layer the server is not sending.
 */

import { parseCommand } from "./commands.js";
import {
  ALL_LAYER_IDS,
  decodeServer,
  encodeCommand,
  type ClientCommand,
  type LayerId,
} from "./protocol.js";
import { renderScene } from "./render.js";
import { initialState, reduce, type UiEvent, type ViewState } from "./state.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  addEventListener(type: "open" | "close", listener: () => void): void;
  addEventListener(type: "message", listener: (ev: { data: unknown }) => void): void;
}

export interface AppHandle {
  getState(): ViewState;
  send(cmd: ClientCommand): void;
  root: HTMLElement;
}

const LAYER_BUTTON_TITLES: Record<LayerId, string> = {
  SHOT_LABEL: "labels",
  OFFENSE: "offense",
  DEFENSE: "defense",
  SHOT_CHART: "shot chart",
  TEAM_PANEL: "team panel",
};

export function mount(root: HTMLElement, socket: SocketLike): AppHandle {
  const doc = root.ownerDocument;
  let state = initialState();

  root.innerHTML = "";
  const header = doc.createElement("div");
  header.className = "header";
  const status = doc.createElement("span");
  status.className = "status";
  const title = doc.createElement("span");
  title.className = "title";
  header.append(title, status);

  const scene = doc.createElement("div");
  scene.className = "scene";

  const controls = doc.createElement("div");
  controls.className = "controls";

  const toggles = new Map<LayerId, HTMLButtonElement>();
  for (const lid of ALL_LAYER_IDS) {
    const btn = doc.createElement("button");
    btn.dataset["layer"] = lid;
    btn.textContent = LAYER_BUTTON_TITLES[lid];
    btn.addEventListener("click", () => {
      send({ type: "TOGGLE", layer_id: lid, on: !state.enabled.has(lid) });
    });
    toggles.set(lid, btn);
    controls.append(btn);
  }

  const playPause = doc.createElement("button");
  playPause.className = "play-pause";
  playPause.addEventListener("click", () => {
    send({ type: state.playing ? "PAUSE" : "PLAY" });
  });
  controls.append(playPause);

  const rateSelect = doc.createElement("select");
  rateSelect.className = "rate";
  for (const r of ["0.25", "0.5", "1", "2", "4", "8"]) {
    const opt = doc.createElement("option");
    opt.value = r;
    opt.textContent = `x${r}`;
    rateSelect.append(opt);
  }
  rateSelect.value = "1";
  rateSelect.addEventListener("change", () => {
    send({ type: "RATE", multiplier: Number(rateSelect.value) });
  });
  controls.append(rateSelect);

  // one SEEK per gesture: 'input' fires while dragging, 'change' on release
  const seekBar = doc.createElement("input");
  seekBar.type = "range";
  seekBar.className = "seek";
  seekBar.addEventListener("change", () => {
    send({ type: "SEEK", t_ms: Number(seekBar.value) });
  });
  controls.append(seekBar);

  const clock = doc.createElement("span");
  clock.className = "clock";
  controls.append(clock);

  const commandForm = doc.createElement("form");
  commandForm.className = "command-form";
  const commandInput = doc.createElement("input");
  commandInput.type = "text";
  commandInput.placeholder = 'try "show defense" or "hide labels"';
  commandForm.append(commandInput);
  commandForm.addEventListener("submit", (ev) => {
    ev.preventDefault();
    const cmd = parseCommand(commandInput.value);
    if (cmd) {
      send(cmd);
      commandInput.value = "";
    } else {
      commandInput.classList.add("unrecognized");
    }
  });
  commandInput.addEventListener("input", () => commandInput.classList.remove("unrecognized"));

  const logList = doc.createElement("ul");
  logList.className = "command-log";

  root.append(header, scene, controls, commandForm, logList);

  function send(cmd: ClientCommand): void {
    if (state.status !== "open") return;
    socket.send(encodeCommand(cmd));
    dispatch({ kind: "sent", command: cmd });
  }

  function dispatch(ev: UiEvent): void {
    state = reduce(state, ev);
    update();
  }

  function update(): void {
    status.textContent = state.ended ? "ended" : state.status;
    title.textContent = state.hello ? `${state.hello.home_team} vs ${state.hello.away_team}` : "";
    scene.innerHTML = renderScene(state);

    const connected = state.status === "open";
    for (const [lid, btn] of toggles) {
      const on = state.enabled.has(lid);
      btn.classList.toggle("on", on);
      btn.setAttribute("aria-pressed", String(on));
      btn.disabled = !connected;
    }
    playPause.textContent = state.playing ? "pause" : "play";
    playPause.disabled = !connected;
    rateSelect.disabled = !connected;
    seekBar.disabled = !connected;
    commandInput.disabled = !connected;

    if (state.hello) {
      seekBar.min = String(state.hello.first_t_ms);
      seekBar.max = String(state.hello.last_t_ms);
    }
    if (state.bundle && doc.activeElement !== seekBar) {
      seekBar.value = String(state.bundle.frame.t_ms);
    }
    if (state.bundle) {
      const fr = state.bundle.frame;
      clock.textContent = `P${fr.period} ${fr.game_clock_s.toFixed(1)}s (x${state.rate})`;
    }

    logList.innerHTML = "";
    for (const line of state.commandLog.slice(-8)) {
      const li = doc.createElement("li");
      li.textContent = line;
      logList.append(li);
    }
  }

  socket.addEventListener("open", () => dispatch({ kind: "status", status: "open" }));
  socket.addEventListener("close", () => dispatch({ kind: "status", status: "closed" }));
  socket.addEventListener("message", (ev) => {
    if (typeof ev.data !== "string") return;
    let msg;
    try {
      msg = decodeServer(ev.data);
    } catch {
      return; // not a server message; nothing to show
    }
    dispatch({ kind: "socket", msg });
  });

  update();
  return { getState: () => state, send, root };
}

/** Browser entry point; tests call mount() with a fake socket instead. */
export function start(): void {
  const root = document.getElementById("root");
  if (!root) throw new Error("#root missing");
  const url = new URLSearchParams(window.location.search).get("ws") ?? "ws://127.0.0.1:8765/stream";
  mount(root, new WebSocket(url));
}
