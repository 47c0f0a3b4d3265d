"""Drive a running courtcast server over a real socket and check the protocol."""
import asyncio
import json
import sys

import websockets

URI = "ws://127.0.0.1:8901/stream"


async def recv_until(ws, want_type, limit=200):
    for _ in range(limit):
        msg = json.loads(await asyncio.wait_for(ws.recv(), timeout=10))
        if msg["type"] == want_type:
            return msg
    raise AssertionError(f"never saw {want_type}")


async def main():
    async with websockets.connect(URI) as ws:
        hello = json.loads(await asyncio.wait_for(ws.recv(), timeout=10))
        assert hello["type"] == "HELLO", hello
        assert set(hello["enabled"]) == {
            "SHOT_LABEL", "OFFENSE", "DEFENSE", "SHOT_CHART", "TEAM_PANEL"
        }, hello["enabled"]
        print("HELLO ok:", hello["home_team"], "vs", hello["away_team"],
              f"{hello['frame_rate_hz']}Hz", hello["first_t_ms"], "..", hello["last_t_ms"])

        await ws.send(json.dumps({"type": "PLAY"}))
        state = await recv_until(ws, "LAYER_STATE")
        assert state["playing"] is True
        frame = await recv_until(ws, "FRAME")
        print("streaming ok: frame t =", frame["bundle"]["frame"]["t_ms"],
              "layers =", sorted(frame["bundle"]["layers"]))

        await ws.send(json.dumps({"type": "TOGGLE", "layer_id": "DEFENSE", "on": False}))
        state = await recv_until(ws, "LAYER_STATE")
        assert "DEFENSE" not in state["enabled"], state
        frame = await recv_until(ws, "FRAME")
        assert "DEFENSE" not in frame["bundle"]["layers"], sorted(frame["bundle"]["layers"])
        print("toggle ok: DEFENSE dropped from enabled and from frame layers")

        await ws.send(json.dumps({"type": "PAUSE"}))
        state = await recv_until(ws, "LAYER_STATE")
        assert state["playing"] is False

        await ws.send(json.dumps({"type": "SEEK", "t_ms": hello["first_t_ms"] + 1000}))
        frame = await recv_until(ws, "FRAME")
        assert frame["bundle"]["frame"]["t_ms"] == hello["first_t_ms"] + 1000, frame["bundle"]["frame"]["t_ms"]
        print("seek ok: ack frame at t =", frame["bundle"]["frame"]["t_ms"])

        await ws.send(json.dumps({"type": "PING"}))
        state = await recv_until(ws, "LAYER_STATE")
        print("ping ok: answered with LAYER_STATE, rate =", state["rate"])

        await ws.send('{"type": "SEEK", "t_ms"')
        err = await recv_until(ws, "ERROR")
        assert err["code"] == "DECODE_ERROR" and "byte" in err["detail"], err
        print("decode error ok:", err["detail"])

    print("VERIFY CLIENT OK")


if __name__ == "__main__":
    sys.exit(asyncio.run(main()))
