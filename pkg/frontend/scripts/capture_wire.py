"""Regenerate tests/wire/*.json from the engine's stream encoding.

Run from the repository root with the courtcast package installed:

    python3 frontend/scripts/capture_wire.py
"""

from pathlib import Path

from courtcast.model import ALL_LAYERS, LayerId
from courtcast.session import new_session
from courtcast.stream import Frame, StreamServer, encode
from courtcast.synth import SynthConfig, generate

OUT = Path(__file__).resolve().parent.parent / "tests" / "wire"


def main() -> None:
    ds = generate(SynthConfig(periods=1, period_s=30.0, grounded=True))
    session = new_session(ds, frozenset(ALL_LAYERS))
    server = StreamServer(session, paced=False)
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "hello.json").write_bytes(encode(server.hello()) + b"\n")

    bundle = session.compose()
    while not (
        set(bundle.layers) == set(LayerId) and bundle.layers[LayerId.SHOT_LABEL].static
    ):
        if session.at_end:
            raise SystemExit("no frame carries every payload with a live label")
        bundle = session.step()
    (OUT / "frame.json").write_bytes(encode(Frame(bundle=bundle)) + b"\n")
    print(f"wrote {OUT / 'hello.json'} and {OUT / 'frame.json'} (frame t={bundle.frame.t_ms}ms)")


if __name__ == "__main__":
    main()
