"""Operator command line: validate datasets, serve replays, export frames.

Exit codes: 0 success, 1 dataset validation failure, 2 runtime error.
``COURTCAST_LOG`` sets the log level (DEBUG, INFO, ...).
"""

from __future__ import annotations

import argparse
import asyncio
import logging
import os
import signal
import sys
from bisect import bisect_left
from pathlib import Path

from .errors import DatasetError, EngineError
from .ingest import load_dataset
from .model import ALL_LAYERS, LayerId
from .session import FrameBundle, new_session
from .stream import Frame, StreamServer, encode
from .svg import render_frame

log = logging.getLogger(__name__)


def _parse_layers(raw: str) -> frozenset[LayerId]:
    if raw.strip().lower() in ("", "none"):
        return frozenset()
    if raw.strip().lower() == "all":
        return frozenset(ALL_LAYERS)
    layers = set()
    for part in raw.split(","):
        name = part.strip().upper()
        try:
            layers.add(LayerId(name))
        except ValueError:
            raise argparse.ArgumentTypeError(f"unknown layer {part.strip()!r}")
    return frozenset(layers)


def _parse_bind(raw: str) -> tuple[str, int]:
    host, sep, port = raw.rpartition(":")
    if not sep or not port.isdigit():
        raise argparse.ArgumentTypeError(f"bind address must be host:port, got {raw!r}")
    return (host or "127.0.0.1", int(port))


def cmd_validate(args: argparse.Namespace) -> int:
    ds = load_dataset(args.manifest)
    print(f"tracking: {len(ds.tracking)} frames")
    print(f"events: {len(ds.events)} records")
    print(f"shot_table: {len(ds.shots.players)} players")
    print("ok")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    ds = load_dataset(args.manifest)
    session = new_session(ds, args.layers)
    server = StreamServer(session)
    host, port = args.bind

    async def runner() -> None:
        await server.serve(host, port)
        stop = asyncio.Event()
        loop = asyncio.get_running_loop()
        for sig in (signal.SIGINT, signal.SIGTERM):
            try:
                loop.add_signal_handler(sig, stop.set)
            except NotImplementedError:
                pass
        print(f"serving ws://{host}:{port}/stream (ctrl-c to stop)")
        await stop.wait()
        await server.shutdown()

    try:
        asyncio.run(runner())
    except KeyboardInterrupt:
        pass
    return 0


def _export_bundles(ds, layers: frozenset[LayerId], from_ms: int, to_ms: int):
    """Frame bundles for t in [from_ms, to_ms), identical to play-through."""
    session = new_session(ds, layers)
    times = [f.t_ms for f in ds.tracking]
    idx = bisect_left(times, from_ms)
    if idx >= len(times) or times[idx] >= to_ms:
        return
    if times[idx] != ds.first_t_ms:
        session.seek(times[idx])
    bundle = session.compose()
    while True:
        if bundle.frame.t_ms >= to_ms:
            return
        yield bundle
        if session.at_end:
            return
        bundle = session.step()


def cmd_export(args: argparse.Namespace) -> int:
    if args.from_ms > args.to_ms:
        raise EngineError("INVALID_RANGE", f"from_ms {args.from_ms} > to_ms {args.to_ms}")
    ds = load_dataset(args.manifest)
    out = Path(args.out)
    count = 0
    if args.format == "jsonl":
        out.parent.mkdir(parents=True, exist_ok=True)
        with out.open("wb") as fh:
            for bundle in _export_bundles(ds, args.layers, args.from_ms, args.to_ms):
                fh.write(encode(Frame(bundle=bundle)))
                fh.write(b"\n")
                count += 1
        print(f"wrote {count} frames to {out}")
    else:
        out.mkdir(parents=True, exist_ok=True)
        for bundle in _export_bundles(ds, args.layers, args.from_ms, args.to_ms):
            path = out / f"frame_{bundle.frame.t_ms:08d}.svg"
            path.write_text(render_frame(bundle, ds.meta), encoding="utf-8")
            count += 1
        print(f"wrote {count} SVG files to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="courtcast",
        description="replay engine for tracked basketball games with embedded visual layers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="check a dataset and print record counts")
    p_val.add_argument("--manifest", required=True, help="path to the dataset manifest")
    p_val.set_defaults(func=cmd_validate)

    p_serve = sub.add_parser("serve", help="stream the replay over a WebSocket endpoint")
    p_serve.add_argument("--manifest", required=True)
    p_serve.add_argument("--bind", type=_parse_bind, default=("127.0.0.1", 8765), help="host:port (default 127.0.0.1:8765)")
    p_serve.add_argument(
        "--layers",
        type=_parse_layers,
        default=frozenset(ALL_LAYERS),
        help="comma-separated layers enabled at start (default all; labels stay event-driven)",
    )
    p_serve.set_defaults(func=cmd_serve)

    p_exp = sub.add_parser("export", help="write composed frames headlessly")
    p_exp.add_argument("--manifest", required=True)
    p_exp.add_argument("--from-ms", type=int, required=True, dest="from_ms")
    p_exp.add_argument("--to-ms", type=int, required=True, dest="to_ms")
    p_exp.add_argument("--layers", type=_parse_layers, default=frozenset(ALL_LAYERS))
    p_exp.add_argument("--format", choices=("jsonl", "svg"), default="jsonl")
    p_exp.add_argument("--out", required=True, help="output file (jsonl) or directory (svg)")
    p_exp.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("COURTCAST_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DatasetError as e:
        print(f"error: {e.code}: {e.detail}", file=sys.stderr)
        return 1
    except EngineError as e:
        print(f"error: {e.code}: {e.detail}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
