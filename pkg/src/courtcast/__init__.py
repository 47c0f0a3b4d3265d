"""Deterministic replay engine for tracked basketball games.

The engine composes five visualization layers per tracking frame:
shot labels, offense trails, defensive assignments, a seasonal shot
chart, and a team comparison panel. Frames stream over a WebSocket
JSON protocol or export headlessly to JSONL and SVG.
"""

from .errors import DatasetError, DecodeError, EngineError
from .ingest import GameMeta, ValidatedDataset, load_dataset, parse_events, parse_manifest, parse_shot_table, parse_tracking, validate_dataset
from .model import (
    Action,
    BoxScore,
    ColorBin,
    CourtGeometry,
    GameEvent,
    LayerId,
    LeagueAverages,
    Mark,
    PlayerPosition,
    Team,
    TrackingFrame,
    Zone,
    ZoneCounts,
    ZonedShotTable,
    color_bin,
    describe_layers,
)
from .session import FrameBundle, Session, new_session
from .stream import StreamServer, decode, encode
from .svg import render_frame

__version__ = "0.1.0"

__all__ = [
    "Action",
    "BoxScore",
    "ColorBin",
    "CourtGeometry",
    "DatasetError",
    "DecodeError",
    "EngineError",
    "FrameBundle",
    "GameEvent",
    "GameMeta",
    "LayerId",
    "LeagueAverages",
    "Mark",
    "PlayerPosition",
    "Session",
    "StreamServer",
    "Team",
    "TrackingFrame",
    "ValidatedDataset",
    "Zone",
    "ZoneCounts",
    "ZonedShotTable",
    "color_bin",
    "decode",
    "describe_layers",
    "encode",
    "load_dataset",
    "new_session",
    "parse_events",
    "parse_manifest",
    "parse_shot_table",
    "parse_tracking",
    "render_frame",
    "validate_dataset",
    "__version__",
]
