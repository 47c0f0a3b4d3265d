"""Wire protocol and broadcast server.

Every protocol message is a single JSON object with a "type" discriminator,
sent as one WebSocket text frame. Encoding is canonical: keys sorted,
coordinates and other floats rounded to at most 3 decimals, no whitespace.
Canonical messages survive encode/decode with structural equality, which is
what makes headless exports byte-comparable to a client's received stream.

The server side fans one Session out to N clients: a single driver task
owns the session, commands from any client funnel through one queue and
apply at frame boundaries, and every client sees the same broadcasts. An
in-process loopback connection speaks the identical protocol for tests.
"""

from __future__ import annotations

import asyncio
import json
import logging
from dataclasses import dataclass
from typing import Any, Callable, Iterable

from .analytics import (
    DefenseAssignment,
    DynamicShotLabel,
    HotMark,
    OffenseEntry,
    OffensePayload,
    ShotChartPayload,
    ShotLabelPayload,
    ShotMarker,
    StaticShotLabel,
    StatRow,
    TeamPanelPayload,
)
from .errors import DecodeError, EngineError
from .ingest import ValidatedDataset
from .model import (
    Action,
    BoxScore,
    ColorBin,
    CourtGeometry,
    GameEvent,
    LayerDescriptor,
    LayerId,
    Mark,
    Outcome,
    PlayerPosition,
    Team,
    TrackingFrame,
    Zone,
    describe_layers,
)
from .session import FrameBundle, Session

log = logging.getLogger(__name__)

DEFAULT_PATH = "/stream"


# --- message types ---


@dataclass(frozen=True)
class Hello:
    home_team: str
    away_team: str
    team_colors: dict[Team, str]
    frame_rate_hz: float
    first_t_ms: int
    last_t_ms: int
    geometry: CourtGeometry
    layers: tuple[LayerDescriptor, ...]
    enabled: frozenset[LayerId]


@dataclass(frozen=True)
class Frame:
    bundle: FrameBundle


@dataclass(frozen=True)
class LayerState:
    enabled: frozenset[LayerId]
    playing: bool
    rate: float


@dataclass(frozen=True)
class Event:
    event: GameEvent


@dataclass(frozen=True)
class Error:
    code: str
    detail: str


@dataclass(frozen=True)
class End:
    pass


@dataclass(frozen=True)
class Toggle:
    layer_id: LayerId
    on: bool


@dataclass(frozen=True)
class Play:
    pass


@dataclass(frozen=True)
class Pause:
    pass


@dataclass(frozen=True)
class Seek:
    t_ms: int


@dataclass(frozen=True)
class Rate:
    multiplier: float


@dataclass(frozen=True)
class Ping:
    pass


ServerMessage = Hello | Frame | LayerState | Event | Error | End
ClientCommand = Toggle | Play | Pause | Seek | Rate | Ping
Message = ServerMessage | ClientCommand


# --- canonical number handling ---


def _n3(v: float) -> float:
    """Coordinates and percentages travel with at most 3 decimals."""
    r = round(float(v), 3)
    return 0.0 if r == 0 else r


def _num(v: float | int) -> float | int:
    if isinstance(v, bool):
        raise TypeError("stat values are numbers")
    return v if isinstance(v, int) else _n3(v)


def _point(p: tuple[float, float]) -> list[float]:
    return [_n3(p[0]), _n3(p[1])]


# --- encoding (domain -> plain JSON types) ---


def _event_to_dict(ev: GameEvent) -> dict[str, Any]:
    return {
        "t_ms": ev.t_ms,
        "team": ev.team.value if ev.team else None,
        "player_id": ev.player_id,
        "action": ev.action.value,
        "outcome": ev.outcome.value,
        "loc": _point(ev.loc) if ev.loc else None,
    }


def _frame_to_dict(f: TrackingFrame) -> dict[str, Any]:
    return {
        "t_ms": f.t_ms,
        "period": f.period,
        "game_clock_s": _n3(f.game_clock_s),
        "ball": [_n3(f.ball[0]), _n3(f.ball[1]), _n3(f.ball[2])],
        "players": [
            {"team": p.team.value, "player_id": p.player_id, "x": _n3(p.x), "y": _n3(p.y)}
            for p in sorted(f.players, key=lambda p: (p.team.value, p.player_id))
        ],
    }


def _box_to_dict(b: BoxScore) -> dict[str, int]:
    return {
        "points": b.points,
        "fgm": b.fgm,
        "fga": b.fga,
        "tpm": b.tpm,
        "tpa": b.tpa,
        "ftm": b.ftm,
        "fta": b.fta,
        "rebounds": b.rebounds,
        "assists": b.assists,
        "blocks": b.blocks,
        "steals": b.steals,
        "turnovers": b.turnovers,
        "fouls": b.fouls,
    }


def _shot_label_payload_to_dict(p: ShotLabelPayload) -> dict[str, Any]:
    return {
        "static": [
            {
                "loc": _point(s.loc),
                "outcome": s.outcome.value,
                "game_fg_pct": _n3(s.game_fg_pct),
                "season_fg_pct": _n3(s.season_fg_pct),
                "created_at_ms": s.created_at_ms,
                "expires_at_ms": s.expires_at_ms,
            }
            for s in p.static
        ],
        "dynamic": [
            {
                "player_id": d.player_id,
                "zone": d.zone.value,
                "zone_pct": _n3(d.zone_pct),
                "mark": d.mark.value,
            }
            for d in p.dynamic
        ],
    }


def _offense_to_dict(p: OffensePayload) -> dict[str, Any]:
    return {
        "players": {
            pid: {
                "trail": [_point(pt) for pt in e.trail],
                "open_radius_ft": _n3(e.open_radius_ft),
                "is_handler": e.is_handler,
            }
            for pid, e in sorted(p.players.items())
        }
    }


def _defense_to_dict(p: DefenseAssignment) -> dict[str, Any]:
    return {
        "ball_defenders": sorted(p.ball_defenders),
        "helpers": sorted(p.helpers),
        "connector_lines": [list(pair) for pair in p.connector_lines],
        "focus_area": [_point(pt) for pt in p.focus_area] if p.focus_area else None,
    }


def _shot_chart_to_dict(p: ShotChartPayload) -> dict[str, Any]:
    return {
        "player_id": p.player_id,
        "zone_bins": {z.value: b.value for z, b in p.zone_bins.items()},
        "shot_markers": [{"loc": _point(m.loc), "made": m.made} for m in p.shot_markers],
        "panel": _box_to_dict(p.panel),
    }


def _team_panel_to_dict(p: TeamPanelPayload) -> dict[str, Any]:
    return {
        "rows": [
            {
                "name": r.name,
                "home_value": _num(r.home_value),
                "away_value": _num(r.away_value),
                "leader": r.leader.value if r.leader else None,
                "home_bin": r.home_bin.value if r.home_bin else None,
                "away_bin": r.away_bin.value if r.away_bin else None,
            }
            for r in p.rows
        ]
    }


_PAYLOAD_ENCODERS: dict[LayerId, Callable[[Any], dict[str, Any]]] = {
    LayerId.SHOT_LABEL: _shot_label_payload_to_dict,
    LayerId.OFFENSE: _offense_to_dict,
    LayerId.DEFENSE: _defense_to_dict,
    LayerId.SHOT_CHART: _shot_chart_to_dict,
    LayerId.TEAM_PANEL: _team_panel_to_dict,
}


def _bundle_to_dict(b: FrameBundle) -> dict[str, Any]:
    return {
        "frame": _frame_to_dict(b.frame),
        "events_fired": [_event_to_dict(ev) for ev in b.events_fired],
        "layers": {lid.value: _PAYLOAD_ENCODERS[lid](p) for lid, p in b.layers.items()},
        "box": {"home": _box_to_dict(b.box[0]), "away": _box_to_dict(b.box[1])},
    }


def _geometry_to_dict(g: CourtGeometry) -> dict[str, Any]:
    return {
        "length_ft": _n3(g.length_ft),
        "width_ft": _n3(g.width_ft),
        "hoop_centers": [_point(g.hoop_centers[0]), _point(g.hoop_centers[1])],
        "three_pt_arc_ft": _n3(g.three_pt_arc_ft),
        "corner_three_ft": _n3(g.corner_three_ft),
        "corner_depth_ft": _n3(g.corner_depth_ft),
        "rim_zone_ft": _n3(g.rim_zone_ft),
    }


def _descriptor_to_dict(d: LayerDescriptor) -> dict[str, Any]:
    return {
        "layer_id": d.layer_id.value,
        "context_id": d.context_id,
        "scenario": d.scenario,
        "data": d.data,
        "task": d.task,
        "marks": sorted(m.value for m in d.marks),
    }


def _layer_ids(ids: Iterable[LayerId]) -> list[str]:
    return sorted(l.value for l in ids)


def encode(msg: Message) -> bytes:
    """Canonical bytes for one protocol message."""
    body: dict[str, Any]
    if isinstance(msg, Hello):
        body = {
            "type": "HELLO",
            "home_team": msg.home_team,
            "away_team": msg.away_team,
            "team_colors": {t.value: c for t, c in msg.team_colors.items()},
            "frame_rate_hz": _n3(msg.frame_rate_hz),
            "first_t_ms": msg.first_t_ms,
            "last_t_ms": msg.last_t_ms,
            "geometry": _geometry_to_dict(msg.geometry),
            "layers": [_descriptor_to_dict(d) for d in msg.layers],
            "enabled": _layer_ids(msg.enabled),
        }
    elif isinstance(msg, Frame):
        body = {"type": "FRAME", "bundle": _bundle_to_dict(msg.bundle)}
    elif isinstance(msg, LayerState):
        body = {
            "type": "LAYER_STATE",
            "enabled": _layer_ids(msg.enabled),
            "playing": msg.playing,
            "rate": _n3(msg.rate),
        }
    elif isinstance(msg, Event):
        body = {"type": "EVENT", "event": _event_to_dict(msg.event)}
    elif isinstance(msg, Error):
        body = {"type": "ERROR", "code": msg.code, "detail": msg.detail}
    elif isinstance(msg, End):
        body = {"type": "END"}
    elif isinstance(msg, Toggle):
        body = {"type": "TOGGLE", "layer_id": msg.layer_id.value, "on": msg.on}
    elif isinstance(msg, Play):
        body = {"type": "PLAY"}
    elif isinstance(msg, Pause):
        body = {"type": "PAUSE"}
    elif isinstance(msg, Seek):
        body = {"type": "SEEK", "t_ms": msg.t_ms}
    elif isinstance(msg, Rate):
        body = {"type": "RATE", "multiplier": _n3(msg.multiplier)}
    elif isinstance(msg, Ping):
        body = {"type": "PING"}
    else:
        raise TypeError(f"not a protocol message: {type(msg).__name__}")
    return json.dumps(body, sort_keys=True, separators=(",", ":"), allow_nan=False).encode()


# --- decoding (plain JSON types -> domain) ---


def _req(obj: dict, key: str, kind: type | tuple[type, ...], where: str) -> Any:
    if key not in obj:
        raise DecodeError(f"{where}: missing field {key!r}")
    v = obj[key]
    if kind is float:
        kind = (int, float)
    # bool subclasses int, so reject it anywhere a number is expected
    if not isinstance(v, kind) or isinstance(v, bool):
        raise DecodeError(f"{where}: field {key!r} has wrong type {type(v).__name__}")
    return v


def _req_int(obj: dict, key: str, where: str) -> int:
    return _req(obj, key, int, where)


def _req_num(obj: dict, key: str, where: str) -> float:
    return float(_req(obj, key, float, where))


def _req_stat(obj: dict, key: str, where: str) -> float | int:
    # counts stay ints on the wire; re-encoding must not grow a ".0"
    return _req(obj, key, float, where)


def _req_str(obj: dict, key: str, where: str) -> str:
    return _req(obj, key, str, where)


def _req_bool(obj: dict, key: str, where: str) -> bool:
    v = obj.get(key)
    if not isinstance(v, bool):
        raise DecodeError(f"{where}: field {key!r} must be a boolean")
    return v


def _req_dict(obj: dict, key: str, where: str) -> dict:
    return _req(obj, key, dict, where)


def _req_list(obj: dict, key: str, where: str) -> list:
    return _req(obj, key, list, where)


def _enum(kind: Any, raw: Any, where: str) -> Any:
    try:
        return kind(raw)
    except ValueError:
        raise DecodeError(f"{where}: {raw!r} is not a valid {kind.__name__}") from None


def _point_from(raw: Any, where: str) -> tuple[float, float]:
    if (
        not isinstance(raw, list)
        or len(raw) != 2
        or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in raw)
    ):
        raise DecodeError(f"{where}: expected [x, y]")
    return (float(raw[0]), float(raw[1]))


def _event_from_dict(obj: Any, where: str = "event") -> GameEvent:
    if not isinstance(obj, dict):
        raise DecodeError(f"{where}: expected an object")
    team_raw = obj.get("team")
    loc_raw = obj.get("loc")
    return GameEvent(
        t_ms=_req_int(obj, "t_ms", where),
        team=_enum(Team, team_raw, where) if team_raw is not None else None,
        player_id=_req_str(obj, "player_id", where),
        action=_enum(Action, _req_str(obj, "action", where), where),
        outcome=_enum(Outcome, _req_str(obj, "outcome", where), where),
        loc=_point_from(loc_raw, where) if loc_raw is not None else None,
    )


def _frame_from_dict(obj: Any, where: str = "frame") -> TrackingFrame:
    if not isinstance(obj, dict):
        raise DecodeError(f"{where}: expected an object")
    ball_raw = _req_list(obj, "ball", where)
    if len(ball_raw) != 3 or not all(
        isinstance(c, (int, float)) and not isinstance(c, bool) for c in ball_raw
    ):
        raise DecodeError(f"{where}: ball must be [x, y, z]")
    players = []
    for i, p in enumerate(_req_list(obj, "players", where)):
        pw = f"{where}.players[{i}]"
        if not isinstance(p, dict):
            raise DecodeError(f"{pw}: expected an object")
        players.append(
            PlayerPosition(
                team=_enum(Team, _req_str(p, "team", pw), pw),
                player_id=_req_str(p, "player_id", pw),
                x=_req_num(p, "x", pw),
                y=_req_num(p, "y", pw),
            )
        )
    return TrackingFrame(
        t_ms=_req_int(obj, "t_ms", where),
        period=_req_int(obj, "period", where),
        game_clock_s=_req_num(obj, "game_clock_s", where),
        ball=(float(ball_raw[0]), float(ball_raw[1]), float(ball_raw[2])),
        players=tuple(players),
    )


def _box_from_dict(obj: Any, where: str) -> BoxScore:
    if not isinstance(obj, dict):
        raise DecodeError(f"{where}: expected an object")
    return BoxScore(**{k: _req_int(obj, k, where) for k in _box_to_dict(BoxScore())})


def _shot_label_payload_from(obj: dict, where: str) -> ShotLabelPayload:
    static = []
    for i, s in enumerate(_req_list(obj, "static", where)):
        sw = f"{where}.static[{i}]"
        if not isinstance(s, dict):
            raise DecodeError(f"{sw}: expected an object")
        static.append(
            StaticShotLabel(
                loc=_point_from(s.get("loc"), sw),
                outcome=_enum(Outcome, _req_str(s, "outcome", sw), sw),
                game_fg_pct=_req_num(s, "game_fg_pct", sw),
                season_fg_pct=_req_num(s, "season_fg_pct", sw),
                created_at_ms=_req_int(s, "created_at_ms", sw),
                expires_at_ms=_req_int(s, "expires_at_ms", sw),
            )
        )
    dynamic = []
    for i, d in enumerate(_req_list(obj, "dynamic", where)):
        dw = f"{where}.dynamic[{i}]"
        if not isinstance(d, dict):
            raise DecodeError(f"{dw}: expected an object")
        dynamic.append(
            DynamicShotLabel(
                player_id=_req_str(d, "player_id", dw),
                zone=_enum(Zone, _req_str(d, "zone", dw), dw),
                zone_pct=_req_num(d, "zone_pct", dw),
                mark=_enum(HotMark, _req_str(d, "mark", dw), dw),
            )
        )
    return ShotLabelPayload(static=tuple(static), dynamic=tuple(dynamic))


def _offense_from(obj: dict, where: str) -> OffensePayload:
    players_raw = _req_dict(obj, "players", where)
    players: dict[str, OffenseEntry] = {}
    for pid, e in players_raw.items():
        ew = f"{where}.players[{pid!r}]"
        if not isinstance(e, dict):
            raise DecodeError(f"{ew}: expected an object")
        players[pid] = OffenseEntry(
            trail=tuple(_point_from(pt, ew) for pt in _req_list(e, "trail", ew)),
            open_radius_ft=_req_num(e, "open_radius_ft", ew),
            is_handler=_req_bool(e, "is_handler", ew),
        )
    return OffensePayload(players=players)


def _defense_from(obj: dict, where: str) -> DefenseAssignment:
    lines = []
    for i, pair in enumerate(_req_list(obj, "connector_lines", where)):
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(s, str) for s in pair)):
            raise DecodeError(f"{where}.connector_lines[{i}]: expected [defender, handler]")
        lines.append((pair[0], pair[1]))
    focus_raw = obj.get("focus_area")
    focus = (
        tuple(_point_from(pt, f"{where}.focus_area") for pt in focus_raw)
        if isinstance(focus_raw, list)
        else None
    )
    bd = _req_list(obj, "ball_defenders", where)
    hp = _req_list(obj, "helpers", where)
    if not all(isinstance(s, str) for s in bd + hp):
        raise DecodeError(f"{where}: defender ids must be strings")
    return DefenseAssignment(
        ball_defenders=frozenset(bd),
        helpers=frozenset(hp),
        connector_lines=tuple(lines),
        focus_area=focus,
    )


def _shot_chart_from(obj: dict, where: str) -> ShotChartPayload:
    bins_raw = _req_dict(obj, "zone_bins", where)
    bins = {
        _enum(Zone, z, f"{where}.zone_bins"): _enum(ColorBin, b, f"{where}.zone_bins")
        for z, b in bins_raw.items()
    }
    markers = []
    for i, m in enumerate(_req_list(obj, "shot_markers", where)):
        mw = f"{where}.shot_markers[{i}]"
        if not isinstance(m, dict):
            raise DecodeError(f"{mw}: expected an object")
        markers.append(ShotMarker(loc=_point_from(m.get("loc"), mw), made=_req_bool(m, "made", mw)))
    return ShotChartPayload(
        player_id=_req_str(obj, "player_id", where),
        zone_bins=bins,
        shot_markers=tuple(markers),
        panel=_box_from_dict(_req_dict(obj, "panel", where), f"{where}.panel"),
    )


def _team_panel_from(obj: dict, where: str) -> TeamPanelPayload:
    rows = []
    for i, r in enumerate(_req_list(obj, "rows", where)):
        rw = f"{where}.rows[{i}]"
        if not isinstance(r, dict):
            raise DecodeError(f"{rw}: expected an object")
        leader_raw = r.get("leader")
        hb, ab = r.get("home_bin"), r.get("away_bin")
        rows.append(
            StatRow(
                name=_req_str(r, "name", rw),
                home_value=_req_stat(r, "home_value", rw),
                away_value=_req_stat(r, "away_value", rw),
                leader=_enum(Team, leader_raw, rw) if leader_raw is not None else None,
                home_bin=_enum(ColorBin, hb, rw) if hb is not None else None,
                away_bin=_enum(ColorBin, ab, rw) if ab is not None else None,
            )
        )
    return TeamPanelPayload(rows=tuple(rows))


_PAYLOAD_DECODERS: dict[LayerId, Callable[[dict, str], Any]] = {
    LayerId.SHOT_LABEL: _shot_label_payload_from,
    LayerId.OFFENSE: _offense_from,
    LayerId.DEFENSE: _defense_from,
    LayerId.SHOT_CHART: _shot_chart_from,
    LayerId.TEAM_PANEL: _team_panel_from,
}


def _bundle_from_dict(obj: Any, where: str = "bundle") -> FrameBundle:
    if not isinstance(obj, dict):
        raise DecodeError(f"{where}: expected an object")
    layers: dict[LayerId, Any] = {}
    for lid_raw, payload in _req_dict(obj, "layers", where).items():
        lid = _enum(LayerId, lid_raw, f"{where}.layers")
        if not isinstance(payload, dict):
            raise DecodeError(f"{where}.layers[{lid_raw}]: expected an object")
        layers[lid] = _PAYLOAD_DECODERS[lid](payload, f"{where}.layers[{lid_raw}]")
    box_raw = _req_dict(obj, "box", where)
    return FrameBundle(
        frame=_frame_from_dict(_req_dict(obj, "frame", where), f"{where}.frame"),
        events_fired=tuple(
            _event_from_dict(e, f"{where}.events_fired[{i}]")
            for i, e in enumerate(_req_list(obj, "events_fired", where))
        ),
        layers=layers,
        box=(
            _box_from_dict(box_raw.get("home"), f"{where}.box.home"),
            _box_from_dict(box_raw.get("away"), f"{where}.box.away"),
        ),
    )


def _geometry_from_dict(obj: Any, where: str = "geometry") -> CourtGeometry:
    if not isinstance(obj, dict):
        raise DecodeError(f"{where}: expected an object")
    hoops = _req_list(obj, "hoop_centers", where)
    if len(hoops) != 2:
        raise DecodeError(f"{where}: hoop_centers must hold two points")
    try:
        return CourtGeometry(
            length_ft=_req_num(obj, "length_ft", where),
            width_ft=_req_num(obj, "width_ft", where),
            hoop_centers=(_point_from(hoops[0], where), _point_from(hoops[1], where)),
            three_pt_arc_ft=_req_num(obj, "three_pt_arc_ft", where),
            corner_three_ft=_req_num(obj, "corner_three_ft", where),
            corner_depth_ft=_req_num(obj, "corner_depth_ft", where),
            rim_zone_ft=_req_num(obj, "rim_zone_ft", where),
        )
    except ValueError as e:
        raise DecodeError(f"{where}: {e}") from None


def _descriptor_from_dict(obj: Any, where: str) -> LayerDescriptor:
    if not isinstance(obj, dict):
        raise DecodeError(f"{where}: expected an object")
    marks = _req_list(obj, "marks", where)
    return LayerDescriptor(
        layer_id=_enum(LayerId, _req_str(obj, "layer_id", where), where),
        context_id=_req_str(obj, "context_id", where),
        scenario=_req_str(obj, "scenario", where),
        data=_req_str(obj, "data", where),
        task=_req_str(obj, "task", where),
        marks=frozenset(_enum(Mark, m, f"{where}.marks") for m in marks),
    )


def _layer_set_from(raw: Any, where: str) -> frozenset[LayerId]:
    if not isinstance(raw, list):
        raise DecodeError(f"{where}: expected a list of layer ids")
    return frozenset(_enum(LayerId, l, where) for l in raw)


def decode(data: bytes | str) -> Message:
    """Parse one protocol message; DecodeError carries the byte offset for
    malformed JSON and 0 for structural violations."""
    text = data.decode("utf-8", errors="replace") if isinstance(data, (bytes, bytearray)) else data
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise DecodeError(f"malformed JSON: {e.msg}", offset=e.pos) from None
    if not isinstance(obj, dict):
        raise DecodeError("message must be a JSON object")
    mtype = obj.get("type")
    if not isinstance(mtype, str):
        raise DecodeError("message lacks a string 'type' field")

    w = mtype
    if mtype == "HELLO":
        colors_raw = _req_dict(obj, "team_colors", w)
        colors = {_enum(Team, t, w): _req_str(colors_raw, t, w) for t in sorted(colors_raw)}
        return Hello(
            home_team=_req_str(obj, "home_team", w),
            away_team=_req_str(obj, "away_team", w),
            team_colors=colors,
            frame_rate_hz=_req_num(obj, "frame_rate_hz", w),
            first_t_ms=_req_int(obj, "first_t_ms", w),
            last_t_ms=_req_int(obj, "last_t_ms", w),
            geometry=_geometry_from_dict(obj.get("geometry")),
            layers=tuple(
                _descriptor_from_dict(d, f"{w}.layers[{i}]")
                for i, d in enumerate(_req_list(obj, "layers", w))
            ),
            enabled=_layer_set_from(obj.get("enabled"), w),
        )
    if mtype == "FRAME":
        return Frame(bundle=_bundle_from_dict(obj.get("bundle")))
    if mtype == "LAYER_STATE":
        return LayerState(
            enabled=_layer_set_from(obj.get("enabled"), w),
            playing=_req_bool(obj, "playing", w),
            rate=_req_num(obj, "rate", w),
        )
    if mtype == "EVENT":
        return Event(event=_event_from_dict(obj.get("event")))
    if mtype == "ERROR":
        return Error(code=_req_str(obj, "code", w), detail=_req_str(obj, "detail", w))
    if mtype == "END":
        return End()
    if mtype == "TOGGLE":
        return Toggle(
            layer_id=_enum(LayerId, _req_str(obj, "layer_id", w), w), on=_req_bool(obj, "on", w)
        )
    if mtype == "PLAY":
        return Play()
    if mtype == "PAUSE":
        return Pause()
    if mtype == "SEEK":
        return Seek(t_ms=_req_int(obj, "t_ms", w))
    if mtype == "RATE":
        return Rate(multiplier=_req_num(obj, "multiplier", w))
    if mtype == "PING":
        return Ping()
    raise DecodeError(f"unknown message type {mtype!r}")


# --- server ---


class _Client:
    """One connected client: an outbox the driver writes into."""

    __slots__ = ("outbox",)

    def __init__(self) -> None:
        self.outbox: asyncio.Queue[str] = asyncio.Queue()


_STOP = object()


class StreamServer:
    """Fans a single Session out to any number of protocol clients.

    All session mutation happens on the driver side: commands are queued
    and applied at frame boundaries, never mid-compose. ``advance`` is the
    manual crank for tests and exports; ``run`` is the paced driver used
    by the real server.
    """

    def __init__(self, session: Session, *, paced: bool = True) -> None:
        self.session = session
        self.paced = paced
        self._clients: list[_Client] = []
        self._commands: asyncio.Queue = asyncio.Queue()
        self._ws_server = None
        self._driver: asyncio.Task | None = None

    # -- outbound --

    def _send(self, client: _Client, msg: ServerMessage) -> None:
        client.outbox.put_nowait(encode(msg).decode("utf-8"))

    def _broadcast(self, msg: ServerMessage) -> None:
        text = encode(msg).decode("utf-8")
        for c in self._clients:
            c.outbox.put_nowait(text)

    def hello(self) -> Hello:
        ds: ValidatedDataset = self.session.dataset
        return Hello(
            home_team=ds.meta.home_team,
            away_team=ds.meta.away_team,
            team_colors=dict(ds.meta.team_colors),
            frame_rate_hz=ds.meta.frame_rate_hz,
            first_t_ms=ds.first_t_ms,
            last_t_ms=ds.last_t_ms,
            geometry=ds.meta.geometry,
            layers=describe_layers(),
            enabled=frozenset(self.session.enabled_layers),
        )

    def layer_state(self) -> LayerState:
        s = self.session
        return LayerState(enabled=frozenset(s.enabled_layers), playing=s.playing, rate=s.rate)

    # -- connections --

    def attach(self) -> _Client:
        """Register a client and greet it with HELLO plus a state snapshot."""
        client = _Client()
        self._clients.append(client)
        self._send(client, self.hello())
        self._send(client, Frame(bundle=self.session.compose()))
        return client

    def detach(self, client: _Client) -> None:
        if client in self._clients:
            self._clients.remove(client)

    def connect(self) -> "LoopbackConnection":
        return LoopbackConnection(self, self.attach())

    # -- inbound --

    def submit_raw(self, client: _Client, raw: bytes | str) -> None:
        """Decode one inbound message; bad bytes answer the sender without
        touching the session."""
        try:
            msg = decode(raw)
        except DecodeError as e:
            # e.detail already names the byte offset
            self._send(client, Error(code=e.code, detail=e.detail))
            return
        if not isinstance(msg, (Toggle, Play, Pause, Seek, Rate, Ping)):
            self._send(client, Error(code="INVALID_COMMAND", detail=f"{type(msg).__name__} is not a client command"))
            return
        self._commands.put_nowait((client, msg))

    def _apply(self, client: _Client, cmd: ClientCommand) -> None:
        s = self.session
        try:
            if isinstance(cmd, Toggle):
                s.toggle(cmd.layer_id, cmd.on)
                self._broadcast(self.layer_state())
            elif isinstance(cmd, Play):
                s.playing = True
                self._broadcast(self.layer_state())
            elif isinstance(cmd, Pause):
                s.playing = False
                self._broadcast(self.layer_state())
            elif isinstance(cmd, Rate):
                s.set_rate(cmd.multiplier)
                self._broadcast(self.layer_state())
            elif isinstance(cmd, Seek):
                s.seek(cmd.t_ms)
                self._broadcast(Frame(bundle=s.compose()))
            elif isinstance(cmd, Ping):
                self._send(client, self.layer_state())
        except EngineError as e:
            self._send(client, Error(code=e.code, detail=e.detail))

    def _drain_commands(self) -> None:
        while True:
            try:
                client, cmd = self._commands.get_nowait()
            except asyncio.QueueEmpty:
                return
            self._apply(client, cmd)

    # -- driving --

    def _step_and_broadcast(self) -> bool:
        s = self.session
        if s.at_end:
            return False
        bundle = s.step()
        for ev in bundle.events_fired:
            self._broadcast(Event(event=ev))
        self._broadcast(Frame(bundle=bundle))
        if s.at_end:
            self._broadcast(End())
            s.playing = False
        return True

    async def advance(self) -> bool:
        """Apply queued commands at this boundary, then emit one frame.

        Returns False once the final frame has been sent (commands are
        still applied, so a client may seek backwards and resume).
        """
        self._drain_commands()
        return self._step_and_broadcast()

    async def run(self) -> None:
        """Paced driver: frames flow while playing, commands any time."""
        loop = asyncio.get_running_loop()
        while True:
            s = self.session
            if s.playing and not s.at_end:
                gap_ms = s.dataset.tracking[s.cursor + 1].t_ms - s.clock_ms
                deadline = loop.time() + (gap_ms / 1000.0 / s.rate if self.paced else 0.0)
                stepped = False
                while True:
                    timeout = deadline - loop.time()
                    if timeout <= 0:
                        self._step_and_broadcast()
                        stepped = True
                        break
                    try:
                        item = await asyncio.wait_for(self._commands.get(), timeout)
                    except asyncio.TimeoutError:
                        continue
                    if item is _STOP:
                        return
                    self._apply(*item)
                    if not (s.playing and not s.at_end):
                        break
                if not stepped:
                    continue
            else:
                item = await self._commands.get()
                if item is _STOP:
                    return
                self._apply(*item)

    def start(self) -> None:
        if self._driver is None or self._driver.done():
            self._driver = asyncio.create_task(self.run())

    async def stop(self) -> None:
        self._broadcast(End())
        if self._driver is not None and not self._driver.done():
            self._commands.put_nowait(_STOP)
            await self._driver
        self._driver = None

    # -- websocket transport --

    async def _pump_outbox(self, client: _Client, ws) -> None:
        try:
            while True:
                await ws.send(await client.outbox.get())
        except Exception:
            pass  # receiver loop notices the closed socket and detaches

    async def _handle_ws(self, ws) -> None:
        import websockets

        path = ws.request.path.split("?", 1)[0]
        if path != DEFAULT_PATH:
            await ws.close(code=1008, reason=f"unknown path {path}")
            return
        client = self.attach()
        pump = asyncio.create_task(self._pump_outbox(client, ws))
        try:
            async for raw in ws:
                self.submit_raw(client, raw)
        except websockets.exceptions.ConnectionClosed:
            pass
        finally:
            pump.cancel()
            self.detach(client)

    async def serve(self, host: str = "127.0.0.1", port: int = 8765):
        """Bind the WebSocket endpoint and start the paced driver."""
        import websockets

        try:
            self._ws_server = await websockets.serve(self._handle_ws, host, port)
        except OSError as e:
            raise EngineError("BIND_FAILURE", f"cannot bind {host}:{port}: {e}") from None
        self.start()
        log.info("serving ws://%s:%d%s", host, port, DEFAULT_PATH)
        return self._ws_server

    async def shutdown(self) -> None:
        await self.stop()
        if self._ws_server is not None:
            self._ws_server.close()
            await self._ws_server.wait_closed()
            self._ws_server = None


class LoopbackConnection:
    """In-process client speaking the same encoded protocol as a socket."""

    def __init__(self, server: StreamServer, client: _Client) -> None:
        self._server = server
        self._client = client

    def send(self, msg: ClientCommand | bytes | str) -> None:
        raw = msg if isinstance(msg, (bytes, str)) else encode(msg)
        self._server.submit_raw(self._client, raw)

    async def recv(self, timeout: float = 5.0) -> ServerMessage:
        text = await asyncio.wait_for(self._client.outbox.get(), timeout)
        msg = decode(text)
        assert isinstance(msg, (Hello, Frame, LayerState, Event, Error, End))
        return msg

    def drain(self) -> list[ServerMessage]:
        out = []
        while True:
            try:
                out.append(decode(self._client.outbox.get_nowait()))
            except asyncio.QueueEmpty:
                return out

    @property
    def pending(self) -> int:
        return self._client.outbox.qsize()

    def close(self) -> None:
        self._server.detach(self._client)
