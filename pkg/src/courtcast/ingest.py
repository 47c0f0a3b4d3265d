"""Dataset parsing and validation.

Four inputs feed a replay: a tracking series (JSONL, one frame per line),
an event log (JSONL), a zoned shot table (one JSON document), and a manifest
(one JSON document naming the other files plus game metadata). Everything is
checked here, before a session is built; parsing is total — each record
either becomes a value or raises a :class:`DatasetError` naming the line.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import DatasetError
from .model import (
    ALL_ZONES,
    Action,
    CourtGeometry,
    GameEvent,
    LeagueAverages,
    MARKER_ACTIONS,
    Outcome,
    PlayerPosition,
    REGULATION,
    SCORING_ACTIONS,
    SHOT_ACTIONS,
    Team,
    TrackingFrame,
    Zone,
    ZoneCounts,
    ZonedShotTable,
)

#: Allowed clock drift between the event feed and the tracking feed.
EVENT_TIME_TOLERANCE_MS = 2000

_HEX_COLOR = re.compile(r"^#[0-9a-fA-F]{6}$")


@dataclass(frozen=True)
class GameMeta:
    """Game-level configuration from the manifest."""

    home_team: str
    away_team: str
    team_colors: dict[Team, str]
    attacking_hoop_by_period: dict[int, int]
    frame_rate_hz: float
    opening_possession_by_period: dict[int, Team] = field(default_factory=dict)
    league_averages: LeagueAverages = LeagueAverages()
    geometry: CourtGeometry = REGULATION

    def attacking_hoop_index(self, team: Team, period: int) -> int:
        """Which hoop (index into geometry.hoop_centers) ``team`` attacks."""
        explicit = self.attacking_hoop_by_period.get(period)
        if explicit is None:
            # Halves swap ends: periods 1-2 follow period 1, later periods flip.
            base = self.attacking_hoop_by_period[1]
            explicit = base if period <= 2 else 1 - base
        return explicit if team is Team.HOME else 1 - explicit

    def attacking_hoop(self, team: Team, period: int) -> tuple[float, float]:
        return self.geometry.hoop_centers[self.attacking_hoop_index(team, period)]


@dataclass(frozen=True)
class DatasetManifest:
    """Paths to the three data files plus game metadata."""

    tracking_path: Path
    events_path: Path
    shot_table_path: Path
    meta: GameMeta


@dataclass(frozen=True)
class ValidatedDataset:
    """A fully cross-checked game, ready to replay."""

    tracking: tuple[TrackingFrame, ...]
    events: tuple[GameEvent, ...]
    shots: ZonedShotTable
    meta: GameMeta

    @property
    def first_t_ms(self) -> int:
        return self.tracking[0].t_ms

    @property
    def last_t_ms(self) -> int:
        return self.tracking[-1].t_ms


def _lines(source: str | Iterable[str]) -> Iterable[tuple[int, str]]:
    """Yield (1-based line number, stripped line), skipping blank lines."""
    it = source.splitlines() if isinstance(source, str) else source
    for n, raw in enumerate(it, start=1):
        line = raw.strip()
        if line:
            yield n, line


def _record(line: str, n: int) -> dict:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DatasetError("MALFORMED_RECORD", f"invalid JSON: {exc.msg}", line=n)
    if not isinstance(rec, dict):
        raise DatasetError("MALFORMED_RECORD", "record is not a JSON object", line=n)
    return rec


def _num(rec: dict, key: str, n: int) -> float:
    v = rec.get(key)
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
        raise DatasetError("MALFORMED_RECORD", f"field {key!r} must be a finite number", line=n)
    return float(v)


def _int(rec: dict, key: str, n: int) -> int:
    v = rec.get(key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise DatasetError("MALFORMED_RECORD", f"field {key!r} must be an integer", line=n)
    return v


def parse_tracking(
    source: str | Iterable[str], geometry: CourtGeometry = REGULATION
) -> list[TrackingFrame]:
    """Parse JSONL tracking records into frames, enforcing frame invariants.

    Frames must arrive in strictly increasing ``t_ms`` order with exactly
    five players per team, every position inside the court, and a
    non-negative ball height.
    """
    frames: list[TrackingFrame] = []
    last_t: int | None = None
    for n, line in _lines(source):
        rec = _record(line, n)
        t_ms = _int(rec, "t_ms", n)
        period = _int(rec, "period", n)
        if period < 1:
            raise DatasetError("MALFORMED_RECORD", f"period must be >= 1, got {period}", line=n)
        game_clock_s = _num(rec, "game_clock_s", n)
        ball = rec.get("ball")
        if not (isinstance(ball, list) and len(ball) == 3):
            raise DatasetError("MALFORMED_RECORD", "field 'ball' must be [x, y, z]", line=n)
        bx, by, bz = (_num({"v": c}, "v", n) for c in ball)
        if not geometry.contains(bx, by) or bz < 0:
            raise DatasetError("MALFORMED_RECORD", f"ball out of bounds: {ball}", line=n)

        raw_players = rec.get("players")
        if not isinstance(raw_players, list):
            raise DatasetError("MALFORMED_RECORD", "field 'players' must be a list", line=n)
        if len(raw_players) != 10:
            raise DatasetError(
                "WRONG_PLAYER_COUNT", f"expected 10 players, got {len(raw_players)}", line=n
            )
        players = []
        for entry in raw_players:
            if not isinstance(entry, dict):
                raise DatasetError("MALFORMED_RECORD", "player entry must be an object", line=n)
            try:
                team = Team(entry.get("team"))
            except ValueError:
                raise DatasetError(
                    "MALFORMED_RECORD", f"player team must be HOME or AWAY: {entry.get('team')!r}", line=n
                )
            pid = entry.get("id")
            if not isinstance(pid, str) or not pid:
                raise DatasetError("MALFORMED_RECORD", "player id must be a non-empty string", line=n)
            x = _num(entry, "x", n)
            y = _num(entry, "y", n)
            if not geometry.contains(x, y):
                raise DatasetError("MALFORMED_RECORD", f"player {pid} out of bounds at ({x}, {y})", line=n)
            players.append(PlayerPosition(team=team, player_id=pid, x=x, y=y))
        for team in Team:
            count = sum(1 for p in players if p.team is team)
            if count != 5:
                raise DatasetError(
                    "WRONG_PLAYER_COUNT", f"{team.value} has {count} players, expected 5", line=n
                )
        if len({p.player_id for p in players}) != 10:
            raise DatasetError("MALFORMED_RECORD", "duplicate player id in frame", line=n)

        if last_t is not None and t_ms <= last_t:
            raise DatasetError(
                "NON_MONOTONIC_TIME", f"t_ms {t_ms} does not increase past {last_t}", line=n
            )
        last_t = t_ms
        frames.append(
            TrackingFrame(
                t_ms=t_ms,
                period=period,
                game_clock_s=game_clock_s,
                ball=(bx, by, bz),
                players=tuple(players),
            )
        )
    return frames


def parse_events(source: str | Iterable[str]) -> list[GameEvent]:
    """Parse JSONL event records, returned sorted by time (stable).

    Scoring actions must carry MADE or MISSED, all others NONE; shot events
    must carry a location. Period markers may leave team and player empty.
    """
    events: list[GameEvent] = []
    for n, line in _lines(source):
        rec = _record(line, n)
        t_ms = _int(rec, "t_ms", n)
        try:
            action = Action(rec.get("action"))
        except ValueError:
            raise DatasetError("MALFORMED_RECORD", f"unknown action {rec.get('action')!r}", line=n)
        try:
            outcome = Outcome(rec.get("outcome"))
        except ValueError:
            raise DatasetError("MALFORMED_RECORD", f"unknown outcome {rec.get('outcome')!r}", line=n)

        raw_team = rec.get("team")
        player = rec.get("player")
        if not isinstance(player, str):
            raise DatasetError("MALFORMED_RECORD", "field 'player' must be a string", line=n)
        team: Team | None
        if action in MARKER_ACTIONS and raw_team in ("", None):
            team = None
        else:
            try:
                team = Team(raw_team)
            except ValueError:
                raise DatasetError("MALFORMED_RECORD", f"team must be HOME or AWAY: {raw_team!r}", line=n)
            if not player and action not in MARKER_ACTIONS:
                raise DatasetError("MALFORMED_RECORD", f"{action.value} requires a player", line=n)

        if action in SCORING_ACTIONS:
            if outcome is Outcome.NONE:
                raise DatasetError("ILLEGAL_OUTCOME", f"{action.value} requires MADE or MISSED", line=n)
        elif outcome is not Outcome.NONE:
            raise DatasetError(
                "ILLEGAL_OUTCOME", f"{action.value} cannot have outcome {outcome.value}", line=n
            )

        loc = None
        if "loc" in rec and rec["loc"] is not None:
            raw_loc = rec["loc"]
            if not (isinstance(raw_loc, list) and len(raw_loc) == 2):
                raise DatasetError("MALFORMED_RECORD", "field 'loc' must be [x, y]", line=n)
            loc = (_num({"v": raw_loc[0]}, "v", n), _num({"v": raw_loc[1]}, "v", n))
        if action in SHOT_ACTIONS and loc is None:
            raise DatasetError("MISSING_SHOT_LOCATION", f"{action.value} requires a location", line=n)

        events.append(
            GameEvent(t_ms=t_ms, team=team, player_id=player, action=action, outcome=outcome, loc=loc)
        )
    events.sort(key=lambda e: e.t_ms)
    return events


def parse_shot_table(source: str) -> ZonedShotTable:
    """Parse the zoned shot table document.

    Requires made <= attempts for every player/zone pair and a league
    percentage for all seven zones.
    """
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise DatasetError("MALFORMED_RECORD", f"invalid JSON: {exc.msg}")
    if not isinstance(doc, dict):
        raise DatasetError("MALFORMED_RECORD", "shot table must be a JSON object")

    raw_players = doc.get("players")
    if not isinstance(raw_players, dict):
        raise DatasetError("MALFORMED_RECORD", "field 'players' must be an object")
    players: dict[str, dict[Zone, ZoneCounts]] = {}
    for pid, zones in raw_players.items():
        if not isinstance(zones, dict):
            raise DatasetError("MALFORMED_RECORD", f"player {pid}: zones must be an object")
        table: dict[Zone, ZoneCounts] = {}
        for zname, counts in zones.items():
            try:
                zone = Zone(zname)
            except ValueError:
                raise DatasetError("MALFORMED_RECORD", f"player {pid}: unknown zone {zname!r}")
            if not isinstance(counts, dict):
                raise DatasetError("MALFORMED_RECORD", f"player {pid}/{zname}: counts must be an object")
            made = counts.get("made")
            att = counts.get("att")
            if not all(isinstance(v, int) and not isinstance(v, bool) and v >= 0 for v in (made, att)):
                raise DatasetError(
                    "MALFORMED_RECORD", f"player {pid}/{zname}: made/att must be non-negative integers"
                )
            if made > att:
                raise DatasetError(
                    "MADE_EXCEEDS_ATTEMPTS", f"player {pid}/{zname}: made {made} > attempts {att}"
                )
            table[zone] = ZoneCounts(made=made, attempts=att)
        players[pid] = table

    raw_league = doc.get("league")
    if not isinstance(raw_league, dict):
        raise DatasetError("MALFORMED_RECORD", "field 'league' must be an object")
    league: dict[Zone, float] = {}
    for zname, pct in raw_league.items():
        try:
            zone = Zone(zname)
        except ValueError:
            raise DatasetError("MALFORMED_RECORD", f"league: unknown zone {zname!r}")
        if not isinstance(pct, (int, float)) or isinstance(pct, bool) or not (0 <= pct <= 100):
            raise DatasetError("MALFORMED_RECORD", f"league {zname}: pct must be within 0..100")
        league[zone] = float(pct)
    for zone in ALL_ZONES:
        if zone not in league:
            raise DatasetError("MISSING_LEAGUE_ZONE", f"league table missing zone {zone.value}")
    return ZonedShotTable(players=players, league=league)


def validate_dataset(
    tracking: list[TrackingFrame],
    events: list[GameEvent],
    shots: ZonedShotTable,
    meta: GameMeta,
) -> ValidatedDataset:
    """Cross-check the parsed parts and assemble a replayable dataset.

    Every event actor must appear in tracking, shot locations must be on the
    court, and event times must fall within the tracking span plus a
    +-2000 ms feed-synchronization tolerance.
    """
    known_players: set[str] = set()
    for frame in tracking:
        for p in frame.players:
            known_players.add(p.player_id)

    if tracking:
        lo = tracking[0].t_ms - EVENT_TIME_TOLERANCE_MS
        hi = tracking[-1].t_ms + EVENT_TIME_TOLERANCE_MS
    else:
        lo, hi = 0, -1  # only an event-free dataset can pass
    geometry = meta.geometry
    for ev in events:
        if ev.player_id and ev.player_id not in known_players:
            raise DatasetError("UNKNOWN_PLAYER", f"event player {ev.player_id!r} never appears in tracking")
        if not (lo <= ev.t_ms <= hi):
            raise DatasetError(
                "EVENT_OUT_OF_TIMESPAN",
                f"event at t_ms {ev.t_ms} outside tracking span [{lo}, {hi}]",
            )
        if ev.action in SHOT_ACTIONS and ev.loc is not None:
            if not geometry.contains(*ev.loc):
                raise DatasetError("SHOT_OUT_OF_BOUNDS", f"shot location {ev.loc} outside court")

    return ValidatedDataset(
        tracking=tuple(tracking), events=tuple(events), shots=shots, meta=meta
    )


# --- canonical serialization (round-trips through the parsers) ---


def serialize_tracking(frames: Iterable[TrackingFrame]) -> str:
    lines = []
    for f in frames:
        lines.append(
            json.dumps(
                {
                    "t_ms": f.t_ms,
                    "period": f.period,
                    "game_clock_s": f.game_clock_s,
                    "ball": list(f.ball),
                    "players": [
                        {"team": p.team.value, "id": p.player_id, "x": p.x, "y": p.y}
                        for p in f.players
                    ],
                },
                separators=(",", ":"),
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


def serialize_events(events: Iterable[GameEvent]) -> str:
    lines = []
    for e in events:
        rec: dict = {
            "t_ms": e.t_ms,
            "team": e.team.value if e.team else "",
            "player": e.player_id,
            "action": e.action.value,
            "outcome": e.outcome.value,
        }
        if e.loc is not None:
            rec["loc"] = list(e.loc)
        lines.append(json.dumps(rec, separators=(",", ":")))
    return "\n".join(lines) + ("\n" if lines else "")


def serialize_shot_table(table: ZonedShotTable) -> str:
    return json.dumps(
        {
            "players": {
                pid: {z.value: {"made": c.made, "att": c.attempts} for z, c in sorted(
                    zones.items(), key=lambda kv: kv[0].value
                )}
                for pid, zones in sorted(table.players.items())
            },
            "league": {z.value: pct for z, pct in sorted(table.league.items(), key=lambda kv: kv[0].value)},
        },
        separators=(",", ":"),
        sort_keys=True,
    )


# --- manifest ---


def _parse_geometry(raw: dict) -> CourtGeometry:
    kwargs: dict = {}
    for key in (
        "length_ft",
        "width_ft",
        "three_pt_arc_ft",
        "corner_three_ft",
        "corner_depth_ft",
        "rim_zone_ft",
    ):
        if key in raw:
            kwargs[key] = float(raw[key])
    if "hoop_centers" in raw:
        hc = raw["hoop_centers"]
        kwargs["hoop_centers"] = ((float(hc[0][0]), float(hc[0][1])), (float(hc[1][0]), float(hc[1][1])))
    try:
        return CourtGeometry(**kwargs)
    except (ValueError, TypeError, IndexError) as exc:
        raise DatasetError("MALFORMED_RECORD", f"invalid geometry override: {exc}")


def parse_manifest(source: str, base_dir: Path | None = None) -> DatasetManifest:
    """Parse and validate the manifest document.

    File paths are resolved relative to ``base_dir`` (the manifest's own
    directory when loaded from disk).
    """
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise DatasetError("MALFORMED_RECORD", f"invalid manifest JSON: {exc.msg}")
    if not isinstance(doc, dict):
        raise DatasetError("MALFORMED_RECORD", "manifest must be a JSON object")

    base = base_dir or Path(".")
    paths = {}
    for key in ("tracking", "events", "shot_table"):
        v = doc.get(key)
        if not isinstance(v, str) or not v:
            raise DatasetError("MALFORMED_RECORD", f"manifest field {key!r} must be a path string")
        paths[key] = base / v

    home = doc.get("home_team")
    away = doc.get("away_team")
    if not isinstance(home, str) or not isinstance(away, str) or not home or not away:
        raise DatasetError("MALFORMED_RECORD", "manifest must name home_team and away_team")

    raw_colors = doc.get("team_colors")
    if not isinstance(raw_colors, dict):
        raise DatasetError("MALFORMED_RECORD", "manifest field 'team_colors' must be an object")
    colors: dict[Team, str] = {}
    for side in Team:
        c = raw_colors.get(side.value)
        if not isinstance(c, str) or not _HEX_COLOR.match(c):
            raise DatasetError("MALFORMED_RECORD", f"team color for {side.value} must be #RRGGBB")
        colors[side] = c.lower()
    if colors[Team.HOME] == colors[Team.AWAY]:
        raise DatasetError("MALFORMED_RECORD", "team colors must be distinct")

    raw_hoops = doc.get("attacking_hoop_by_period")
    if not isinstance(raw_hoops, dict) or "1" not in raw_hoops:
        raise DatasetError(
            "MALFORMED_RECORD", "attacking_hoop_by_period must map periods and include period 1"
        )
    hoops: dict[int, int] = {}
    for k, v in raw_hoops.items():
        if not k.isdigit() or v not in (0, 1):
            raise DatasetError("MALFORMED_RECORD", f"attacking hoop entry {k!r}: {v!r} must be 0 or 1")
        hoops[int(k)] = v

    frame_rate = doc.get("frame_rate_hz")
    if not isinstance(frame_rate, (int, float)) or isinstance(frame_rate, bool) or frame_rate <= 0:
        raise DatasetError("MALFORMED_RECORD", "frame_rate_hz must be a positive number")

    openings: dict[int, Team] = {}
    for k, v in (doc.get("opening_possession_by_period") or {}).items():
        if not k.isdigit() or v not in ("HOME", "AWAY"):
            raise DatasetError("MALFORMED_RECORD", f"opening possession entry {k!r}: {v!r}")
        openings[int(k)] = Team(v)

    raw_league = doc.get("league_averages") or {}
    if not isinstance(raw_league, dict):
        raise DatasetError("MALFORMED_RECORD", "league_averages must be an object")
    defaults = LeagueAverages()
    league = LeagueAverages(
        fg_pct=float(raw_league.get("fg_pct", defaults.fg_pct)),
        tp_pct=float(raw_league.get("tp_pct", defaults.tp_pct)),
        ft_pct=float(raw_league.get("ft_pct", defaults.ft_pct)),
    )

    geometry = _parse_geometry(doc.get("geometry") or {})

    meta = GameMeta(
        home_team=home,
        away_team=away,
        team_colors=colors,
        attacking_hoop_by_period=hoops,
        frame_rate_hz=float(frame_rate),
        opening_possession_by_period=openings,
        league_averages=league,
        geometry=geometry,
    )
    return DatasetManifest(
        tracking_path=paths["tracking"],
        events_path=paths["events"],
        shot_table_path=paths["shot_table"],
        meta=meta,
    )


def load_dataset(manifest_path: str | Path) -> ValidatedDataset:
    """Load, parse, and validate a complete dataset from a manifest file."""
    manifest_path = Path(manifest_path)
    manifest = parse_manifest(manifest_path.read_text(encoding="utf-8"), manifest_path.parent)
    meta = manifest.meta
    tracking = parse_tracking(
        manifest.tracking_path.read_text(encoding="utf-8"), meta.geometry
    )
    events = parse_events(manifest.events_path.read_text(encoding="utf-8"))
    shots = parse_shot_table(manifest.shot_table_path.read_text(encoding="utf-8"))
    return validate_dataset(tracking, events, shots, meta)
