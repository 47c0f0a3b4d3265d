"""Per-frame spatial analytics and stat derivation.

Everything here is a pure function of its inputs: zone classification,
ball-handler detection, defender roles, open-space radii, movement trails,
possession inference, box-score accumulation, and the five layer payloads.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import EngineError
from .model import (
    ALL_ZONES,
    Action,
    BoxScore,
    ColorBin,
    CourtGeometry,
    GameEvent,
    LeagueAverages,
    Outcome,
    Point,
    REGULATION,
    SHOT_ACTIONS,
    Team,
    TrackingFrame,
    Zone,
    ZonedShotTable,
    color_bin,
)

# Distance rules, all in feet.
BALL_DEFENDER_FT = 6.0
PASSED_BALL_DEFENDER_FT = 3.0
HELPER_FT = 12.0
HANDLER_BALL_FT = 3.0
HANDLER_MAX_BALL_Z_FT = 10.0
OPEN_SPACE_CAP_FT = 8.0
MIN_FOCUS_AREA_SQFT = 1.0
POSSESSION_BALL_FT = 3.0

# Timing rules.
STATIC_LABEL_TTL_MS = 5000
TRAIL_WINDOW_MS = 6000
TRAIL_SAMPLE_MS = 200
POSSESSION_SUSTAIN_FRAMES = 3

# Hot/cold tolerance in percentage points.
HOT_COLD_EPS = 0.001


def _dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


class Side(Enum):
    """Which half of the court width-wise, split at the midline."""

    LOW_Y = "LOW_Y"
    HIGH_Y = "HIGH_Y"


class HotMark(Enum):
    HOT = "HOT"
    COLD = "COLD"
    NEUTRAL = "NEUTRAL"


# --- layer payloads ---


@dataclass(frozen=True, slots=True)
class StaticShotLabel:
    """Outcome label pinned at a shot location for a fixed time to live."""

    loc: Point
    outcome: Outcome
    game_fg_pct: float
    season_fg_pct: float
    created_at_ms: int
    expires_at_ms: int

    def __post_init__(self) -> None:
        if self.expires_at_ms - self.created_at_ms != STATIC_LABEL_TTL_MS:
            raise ValueError("label lifetime must be exactly the fixed TTL")


@dataclass(frozen=True, slots=True)
class DynamicShotLabel:
    """Zone shot percentage floating above a player, marked hot or cold."""

    player_id: str
    zone: Zone
    zone_pct: float
    mark: HotMark


@dataclass(frozen=True, slots=True)
class ShotLabelPayload:
    static: tuple[StaticShotLabel, ...]
    dynamic: tuple[DynamicShotLabel, ...]


@dataclass(frozen=True, slots=True)
class OffenseEntry:
    trail: tuple[Point, ...]
    open_radius_ft: float
    is_handler: bool


@dataclass(frozen=True)
class OffensePayload:
    players: dict[str, OffenseEntry]


@dataclass(frozen=True, slots=True)
class DefenseAssignment:
    """Defender roles relative to the ball handler.

    Ball defenders are inside the effective-defense distance (tighter once
    beaten), helpers inside the doubled distance. The focus area is the
    convex hull over strong-side key defenders (plus any ball defender)
    whenever at least three enclose a real area.
    """

    ball_defenders: frozenset[str]
    helpers: frozenset[str]
    connector_lines: tuple[tuple[str, str], ...]
    focus_area: tuple[Point, ...] | None


@dataclass(frozen=True, slots=True)
class ShotMarker:
    loc: Point
    made: bool


@dataclass(frozen=True)
class ShotChartPayload:
    player_id: str
    zone_bins: dict[Zone, ColorBin]
    shot_markers: tuple[ShotMarker, ...]
    panel: BoxScore


@dataclass(frozen=True, slots=True)
class StatRow:
    """One comparison row; ``leader`` is None on an exact tie."""

    name: str
    home_value: float
    away_value: float
    leader: Team | None
    home_bin: ColorBin | None = None
    away_bin: ColorBin | None = None


@dataclass(frozen=True, slots=True)
class TeamPanelPayload:
    rows: tuple[StatRow, ...]


# --- court zones ---


def classify_zone(p: Point, hoop: Point, geom: CourtGeometry = REGULATION) -> Zone:
    """Assign a half-court point to one of the seven shot zones.

    Within the rim radius of the hoop it is RIM. Otherwise, inside the
    corner strip (within corner depth of the baseline) the corner-three
    sideways distance decides CORNER3 vs MID; above the break the arc
    radius decides THREE vs MID. LEFT is the attacking team's left facing
    the hoop; points exactly on the midline count as LEFT.
    """
    if not geom.in_attacking_half(p, hoop):
        raise EngineError("POINT_IN_WRONG_HALF", f"point {p} not in the half attacking {hoop}")
    if _dist(p, hoop) <= geom.rim_zone_ft:
        return Zone.RIM
    # Facing the hoop from midcourt: for the low-x hoop, left is high y.
    left = p[1] >= geom.mid_y if hoop[0] < geom.mid_x else p[1] <= geom.mid_y
    in_corner_strip = abs(p[0] - geom.baseline_x(hoop)) <= geom.corner_depth_ft
    if in_corner_strip:
        if abs(p[1] - hoop[1]) >= geom.corner_three_ft:
            return Zone.CORNER3_LEFT if left else Zone.CORNER3_RIGHT
        return Zone.MID_LEFT if left else Zone.MID_RIGHT
    if _dist(p, hoop) > geom.three_pt_arc_ft:
        return Zone.THREE_LEFT if left else Zone.THREE_RIGHT
    return Zone.MID_LEFT if left else Zone.MID_RIGHT


# --- ball handler and defense ---


def ball_handler(frame: TrackingFrame, offense: Team) -> str | None:
    """The offense player in control of the ball, if any.

    Nearest offense player to the ball's floor position wins when within
    the control radius and the ball is below held height; ties break to the
    smaller player id. A high or distant ball (shot, pass, loose) has no
    handler.
    """
    if frame.ball[2] > HANDLER_MAX_BALL_Z_FT:
        return None
    ball_xy = (frame.ball[0], frame.ball[1])
    best: tuple[float, str] | None = None
    for p in frame.team_players(offense):
        d = _dist(p.point, ball_xy)
        if d <= HANDLER_BALL_FT and (best is None or (d, p.player_id) < best):
            best = (d, p.player_id)
    return best[1] if best else None


def strong_side(handler: Point, geom: CourtGeometry = REGULATION) -> frozenset[Side]:
    """The ball handler's side(s) of the court; the exact midline is both."""
    if handler[1] < geom.mid_y:
        return frozenset({Side.LOW_Y})
    if handler[1] > geom.mid_y:
        return frozenset({Side.HIGH_Y})
    return frozenset({Side.LOW_Y, Side.HIGH_Y})


def _point_sides(p: Point, geom: CourtGeometry) -> frozenset[Side]:
    return strong_side(p, geom)


def convex_hull(points: Sequence[Point]) -> tuple[Point, ...]:
    """Strictly convex hull in counter-clockwise order (monotone chain).

    Starts at the lexicographically smallest vertex; collinear boundary
    points are dropped. Fewer than three distinct points hull to themselves.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return tuple(pts)

    def cross(o: Point, a: Point, b: Point) -> float:
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return tuple(lower[:-1] + upper[:-1])


def polygon_area(vertices: Sequence[Point]) -> float:
    """Shoelace area of a simple polygon."""
    n = len(vertices)
    if n < 3:
        return 0.0
    acc = 0.0
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return abs(acc) / 2.0


def focus_area(key_defenders: Sequence[Point]) -> tuple[Point, ...] | None:
    """Convex hull over key defenders, or None when it encloses no real area."""
    if len(key_defenders) < 3:
        return None
    hull = convex_hull(key_defenders)
    if len(hull) < 3 or polygon_area(hull) < MIN_FOCUS_AREA_SQFT:
        return None
    return hull


def classify_defenders(
    frame: TrackingFrame,
    handler_id: str,
    hoop: Point,
    geom: CourtGeometry = REGULATION,
) -> DefenseAssignment:
    """Classify every defender against the ball handler.

    A defender within the effective-defense distance of the handler is a
    ball defender; the distance tightens from 6 ft to 3 ft once the handler
    is past them (defender farther from the attacked hoop than the handler).
    Anyone else within 12 ft is a helper. Each ball defender gets a
    connector line to the handler. Strong-side key defenders (ball
    defenders counting from either side) enclose the focus area when at
    least three are present.
    """
    handler = frame.find(handler_id)
    if handler is None:
        raise EngineError("HANDLER_NOT_IN_FRAME", f"no player {handler_id!r} in frame")
    defense = handler.team.other
    handler_to_hoop = _dist(handler.point, hoop)
    strong = strong_side(handler.point, geom)

    ball_defenders: set[str] = set()
    helpers: set[str] = set()
    hull_points: list[Point] = []
    for d in sorted(frame.team_players(defense), key=lambda p: p.player_id):
        r = _dist(d.point, handler.point)
        passed = _dist(d.point, hoop) > handler_to_hoop
        threshold = PASSED_BALL_DEFENDER_FT if passed else BALL_DEFENDER_FT
        if r <= threshold:
            ball_defenders.add(d.player_id)
        elif r <= HELPER_FT:
            helpers.add(d.player_id)
        else:
            continue
        if d.player_id in ball_defenders or (_point_sides(d.point, geom) & strong):
            hull_points.append(d.point)

    return DefenseAssignment(
        ball_defenders=frozenset(ball_defenders),
        helpers=frozenset(helpers),
        connector_lines=tuple((did, handler_id) for did in sorted(ball_defenders)),
        focus_area=focus_area(hull_points),
    )


# --- offense ---


def open_space_radius(frame: TrackingFrame, player_id: str) -> float:
    """Open-space circle radius: half the nearest-defender distance, capped."""
    player = frame.find(player_id)
    if player is None:
        raise EngineError("PLAYER_NOT_IN_FRAME", f"no player {player_id!r} in frame")
    opponents = frame.team_players(player.team.other)
    if not opponents:
        return OPEN_SPACE_CAP_FT
    nearest = min(_dist(player.point, d.point) for d in opponents)
    return min(nearest / 2.0, OPEN_SPACE_CAP_FT)


def frame_at_or_before(tracking: Sequence[TrackingFrame], t_ms: int) -> TrackingFrame | None:
    """The latest frame with time at or before ``t_ms`` (None if t precedes all)."""
    idx = bisect_right(tracking, t_ms, key=lambda f: f.t_ms) - 1
    return tracking[idx] if idx >= 0 else None


def trails(
    tracking: Sequence[TrackingFrame],
    t_now: int,
    possession_start_ms: int,
    offense: Team,
) -> dict[str, tuple[Point, ...]]:
    """Recent movement polyline per offense player.

    Positions are sampled every 200 ms, ending at ``t_now`` and reaching
    back to the possession start, capped at a 6 s window. Each sample takes
    the player's position from the latest frame at or before the sample
    time (no interpolation).
    """
    if possession_start_ms > t_now:
        raise ValueError("possession cannot start in the future")
    window_start = max(possession_start_ms, t_now - TRAIL_WINDOW_MS)
    steps = (t_now - window_start) // TRAIL_SAMPLE_MS
    sample_times = [t_now - k * TRAIL_SAMPLE_MS for k in range(steps, -1, -1)]

    now_frame = frame_at_or_before(tracking, t_now)
    if now_frame is None:
        return {}
    result: dict[str, tuple[Point, ...]] = {}
    sample_frames = [frame_at_or_before(tracking, s) or tracking[0] for s in sample_times]
    for p in now_frame.team_players(offense):
        points = []
        for f in sample_frames:
            pos = f.find(p.player_id)
            if pos is not None:
                points.append(pos.point)
        result[p.player_id] = tuple(points)
    return result


# --- possession ---


def _frame_period_at(tracking: Sequence[TrackingFrame], t_ms: int) -> int | None:
    """Period in effect at an event time (next frame's period, else last frame's)."""
    idx = bisect_right(tracking, t_ms - 1, key=lambda f: f.t_ms)
    if idx < len(tracking):
        return tracking[idx].period
    return tracking[-1].period if tracking else None


def _establishing_team(
    ev: GameEvent,
    tracking: Sequence[TrackingFrame],
    openings: dict[int, Team] | None,
) -> Team | None:
    if ev.action in (Action.REBOUND, Action.STEAL):
        return ev.team
    if ev.action is Action.TURNOVER and ev.team is not None:
        return ev.team.other
    if ev.action in SHOT_ACTIONS and ev.outcome is Outcome.MADE and ev.team is not None:
        return ev.team.other
    if ev.action is Action.PERIOD_START and openings:
        period = _frame_period_at(tracking, ev.t_ms)
        if period is not None:
            return openings.get(period)
    return None


def _nearest_ball_team(frame: TrackingFrame) -> Team | None:
    """Team of the closest player to the ball when within the control radius."""
    ball_xy = (frame.ball[0], frame.ball[1])
    best: tuple[float, str, Team] | None = None
    for p in frame.players:
        d = _dist(p.point, ball_xy)
        if best is None or (d, p.player_id) < (best[0], best[1]):
            best = (d, p.player_id, p.team)
    if best is None or best[0] > POSSESSION_BALL_FT:
        return None
    return best[2]


def possession_span(
    events: Sequence[GameEvent],
    tracking: Sequence[TrackingFrame],
    t_ms: int,
    openings: dict[int, Team] | None = None,
) -> tuple[Team, int] | None:
    """Current possession and when it began.

    The most recent possession-establishing event at or before ``t_ms``
    decides: rebounds and steals keep the ball, turnovers and made field
    goals hand it over, and a period start follows the configured opening
    possession. Before any such event, ball proximity sustained over three
    consecutive frames decides, dating the possession to the start of that
    run.
    """
    best: tuple[Team, int] | None = None
    for ev in events:
        if ev.t_ms > t_ms:
            break
        team = _establishing_team(ev, tracking, openings)
        if team is not None:
            best = (team, ev.t_ms)
    if best is not None:
        return best

    idx = bisect_right(tracking, t_ms, key=lambda f: f.t_ms) - 1
    if idx < 0:
        return None
    team = _nearest_ball_team(tracking[idx])
    if team is None:
        return None
    first = idx
    while first > 0 and _nearest_ball_team(tracking[first - 1]) is team:
        first -= 1
    if idx - first + 1 < POSSESSION_SUSTAIN_FRAMES:
        return None
    return (team, tracking[first].t_ms)


def possession(
    events: Sequence[GameEvent],
    tracking: Sequence[TrackingFrame],
    t_ms: int,
    openings: dict[int, Team] | None = None,
) -> Team | None:
    """Which team has the ball at ``t_ms``, if determinable."""
    span = possession_span(events, tracking, t_ms, openings)
    return span[0] if span else None


# --- stats ---


def accumulate_box_score(
    events: Iterable[GameEvent], up_to_t_ms: float = math.inf
) -> tuple[BoxScore, BoxScore, dict[str, BoxScore]]:
    """Tally team and player box scores over events at or before a time."""
    home = BoxScore()
    away = BoxScore()
    players: dict[str, BoxScore] = {}
    for ev in events:
        if ev.t_ms > up_to_t_ms:
            continue
        if ev.team is Team.HOME:
            home = home.apply(ev.action, ev.outcome)
        elif ev.team is Team.AWAY:
            away = away.apply(ev.action, ev.outcome)
        if ev.player_id:
            players[ev.player_id] = players.get(ev.player_id, BoxScore()).apply(
                ev.action, ev.outcome
            )
    return home, away, players


def static_shot_label(
    shot_event: GameEvent, shooter_game_box: BoxScore, season_fg_pct: float
) -> StaticShotLabel:
    """Build the outcome label for a just-taken shot.

    ``shooter_game_box`` must already include this attempt, so the game
    percentage reflects the shot being labeled.
    """
    if shot_event.action not in SHOT_ACTIONS or shot_event.loc is None:
        raise ValueError("static labels require a located field-goal attempt")
    return StaticShotLabel(
        loc=shot_event.loc,
        outcome=shot_event.outcome,
        game_fg_pct=shooter_game_box.fg_pct(),
        season_fg_pct=season_fg_pct,
        created_at_ms=shot_event.t_ms,
        expires_at_ms=shot_event.t_ms + STATIC_LABEL_TTL_MS,
    )


def dynamic_shot_label(
    frame: TrackingFrame,
    player_id: str,
    shots: ZonedShotTable,
    hoop: Point,
    geom: CourtGeometry = REGULATION,
) -> DynamicShotLabel | None:
    """Zone shot percentage for a player at their current spot.

    Returns None while the player is in the backcourt (label suppressed).
    A zone without seasonal attempts reports the league percentage and
    stays NEUTRAL - absence of evidence is not cold shooting.
    """
    player = frame.find(player_id)
    if player is None:
        raise EngineError("PLAYER_NOT_IN_FRAME", f"no player {player_id!r} in frame")
    if not shots.has_player(player_id):
        raise EngineError("PLAYER_NOT_IN_TABLE", f"no shot table entry for {player_id!r}")
    if not geom.in_attacking_half(player.point, hoop):
        return None
    zone = classify_zone(player.point, hoop, geom)
    league_pct = shots.league[zone]
    pct = shots.player_pct(player_id, zone)
    if pct is None:
        return DynamicShotLabel(player_id=player_id, zone=zone, zone_pct=league_pct, mark=HotMark.NEUTRAL)
    if pct > league_pct + HOT_COLD_EPS:
        mark = HotMark.HOT
    elif pct < league_pct - HOT_COLD_EPS:
        mark = HotMark.COLD
    else:
        mark = HotMark.NEUTRAL
    return DynamicShotLabel(player_id=player_id, zone=zone, zone_pct=pct, mark=mark)


def shot_chart(
    player_id: str,
    game_events_so_far: Sequence[GameEvent],
    shots: ZonedShotTable,
) -> ShotChartPayload:
    """Seasonal zone heat bins plus this game's shots and stats for one player.

    Zone bins compare the player's seasonal percentage to the league's;
    zones without attempts sit in the neutral bin.
    """
    if not shots.has_player(player_id):
        raise EngineError("PLAYER_NOT_IN_TABLE", f"no shot table entry for {player_id!r}")
    bins: dict[Zone, ColorBin] = {}
    for zone in ALL_ZONES:
        pct = shots.player_pct(player_id, zone)
        bins[zone] = ColorBin.YELLOW if pct is None else color_bin(pct - shots.league[zone])

    markers = []
    box = BoxScore()
    for ev in game_events_so_far:
        if ev.player_id != player_id:
            continue
        box = box.apply(ev.action, ev.outcome)
        if ev.action in SHOT_ACTIONS and ev.loc is not None:
            markers.append(ShotMarker(loc=ev.loc, made=ev.outcome is Outcome.MADE))
    return ShotChartPayload(
        player_id=player_id, zone_bins=bins, shot_markers=tuple(markers), panel=box
    )


_COUNTER_ROWS = (
    ("points", lambda b: b.points, False),
    ("rebounds", lambda b: b.rebounds, False),
    ("assists", lambda b: b.assists, False),
    ("blocks", lambda b: b.blocks, False),
    ("steals", lambda b: b.steals, False),
    ("turnovers", lambda b: b.turnovers, True),
)

_SHOOTING_ROWS = (
    ("fg_pct", BoxScore.fg_pct, "fg_pct"),
    ("tp_pct", BoxScore.tp_pct, "tp_pct"),
    ("ft_pct", BoxScore.ft_pct, "ft_pct"),
)


def team_panel(
    home: BoxScore, away: BoxScore, league: LeagueAverages = LeagueAverages()
) -> TeamPanelPayload:
    """Side-by-side team stat rows.

    Each row's leader is the team with the better value (lower wins for
    turnovers, exact ties lead nobody); shooting rows also carry the
    league-comparison color bin for each team.
    """

    def lead(hv: float, av: float, invert: bool) -> Team | None:
        if hv == av:
            return None
        better_home = hv < av if invert else hv > av
        return Team.HOME if better_home else Team.AWAY

    rows = []
    for name, get, invert in _COUNTER_ROWS[:1]:
        rows.append(StatRow(name, get(home), get(away), lead(get(home), get(away), invert)))
    for name, get, league_field in _SHOOTING_ROWS:
        hv, av = get(home), get(away)
        avg = getattr(league, league_field)
        rows.append(
            StatRow(
                name,
                hv,
                av,
                lead(hv, av, False),
                home_bin=color_bin(hv - avg),
                away_bin=color_bin(av - avg),
            )
        )
    for name, get, invert in _COUNTER_ROWS[1:]:
        rows.append(StatRow(name, get(home), get(away), lead(get(home), get(away), invert)))
    return TeamPanelPayload(rows=tuple(rows))
