"""Core domain types: court geometry, tracking frames, events, zones, box scores.

All types here are immutable value objects; they carry no behavior beyond
derived accessors, so they can be shared freely between the session driver,
stream handlers, and renderers. Validation of externally supplied data lives
in :mod:`courtcast.ingest`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import total_ordering

Point = tuple[float, float]


class Team(Enum):
    HOME = "HOME"
    AWAY = "AWAY"

    @property
    def other(self) -> "Team":
        return Team.AWAY if self is Team.HOME else Team.HOME


class Action(Enum):
    SHOT_2PT = "SHOT_2PT"
    SHOT_3PT = "SHOT_3PT"
    FREE_THROW = "FREE_THROW"
    REBOUND = "REBOUND"
    ASSIST = "ASSIST"
    BLOCK = "BLOCK"
    STEAL = "STEAL"
    TURNOVER = "TURNOVER"
    FOUL = "FOUL"
    SUBSTITUTION = "SUBSTITUTION"
    PERIOD_START = "PERIOD_START"
    PERIOD_END = "PERIOD_END"


#: Actions that must carry a MADE/MISSED outcome (all others carry NONE).
SCORING_ACTIONS = frozenset({Action.SHOT_2PT, Action.SHOT_3PT, Action.FREE_THROW})
#: Actions that must carry a shot location.
SHOT_ACTIONS = frozenset({Action.SHOT_2PT, Action.SHOT_3PT})
#: Actions that may omit team and player (clock markers, not box-score rows).
MARKER_ACTIONS = frozenset({Action.PERIOD_START, Action.PERIOD_END})


class Outcome(Enum):
    MADE = "MADE"
    MISSED = "MISSED"
    NONE = "NONE"


class Zone(Enum):
    """The seven-region partition of an attacking half-court."""

    RIM = "RIM"
    MID_LEFT = "MID_LEFT"
    MID_RIGHT = "MID_RIGHT"
    CORNER3_LEFT = "CORNER3_LEFT"
    CORNER3_RIGHT = "CORNER3_RIGHT"
    THREE_LEFT = "THREE_LEFT"
    THREE_RIGHT = "THREE_RIGHT"


ALL_ZONES = tuple(Zone)


@total_ordering
class ColorBin(Enum):
    """Five-step diverging palette for percentage-vs-league comparison."""

    DARK_BLUE = "DARK_BLUE"
    BLUE = "BLUE"
    YELLOW = "YELLOW"
    ORANGE = "ORANGE"
    RED = "RED"

    @property
    def rank(self) -> int:
        return _BIN_RANK[self]

    def __lt__(self, other: "ColorBin") -> bool:
        if not isinstance(other, ColorBin):
            return NotImplemented
        return self.rank < other.rank


_BIN_RANK = {b: i for i, b in enumerate(ColorBin)}


def color_bin(diff_pct: float) -> ColorBin:
    """Bin a signed percentage-point difference against a league average.

    Boundaries: -10 and below is DARK_BLUE, (-10, -5] BLUE, (-5, 5) YELLOW,
    [5, 10) ORANGE, 10 and above RED. Rejects NaN and infinities.
    """
    if not math.isfinite(diff_pct):
        raise ValueError(f"diff_pct must be finite, got {diff_pct!r}")
    if diff_pct <= -10:
        return ColorBin.DARK_BLUE
    if diff_pct <= -5:
        return ColorBin.BLUE
    if diff_pct < 5:
        return ColorBin.YELLOW
    if diff_pct < 10:
        return ColorBin.ORANGE
    return ColorBin.RED


class LayerId(Enum):
    SHOT_LABEL = "SHOT_LABEL"
    OFFENSE = "OFFENSE"
    DEFENSE = "DEFENSE"
    SHOT_CHART = "SHOT_CHART"
    TEAM_PANEL = "TEAM_PANEL"


ALL_LAYERS = frozenset(LayerId)


class Mark(Enum):
    POINT = "POINT"
    LINE = "LINE"
    AREA = "AREA"
    LABEL = "LABEL"
    SIDE_PANEL = "SIDE_PANEL"


@dataclass(frozen=True, slots=True)
class CourtGeometry:
    """Court dimensions in feet. Defaults are regulation NBA numbers.

    ``hoop_centers`` holds both baskets, mirror-symmetric about midcourt.
    ``corner_three_ft`` is the sideways distance from the hoop's y to the
    corner-three line, and ``corner_depth_ft`` how far that line extends
    from the baseline before the above-break arc takes over.
    """

    length_ft: float = 94.0
    width_ft: float = 50.0
    hoop_centers: tuple[Point, Point] = ((5.25, 25.0), (88.75, 25.0))
    three_pt_arc_ft: float = 23.75
    corner_three_ft: float = 22.0
    corner_depth_ft: float = 14.0
    rim_zone_ft: float = 8.0

    def __post_init__(self) -> None:
        (x0, y0), (x1, y1) = self.hoop_centers
        if not (
            math.isclose(x0 + x1, self.length_ft) and math.isclose(y0, y1)
        ):
            raise ValueError("hoop centers must be mirror-symmetric about midcourt")
        if not (self.rim_zone_ft < self.corner_three_ft < self.three_pt_arc_ft):
            raise ValueError("rim < corner three < arc ordering violated")

    @property
    def mid_x(self) -> float:
        return self.length_ft / 2.0

    @property
    def mid_y(self) -> float:
        return self.width_ft / 2.0

    def contains(self, x: float, y: float) -> bool:
        return 0.0 <= x <= self.length_ft and 0.0 <= y <= self.width_ft

    def baseline_x(self, hoop: Point) -> float:
        """The x of the end line behind the given hoop."""
        return 0.0 if hoop[0] < self.mid_x else self.length_ft

    def in_attacking_half(self, p: Point, hoop: Point) -> bool:
        """True when ``p`` lies in the half-court containing ``hoop``."""
        return abs(p[0] - self.baseline_x(hoop)) <= self.length_ft / 2.0


#: Regulation court shared by every module unless a manifest overrides it.
REGULATION = CourtGeometry()


@dataclass(frozen=True, slots=True)
class PlayerPosition:
    team: Team
    player_id: str
    x: float
    y: float

    @property
    def point(self) -> Point:
        return (self.x, self.y)


@dataclass(frozen=True, slots=True)
class TrackingFrame:
    """One snapshot of all ten players plus the ball.

    ``t_ms`` is milliseconds since game start and orders the replay;
    ``game_clock_s`` is the scoreboard clock counting down within ``period``.
    The ball carries a height so shots in flight are distinguishable.
    """

    t_ms: int
    period: int
    game_clock_s: float
    ball: tuple[float, float, float]
    players: tuple[PlayerPosition, ...]

    def team_players(self, team: Team) -> tuple[PlayerPosition, ...]:
        return tuple(p for p in self.players if p.team is team)

    def find(self, player_id: str) -> PlayerPosition | None:
        for p in self.players:
            if p.player_id == player_id:
                return p
        return None


@dataclass(frozen=True, slots=True)
class GameEvent:
    """One play-by-play record.

    ``team``/``player_id`` are empty for period markers; shot events always
    carry ``loc``. Scoring actions carry MADE/MISSED, everything else NONE.
    """

    t_ms: int
    team: Team | None
    player_id: str
    action: Action
    outcome: Outcome
    loc: Point | None = None


@dataclass(frozen=True, slots=True)
class ZoneCounts:
    made: int
    attempts: int

    @property
    def pct(self) -> float | None:
        """Shooting percentage 0..100, or None with no attempts."""
        if self.attempts <= 0:
            return None
        return (100.0 * self.made) / self.attempts


@dataclass(frozen=True)
class ZonedShotTable:
    """Seasonal made/attempt counts per player per zone plus league percentages."""

    players: dict[str, dict[Zone, ZoneCounts]]
    league: dict[Zone, float]

    def has_player(self, player_id: str) -> bool:
        return player_id in self.players

    def counts(self, player_id: str, zone: Zone) -> ZoneCounts:
        return self.players[player_id].get(zone, ZoneCounts(0, 0))

    def player_pct(self, player_id: str, zone: Zone) -> float | None:
        return self.counts(player_id, zone).pct

    def season_fg_pct(self, player_id: str) -> float:
        """Overall field-goal percentage across all zones (0.0 if no attempts)."""
        zones = self.players.get(player_id, {})
        made = sum(c.made for c in zones.values())
        attempts = sum(c.attempts for c in zones.values())
        if attempts <= 0:
            return 0.0
        return (100.0 * made) / attempts

    def scaled(self, k: int) -> "ZonedShotTable":
        """Multiply every made/attempt count by a positive integer."""
        if k <= 0:
            raise ValueError("scale factor must be positive")
        return ZonedShotTable(
            players={
                pid: {z: ZoneCounts(c.made * k, c.attempts * k) for z, c in zones.items()}
                for pid, zones in self.players.items()
            },
            league=dict(self.league),
        )


@dataclass(frozen=True, slots=True)
class BoxScore:
    """Counting stats for one team or one player.

    Threes are counted inside field goals (tpm <= fgm, tpa <= fga), and
    ``points`` is always 2*(fgm-tpm) + 3*tpm + ftm.
    """

    points: int = 0
    fgm: int = 0
    fga: int = 0
    tpm: int = 0
    tpa: int = 0
    ftm: int = 0
    fta: int = 0
    rebounds: int = 0
    assists: int = 0
    blocks: int = 0
    steals: int = 0
    turnovers: int = 0
    fouls: int = 0

    def apply(self, action: Action, outcome: Outcome) -> "BoxScore":
        """Return a new box score with one event tallied."""
        made = outcome is Outcome.MADE
        if action is Action.SHOT_2PT:
            return replace(
                self,
                fga=self.fga + 1,
                fgm=self.fgm + (1 if made else 0),
                points=self.points + (2 if made else 0),
            )
        if action is Action.SHOT_3PT:
            return replace(
                self,
                fga=self.fga + 1,
                tpa=self.tpa + 1,
                fgm=self.fgm + (1 if made else 0),
                tpm=self.tpm + (1 if made else 0),
                points=self.points + (3 if made else 0),
            )
        if action is Action.FREE_THROW:
            return replace(
                self,
                fta=self.fta + 1,
                ftm=self.ftm + (1 if made else 0),
                points=self.points + (1 if made else 0),
            )
        if action is Action.REBOUND:
            return replace(self, rebounds=self.rebounds + 1)
        if action is Action.ASSIST:
            return replace(self, assists=self.assists + 1)
        if action is Action.BLOCK:
            return replace(self, blocks=self.blocks + 1)
        if action is Action.STEAL:
            return replace(self, steals=self.steals + 1)
        if action is Action.TURNOVER:
            return replace(self, turnovers=self.turnovers + 1)
        if action is Action.FOUL:
            return replace(self, fouls=self.fouls + 1)
        return self  # substitutions and period markers leave counters alone

    @property
    def points_identity_holds(self) -> bool:
        return self.points == 2 * (self.fgm - self.tpm) + 3 * self.tpm + self.ftm

    def fg_pct(self) -> float:
        return (100.0 * self.fgm) / self.fga if self.fga else 0.0

    def tp_pct(self) -> float:
        return (100.0 * self.tpm) / self.tpa if self.tpa else 0.0

    def ft_pct(self) -> float:
        return (100.0 * self.ftm) / self.fta if self.fta else 0.0


@dataclass(frozen=True, slots=True)
class LeagueAverages:
    """League-wide shooting percentages used by the team comparison panel."""

    fg_pct: float = 46.0
    tp_pct: float = 36.0
    ft_pct: float = 78.0


@dataclass(frozen=True, slots=True)
class LayerDescriptor:
    """Registry entry tying one overlay layer to its viewing context."""

    layer_id: LayerId
    context_id: str
    scenario: str
    data: str
    task: str
    marks: frozenset[Mark]


_DESCRIPTORS = (
    LayerDescriptor(
        layer_id=LayerId.SHOT_LABEL,
        context_id="C1",
        scenario="A player shoots",
        data="shooter box score and zone shot percentages",
        task="identify, compare",
        marks=frozenset({Mark.LABEL}),
    ),
    LayerDescriptor(
        layer_id=LayerId.OFFENSE,
        context_id="C2",
        scenario="The offense team runs a play",
        data="player movement and spacing from tracking",
        task="identify, compare",
        marks=frozenset({Mark.LINE, Mark.AREA}),
    ),
    LayerDescriptor(
        layer_id=LayerId.DEFENSE,
        context_id="C3",
        scenario="The defense team defends well or poorly",
        data="defender positions relative to the ball handler",
        task="identify",
        marks=frozenset({Mark.POINT, Mark.LINE, Mark.AREA}),
    ),
    LayerDescriptor(
        layer_id=LayerId.SHOT_CHART,
        context_id="C4",
        scenario="A player has made or missed shots",
        data="shot performance by court zone",
        task="compare, summarize",
        marks=frozenset({Mark.AREA, Mark.POINT, Mark.SIDE_PANEL}),
    ),
    LayerDescriptor(
        layer_id=LayerId.TEAM_PANEL,
        context_id="C5",
        scenario="At the clutch time",
        data="team stat totals",
        task="compare, summarize",
        marks=frozenset({Mark.SIDE_PANEL}),
    ),
)


def describe_layers() -> tuple[LayerDescriptor, ...]:
    """The fixed registry of the five overlay layers, one per context C1..C5."""
    return _DESCRIPTORS
