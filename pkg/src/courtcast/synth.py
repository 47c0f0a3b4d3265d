"""Deterministic synthetic game generator.

Builds a short scripted scrimmage: possessions alternate through a fixed
variety of endings (makes, misses with rebounds, a steal, a foul with free
throws, a putback), players run waypoint motion around formation spots, and
the ball follows the scripted handler. Everything derives from one seed, so
two runs produce byte-identical files.

The ``grounded`` variant keeps the ball low and attached to a player on
every frame (passes hand off instantly, shots never fly), which guarantees
a ball handler exists whenever the possession team is known. Replay-level
tests use it when layer presence must be a pure function of the toggle
schedule.
"""

from __future__ import annotations

import argparse
import json
import math
import random
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .analytics import classify_zone
from .ingest import (
    GameMeta,
    ValidatedDataset,
    serialize_events,
    serialize_shot_table,
    serialize_tracking,
    validate_dataset,
)
from .model import (
    Action,
    GameEvent,
    LeagueAverages,
    Outcome,
    PlayerPosition,
    Point,
    REGULATION,
    Team,
    TrackingFrame,
    Zone,
    ZoneCounts,
    ZonedShotTable,
)

HOME_IDS = ("H1", "H2", "H3", "H4", "H5")
AWAY_IDS = ("A1", "A2", "A3", "A4", "A5")

_SPEED_FT_PER_FRAME = 0.68

# Formation spots and representative shot points, expressed for the hoop at
# the low-x end; the other end mirrors both coordinates.
_SPOTS0: tuple[Point, ...] = ((25.0, 25.0), (18.0, 36.0), (18.0, 14.0), (3.0, 45.0), (3.0, 5.0))
_SHOT_POINTS0: dict[Zone, Point] = {
    Zone.RIM: (8.2, 26.1),
    Zone.MID_LEFT: (16.0, 33.0),
    Zone.MID_RIGHT: (16.0, 17.0),
    Zone.CORNER3_LEFT: (4.0, 47.8),
    Zone.CORNER3_RIGHT: (4.0, 2.2),
    Zone.THREE_LEFT: (29.5, 34.5),
    Zone.THREE_RIGHT: (29.5, 15.5),
}
_RIM_PUTBACK0: Point = (7.5, 25.8)
_FT_LINE0: Point = (19.0, 25.0)


class _Kind(Enum):
    MAKE2 = "MAKE2"
    MAKE3 = "MAKE3"
    MISS2_DREB = "MISS2_DREB"
    MISS3_DREB = "MISS3_DREB"
    MISS2_OREB = "MISS2_OREB"
    PUTBACK = "PUTBACK"
    STEAL = "STEAL"
    FOUL_FT = "FOUL_FT"
    HOLD = "HOLD"


_KIND_LEN_S = {
    _Kind.MAKE2: 5.0,
    _Kind.MAKE3: 5.2,
    _Kind.MISS2_DREB: 5.4,
    _Kind.MISS3_DREB: 5.2,
    _Kind.MISS2_OREB: 5.2,
    _Kind.PUTBACK: 2.8,
    _Kind.STEAL: 5.0,
    _Kind.FOUL_FT: 7.5,
}

_VARIETY = (
    _Kind.MAKE2,
    _Kind.MISS3_DREB,
    _Kind.STEAL,
    _Kind.MISS2_OREB,
    _Kind.FOUL_FT,
    _Kind.MAKE3,
    _Kind.MISS2_DREB,
)

_SHOT_ZONE_CYCLE = (
    Zone.RIM,
    Zone.THREE_LEFT,
    Zone.MID_RIGHT,
    Zone.CORNER3_LEFT,
    Zone.THREE_RIGHT,
    Zone.MID_LEFT,
    Zone.CORNER3_RIGHT,
)

#: Kinds that keep possession with the same team afterwards.
_KEEPS_BALL = {_Kind.MISS2_OREB}


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 7
    periods: int = 2
    period_s: float = 26.0
    fps: int = 25
    grounded: bool = False


@dataclass
class _Seg:
    team: Team
    kind: _Kind
    start_f: int
    end_f: int  # last controlled frame; the boundary frame is end_f + 1
    period: int
    opener: str = ""
    chain: list[str] = field(default_factory=list)
    receipts: list[tuple[int, str]] = field(default_factory=list)
    shooter: str = ""
    shot_point: Point | None = None
    shot_zone: Zone | None = None
    release_f: int | None = None
    rebounder: str = ""
    stealer: str = ""
    foul_f: int | None = None
    ft_frames: tuple[int, int] | None = None
    events: list[GameEvent] = field(default_factory=list)


def _mirror(p: Point, geom=REGULATION) -> Point:
    return (geom.length_ft - p[0], geom.width_ft - p[1])


def _for_hoop(p: Point, hoop: Point, geom=REGULATION) -> Point:
    return p if hoop[0] < geom.mid_x else _mirror(p, geom)


def _unit(a: Point, b: Point) -> Point:
    dx, dy = b[0] - a[0], b[1] - a[1]
    d = math.hypot(dx, dy)
    return (0.0, 0.0) if d < 1e-9 else (dx / d, dy / d)


def _lerp(a: Point, b: Point, u: float) -> Point:
    return (a[0] + (b[0] - a[0]) * u, a[1] + (b[1] - a[1]) * u)


def _clamp_court(p: Point, geom=REGULATION) -> Point:
    return (
        min(max(p[0], 0.8), geom.length_ft - 0.8),
        min(max(p[1], 0.8), geom.width_ft - 0.8),
    )


def _step_towards(pos: Point, target: Point, max_step: float) -> Point:
    dx, dy = target[0] - pos[0], target[1] - pos[1]
    d = math.hypot(dx, dy)
    if d <= max_step:
        return target
    return (pos[0] + dx / d * max_step, pos[1] + dy / d * max_step)


def _meta(cfg: SynthConfig) -> GameMeta:
    return GameMeta(
        home_team="Harborview",
        away_team="Kingsbridge",
        team_colors={Team.HOME: "#c8102e", Team.AWAY: "#1d428a"},
        attacking_hoop_by_period={1: 0, 2: 1},
        frame_rate_hz=float(cfg.fps),
        opening_possession_by_period={1: Team.HOME, 2: Team.AWAY},
        league_averages=LeagueAverages(),
        geometry=REGULATION,
    )


def _shot_table(rng: random.Random) -> ZonedShotTable:
    league = {
        Zone.RIM: 61.0,
        Zone.MID_LEFT: 42.0,
        Zone.MID_RIGHT: 41.0,
        Zone.CORNER3_LEFT: 38.5,
        Zone.CORNER3_RIGHT: 39.0,
        Zone.THREE_LEFT: 35.5,
        Zone.THREE_RIGHT: 36.0,
    }
    players: dict[str, dict[Zone, ZoneCounts]] = {}
    for pid in HOME_IDS + AWAY_IDS:
        zones: dict[Zone, ZoneCounts] = {}
        for zone in Zone:
            att = rng.randint(8, 80)
            made = min(att, round(att * rng.uniform(0.25, 0.70)))
            zones[zone] = ZoneCounts(made=made, attempts=att)
        players[pid] = zones
    # Fixed probe cases tests rely on: a zone with no seasonal attempts and
    # a zone percentage exactly on the league line.
    del players["H1"][Zone.THREE_LEFT]
    players["H2"][Zone.MID_LEFT] = ZoneCounts(made=21, attempts=50)  # 42.0 == league
    return ZonedShotTable(players=players, league=league)


# --- possession script ---


def _build_segments(cfg: SynthConfig, rng: random.Random) -> list[_Seg]:
    n_pf = int(cfg.period_s * cfg.fps)
    meta = _meta(cfg)
    variety = list(_VARIETY)
    segs: list[_Seg] = []
    for period in range(1, cfg.periods + 1):
        pf = (period - 1) * n_pf
        pend = pf + n_pf - 1
        team = meta.opening_possession_by_period.get(period, Team.HOME)
        f = pf
        budget_end = pend - int(1.2 * cfg.fps)  # reserve a short hold at the period's end
        forced: _Kind | None = None
        while True:
            if forced is not None:
                kind, forced = forced, None
            elif variety:
                kind = variety[0]
            else:
                kind = rng.choice((_Kind.MAKE2, _Kind.MISS3_DREB, _Kind.STEAL, _Kind.MISS2_DREB))
            length = int(_KIND_LEN_S[kind] * cfg.fps)
            # an offensive-rebound miss commits to its putback as well
            extra = int(_KIND_LEN_S[_Kind.PUTBACK] * cfg.fps) if kind is _Kind.MISS2_OREB else 0
            if f + length + extra - 1 > budget_end:
                break  # unscheduled variety kinds carry over to the next period
            if variety and variety[0] is kind:
                variety.pop(0)
            segs.append(_Seg(team=team, kind=kind, start_f=f, end_f=f + length - 1, period=period))
            f += length
            if kind in _KEEPS_BALL:
                forced = _Kind.PUTBACK
            else:
                team = team.other
        segs.append(_Seg(team=team, kind=_Kind.HOLD, start_f=f, end_f=pend, period=period))
    return segs


def _pick_other(rng: random.Random, ids: tuple[str, ...], not_these: set[str]) -> str:
    pool = [p for p in ids if p not in not_these]
    return rng.choice(pool) if pool else ids[0]


def _script_segment(
    seg: _Seg,
    nxt: _Seg | None,
    rng: random.Random,
    cfg: SynthConfig,
    meta: GameMeta,
    zone_cycle: list[Zone],
) -> None:
    """Fill one segment: handler chain, shot target, and its event log."""
    dt = 1000 // cfg.fps
    offense = HOME_IDS if seg.team is Team.HOME else AWAY_IDS
    defense = AWAY_IDS if seg.team is Team.HOME else HOME_IDS
    hoop = meta.attacking_hoop(seg.team, seg.period)
    t = lambda f: f * dt
    b = seg.end_f + 1  # boundary frame owned by the next segment

    def marker_of(pid: str) -> str:
        side = HOME_IDS if pid in HOME_IDS else AWAY_IDS
        other = AWAY_IDS if pid in HOME_IDS else HOME_IDS
        return other[side.index(pid)]

    shot_kinds = {
        _Kind.MAKE2,
        _Kind.MAKE3,
        _Kind.MISS2_DREB,
        _Kind.MISS3_DREB,
        _Kind.MISS2_OREB,
        _Kind.PUTBACK,
    }
    if seg.kind in shot_kinds:
        if seg.kind is _Kind.PUTBACK:
            seg.shot_zone = Zone.RIM
            base = _for_hoop(_RIM_PUTBACK0, hoop)
        else:
            three = seg.kind in (_Kind.MAKE3, _Kind.MISS3_DREB)
            while True:
                zone = zone_cycle.pop(0)
                zone_cycle.append(zone)
                is_three = zone in (
                    Zone.CORNER3_LEFT,
                    Zone.CORNER3_RIGHT,
                    Zone.THREE_LEFT,
                    Zone.THREE_RIGHT,
                )
                if is_three == three:
                    break
            seg.shot_zone = zone
            base = _for_hoop(_SHOT_POINTS0[zone], hoop)
        jx, jy = rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)
        seg.shot_point = (round(base[0] + jx, 3), round(base[1] + jy, 3))
        assert classify_zone(seg.shot_point, hoop) is seg.shot_zone
        seg.release_f = b - (18 if seg.kind in (_Kind.MAKE2, _Kind.MAKE3, _Kind.PUTBACK) else 24)

    # handler chain and pass receipt frames
    if seg.kind is _Kind.PUTBACK:
        seg.shooter = seg.opener
        seg.chain = [seg.opener]
        chain_end = seg.release_f - 5
    else:
        if seg.kind in shot_kinds:
            seg.shooter = rng.choice(offense)
            last = seg.shooter
            chain_end = seg.release_f - 30
        elif seg.kind is _Kind.FOUL_FT:
            seg.foul_f = b - 100
            seg.shooter = rng.choice(offense)
            last = seg.shooter
            chain_end = seg.foul_f - 10
        else:
            last = ""
            chain_end = seg.end_f
        chain = [seg.opener]
        room = chain_end - (seg.start_f + 25)
        hops = 2 if room >= 100 else (1 if room >= 50 else 0)
        for _ in range(hops):
            chain.append(_pick_other(rng, offense, {chain[-1]}))
        if last and chain[-1] != last:
            chain.append(last)
        seg.chain = [p for i, p in enumerate(chain) if i == 0 or p != chain[i - 1]]
    seg.receipts = [(seg.start_f, seg.chain[0])]
    n_hops = len(seg.chain) - 1
    if n_hops > 0:
        span = max(chain_end - (seg.start_f + 25), n_hops * 12)
        for k in range(1, n_hops + 1):
            recv = seg.start_f + 25 + (span * k) // (n_hops + 1)
            seg.receipts.append((recv, seg.chain[k]))

    # events
    ev = seg.events.append
    off_team = seg.team
    def_team = seg.team.other
    if seg.kind in (_Kind.MAKE2, _Kind.MAKE3, _Kind.PUTBACK):
        action = Action.SHOT_3PT if seg.kind is _Kind.MAKE3 else Action.SHOT_2PT
        shot_t = t(b) - 20
        ev(GameEvent(shot_t, off_team, seg.shooter, action, Outcome.MADE, seg.shot_point))
        if len(seg.chain) >= 2:
            ev(GameEvent(shot_t + 5, off_team, seg.chain[-2], Action.ASSIST, Outcome.NONE))
        if nxt is not None:
            nxt.opener = _pick_other(rng, HOME_IDS if nxt.team is Team.HOME else AWAY_IDS, set())
    elif seg.kind in (_Kind.MISS2_DREB, _Kind.MISS3_DREB, _Kind.MISS2_OREB):
        action = Action.SHOT_3PT if seg.kind is _Kind.MISS3_DREB else Action.SHOT_2PT
        shot_t = t(seg.release_f) - 12
        ev(GameEvent(shot_t, off_team, seg.shooter, action, Outcome.MISSED, seg.shot_point))
        if seg.kind is _Kind.MISS2_DREB:
            ev(GameEvent(shot_t + 3, def_team, marker_of(seg.shooter), Action.BLOCK, Outcome.NONE))
        reb_side = offense if seg.kind is _Kind.MISS2_OREB else defense
        reb_team = off_team if seg.kind is _Kind.MISS2_OREB else def_team
        seg.rebounder = rng.choice(reb_side)
        ev(GameEvent(t(b) - 10, reb_team, seg.rebounder, Action.REBOUND, Outcome.NONE))
        if nxt is not None:
            nxt.opener = seg.rebounder
    elif seg.kind is _Kind.STEAL:
        victim = seg.chain[-1]
        seg.stealer = marker_of(victim)
        ev(GameEvent(t(b) - 25, off_team, victim, Action.TURNOVER, Outcome.NONE))
        ev(GameEvent(t(b) - 20, def_team, seg.stealer, Action.STEAL, Outcome.NONE))
        if nxt is not None:
            nxt.opener = seg.stealer
    elif seg.kind is _Kind.FOUL_FT:
        fouler = marker_of(seg.shooter)
        ev(GameEvent(t(seg.foul_f) - 10, def_team, fouler, Action.FOUL, Outcome.NONE))
        f1, f2 = seg.foul_f + 45, seg.foul_f + 83
        seg.ft_frames = (f1, f2)
        ev(GameEvent(t(f1), off_team, seg.shooter, Action.FREE_THROW, Outcome.MADE))
        ev(GameEvent(t(f2), off_team, seg.shooter, Action.FREE_THROW, Outcome.MISSED))
        seg.rebounder = rng.choice(defense)
        ev(GameEvent(t(b) - 10, def_team, seg.rebounder, Action.REBOUND, Outcome.NONE))
        if nxt is not None:
            nxt.opener = seg.rebounder
    else:  # HOLD runs out the period clock
        pass


def _script(cfg: SynthConfig, rng: random.Random, meta: GameMeta) -> list[_Seg]:
    segs = _build_segments(cfg, rng)
    zone_cycle = list(_SHOT_ZONE_CYCLE)
    for i, seg in enumerate(segs):
        nxt = segs[i + 1] if i + 1 < len(segs) else None
        if not seg.opener:
            ids = HOME_IDS if seg.team is Team.HOME else AWAY_IDS
            seg.opener = rng.choice(ids)
        if nxt is not None and nxt.period != seg.period:
            nxt = None  # period openers come from the manifest, not the last play
        _script_segment(seg, nxt, rng, cfg, meta, zone_cycle)
    return segs


def _marker_events(cfg: SynthConfig, segs: list[_Seg]) -> list[GameEvent]:
    dt = 1000 // cfg.fps
    n_pf = int(cfg.period_s * cfg.fps)
    out = []
    for period in range(1, cfg.periods + 1):
        pf = (period - 1) * n_pf
        pend = pf + n_pf - 1
        out.append(GameEvent(pf * dt, None, "", Action.PERIOD_START, Outcome.NONE))
        out.append(GameEvent(pend * dt, None, "", Action.PERIOD_END, Outcome.NONE))
        if period == 2:
            out.append(
                GameEvent((pf + 50) * dt, Team.HOME, "H5", Action.SUBSTITUTION, Outcome.NONE)
            )
    return out


# --- motion ---


class _Motion:
    """Waypoint walker: formation spots for the offense, goal-side shadows
    for the defense, smooth deterministic jitter on top."""

    def __init__(self, meta: GameMeta) -> None:
        self.meta = meta
        self.pos: dict[str, Point] = {}

    def _jitter(self, pid: str, i: int, amp: float) -> Point:
        j = (HOME_IDS + AWAY_IDS).index(pid)
        return (
            amp * math.sin(0.11 * i + 1.7 * j),
            amp * math.cos(0.09 * i + 2.3 * j),
        )

    def targets(self, seg: _Seg, i: int) -> dict[str, Point]:
        meta = self.meta
        hoop = meta.attacking_hoop(seg.team, seg.period)
        offense = HOME_IDS if seg.team is Team.HOME else AWAY_IDS
        defense = AWAY_IDS if seg.team is Team.HOME else HOME_IDS
        spots = [_for_hoop(s, hoop) for s in _SPOTS0]
        tgt: dict[str, Point] = {}
        for j, pid in enumerate(offense):
            base = spots[j]
            if pid == seg.shooter and seg.shot_point is not None:
                base = seg.shot_point
            if seg.kind is _Kind.FOUL_FT and seg.foul_f is not None and i >= seg.foul_f - 20:
                if pid == seg.shooter:
                    base = _for_hoop(_FT_LINE0, hoop)
            jx, jy = self._jitter(pid, i, 0.9)
            tgt[pid] = (base[0] + jx, base[1] + jy)
        for j, pid in enumerate(defense):
            mark = tgt[offense[j]]
            ux, uy = _unit(mark, hoop)
            jx, jy = self._jitter(pid, i, 0.5)
            tgt[pid] = (mark[0] + ux * 3.3 + jx, mark[1] + uy * 3.3 + jy)
        return tgt

    def init_positions(self, seg: _Seg) -> None:
        for pid, p in self.targets(seg, 0).items():
            self.pos[pid] = _clamp_court(p)

    def advance(self, seg: _Seg, i: int) -> None:
        for pid, target in self.targets(seg, i).items():
            stepped = _step_towards(self.pos[pid], target, _SPEED_FT_PER_FRAME)
            self.pos[pid] = _clamp_court(stepped)


class _BallSim:
    """Ball position per frame, following the scripted handler.

    grounded: the ball snaps between holders and never leaves hand height.
    Otherwise passes, shots, and free throws fly with simple arcs.
    """

    def __init__(self, meta: GameMeta, grounded: bool, fps: int) -> None:
        self.meta = meta
        self.grounded = grounded
        self.fps = fps

    def _holder_at(self, seg: _Seg, i: int) -> str:
        holder = seg.receipts[0][1]
        for f, pid in seg.receipts:
            if f <= i:
                holder = pid
        return holder

    def _held(self, seg: _Seg, i: int, pos: dict[str, Point]) -> tuple[float, float, float]:
        hoop = self.meta.attacking_hoop(seg.team, seg.period)
        p = pos[self._holder_at(seg, i)]
        ux, uy = _unit(p, hoop)
        z = 2.8 + 0.04 * (i % 10)
        return (p[0] + ux * 1.2, p[1] + uy * 1.2, z)

    def at(self, seg: _Seg, i: int, pos: dict[str, Point]) -> tuple[float, float, float]:
        if self.grounded:
            return self._held(seg, i, pos)
        hoop = self.meta.attacking_hoop(seg.team, seg.period)
        b = seg.end_f + 1

        if seg.kind is _Kind.FOUL_FT and seg.ft_frames is not None:
            line = _for_hoop(_FT_LINE0, hoop)
            for fi, ft_f in enumerate(seg.ft_frames):
                if ft_f <= i < ft_f + 10:
                    u = (i - ft_f) / 9.0
                    x, y = _lerp(line, hoop, u)
                    return (x, y, 3.0 + 8.0 * math.sin(math.pi * u) + 7.0 * u * (1 - u))
                if fi == 0 and ft_f + 10 <= i < ft_f + 20:
                    u = (i - ft_f - 10) / 9.0
                    x, y = _lerp(hoop, pos[seg.shooter], u)
                    return (x, y, max(0.5, 8.0 - 7.0 * u))
            if seg.ft_frames[1] + 10 <= i:
                start = seg.ft_frames[1] + 10
                u = min(1.0, (i - start) / max(1, (b - 1) - start))
                x, y = _lerp(hoop, pos[seg.rebounder], u)
                return (x, y, max(1.0, 9.0 - 8.0 * u))
            return self._held(seg, i, pos)

        if seg.release_f is not None and i >= seg.release_f:
            flight = 17
            src = seg.shot_point or pos[seg.shooter]
            if i < seg.release_f + flight:
                u = (i - seg.release_f) / flight
                x, y = _lerp(src, hoop, u)
                return (x, y, 3.0 + 16.0 * u * (1 - u) + 7.0 * u)
            made = seg.kind in (_Kind.MAKE2, _Kind.MAKE3, _Kind.PUTBACK)
            k = i - (seg.release_f + flight)
            if made:
                return (hoop[0], hoop[1], max(0.2, 10.0 - 2.0 * k))
            start = seg.release_f + flight
            u = min(1.0, (i - start) / max(1, (b - 1) - start))
            x, y = _lerp(hoop, pos[seg.rebounder], u)
            return (x, y, max(1.0, 10.0 - 8.5 * u))

        # pass flights: the 8 frames before each receipt
        for f, pid in seg.receipts[1:]:
            if f - 8 <= i < f:
                giver = self._holder_at(seg, f - 9)
                u = (i - (f - 8)) / 8.0
                x, y = _lerp(pos[giver], pos[pid], u)
                return (x, y, 3.5 + 5.0 * math.sin(math.pi * u))
        return self._held(seg, i, pos)


# --- assembly ---


def generate(cfg: SynthConfig = SynthConfig()) -> ValidatedDataset:
    """Build a complete validated in-memory game for this configuration."""
    if 1000 % cfg.fps != 0:
        raise ValueError("fps must divide 1000 evenly")
    rng = random.Random(cfg.seed)
    meta = _meta(cfg)
    table = _shot_table(rng)
    segs = _script(cfg, rng, meta)
    events = sorted(
        [e for s in segs for e in s.events] + _marker_events(cfg, segs), key=lambda e: e.t_ms
    )

    dt = 1000 // cfg.fps
    n_pf = int(cfg.period_s * cfg.fps)
    total = cfg.periods * n_pf
    motion = _Motion(meta)
    ball = _BallSim(meta, cfg.grounded, cfg.fps)
    motion.init_positions(segs[0])

    frames: list[TrackingFrame] = []
    si = 0
    for i in range(total):
        while si + 1 < len(segs) and i > segs[si].end_f:
            si += 1
        seg = segs[si]
        if i > segs[0].start_f:
            motion.advance(seg, i)
        period = i // n_pf + 1
        clock = cfg.period_s - (i - (period - 1) * n_pf) / cfg.fps
        bx, by, bz = ball.at(seg, i, motion.pos)
        bx, by = _clamp_court((bx, by))
        players = tuple(
            PlayerPosition(team=Team.HOME, player_id=pid, x=round(motion.pos[pid][0], 3), y=round(motion.pos[pid][1], 3))
            for pid in HOME_IDS
        ) + tuple(
            PlayerPosition(team=Team.AWAY, player_id=pid, x=round(motion.pos[pid][0], 3), y=round(motion.pos[pid][1], 3))
            for pid in AWAY_IDS
        )
        frames.append(
            TrackingFrame(
                t_ms=i * dt,
                period=period,
                game_clock_s=round(clock, 3),
                ball=(round(bx, 3), round(by, 3), round(max(bz, 0.0), 3)),
                players=players,
            )
        )
    return validate_dataset(frames, events, table, meta)


def write_fixture(out_dir: str | Path, cfg: SynthConfig = SynthConfig()) -> Path:
    """Write the four dataset files; returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ds = generate(cfg)
    (out / "tracking.jsonl").write_text(serialize_tracking(ds.tracking), encoding="utf-8")
    (out / "events.jsonl").write_text(serialize_events(ds.events), encoding="utf-8")
    (out / "shots.json").write_text(serialize_shot_table(ds.shots), encoding="utf-8")
    meta = ds.meta
    manifest = {
        "tracking": "tracking.jsonl",
        "events": "events.jsonl",
        "shot_table": "shots.json",
        "home_team": meta.home_team,
        "away_team": meta.away_team,
        "team_colors": {t.value: c for t, c in meta.team_colors.items()},
        "attacking_hoop_by_period": {str(k): v for k, v in meta.attacking_hoop_by_period.items()},
        "frame_rate_hz": meta.frame_rate_hz,
        "opening_possession_by_period": {
            str(k): v.value for k, v in meta.opening_possession_by_period.items()
        },
        "league_averages": {
            "fg_pct": meta.league_averages.fg_pct,
            "tp_pct": meta.league_averages.tp_pct,
            "ft_pct": meta.league_averages.ft_pct,
        },
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="courtcast-synth", description="generate a synthetic-game dataset"
    )
    parser.add_argument("out_dir", help="directory for the dataset files")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--periods", type=int, default=2)
    parser.add_argument("--period-s", type=float, default=26.0)
    parser.add_argument("--fps", type=int, default=25)
    parser.add_argument("--grounded", action="store_true", help="keep the ball in hand on every frame")
    args = parser.parse_args(argv)
    cfg = SynthConfig(
        seed=args.seed,
        periods=args.periods,
        period_s=args.period_s,
        fps=args.fps,
        grounded=args.grounded,
    )
    manifest = write_fixture(args.out_dir, cfg)
    print(f"wrote {manifest}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
