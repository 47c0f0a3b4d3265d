"""Replay state machine over a validated dataset.

A Session owns a deterministic clock that only ever sits on tracking
frames. Advancing it fires logged events exactly once, updates box scores,
spawns shot labels, and composes the enabled layer payloads into immutable
FrameBundle snapshots. Seeking rebuilds the same state a play-through from
the start would have reached, so every derived stat is reproducible.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

from . import analytics
from .analytics import (
    DefenseAssignment,
    DynamicShotLabel,
    OffenseEntry,
    OffensePayload,
    ShotChartPayload,
    ShotLabelPayload,
    StaticShotLabel,
    TeamPanelPayload,
)
from .errors import EngineError
from .ingest import ValidatedDataset
from .model import (
    BoxScore,
    GameEvent,
    LayerId,
    SHOT_ACTIONS,
    Team,
    TrackingFrame,
)

# How long a shot keeps the shot chart pointed at its shooter.
SHOT_CHART_SUBJECT_WINDOW_MS = 10_000

MAX_RATE = 16.0

LayerPayload = (
    ShotLabelPayload | OffensePayload | DefenseAssignment | ShotChartPayload | TeamPanelPayload
)


@dataclass(frozen=True)
class FrameBundle:
    """One composed frame: positions, the events that fired getting here,
    and a payload per displayed layer."""

    frame: TrackingFrame
    events_fired: tuple[GameEvent, ...]
    layers: dict[LayerId, LayerPayload]
    box: tuple[BoxScore, BoxScore]


class Session:
    """Mutable replay cursor; drive it through one owner only."""

    def __init__(self, dataset: ValidatedDataset, initial_layers: frozenset[LayerId]) -> None:
        self.dataset = dataset
        self.cursor = 0
        self.rate = 1.0
        self.playing = False
        self.enabled_layers: set[LayerId] = set(initial_layers)
        self.pending_static_labels: list[StaticShotLabel] = []
        self.home_box = BoxScore()
        self.away_box = BoxScore()
        self.player_boxes: dict[str, BoxScore] = {}
        self._event_ptr = 0
        self._last_fired: tuple[GameEvent, ...] = ()
        self._last_shot: tuple[str, int] | None = None
        self._times = [f.t_ms for f in dataset.tracking]

    # -- clock --

    @property
    def clock_ms(self) -> int:
        return self.dataset.tracking[self.cursor].t_ms

    @property
    def frame(self) -> TrackingFrame:
        return self.dataset.tracking[self.cursor]

    @property
    def at_end(self) -> bool:
        return self.cursor >= len(self.dataset.tracking) - 1

    # -- event application --

    def _apply_event(self, ev: GameEvent) -> None:
        if ev.team is Team.HOME:
            self.home_box = self.home_box.apply(ev.action, ev.outcome)
        elif ev.team is Team.AWAY:
            self.away_box = self.away_box.apply(ev.action, ev.outcome)
        if ev.player_id:
            box = self.player_boxes.get(ev.player_id, BoxScore()).apply(ev.action, ev.outcome)
            self.player_boxes[ev.player_id] = box
            if ev.action in SHOT_ACTIONS:
                self._last_shot = (ev.player_id, ev.t_ms)
                if ev.loc is not None:
                    self.pending_static_labels.append(
                        analytics.static_shot_label(
                            ev, box, self.dataset.shots.season_fg_pct(ev.player_id)
                        )
                    )

    def _fire_through(self, t_ms: int, flush_rest: bool) -> tuple[GameEvent, ...]:
        """Apply events up to ``t_ms`` inclusive; optionally drain stragglers
        past the final frame (the ingest tolerance admits them)."""
        events = self.dataset.events
        fired: list[GameEvent] = []
        while self._event_ptr < len(events) and (
            flush_rest or events[self._event_ptr].t_ms <= t_ms
        ):
            ev = events[self._event_ptr]
            self._apply_event(ev)
            fired.append(ev)
            self._event_ptr += 1
        return tuple(fired)

    def _prune_labels(self) -> None:
        now = self.clock_ms
        self.pending_static_labels = [
            lab for lab in self.pending_static_labels if lab.expires_at_ms > now
        ]

    # -- transport --

    def step(self) -> FrameBundle:
        """Advance one frame, firing every event in the gap exactly once."""
        if self.at_end:
            raise EngineError("END_OF_GAME", "cursor already at the final frame")
        self.cursor += 1
        self._last_fired = self._fire_through(self.clock_ms, flush_rest=self.at_end)
        self._prune_labels()
        return self.compose()

    def seek(self, t_ms: int) -> None:
        """Jump to the last frame at or before ``t_ms``, rebuilding state as
        if stepped there from the start."""
        tracking = self.dataset.tracking
        if t_ms < tracking[0].t_ms or t_ms > tracking[-1].t_ms:
            raise EngineError(
                "OUT_OF_RANGE",
                f"t={t_ms} outside [{tracking[0].t_ms}, {tracking[-1].t_ms}]",
            )
        target = bisect_right(self._times, t_ms) - 1

        self.cursor = target
        self.pending_static_labels = []
        self.home_box = BoxScore()
        self.away_box = BoxScore()
        self.player_boxes = {}
        self._event_ptr = 0
        self._last_shot = None

        # Everything up to the previous frame is history; the window into
        # the current frame is what a step() would have reported.
        prev_t = tracking[target - 1].t_ms if target > 0 else None
        if prev_t is not None:
            self._fire_through(prev_t, flush_rest=False)
        self._last_fired = self._fire_through(self.clock_ms, flush_rest=self.at_end)
        self._prune_labels()

    def toggle(self, layer: LayerId | str, on: bool) -> None:
        if not isinstance(layer, LayerId):
            try:
                layer = LayerId(layer)
            except ValueError:
                raise EngineError("UNKNOWN_LAYER", f"no layer named {layer!r}") from None
        if on:
            self.enabled_layers.add(layer)
        else:
            self.enabled_layers.discard(layer)

    def set_rate(self, rate: float) -> None:
        if not (0.0 < rate <= MAX_RATE):
            raise EngineError("INVALID_RATE", f"rate must be in (0, {MAX_RATE}], got {rate}")
        self.rate = float(rate)

    # -- composition --

    def _fired_events(self) -> tuple[GameEvent, ...]:
        return self.dataset.events[: self._event_ptr]

    def compose(self) -> FrameBundle:
        """Build the bundle for the current frame from enabled layers.

        Layers whose preconditions fail (no possession, no handler, no shot
        chart subject) are silently absent. Static shot labels display even
        with SHOT_LABEL toggled off: outcome labels are event-driven.
        """
        frame = self.frame
        meta = self.dataset.meta
        geom = meta.geometry
        span = analytics.possession_span(
            self.dataset.events,
            self.dataset.tracking,
            self.clock_ms,
            meta.opening_possession_by_period,
        )
        offense = span[0] if span else None
        hoop = meta.attacking_hoop(offense, frame.period) if offense else None
        handler = analytics.ball_handler(frame, offense) if offense else None

        layers: dict[LayerId, LayerPayload] = {}

        live_labels = tuple(
            sorted(self.pending_static_labels, key=lambda l: (l.created_at_ms, l.loc))
        )
        if LayerId.SHOT_LABEL in self.enabled_layers:
            dynamic: list[DynamicShotLabel] = []
            if offense is not None and hoop is not None:
                for p in sorted(frame.team_players(offense), key=lambda p: p.player_id):
                    if not self.dataset.shots.has_player(p.player_id):
                        continue
                    label = analytics.dynamic_shot_label(
                        frame, p.player_id, self.dataset.shots, hoop, geom
                    )
                    if label is not None:
                        dynamic.append(label)
            layers[LayerId.SHOT_LABEL] = ShotLabelPayload(
                static=live_labels, dynamic=tuple(dynamic)
            )
        elif live_labels:
            layers[LayerId.SHOT_LABEL] = ShotLabelPayload(static=live_labels, dynamic=())

        if LayerId.OFFENSE in self.enabled_layers and offense is not None and span:
            trails = analytics.trails(self.dataset.tracking, self.clock_ms, span[1], offense)
            entries = {
                p.player_id: OffenseEntry(
                    trail=trails.get(p.player_id, ()),
                    open_radius_ft=analytics.open_space_radius(frame, p.player_id),
                    is_handler=p.player_id == handler,
                )
                for p in frame.team_players(offense)
            }
            layers[LayerId.OFFENSE] = OffensePayload(players=entries)

        if LayerId.DEFENSE in self.enabled_layers and handler is not None and hoop is not None:
            layers[LayerId.DEFENSE] = analytics.classify_defenders(frame, handler, hoop, geom)

        if LayerId.SHOT_CHART in self.enabled_layers:
            subject = None
            if (
                self._last_shot is not None
                and self.clock_ms - self._last_shot[1] <= SHOT_CHART_SUBJECT_WINDOW_MS
            ):
                subject = self._last_shot[0]
            elif handler is not None:
                subject = handler
            if subject is not None and self.dataset.shots.has_player(subject):
                layers[LayerId.SHOT_CHART] = analytics.shot_chart(
                    subject, self._fired_events(), self.dataset.shots
                )

        if LayerId.TEAM_PANEL in self.enabled_layers:
            layers[LayerId.TEAM_PANEL] = analytics.team_panel(
                self.home_box, self.away_box, meta.league_averages
            )

        return FrameBundle(
            frame=frame,
            events_fired=self._last_fired,
            layers=layers,
            box=(self.home_box, self.away_box),
        )


def new_session(
    dataset: ValidatedDataset, initial_layers: frozenset[LayerId] | set[LayerId] = frozenset()
) -> Session:
    """Open a paused session at the first frame.

    Events logged at or before the first frame (the ingest timespan
    tolerance admits slightly-early ones) apply immediately and count as
    fired by the opening frame.
    """
    if not dataset.tracking:
        raise EngineError("EMPTY_DATASET", "tracking holds no frames")
    for layer in initial_layers:
        if not isinstance(layer, LayerId):
            raise EngineError("UNKNOWN_LAYER", f"no layer named {layer!r}")
    session = Session(dataset, frozenset(initial_layers))
    session._last_fired = session._fire_through(session.clock_ms, flush_rest=session.at_end)
    session._prune_labels()
    return session
