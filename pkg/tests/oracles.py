"""Independent reference implementations used to cross-check the engine.

Everything here is written the slow, obvious way on purpose: explicit
region predicates instead of branch chains, O(n^3) hull edge scans instead
of monotone chains. Tests compare the fast implementations against these.
"""

import math

from courtcast.model import REGULATION, Zone


def dist(a, b):
    return math.hypot(a[0] - b[0], a[1] - b[1])


# --- shot zones as independent region predicates ---


def zone_memberships(p, hoop, geom=REGULATION):
    """All zones claiming the point. A correct partition yields exactly one."""
    d = dist(p, hoop)
    baseline = geom.baseline_x(hoop)
    in_corner = abs(p[0] - baseline) <= geom.corner_depth_ft
    corner_far = abs(p[1] - hoop[1]) >= geom.corner_three_ft
    if hoop[0] < geom.mid_x:
        left = p[1] >= geom.mid_y
    else:
        left = p[1] <= geom.mid_y

    zones = set()
    if d <= geom.rim_zone_ft:
        zones.add(Zone.RIM)
    if d > geom.rim_zone_ft and in_corner and corner_far:
        zones.add(Zone.CORNER3_LEFT if left else Zone.CORNER3_RIGHT)
    if d > geom.rim_zone_ft and in_corner and not corner_far:
        zones.add(Zone.MID_LEFT if left else Zone.MID_RIGHT)
    if d > geom.rim_zone_ft and not in_corner and d > geom.three_pt_arc_ft:
        zones.add(Zone.THREE_LEFT if left else Zone.THREE_RIGHT)
    if d > geom.rim_zone_ft and not in_corner and d <= geom.three_pt_arc_ft:
        zones.add(Zone.MID_LEFT if left else Zone.MID_RIGHT)
    return zones


# --- defender classification, the literal-minded version ---


def defense_sets(frame, handler_id, hoop):
    """(ball defender ids, helper ids) by explicit rule application."""
    handler = frame.find(handler_id)
    handler_d = dist(handler.point, hoop)
    ball, helpers = set(), set()
    for d in frame.team_players(handler.team.other):
        r = dist(d.point, handler.point)
        if dist(d.point, hoop) > handler_d:
            limit = 3.0  # handler already got past this defender
        else:
            limit = 6.0
        if r <= limit:
            ball.add(d.player_id)
        elif r <= 12.0:
            helpers.add(d.player_id)
    return ball, helpers


# --- convex hull by brute-force edge scan (exact on integer points) ---


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(a, b, p):
    if _cross(a, b, p) != 0:
        return False
    lo_x, hi_x = min(a[0], b[0]), max(a[0], b[0])
    lo_y, hi_y = min(a[1], b[1]), max(a[1], b[1])
    return lo_x <= p[0] <= hi_x and lo_y <= p[1] <= hi_y


def hull_edges(points):
    """Directed strict-hull edges: every other point strictly left of the
    edge, or collinear but lying on the segment itself."""
    pts = sorted(set(points))
    edges = []
    for a in pts:
        for b in pts:
            if a == b:
                continue
            ok = True
            for p in pts:
                if p == a or p == b:
                    continue
                c = _cross(a, b, p)
                if c > 0:
                    continue
                if c == 0 and _on_segment(a, b, p):
                    continue
                ok = False
                break
            if ok:
                edges.append((a, b))
    return edges


def hull_brute(points):
    """Strict CCW hull from the edge scan, starting at the smallest vertex."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return tuple(pts)
    succ = dict(hull_edges(points))
    if not succ:  # all collinear: extremes only
        return (pts[0], pts[-1])
    start = min(succ)
    out = [start]
    cur = succ[start]
    while cur != start:
        out.append(cur)
        cur = succ[cur]
    return tuple(out)


def point_in_hull(p, hull):
    """Inside-or-on test against a CCW convex polygon."""
    n = len(hull)
    if n == 1:
        return p == hull[0]
    if n == 2:
        return _on_segment(hull[0], hull[1], p)
    return all(_cross(hull[i], hull[(i + 1) % n], p) >= 0 for i in range(n))


def shoelace(vertices):
    acc = 0.0
    n = len(vertices)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return abs(acc) / 2.0


# --- possession from the event log, re-derived ---


def possession_from_events(events, t_ms, openings_by_period, period_at):
    """Last word wins: scan establishing events at or before t_ms."""
    holder = None
    for ev in events:
        if ev.t_ms > t_ms:
            continue
        name = ev.action.value
        if name in ("REBOUND", "STEAL"):
            holder = (ev.team, ev.t_ms)
        elif name == "TURNOVER":
            holder = (ev.team.other, ev.t_ms)
        elif name in ("SHOT_2PT", "SHOT_3PT") and ev.outcome.value == "MADE":
            holder = (ev.team.other, ev.t_ms)
        elif name == "PERIOD_START":
            team = openings_by_period.get(period_at(ev.t_ms))
            if team is not None:
                holder = (team, ev.t_ms)
    return holder
