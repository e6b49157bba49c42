"""Routing comparator: per-session shortest paths and their total cost.

Routing forwards each session independently along its axis, advancing
floor(sqrt(d)) grid steps per hop (the longest axis-aligned move that stays
inside the broadcast radius), so each session needs ceil(K / floor(sqrt(d)))
hops.  bfs_hop_oracle independently certifies that no shorter path exists in
the broadcast graph; the summed total is taken as the routing cost per
delivered generation.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .topology import (
    Coord,
    GridConfig,
    Session,
    build_sessions,
    range_neighbors,
)


@dataclass(frozen=True)
class RoutingPlan:
    """Hop sequences, one per session, from source to receiver."""

    paths: dict[Session, tuple[Coord, ...]]

    def hops(self, session: Session) -> int:
        return len(self.paths[session]) - 1

    @property
    def total_hops(self) -> int:
        return sum(len(p) - 1 for p in self.paths.values())


def hops_per_session(cfg: GridConfig) -> int:
    """ceil(K / floor(sqrt(d))): axis distance over the longest legal step."""
    return -(-cfg.K // math.isqrt(cfg.d))


def build_plan(cfg: GridConfig, sessions=None) -> RoutingPlan:
    """Monotone axis-aligned shortest paths, longest hops first."""
    if sessions is None:
        sessions = build_sessions(cfg)
    step = math.isqrt(cfg.d)
    paths = {}
    for s in sessions:
        path = [s.source]
        pos = list(s.source)
        i = s.axis - 1
        sign = 1 if s.receiver[i] > s.source[i] else -1
        while pos[i] != s.receiver[i]:
            move = min(step, abs(s.receiver[i] - pos[i]))
            pos[i] += sign * move
            path.append(tuple(pos))
        paths[s] = tuple(path)
    return RoutingPlan(paths=paths)


def routing_total(cfg: GridConfig) -> int:
    """Closed-form transmissions per generation for the routing solution."""
    return hops_per_session(cfg) * cfg.session_count


def bfs_hop_oracle(cfg: GridConfig, src: Coord, dst: Coord) -> int:
    """Minimum hop count between two nodes over the broadcast graph.

    Breadth-first search, independent of the closed form it certifies.
    """
    if src == dst:
        return 0
    seen = {src}
    frontier = deque([(src, 0)])
    while frontier:
        v, dist = frontier.popleft()
        for u in range_neighbors(cfg, v):
            if u == dst:
                return dist + 1
            if u not in seen:
                seen.add(u)
                frontier.append((u, dist + 1))
    raise ValueError(f"{dst} unreachable from {src}")
