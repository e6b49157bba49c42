"""Grid topology: lattice nodes, broadcast reach, coding neighborhoods, sessions.

Nodes are the integer lattice points of {0..K}^d.  Every node broadcasts to
all nodes within Euclidean distance sqrt(d); the relay rules never combine
symbols from that full reception set, only from the Chebyshev ball of radius
one around the node.  Traffic is multiple unicast: along every axis-aligned
grid line there is one session per direction, sourced on one face of the cube
and received on the opposite face.

Coordinates are plain int tuples.  Axes are numbered 1..d in all public
signatures; tuple storage is zero-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

Coord = tuple[int, ...]

FORWARD = "forward"
BACKWARD = "backward"
DIRECTIONS = (FORWARD, BACKWARD)


@dataclass(frozen=True)
class GridConfig:
    """A d-dimensional grid of side K with broadcast radius sqrt(d).

    Attributes:
        d: dimension, >= 1.
        K: side length, >= 2; nodes have coordinates in [0, K].
    """

    d: int
    K: int

    @property
    def range(self) -> float:
        """Broadcast radius: reaches the full diagonal step."""
        return math.sqrt(self.d)

    @property
    def node_count(self) -> int:
        return (self.K + 1) ** self.d

    @property
    def internal_count(self) -> int:
        return (self.K - 1) ** self.d

    @property
    def border_count(self) -> int:
        return self.node_count - self.internal_count

    @property
    def session_count(self) -> int:
        return 2 * self.d * (self.K + 1) ** (self.d - 1)


@dataclass(frozen=True)
class Session:
    """One unicast flow along `axis`, pinned by the remaining coordinates.

    A forward session runs from the axis-coordinate-0 face to the
    axis-coordinate-K face; a backward session runs the other way.
    `transverse` holds the d-1 coordinates shared by both endpoints.
    """

    axis: int
    transverse: Coord
    direction: str
    source: Coord
    receiver: Coord


def build_grid(d: int, K: int) -> GridConfig:
    """Validate parameters and return the grid configuration.

    Raises:
        ValueError: if d < 1 or K < 2.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if K < 2:
        raise ValueError(f"side length must be >= 2, got {K}")
    return GridConfig(d=d, K=K)


@lru_cache(maxsize=None)
def nodes(cfg: GridConfig) -> tuple[Coord, ...]:
    """All grid nodes in lexicographic order."""
    return tuple(product(range(cfg.K + 1), repeat=cfg.d))


@lru_cache(maxsize=None)
def node_index(cfg: GridConfig) -> dict[Coord, int]:
    """Map each node to its position in the lexicographic enumeration."""
    return {v: i for i, v in enumerate(nodes(cfg))}


def in_grid(cfg: GridConfig, v: Coord) -> bool:
    return len(v) == cfg.d and all(0 <= x <= cfg.K for x in v)


def is_border(cfg: GridConfig, v: Coord) -> bool:
    """True iff some coordinate of v sits on a face of the cube."""
    return any(x == 0 or x == cfg.K for x in v)


@lru_cache(maxsize=None)
def _range_offsets(d: int) -> tuple[Coord, ...]:
    # All nonzero integer offsets with Euclidean norm <= sqrt(d); each
    # component is then bounded by floor(sqrt(d)).
    s = math.isqrt(d)
    offs = []
    for o in product(range(-s, s + 1), repeat=d):
        if any(o) and sum(x * x for x in o) <= d:
            offs.append(o)
    return tuple(offs)


def range_neighbors(cfg: GridConfig, v: Coord) -> set[Coord]:
    """Every other node that can hear v's broadcasts."""
    out = set()
    for o in _range_offsets(cfg.d):
        u = tuple(a + b for a, b in zip(v, o))
        if all(0 <= x <= cfg.K for x in u):
            out.add(u)
    return out


def coding_neighborhood(cfg: GridConfig, v: Coord) -> set[Coord]:
    """The Chebyshev ball of radius one around v, clipped to the grid.

    Includes v itself.  This is the only set of transmitters whose symbols
    the combining and decoding rules ever read.
    """
    ranges = [
        [x + o for o in (-1, 0, 1) if 0 <= x + o <= cfg.K]
        for x in v
    ]
    return set(product(*ranges))


def manhattan_dist(u: Coord, v: Coord) -> int:
    """Sum of coordinate differences; both points must have equal dimension."""
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum(abs(a - b) for a, b in zip(u, v))


def insert_component(transverse: Coord, axis: int, value: int) -> Coord:
    """Rebuild a full coordinate by inserting `value` at 1-based `axis`."""
    i = axis - 1
    return transverse[:i] + (value,) + transverse[i:]


def drop_component(v: Coord, axis: int) -> Coord:
    """The d-1 coordinates of v with the 1-based `axis` entry removed."""
    i = axis - 1
    return v[:i] + v[i + 1:]


def session_at(cfg: GridConfig, axis: int, transverse: Coord, direction: str) -> Session:
    """Construct the session identified by (axis, transverse, direction)."""
    if not 1 <= axis <= cfg.d:
        raise ValueError(f"axis must be in 1..{cfg.d}, got {axis}")
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    lo = insert_component(transverse, axis, 0)
    hi = insert_component(transverse, axis, cfg.K)
    if direction == FORWARD:
        return Session(axis, transverse, direction, source=lo, receiver=hi)
    return Session(axis, transverse, direction, source=hi, receiver=lo)


@lru_cache(maxsize=None)
def build_sessions(cfg: GridConfig) -> tuple[Session, ...]:
    """All 2*d*(K+1)^(d-1) sessions in canonical order.

    Order is (axis, lexicographic transverse, forward before backward) so
    that every enumeration-derived artifact is deterministic.
    """
    out = []
    for axis in range(1, cfg.d + 1):
        for transverse in product(range(cfg.K + 1), repeat=cfg.d - 1):
            for direction in DIRECTIONS:
                out.append(session_at(cfg, axis, transverse, direction))
    return tuple(out)


def mirror(cfg: GridConfig, v: Coord) -> Coord:
    """Point reflection through the cube center: componentwise K - v."""
    return tuple(cfg.K - x for x in v)


def mirror_session(cfg: GridConfig, s: Session) -> Session:
    """Image of a session under the point reflection: direction flips."""
    other = BACKWARD if s.direction == FORWARD else FORWARD
    flipped = tuple(cfg.K - x for x in s.transverse)
    return session_at(cfg, s.axis, flipped, other)
