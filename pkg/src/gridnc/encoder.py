"""Per-slot transmit rules.

Border nodes transmit 2d component symbols per slot, one per (axis,
direction) pair: on the face where that direction's sessions originate the
component is a fresh source symbol; in the interior of a line it repeats the
component the one-step-upstream neighbor sent last slot; on the far face it
re-injects the symbol the node itself decoded at the end of the previous
slot.  Internal nodes transmit a single XOR combination of what their
Chebyshev-ball neighborhood sent recently, with lookbacks scheduled by the
delay-offset sets.

The steady-state shape of all of this is pinned down by
expected_component_tags / expected_symbol_tags: every component carries
exactly one source symbol, delayed by the node's distance from that source,
and every aggregate or internal symbol is the XOR of one such symbol per
session passing through the node.  The engine asserts these shapes every
slot in coeff mode.
"""

from __future__ import annotations

from .symbols import COEFF, Payload, SourceTag, xor_all
from .theta import ThetaTable
from .topology import (
    BACKWARD,
    FORWARD,
    Coord,
    GridConfig,
    coding_neighborhood,
    drop_component,
    insert_component,
    is_border,
    manhattan_dist,
    session_at,
)

# component rule kinds
SOURCE = "source"
RELAY = "relay"
DECODED = "decoded"


def border_component_rule(cfg: GridConfig, v: Coord, i: int, direction: str):
    """Classify one border component and name what it reads.

    Returns one of:
        (SOURCE,)                -- fresh source symbol of this node's session
        (RELAY, upstream_coord)  -- that neighbor's same component, last slot
        (DECODED,)               -- the symbol decoded here last slot
    """
    if not is_border(cfg, v):
        raise ValueError(f"{v} is not a border node")
    if not 1 <= i <= cfg.d:
        raise ValueError(f"axis must be in 1..{cfg.d}, got {i}")
    c = v[i - 1]
    source_face = 0 if direction == FORWARD else cfg.K
    step = -1 if direction == FORWARD else 1
    if c == source_face:
        return (SOURCE,)
    if 0 < c < cfg.K:
        return (RELAY, insert_component(drop_component(v, i), i, c + step))
    return (DECODED,)


def _border_component(cfg, v, i, t, history, direction):
    if t <= 0:
        return Payload.zero(history.mode)
    rule = border_component_rule(cfg, v, i, direction)
    if rule[0] == SOURCE:
        return history.source_payload(i, direction, t)
    if rule[0] == RELAY:
        return history.component(rule[1], t - 1, i, direction)
    return history.decoded_payload(i, direction, t - cfg.K)


def border_forward_component(cfg: GridConfig, v: Coord, i: int, t: int, history) -> Payload:
    """Component of v feeding the forward sessions of axis i at slot t."""
    return _border_component(cfg, v, i, t, history, FORWARD)


def border_backward_component(cfg: GridConfig, v: Coord, i: int, t: int, history) -> Payload:
    """Component of v feeding the backward sessions of axis i at slot t."""
    return _border_component(cfg, v, i, t, history, BACKWARD)


def border_aggregate(components) -> Payload:
    """XOR of all 2d components a border node transmits in one slot."""
    components = list(components)
    if not components:
        raise ValueError("a border node transmits at least two components")
    return xor_all(components, components[0].mode)


def internal_terms(cfg: GridConfig, theta: ThetaTable, v: Coord) -> list[tuple[Coord, int]]:
    """(neighbor, lookback) pairs combined by an internal node each slot."""
    terms = []
    for u in sorted(coding_neighborhood(cfg, v)):
        for tau in sorted(theta.sets[manhattan_dist(u, v)]):
            terms.append((u, tau))
    return terms


def internal_transmit(cfg: GridConfig, v: Coord, t: int, theta: ThetaTable, history) -> Payload:
    """The single symbol an internal node transmits at slot t.

    XOR over the Chebyshev-ball neighborhood (including v itself) of each
    member's past transmissions at the lookbacks scheduled for its Manhattan
    distance; slots <= 0 contribute nothing.
    """
    if is_border(cfg, v):
        raise ValueError(f"{v} is not an internal node")
    if t <= 0:
        return Payload.zero(history.mode)
    return xor_all(
        (history.aggregate(u, t - tau) for u, tau in internal_terms(cfg, theta, v)),
        history.mode,
    )


def internal_stencil(cfg: GridConfig, theta: ThetaTable) -> list[tuple[Coord, int]]:
    """(coordinate offset, lookback) pairs shared by every internal node.

    Internal nodes always see the full 3^d Chebyshev ball, so one stencil
    serves all of them.
    """
    center = tuple(1 for _ in range(cfg.d))
    probe = GridConfig(d=cfg.d, K=2)
    return [
        (tuple(a - b for a, b in zip(u, center)), tau)
        for u, tau in internal_terms(probe, theta, center)
    ]


def expected_component_tags(cfg: GridConfig, v: Coord, i: int, t: int, direction: str) -> frozenset[SourceTag]:
    """Steady-state content of one border component, as exact tags.

    The forward component of axis i carries the generation emitted t - v_i
    slots ago; the backward one the generation emitted t - K + v_i slots ago.
    Generations <= 0 have not been emitted, leaving the zero payload.
    """
    c = v[i - 1]
    gen = t - c if direction == FORWARD else t - cfg.K + c
    if gen < 1:
        return frozenset()
    session = session_at(cfg, i, drop_component(v, i), direction)
    return frozenset({SourceTag(session, gen)})


def expected_symbol_tags(cfg: GridConfig, v: Coord, t: int) -> frozenset[SourceTag]:
    """Steady-state content of a node's combined transmission.

    Holds for internal symbols and for border aggregates alike: exactly one
    source symbol per session whose line passes through v, each at its own
    delay.
    """
    tags: set[SourceTag] = set()
    for i in range(1, cfg.d + 1):
        for direction in (FORWARD, BACKWARD):
            tags |= expected_component_tags(cfg, v, i, t, direction)
    return frozenset(tags)
