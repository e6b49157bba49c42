"""Receiver-side recovery of the K-slots-delayed source symbols.

A receiver sits on the face where its session terminates.  If it also lies
on a rib of the hull (some second coordinate at an extreme), the wanted
symbol is relayed verbatim by the neighbor one step inward along the session
axis, and decoding is a single read.  Otherwise the receiver XORs a fixed
window of everything it heard: neighborhood aggregates, its own recent
components, the adjacent line neighbors' components, and the face neighbors'
session-axis components.  The delay-offset schedule makes every foreign
contribution cancel over GF(2), leaving exactly the source symbol emitted K
slots earlier.

The opposite-direction decode is the same formula transported through the
point reflection of the cube, with forward and backward component roles
swapped; the reflection invariance of the whole construction is itself
asserted by the engine's tests.

Terms are exposed as plain tuples so the packed kernels and the reference
evaluator share one enumeration:

    ("agg", node, lookback)                   -- node's combined transmission
    ("comp", node, axis, direction, lookback) -- one border component
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


class DecodeError(Exception):
    """A decode produced something other than the expected exact symbol."""


def is_rib(cfg: GridConfig, v: Coord, i: int) -> bool:
    """True iff v has a second extreme coordinate besides axis i."""
    return any(
        j != i and v[j - 1] in (0, cfg.K)
        for j in range(1, cfg.d + 1)
    )


def decode_terms(cfg: GridConfig, theta: ThetaTable, v: Coord, i: int, direction: str) -> list[tuple]:
    """Everything a receiver XORs to recover its next source symbol.

    `direction` names the session being decoded; v must sit on that
    session's receiving face along axis i.  Lookbacks are relative to the
    decode instant t, and all of them are >= 1: the decode of the
    generation-(t-K) symbol completes at the end of slot t-1.
    """
    facet = cfg.K if direction == FORWARD else 0
    if v[i - 1] != facet:
        raise ValueError(f"{v} does not receive {direction} sessions on axis {i}")
    near, far = direction, (BACKWARD if direction == FORWARD else FORWARD)
    inward = -1 if direction == FORWARD else 1

    if is_rib(cfg, v, i):
        one_in = insert_component(drop_component(v, i), i, facet + inward)
        return [("comp", one_in, i, near, 1)]

    terms: list[tuple] = []
    hood = sorted(coding_neighborhood(cfg, v))
    # neighborhood aggregates at their distance-scheduled lookbacks
    for u in hood:
        if u == v:
            continue
        for tau in sorted(theta.sets[manhattan_dist(u, v)]):
            terms.append(("agg", u, tau))
    # own off-axis components, deepest schedule
    for j in range(1, cfg.d + 1):
        if j == i:
            continue
        for tau in sorted(theta.sets[0]):
            terms.append(("comp", v, j, FORWARD, tau))
            terms.append(("comp", v, j, BACKWARD, tau))
    # adjacent line neighbors' components, one slot back
    for j in range(1, cfg.d + 1):
        if j == i:
            continue
        rest = drop_component(v, j)
        terms.append(("comp", insert_component(rest, j, v[j - 1] - 1), j, FORWARD, 1))
        terms.append(("comp", insert_component(rest, j, v[j - 1] + 1), j, BACKWARD, 1))
    # face neighbors' session-axis components, straddling their schedule
    for u in hood:
        dist = manhattan_dist(u, v)
        if u[i - 1] != facet or not 0 < dist < cfg.d:
            continue
        for tau in sorted(theta.sets[dist + 1]):
            terms.append(("comp", u, i, near, tau + 1))
            terms.append(("comp", u, i, far, tau - 1))
    # own session-axis components
    for tau in sorted(theta.sets[1]):
        if tau != 1:
            terms.append(("comp", v, i, near, tau - 1))
        terms.append(("comp", v, i, far, tau + 1))
    return terms


def _decode(cfg, theta, v, i, t, history, direction):
    def fetch(term):
        if term[0] == "agg":
            _, u, back = term
            return history.aggregate(u, t - back)
        _, u, axis, comp_dir, back = term
        return history.component(u, t - back, axis, comp_dir)

    terms = decode_terms(cfg, theta, v, i, direction)
    return xor_all((fetch(term) for term in terms), history.mode)


def decode_forward(cfg: GridConfig, v: Coord, i: int, t: int, theta: ThetaTable, history) -> Payload:
    """Recover the forward session's generation t-K symbol at its receiver.

    Uses only symbols heard in slots up to t-1; with t-K <= 0 the result is
    the zero payload.
    """
    if not (is_border(cfg, v) and v[i - 1] == cfg.K):
        raise ValueError(f"{v} is not the axis-{i} forward receiving face")
    return _decode(cfg, theta, v, i, t, history, FORWARD)


def decode_backward(cfg: GridConfig, v: Coord, i: int, t: int, theta: ThetaTable, history) -> Payload:
    """Recover the backward session's generation t-K symbol at its receiver."""
    if not (is_border(cfg, v) and v[i - 1] == 0):
        raise ValueError(f"{v} is not the axis-{i} backward receiving face")
    return _decode(cfg, theta, v, i, t, history, BACKWARD)


def check_exact(cfg: GridConfig, payload: Payload, v: Coord, i: int, direction: str, generation: int) -> None:
    """Fail loudly unless a coeff decode is exactly the expected symbol.

    For generation >= 1 the payload must be the singleton tag of that
    session and generation; for generation <= 0 it must be zero.

    Raises:
        DecodeError: carrying the offending tag set.
    """
    if payload.mode != COEFF:
        raise ValueError("exactness checks apply to coeff payloads only")
    if generation < 1:
        want: frozenset[SourceTag] = frozenset()
    else:
        session = session_at(cfg, i, drop_component(v, i), direction)
        want = frozenset({SourceTag(session, generation)})
    if payload.tags != want:
        raise DecodeError(
            f"decode at {v} axis {i} {direction} generation {generation}: "
            f"got {sorted((tag.session.direction, tag.session.axis, tag.session.transverse, tag.generation) for tag in payload.tags)}"
        )
