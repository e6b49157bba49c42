"""Per-grid dispatch tables shared by the reference engine and the kernels.

Flattens the grid into C-order indices and compiles the transmit and decode
rules into integer arrays, so the formulas are enumerated exactly once (in
encoder / decoder) and then evaluated either over payload objects or over
packed uint8 histories.

Layout conventions used everywhere downstream:
  * node flat index: C-order over coordinates, stride_axis = (K+1)^(d-axis).
  * component flat index: border_local * 2d + (axis-1) + (0 forward | d backward).
  * decode rows: enumerated per border node in node order, axis ascending,
    forward before backward; one row per served session.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import decoder, encoder
from .theta import ThetaTable, build_theta
from .topology import (
    BACKWARD,
    FORWARD,
    Coord,
    GridConfig,
    Session,
    build_sessions,
    drop_component,
    is_border,
    node_index,
    nodes,
    session_at,
)

# border component rule kinds
KIND_SOURCE = 0
KIND_RELAY = 1
KIND_DECODED = 2

# decode term kinds
TERM_AGG = 0
TERM_COMP = 1


@dataclass
class SimTables:
    """Flattened topology and compiled rules for one grid."""

    cfg: GridConfig
    theta: ThetaTable
    coords: tuple[Coord, ...]
    index: dict[Coord, int]
    strides: tuple[int, ...]
    twod: int
    border_idx: np.ndarray      # (B,) flat node index of each border node
    border_local: np.ndarray    # (N,) border-local index, -1 for internal
    internal_idx: np.ndarray    # (M,) flat node index of each internal node
    sessions: tuple[Session, ...]
    session_index: dict[Session, int]
    bkind: np.ndarray           # (B*2d,) component rule kind
    bref: np.ndarray            # (B*2d,) session row / component flat / decode row
    sten_off: np.ndarray        # (L,) flat index offset of a stencil entry
    sten_tau: np.ndarray        # (L,) lookback of a stencil entry
    dec_node: np.ndarray        # (R,) flat node index of each decode row
    dec_axis: np.ndarray        # (R,)
    dec_dir: tuple[str, ...]    # (R,)
    dec_sess: np.ndarray        # (R,) session row delivered by this decode
    dec_rib: np.ndarray         # (R,) bool, single-read decode
    dec_start: np.ndarray       # (R+1,) CSR segment bounds into the term arrays
    term_kind: np.ndarray       # (T,)
    term_ref: np.ndarray        # (T,) node flat (agg) or component flat (comp)
    term_tau: np.ndarray        # (T,)
    decode_row: dict[tuple[int, int, str], int]  # (node flat, axis, dir) -> row


def comp_flat(border_local: int, axis: int, direction: str, d: int) -> int:
    """Flat index of one border component within a slot."""
    return border_local * 2 * d + (axis - 1) + (0 if direction == FORWARD else d)


@lru_cache(maxsize=None)
def build_tables(cfg: GridConfig) -> SimTables:
    d, K = cfg.d, cfg.K
    theta = build_theta(d)
    coords = nodes(cfg)
    index = node_index(cfg)
    n = len(coords)
    strides = tuple((K + 1) ** (d - axis) for axis in range(1, d + 1))
    twod = 2 * d

    border_mask = np.fromiter((is_border(cfg, v) for v in coords), dtype=bool, count=n)
    border_idx = np.flatnonzero(border_mask).astype(np.int64)
    internal_idx = np.flatnonzero(~border_mask).astype(np.int64)
    border_local = np.full(n, -1, dtype=np.int64)
    border_local[border_idx] = np.arange(len(border_idx), dtype=np.int64)

    sessions = build_sessions(cfg)
    session_index = {s: i for i, s in enumerate(sessions)}

    # decode rows first: component rules on receiving faces point at them
    dec_node, dec_axis, dec_dir, dec_sess, dec_rib = [], [], [], [], []
    decode_row: dict[tuple[int, int, str], int] = {}
    dec_start = [0]
    term_kind, term_ref, term_tau = [], [], []
    for flat in border_idx:
        v = coords[flat]
        for axis in range(1, d + 1):
            for direction, facet in ((FORWARD, K), (BACKWARD, 0)):
                if v[axis - 1] != facet:
                    continue
                row = len(dec_node)
                decode_row[(int(flat), axis, direction)] = row
                dec_node.append(int(flat))
                dec_axis.append(axis)
                dec_dir.append(direction)
                dec_sess.append(session_index[session_at(cfg, axis, drop_component(v, axis), direction)])
                dec_rib.append(decoder.is_rib(cfg, v, axis))
                for term in decoder.decode_terms(cfg, theta, v, axis, direction):
                    if term[0] == "agg":
                        _, u, back = term
                        term_kind.append(TERM_AGG)
                        term_ref.append(index[u])
                    else:
                        _, u, taxis, tdir, back = term
                        b = border_local[index[u]]
                        assert b >= 0, f"component term targets internal node {u}"
                        term_kind.append(TERM_COMP)
                        term_ref.append(comp_flat(int(b), taxis, tdir, d))
                    term_tau.append(back)
                dec_start.append(len(term_kind))

    # border component rules
    bkind = np.zeros(len(border_idx) * twod, dtype=np.uint8)
    bref = np.zeros(len(border_idx) * twod, dtype=np.int64)
    for b, flat in enumerate(border_idx):
        v = coords[flat]
        for axis in range(1, d + 1):
            for direction in (FORWARD, BACKWARD):
                j = comp_flat(b, axis, direction, d)
                rule = encoder.border_component_rule(cfg, v, axis, direction)
                if rule[0] == encoder.SOURCE:
                    bkind[j] = KIND_SOURCE
                    bref[j] = session_index[session_at(cfg, axis, drop_component(v, axis), direction)]
                elif rule[0] == encoder.RELAY:
                    up = border_local[index[rule[1]]]
                    assert up >= 0, f"relay source {rule[1]} is not a border node"
                    bkind[j] = KIND_RELAY
                    bref[j] = comp_flat(int(up), axis, direction, d)
                else:
                    bkind[j] = KIND_DECODED
                    bref[j] = decode_row[(int(flat), axis, direction)]

    # internal stencil, shared by every internal node
    sten_off, sten_tau = [], []
    for off, tau in encoder.internal_stencil(cfg, theta):
        sten_off.append(sum(o * s for o, s in zip(off, strides)))
        sten_tau.append(tau)

    return SimTables(
        cfg=cfg,
        theta=theta,
        coords=coords,
        index=index,
        strides=strides,
        twod=twod,
        border_idx=border_idx,
        border_local=border_local,
        internal_idx=internal_idx,
        sessions=sessions,
        session_index=session_index,
        bkind=bkind,
        bref=bref,
        sten_off=np.asarray(sten_off, dtype=np.int64),
        sten_tau=np.asarray(sten_tau, dtype=np.int64),
        dec_node=np.asarray(dec_node, dtype=np.int64),
        dec_axis=np.asarray(dec_axis, dtype=np.int64),
        dec_dir=tuple(dec_dir),
        dec_sess=np.asarray(dec_sess, dtype=np.int64),
        dec_rib=np.asarray(dec_rib, dtype=bool),
        dec_start=np.asarray(dec_start, dtype=np.int64),
        term_kind=np.asarray(term_kind, dtype=np.uint8),
        term_ref=np.asarray(term_ref, dtype=np.int64),
        term_tau=np.asarray(term_tau, dtype=np.int64),
        decode_row=decode_row,
    )
