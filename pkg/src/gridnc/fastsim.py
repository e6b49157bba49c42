"""Packed bit-mode simulator for large runs.

Payloads are single bits, stored as uint8 whole-grid history arrays, and each
slot is advanced by one kernel call (numba or numpy backend, see
gridnc.backends).  Every slot still verifies the only check bits admit: each
decoded bit must equal the bit its source emitted K slots earlier.  With
retain_history=True the full per-slot component and aggregate tables are
kept, which is what the coefficient-agreement tests diff against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backends
from .symbols import source_bit
from .tables import SimTables, build_tables
from .topology import GridConfig


@dataclass
class BitRunResult:
    """Outcome of a packed bit-mode run."""

    cfg: GridConfig
    slots: int
    seed: int
    backend: str
    per_slot_tx: int
    total_tx: int
    violations: int
    delivered_first: int       # 0 when nothing was delivered
    delivered_last: int
    tables: SimTables
    comp_hist: np.ndarray | None = None  # (slots+1, B*2d) when retained
    agg_hist: np.ndarray | None = None   # (slots+1, N) when retained
    dec_hist: np.ndarray | None = None   # (slots+1, R) when retained


def source_bit_table(tabs: SimTables, slots: int, seed: int) -> np.ndarray:
    """All session source bits up to the final slot; column = generation."""
    bits = np.zeros((len(tabs.sessions), slots + 1), dtype=np.uint8)
    for s, session in enumerate(tabs.sessions):
        for t in range(1, slots + 1):
            bits[s, t] = source_bit(seed, session, t)
    return bits


def simulate_bits(cfg: GridConfig, slots: int, seed: int = 0, *,
                  backend: str | None = None,
                  retain_history: bool = False) -> BitRunResult:
    """Run `slots` slots in bit mode and verify every delivery.

    Raises:
        ValueError: if slots < 1.
    """
    if slots < 1:
        raise ValueError(f"slots must be >= 1, got {slots}")
    tabs = build_tables(cfg)
    kern = backends.resolve_backend(backend)
    d, K = cfg.d, cfg.K
    depth = slots + 1 if retain_history else 2 * d + 1
    n_comp = len(tabs.border_idx) * tabs.twod

    comp_hist = np.zeros((depth, n_comp), dtype=np.uint8)
    agg_hist = np.zeros((depth, len(tabs.coords)), dtype=np.uint8)
    decoded = np.zeros(len(tabs.dec_sess), dtype=np.uint8)
    dec_out = np.zeros_like(decoded)
    dec_ok = np.zeros_like(decoded)
    src_bits = source_bit_table(tabs, slots, seed)
    dec_hist = np.zeros((slots + 1, len(decoded)), dtype=np.uint8) if retain_history else None

    violations = 0
    for t in range(1, slots + 1):
        kern.step_slot(
            t, K, depth, retain_history, tabs.twod,
            comp_hist, agg_hist,
            tabs.bkind, tabs.bref, tabs.border_idx, src_bits, decoded,
            tabs.internal_idx, tabs.sten_off, tabs.sten_tau,
            tabs.dec_sess, tabs.dec_start, tabs.term_kind, tabs.term_ref, tabs.term_tau,
            dec_out, dec_ok,
        )
        violations += int(len(dec_ok) - int(dec_ok.sum()))
        if dec_hist is not None:
            dec_hist[t] = dec_out

    last = slots + 1 - K
    per_slot = cfg.internal_count + tabs.twod * cfg.border_count
    return BitRunResult(
        cfg=cfg,
        slots=slots,
        seed=seed,
        backend=kern.NAME,
        per_slot_tx=per_slot,
        total_tx=per_slot * slots,
        violations=violations,
        delivered_first=1 if last >= 1 else 0,
        delivered_last=max(last, 0),
        tables=tabs,
        comp_hist=comp_hist if retain_history else None,
        agg_hist=agg_hist if retain_history else None,
        dec_hist=dec_hist,
    )
