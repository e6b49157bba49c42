"""Vectorized per-slot kernel: gather/XOR over packed uint8 histories.

Same array layout and semantics as the numba backend; decode segments are
reduced with a prefix-XOR so empty-segment edge cases cannot arise.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"


def _row(slot, depth, retain):
    if retain:
        return slot if slot > 0 else 0
    return slot % depth


def _rows(slots, depth, retain):
    if retain:
        return np.maximum(slots, 0)
    return slots % depth


def step_slot(t, K, depth, retain, twod,
              comp_hist, agg_hist,
              bkind, bref, border_idx, src_bits, decoded,
              internal_idx, sten_off, sten_tau,
              dec_sess, dec_start, term_kind, term_ref, term_tau,
              dec_out, dec_ok):
    r_t = _row(t, depth, retain)
    r_p = _row(t - 1, depth, retain)

    comps = comp_hist[r_t]
    src_sel = bkind == 0
    relay_sel = bkind == 1
    dec_sel = bkind == 2
    comps[relay_sel] = comp_hist[r_p, bref[relay_sel]]
    comps[src_sel] = src_bits[bref[src_sel], t]
    comps[dec_sel] = decoded[bref[dec_sel]]

    agg_hist[r_t, border_idx] = np.bitwise_xor.reduce(comps.reshape(-1, twod), axis=1)

    acc = np.zeros(internal_idx.shape[0], dtype=np.uint8)
    for s in range(sten_off.shape[0]):
        acc ^= agg_hist[_row(t - int(sten_tau[s]), depth, retain), internal_idx + sten_off[s]]
    agg_hist[r_t, internal_idx] = acc

    tp = t + 1
    g = tp - K
    rows = _rows(tp - term_tau, depth, retain)
    agg_vals = agg_hist[rows, np.where(term_kind == 0, term_ref, 0)]
    comp_vals = comp_hist[rows, np.where(term_kind == 1, term_ref, 0)]
    vals = np.where(term_kind == 0, agg_vals, comp_vals)
    prefix = np.zeros(vals.shape[0] + 1, dtype=np.uint8)
    np.bitwise_xor.accumulate(vals, out=prefix[1:])
    seg = prefix[dec_start[1:]] ^ prefix[dec_start[:-1]]
    dec_out[:] = seg
    decoded[:] = seg
    if g >= 1:
        np.equal(seg, src_bits[dec_sess, g], out=dec_ok.view(bool))
    else:
        np.equal(seg, 0, out=dec_ok.view(bool))
