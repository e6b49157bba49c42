"""JIT-compiled per-slot kernel: explicit loops over packed uint8 histories.

Array layout is fixed by gridnc.tables: comp_hist rows are flat
(border_local * 2d + component) vectors, agg_hist rows are flat node
vectors.  `retain` switches slot addressing between a full per-slot table
(row = slot, row 0 permanently zero) and a ring of `depth` rows.
"""

from __future__ import annotations

from numba import njit

NAME = "numba"


@njit(cache=True)
def _row(slot, depth, retain):
    if retain:
        return slot if slot > 0 else 0
    return slot % depth  # python semantics: non-negative for positive depth


@njit(cache=True)
def step_slot(t, K, depth, retain, twod,
              comp_hist, agg_hist,
              bkind, bref, border_idx, src_bits, decoded,
              internal_idx, sten_off, sten_tau,
              dec_sess, dec_start, term_kind, term_ref, term_tau,
              dec_out, dec_ok):
    r_t = _row(t, depth, retain)
    r_p = _row(t - 1, depth, retain)

    # border components: fresh source, upstream relay, or last decode
    for j in range(bkind.shape[0]):
        kind = bkind[j]
        if kind == 1:
            comp_hist[r_t, j] = comp_hist[r_p, bref[j]]
        elif kind == 0:
            comp_hist[r_t, j] = src_bits[bref[j], t]
        else:
            comp_hist[r_t, j] = decoded[bref[j]]

    # border aggregates
    for b in range(border_idx.shape[0]):
        acc = 0
        base = b * twod
        for k in range(twod):
            acc ^= comp_hist[r_t, base + k]
        agg_hist[r_t, border_idx[b]] = acc

    # internal symbols: one shared stencil over neighborhood aggregates
    for m in range(internal_idx.shape[0]):
        v = internal_idx[m]
        acc = 0
        for s in range(sten_off.shape[0]):
            acc ^= agg_hist[_row(t - sten_tau[s], depth, retain), v + sten_off[s]]
        agg_hist[r_t, v] = acc

    # decode completing at the end of slot t: generation t + 1 - K
    tp = t + 1
    g = tp - K
    for r in range(dec_sess.shape[0]):
        acc = 0
        for q in range(dec_start[r], dec_start[r + 1]):
            rr = _row(tp - term_tau[q], depth, retain)
            if term_kind[q] == 0:
                acc ^= agg_hist[rr, term_ref[q]]
            else:
                acc ^= comp_hist[rr, term_ref[q]]
        dec_out[r] = acc
        decoded[r] = acc
        if g >= 1:
            dec_ok[r] = 1 if acc == src_bits[dec_sess[r], g] else 0
        else:
            dec_ok[r] = 1 if acc == 0 else 0
