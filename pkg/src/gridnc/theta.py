"""Delay-offset sets that schedule the relay combining rule.

For dimension d there are d+1 subsets of {1..2d}, indexed by the Manhattan
distance of a contributing neighbor.  They are generated by a downward shift
recurrence on indicator vectors over positions 1..2d: the distance-d set is
the singleton {d}, and each lower set is the GF(2) sum of the left and right
shifts of the one above it, discarding anything shifted past either end.

Their load-bearing property is a telescoping identity: for a stream of
formal symbols y, summing y at offsets (tau+1 for tau in set[delta+1]),
(tau for tau in set[delta]) and (tau-1 for tau in set[delta+1]) cancels
completely when delta > 0 and leaves exactly the current symbol when
delta = 0.  check_theta_identity verifies this symbolically, which is what
makes every foreign contribution vanish during decoding.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


@dataclass(frozen=True)
class ThetaTable:
    """Delay-offset sets for one dimension, indexed by Manhattan distance."""

    d: int
    sets: tuple[frozenset[int], ...]  # index delta in 0..d, members in 1..2d


@lru_cache(maxsize=None)
def build_theta(d: int) -> ThetaTable:
    """Build the table by the downward shift recurrence.

    Raises:
        ValueError: if d < 1.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    size = 2 * d
    # indicator[j] for positions j = 1..size; index 0 unused
    current = [0] * (size + 1)
    current[d] = 1
    table: list[frozenset[int]] = [frozenset({d})]
    for _ in range(d):
        nxt = [0] * (size + 1)
        for j in range(1, size + 1):
            if not current[j]:
                continue
            if j - 1 >= 1:       # shift toward position 1; position-1 mass is dropped
                nxt[j - 1] ^= 1
            if j + 1 <= size:    # shift toward position 2d; position-2d mass is dropped
                nxt[j + 1] ^= 1
        current = nxt
        table.append(frozenset(j for j in range(1, size + 1) if current[j]))
    table.reverse()
    return ThetaTable(d=d, sets=tuple(table))


def check_theta_identity(table: ThetaTable, delta: int) -> bool:
    """Symbolically verify the telescoping identity at one distance.

    Treating the symbol stream as formal variables, XOR the offset multisets
    {tau+1: tau in sets[delta+1]}, {tau: tau in sets[delta]} and
    {tau-1: tau in sets[delta+1]}.  For delta > 0 the residue must be empty;
    for delta = 0 it must be exactly {0}, i.e. the current symbol survives.

    Raises:
        ValueError: if delta is outside 0..d-1.
    """
    if not 0 <= delta <= table.d - 1:
        raise ValueError(f"delta must be in 0..{table.d - 1}, got {delta}")
    residue: set[int] = set()
    for tau in table.sets[delta + 1]:
        residue ^= {tau + 1}
        residue ^= {tau - 1}
    for tau in table.sets[delta]:
        residue ^= {tau}
    expected = {0} if delta == 0 else set()
    return residue == expected
