"""Transmitted-symbol algebra over GF(2).

Payloads come in two modes.  In coeff mode a payload is the exact set of
(session, generation) source tags whose XOR it equals; addition is symmetric
difference, so verification can demand that a decoded payload is *exactly*
one tag.  In bit mode a payload is a single bit, and source streams are drawn
from a keyed hash of (seed, session identity, generation) so that large runs
need no stored streams at all.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .topology import Session

BIT = "bit"
COEFF = "coeff"


@dataclass(frozen=True)
class SourceTag:
    """Identity of one source symbol: which session emitted it, and when."""

    session: Session
    generation: int

    def __post_init__(self) -> None:
        # generation <= 0 symbols are identically zero and never tagged
        if self.generation < 1:
            raise ValueError(f"generation must be >= 1, got {self.generation}")


@dataclass(frozen=True)
class Payload:
    """An immutable GF(2) symbol in either bit or coeff representation."""

    mode: str
    bit: int = 0
    tags: frozenset[SourceTag] = field(default_factory=frozenset)

    @classmethod
    def zero(cls, mode: str) -> "Payload":
        return cls(mode=mode)

    @classmethod
    def from_bit(cls, bit: int) -> "Payload":
        return cls(mode=BIT, bit=bit & 1)

    @classmethod
    def from_tags(cls, tags) -> "Payload":
        return cls(mode=COEFF, tags=frozenset(tags))

    @property
    def is_zero(self) -> bool:
        return self.bit == 0 if self.mode == BIT else not self.tags

    def __xor__(self, other: "Payload") -> "Payload":
        return xor(self, other)


def xor(a: Payload, b: Payload) -> Payload:
    """GF(2) sum: bit XOR in bit mode, symmetric tag difference in coeff mode.

    Raises:
        ValueError: if the payloads are in different modes.
    """
    if a.mode != b.mode:
        raise ValueError(f"payload mode mismatch: {a.mode} vs {b.mode}")
    if a.mode == BIT:
        return Payload(mode=BIT, bit=a.bit ^ b.bit)
    return Payload(mode=COEFF, tags=a.tags ^ b.tags)


def xor_all(payloads, mode: str) -> Payload:
    """Fold xor over an iterable; the empty fold is the zero payload."""
    if mode == BIT:
        acc = 0
        for p in payloads:
            if p.mode != BIT:
                raise ValueError(f"payload mode mismatch: {p.mode} vs {BIT}")
            acc ^= p.bit
        return Payload(mode=BIT, bit=acc)
    tags: set[SourceTag] = set()
    for p in payloads:
        if p.mode != COEFF:
            raise ValueError(f"payload mode mismatch: {p.mode} vs {COEFF}")
        tags ^= p.tags
    return Payload(mode=COEFF, tags=frozenset(tags))


def source_bit(seed: int, session: Session, t: int) -> int:
    """Deterministic bit of a session's stream at generation t.

    Stateless keyed hash of (seed, session identity, generation); the same
    arguments always yield the same bit, independent of call order.
    """
    msg = "{}|{}|{}|{}".format(
        session.direction, session.axis, ",".join(map(str, session.transverse)), t
    )
    h = hashlib.blake2b(msg.encode(), key=str(seed).encode(), digest_size=1)
    return h.digest()[0] & 1


def source_symbol(session: Session, t: int, mode: str = COEFF, seed: int = 0) -> Payload:
    """The symbol a source emits at slot t; slots <= 0 are the zero symbol."""
    if t <= 0:
        return Payload.zero(mode)
    if mode == COEFF:
        return Payload.from_tags({SourceTag(session, t)})
    return Payload.from_bit(source_bit(seed, session, t))


def is_exactly(p: Payload, tag: SourceTag) -> bool:
    """True iff a coeff payload consists of precisely the given tag.

    Raises:
        ValueError: if called on a bit-mode payload.
    """
    if p.mode != COEFF:
        raise ValueError("exactness is only defined for coeff payloads")
    return p.tags == {tag}


def evaluate_tags(tags, seed: int) -> int:
    """Bit value of a coefficient vector under the seeded source streams."""
    acc = 0
    for tag in tags:
        acc ^= source_bit(seed, tag.session, tag.generation)
    return acc


def map_sessions(p: Payload, fn) -> Payload:
    """Relabel every tag's session through fn; coeff mode only."""
    if p.mode != COEFF:
        raise ValueError("session relabeling is only defined for coeff payloads")
    return Payload.from_tags(SourceTag(fn(tag.session), tag.generation) for tag in p.tags)
