"""Phase-synchronous slot loop: transmit, deliver, decode, verify, log.

Every slot is a pure function of committed history: all border components,
border aggregates and internal symbols for slot t are computed from slots
< t, committed at a barrier, and only then does the end-of-slot decode run
at every receiver.  In coeff mode the engine asserts, every slot, that each
component and each combined transmission has its exact steady-state tag
shape and that every decode is exactly the one expected source symbol; any
mismatch is recorded and, in strict mode, aborts the run.  In bit mode the
per-slot check is that each decoded bit equals the bit its source emitted K
slots earlier.

Histories are ring buffers of depth 2d+1; reads past that depth raise, which
is how the depth-sufficiency claim stays honest.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import tables as tb
from .symbols import BIT, COEFF, Payload, SourceTag, source_bit
from .theta import ThetaTable
from .topology import (
    BACKWARD,
    FORWARD,
    Coord,
    GridConfig,
    Session,
    coding_neighborhood,
    drop_component,
    session_at,
)


class InvariantViolation(Exception):
    """One or more per-slot verification checks failed in strict mode."""

    def __init__(self, messages):
        self.messages = list(messages)
        super().__init__("; ".join(self.messages[:3]) + (" ..." if len(self.messages) > 3 else ""))


class LocalityError(Exception):
    """A node tried to read history it never received."""


class MissingDecodedSymbol(Exception):
    """A transmit rule needed a decoded symbol that was never recovered."""


@dataclass(frozen=True)
class DecodeRecord:
    """One delivered source symbol."""

    node: Coord
    session: Session
    generation: int
    payload: Payload
    slot_completed: int


@dataclass
class SlotLog:
    """Per-slot transmission counts, deliveries, and check failures."""

    slot: int
    internal_tx: int
    border_tx: int
    decodes: list[DecodeRecord] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    @property
    def total_tx(self) -> int:
        return self.internal_tx + self.border_tx


@dataclass
class RunSummary:
    """Whole-run accounting."""

    d: int
    K: int
    slots: int
    total_tx: int
    per_slot_tx: int
    session_count: int
    delivered: dict[Session, tuple[int, int, int]]  # session -> (first, last, count)
    violations: int


class NodeHistory:
    """One node's view of the simulation: own state plus what it heard.

    Reads are scoped to the node's coding neighborhood; asking for anything
    else raises LocalityError.  Slots <= 0 read as the zero payload, and
    slots older than the ring depth raise.
    """

    def __init__(self, state: "SimState", node: Coord):
        self._state = state
        self.node = node
        self._flat = state.tables.index[node]
        self._hood = coding_neighborhood(state.cfg, node)

    @property
    def mode(self) -> str:
        return self._state.mode

    def _check_scope(self, u: Coord) -> int:
        if u != self.node and u not in self._hood:
            raise LocalityError(f"{self.node} cannot read transmissions of {u}")
        return self._state.tables.index[u]

    def component(self, u: Coord, slot: int, axis: int, direction: str) -> Payload:
        """A border component of u as heard at this node."""
        flat = self._check_scope(u)
        state = self._state
        b = state.tables.border_local[flat]
        if b < 0:
            raise ValueError(f"{u} is internal and transmits no components")
        raw = state._comp_at(tb.comp_flat(int(b), axis, direction, state.cfg.d), slot)
        return state._wrap(raw)

    def aggregate(self, u: Coord, slot: int) -> Payload:
        """The combined transmission of u: internal symbol or XOR of components."""
        flat = self._check_scope(u)
        return self._state._wrap(self._state._agg_at(flat, slot))

    def decoded_payload(self, axis: int, direction: str, generation: int) -> Payload:
        """The symbol this node decoded for the given generation."""
        state = self._state
        if generation < 1:
            return Payload.zero(state.mode)
        row = state.tables.decode_row.get((self._flat, axis, direction))
        if row is None:
            raise ValueError(f"{self.node} serves no {direction} session on axis {axis}")
        if state._dec_gen[row] != generation:
            raise MissingDecodedSymbol(
                f"{self.node} axis {axis} {direction}: wanted generation "
                f"{generation}, have {state._dec_gen[row]}"
            )
        return state._wrap(state._dec_raw[row])

    def source_payload(self, axis: int, direction: str, t: int) -> Payload:
        """Fresh source symbol of the session this node originates."""
        state = self._state
        session = session_at(state.cfg, axis, drop_component(self.node, axis), direction)
        if t <= 0:
            return Payload.zero(state.mode)
        if state.mode == COEFF:
            return Payload.from_tags({SourceTag(session, t)})
        return Payload.from_bit(source_bit(state.seed, session, t))


class SimState:
    """Mutable simulation state; create with init()."""

    def __init__(self, cfg: GridConfig, mode: str, seed: int, strict: bool, check: bool, trace: bool):
        if mode not in (BIT, COEFF):
            raise ValueError(f"unknown payload mode {mode!r}")
        self.cfg = cfg
        self.mode = mode
        self.seed = seed
        self.strict = strict
        self.check = check
        self.tables = tb.build_tables(cfg)
        self.theta: ThetaTable = self.tables.theta
        self.clock = 0
        self.depth = 2 * cfg.d + 1
        self.logs: list[SlotLog] = []
        self.trace: dict[int, tuple[list, list]] | None = {} if trace else None

        t = self.tables
        n = len(t.coords)
        self._zero = frozenset() if mode == COEFF else 0
        self._comp_ring: list[list | None] = [None] * self.depth
        self._agg_ring: list[list | None] = [None] * self.depth
        self._committed = 0
        # decoded store: one row per served (node, axis, direction)
        rows = len(t.dec_node)
        self._dec_raw = [self._zero] * rows
        self._dec_gen = [0] * rows
        # python-native copies of the compiled tables for the hot loops
        self._bkind = t.bkind.tolist()
        self._bref = t.bref.tolist()
        self._border_idx = t.border_idx.tolist()
        self._internal_idx = t.internal_idx.tolist()
        self._sten = list(zip(t.sten_off.tolist(), t.sten_tau.tolist()))
        starts = t.dec_start.tolist()
        kinds, refs, taus = t.term_kind.tolist(), t.term_ref.tolist(), t.term_tau.tolist()
        self._dec_terms = [
            list(zip(kinds[a:b], refs[a:b], taus[a:b]))
            for a, b in zip(starts[:-1], starts[1:])
        ]
        self._dec_sessions = [t.sessions[s] for s in t.dec_sess.tolist()]
        self.histories = [NodeHistory(self, v) for v in t.coords]

    # -- raw history access -------------------------------------------------

    def _wrap(self, raw) -> Payload:
        if self.mode == COEFF:
            return Payload(mode=COEFF, tags=raw)
        return Payload(mode=BIT, bit=raw)

    def _slot_row(self, ring, slot):
        if slot <= 0:
            return None
        if slot > self._committed:
            raise RuntimeError(f"slot {slot} has not been committed yet")
        if slot <= self._committed - self.depth:
            raise RuntimeError(
                f"slot {slot} is older than the {self.depth}-slot history window"
            )
        return ring[slot % self.depth]

    def _agg_at(self, flat: int, slot: int):
        row = self._slot_row(self._agg_ring, slot)
        return self._zero if row is None else row[flat]

    def _comp_at(self, comp_flat: int, slot: int):
        row = self._slot_row(self._comp_ring, slot)
        return self._zero if row is None else row[comp_flat]

    def history(self, v: Coord) -> NodeHistory:
        return self.histories[self.tables.index[v]]


def init(cfg: GridConfig, mode: str = COEFF, seed: int = 0, *,
         strict: bool = True, check: bool = True, trace: bool = False) -> SimState:
    """Fresh simulation at clock 0 with all history zero."""
    return SimState(cfg, mode, seed, strict, check, trace)


def _source_raw(state: SimState, session: Session, t: int):
    if state.mode == COEFF:
        return frozenset({SourceTag(session, t)})
    return source_bit(state.seed, session, t)


def step(state: SimState) -> SlotLog:
    """Advance one slot: transmit, commit, decode, verify, log."""
    from . import encoder  # local import keeps module load light

    cfg = state.cfg
    t = state.clock + 1
    tabs = state.tables
    d, K, twod = cfg.d, cfg.K, tabs.twod
    coeff = state.mode == COEFF
    violations: list[str] = []

    # border components for slot t (reads slots <= t-1 and last decodes)
    comps = [state._zero] * len(state._bkind)
    gen_back = t - K
    for j, kind in enumerate(state._bkind):
        ref = state._bref[j]
        if kind == tb.KIND_RELAY:
            comps[j] = state._comp_at(ref, t - 1)
        elif kind == tb.KIND_SOURCE:
            comps[j] = _source_raw(state, tabs.sessions[ref], t)
        else:
            if gen_back >= 1 and state._dec_gen[ref] != gen_back:
                raise MissingDecodedSymbol(
                    f"slot {t}: component {j} needs generation {gen_back}, "
                    f"have {state._dec_gen[ref]}"
                )
            comps[j] = state._dec_raw[ref] if gen_back >= 1 else state._zero

    # aggregates: border nodes XOR their components, internal nodes combine
    aggs = [state._zero] * len(tabs.coords)
    if coeff:
        for b, flat in enumerate(state._border_idx):
            acc: set = set()
            for j in range(b * twod, (b + 1) * twod):
                acc ^= comps[j]
            aggs[flat] = frozenset(acc)
        for flat in state._internal_idx:
            acc = set()
            for off, tau in state._sten:
                acc ^= state._agg_at(flat + off, t - tau)
            aggs[flat] = frozenset(acc)
    else:
        for b, flat in enumerate(state._border_idx):
            bits = 0
            for j in range(b * twod, (b + 1) * twod):
                bits ^= comps[j]
            aggs[flat] = bits
        for flat in state._internal_idx:
            bits = 0
            for off, tau in state._sten:
                bits ^= state._agg_at(flat + off, t - tau)
            aggs[flat] = bits

    # shape checks: every component and every combined symbol must carry
    # exactly the sessions passing through the node, at their fixed delays
    if coeff and state.check:
        for b, flat in enumerate(state._border_idx):
            v = tabs.coords[flat]
            for k in range(twod):
                axis = k % d + 1
                direction = FORWARD if k < d else BACKWARD
                want = encoder.expected_component_tags(cfg, v, axis, t, direction)
                if comps[b * twod + k] != want:
                    violations.append(
                        f"slot {t}: {v} axis {axis} {direction} component off form"
                    )
        for flat, agg in enumerate(aggs):
            want = encoder.expected_symbol_tags(cfg, tabs.coords[flat], t)
            if agg != want:
                violations.append(f"slot {t}: {tabs.coords[flat]} combined symbol off form")

    # barrier: commit slot t, then decode what completes at the end of it
    state._comp_ring[t % state.depth] = comps
    state._agg_ring[t % state.depth] = aggs
    state._committed = t
    if state.trace is not None:
        state.trace[t] = (comps, aggs)

    records: list[DecodeRecord] = []
    tp = t + 1
    g = tp - K
    for row, terms in enumerate(state._dec_terms):
        if coeff:
            acc: set = set()
            for kind, ref, tau in terms:
                if kind == tb.TERM_AGG:
                    acc ^= state._agg_at(ref, tp - tau)
                else:
                    acc ^= state._comp_at(ref, tp - tau)
            raw = frozenset(acc)
        else:
            bits = 0
            for kind, ref, tau in terms:
                if kind == tb.TERM_AGG:
                    bits ^= state._agg_at(ref, tp - tau)
                else:
                    bits ^= state._comp_at(ref, tp - tau)
            raw = bits
        session = state._dec_sessions[row]
        if state.check:
            if coeff:
                want = frozenset({SourceTag(session, g)}) if g >= 1 else frozenset()
                if raw != want:
                    violations.append(
                        f"slot {t}: decode at {tabs.coords[tabs.dec_node[row]]} "
                        f"axis {tabs.dec_axis[row]} {tabs.dec_dir[row]} not exact: "
                        f"{sorted((tag.session.axis, tag.session.direction, tag.generation) for tag in raw)}"
                    )
            else:
                want_bit = source_bit(state.seed, session, g) if g >= 1 else 0
                if raw != want_bit:
                    violations.append(
                        f"slot {t}: decoded bit at {tabs.coords[tabs.dec_node[row]]} "
                        f"axis {tabs.dec_axis[row]} {tabs.dec_dir[row]} != source bit"
                    )
        state._dec_raw[row] = raw
        state._dec_gen[row] = g
        if g >= 1:
            records.append(DecodeRecord(
                node=tabs.coords[tabs.dec_node[row]],
                session=session,
                generation=g,
                payload=state._wrap(raw),
                slot_completed=t,
            ))

    log = SlotLog(
        slot=t,
        internal_tx=len(state._internal_idx),
        border_tx=len(state._border_idx) * twod,
        decodes=records,
        violations=violations,
    )
    state.logs.append(log)
    state.clock = t
    if violations and state.strict:
        raise InvariantViolation(violations)
    return log


def run(state: SimState, slots: int) -> RunSummary:
    """Execute `slots` steps and summarize deliveries and counts."""
    if slots < 1:
        raise ValueError(f"slots must be >= 1, got {slots}")
    for _ in range(slots):
        step(state)
    logs = state.logs[-slots:]
    per_slot = logs[0].total_tx
    assert all(log.total_tx == per_slot for log in logs)
    delivered: dict[Session, tuple[int, int, int]] = {}
    for log in logs:
        for rec in log.decodes:
            first, last, count = delivered.get(rec.session, (rec.generation, rec.generation, 0))
            delivered[rec.session] = (min(first, rec.generation), max(last, rec.generation), count + 1)
    return RunSummary(
        d=state.cfg.d,
        K=state.cfg.K,
        slots=slots,
        total_tx=per_slot * slots,
        per_slot_tx=per_slot,
        session_count=state.cfg.session_count,
        delivered=delivered,
        violations=sum(len(log.violations) for log in logs),
    )
