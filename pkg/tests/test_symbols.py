"""GF(2) payload algebra: set semantics, bit streams, exactness."""

import random

import pytest

from gridnc.symbols import (
    BIT,
    COEFF,
    Payload,
    SourceTag,
    evaluate_tags,
    is_exactly,
    map_sessions,
    source_bit,
    source_symbol,
    xor,
    xor_all,
)
from gridnc.topology import FORWARD, build_grid, build_sessions, mirror_session

CFG = build_grid(2, 3)
SESSIONS = build_sessions(CFG)


def tag(i, gen):
    return SourceTag(SESSIONS[i], gen)


def coeff(*tags):
    return Payload.from_tags(tags)


def test_xor_examples():
    a, b, c = tag(0, 1), tag(1, 2), tag(2, 3)
    assert xor(coeff(a), coeff(a)).is_zero
    assert xor(coeff(a, b), coeff(b, c)).tags == {a, c}
    assert xor(Payload.from_bit(1), Payload.from_bit(1)).bit == 0


def test_xor_mode_mismatch():
    with pytest.raises(ValueError):
        xor(Payload.from_bit(1), coeff(tag(0, 1)))
    with pytest.raises(ValueError):
        xor_all([Payload.from_bit(1)], COEFF)


def test_xor_algebra_random_tag_sets():
    rng = random.Random(0)
    pool = [tag(i, g) for i in range(len(SESSIONS)) for g in range(1, 6)]
    zero = Payload.zero(COEFF)
    for _ in range(200):
        a = coeff(*rng.sample(pool, rng.randrange(6)))
        b = coeff(*rng.sample(pool, rng.randrange(6)))
        c = coeff(*rng.sample(pool, rng.randrange(6)))
        assert xor(a, b) == xor(b, a)
        assert xor(xor(a, b), c) == xor(a, xor(b, c))
        assert xor(a, a) == zero
        assert xor(a, zero) == a


def test_source_symbol_cases():
    s = SESSIONS[0]
    assert source_symbol(s, 0).is_zero
    assert source_symbol(s, -3, mode=BIT).is_zero
    p = source_symbol(s, 5)
    assert p.tags == {SourceTag(s, 5)}
    # determinism of the bit stream
    assert source_symbol(s, 5, mode=BIT, seed=7) == source_symbol(s, 5, mode=BIT, seed=7)
    assert source_bit(7, s, 5) == source_bit(7, s, 5)


def test_source_streams_not_degenerate():
    s = SESSIONS[0]
    bits = [source_bit(0, s, t) for t in range(1, 200)]
    assert set(bits) == {0, 1}
    other = [source_bit(1, s, t) for t in range(1, 200)]
    assert bits != other  # seed actually keys the stream


def test_is_exactly():
    a, b = tag(0, 1), tag(1, 1)
    assert is_exactly(coeff(a), a)
    assert not is_exactly(coeff(), a)
    assert not is_exactly(coeff(a, b), a)
    with pytest.raises(ValueError):
        is_exactly(Payload.from_bit(1), a)


def test_generation_must_be_positive():
    with pytest.raises(ValueError):
        SourceTag(SESSIONS[0], 0)


def test_evaluate_tags_is_linear():
    a, b = tag(0, 2), tag(3, 4)
    want = source_bit(0, a.session, 2) ^ source_bit(0, b.session, 4)
    assert evaluate_tags({a, b}, 0) == want
    assert evaluate_tags(set(), 0) == 0


def test_map_sessions_relabels():
    a = tag(0, 2)
    p = map_sessions(coeff(a), lambda s: mirror_session(CFG, s))
    ((out,),) = [tuple(p.tags)]
    assert out.generation == 2
    assert out.session == mirror_session(CFG, SESSIONS[0])
    assert out.session.direction != FORWARD or SESSIONS[0].direction != FORWARD
    with pytest.raises(ValueError):
        map_sessions(Payload.from_bit(0), lambda s: s)
