"""Decode formula: rib shortcut, general window, mirrored direction."""

import pytest

from gridnc import engine
from gridnc.decoder import (
    DecodeError,
    check_exact,
    decode_backward,
    decode_forward,
    decode_terms,
    is_rib,
)
from gridnc.engine import LocalityError
from gridnc.symbols import Payload, SourceTag
from gridnc.theta import build_theta
from gridnc.topology import BACKWARD, FORWARD, build_grid, build_sessions, session_at


def single(cfg, axis, transverse, direction, gen):
    return frozenset({SourceTag(session_at(cfg, axis, transverse, direction), gen)})


def test_is_rib():
    cfg = build_grid(2, 3)
    assert is_rib(cfg, (0, 3), 2)       # corner: second extreme coordinate
    assert not is_rib(cfg, (1, 3), 2)   # interior of the face
    assert not is_rib(build_grid(1, 4), (4,), 1)  # no other axis exists


def test_rib_decode_is_single_read(coeff_run):
    cfg = build_grid(2, 3)
    theta = build_theta(2)
    terms = decode_terms(cfg, theta, (0, 3), 2, FORWARD)
    assert terms == [("comp", (0, 2), 2, FORWARD, 1)]
    state, _ = coeff_run(2, 3, slots=8)
    p = decode_forward(cfg, (0, 3), 2, 9, theta, state.history((0, 3)))
    assert p.tags == single(cfg, 2, (0,), FORWARD, 9 - 3)


def test_general_decode_plane(coeff_run):
    cfg = build_grid(2, 3)
    theta = build_theta(2)
    state, _ = coeff_run(2, 3, slots=8)
    p = decode_forward(cfg, (1, 3), 2, 9, theta, state.history((1, 3)))
    assert p.tags == single(cfg, 2, (1,), FORWARD, 6)
    p = decode_backward(cfg, (1, 0), 2, 9, theta, state.history((1, 0)))
    assert p.tags == single(cfg, 2, (1,), BACKWARD, 6)


def test_rib_decode_backward(coeff_run):
    # (3,0) is a corner; its backward axis-2 session reads (3,1) directly
    cfg = build_grid(2, 3)
    theta = build_theta(2)
    assert decode_terms(cfg, theta, (3, 0), 2, BACKWARD) == [
        ("comp", (3, 1), 2, BACKWARD, 1)
    ]
    state, _ = coeff_run(2, 3, slots=8)
    p = decode_backward(cfg, (3, 0), 2, 9, theta, state.history((3, 0)))
    assert p.tags == single(cfg, 2, (3,), BACKWARD, 6)


def test_line_decode_matches_hand_expansion(coeff_run):
    # d=1 receivers have no rib shortcut; the window degenerates to
    # one neighbor aggregate plus one own component
    cfg = build_grid(1, 4)
    theta = build_theta(1)
    assert decode_terms(cfg, theta, (4,), 1, FORWARD) == [
        ("agg", (3,), 1),
        ("comp", (4,), 1, BACKWARD, 2),
    ]
    assert decode_terms(cfg, theta, (0,), 1, BACKWARD) == [
        ("agg", (1,), 1),
        ("comp", (0,), 1, FORWARD, 2),
    ]
    state, _ = coeff_run(1, 4, slots=7)
    p = decode_forward(cfg, (4,), 1, 8, theta, state.history((4,)))
    assert p.tags == single(cfg, 1, (), FORWARD, 4)
    p = decode_backward(cfg, (0,), 1, 8, theta, state.history((0,)))
    assert p.tags == single(cfg, 1, (), BACKWARD, 4)


def test_decode_is_zero_before_first_generation():
    cfg = build_grid(2, 3)
    theta = build_theta(2)
    state = engine.init(cfg)
    engine.step(state)
    p = decode_forward(cfg, (1, 3), 2, 2, theta, state.history((1, 3)))
    assert p.is_zero


@pytest.mark.parametrize("d,K", [(1, 2), (2, 2), (2, 4), (3, 3), (4, 3)])
def test_term_lookbacks_fit_history_window(d, K):
    cfg = build_grid(d, K)
    theta = build_theta(d)
    sessions = build_sessions(cfg)
    for s in sessions:
        terms = decode_terms(cfg, theta, s.receiver, s.axis, s.direction)
        assert terms
        for term in terms:
            back = term[-1]
            assert 1 <= back <= 2 * d


def test_wrong_face_rejected():
    cfg = build_grid(2, 3)
    theta = build_theta(2)
    state = engine.init(cfg)
    with pytest.raises(ValueError):
        decode_forward(cfg, (0, 1), 1, 3, theta, state.history((0, 1)))
    with pytest.raises(ValueError):
        decode_backward(cfg, (3, 1), 1, 3, theta, state.history((3, 1)))


def test_decode_reads_are_neighborhood_scoped(coeff_run):
    state, _ = coeff_run(2, 3, slots=4)
    h = state.history((1, 3))
    with pytest.raises(LocalityError):
        h.aggregate((3, 0), 4)  # nowhere near (1,3)
    with pytest.raises(LocalityError):
        h.component((3, 1), 4, 1, FORWARD)


def test_check_exact_raises_with_offending_tags():
    cfg = build_grid(2, 3)
    session = session_at(cfg, 2, (1,), FORWARD)
    good = Payload.from_tags({SourceTag(session, 4)})
    check_exact(cfg, good, (1, 3), 2, FORWARD, 4)
    with pytest.raises(DecodeError):
        check_exact(cfg, good, (1, 3), 2, FORWARD, 5)
    stray = Payload.from_tags({SourceTag(session, 4), SourceTag(session, 2)})
    with pytest.raises(DecodeError) as err:
        check_exact(cfg, stray, (1, 3), 2, FORWARD, 4)
    assert "generation 4" in str(err.value)
    with pytest.raises(ValueError):
        check_exact(cfg, Payload.from_bit(1), (1, 3), 2, FORWARD, 4)


def test_delivery_delay_law(coeff_run):
    _, summary = coeff_run(2, 3)
    state, _ = coeff_run(2, 3)
    for log in state.logs:
        for rec in log.decodes:
            assert rec.slot_completed == rec.generation + 3 - 1
