"""Fooling sets: definition checks, certificates, both gadget games."""

from __future__ import annotations

import itertools
import json

import pytest

from lislab.codes import BlockCode
from lislab.fooling import (
    INVALID,
    FoolingError,
    GameFunction,
    certificate_json,
    certificate_report,
    check_fooling_set,
    type1_game,
    type2_game,
)


def equality_game(width: int = 2) -> GameFunction:
    words = tuple(itertools.product((0, 1), repeat=width))
    return GameFunction(
        name="equality",
        xs=words,
        ys=words,
        params={"width": width},
        evaluate=lambda x, y: 1 if x == y else 0,
    )


def constant_game() -> GameFunction:
    return GameFunction(
        name="constant",
        xs=("a", "b"),
        ys=("a", "b"),
        params={},
        evaluate=lambda x, y: 1,
    )


def test_equality_diagonal_certificate():
    game = equality_game(2)
    diagonal = [(w, w) for w in game.xs]
    cert = check_fooling_set(game, diagonal, 1)
    assert cert.valid
    assert cert.set_size == 4
    assert cert.bound_bits == 2
    assert cert.mode == "exhaustive"
    # independent second pass agrees
    assert check_fooling_set(game, diagonal, 1) == cert


def test_cross_violation_names_the_pair():
    cert = check_fooling_set(constant_game(), [("a", "a"), ("b", "b")], 1)
    assert not cert.valid
    assert cert.violations == ({"kind": "cross", "pair": [0, 1]},)


def test_member_violation_and_preconditions():
    game = equality_game(2)
    bad = [(game.xs[0], game.xs[0]), (game.xs[0], game.xs[1])]
    cert = check_fooling_set(game, bad, 1)
    assert {"kind": "member", "index": 1, "value": 0} in cert.violations
    with pytest.raises(FoolingError):
        check_fooling_set(game, [], 1)
    with pytest.raises(FoolingError):
        check_fooling_set(game, [(game.xs[0], game.xs[0])] * 2, 1)
    with pytest.raises(FoolingError):
        check_fooling_set(game, [((2, 2), (2, 2))], 1)


def test_bound_bits_arithmetic():
    for size, bits in ((1, 0), (2, 1), (3, 2), (16, 4), (17, 5)):
        words = tuple(range(size))
        game = GameFunction(
            name="eq", xs=words, ys=words, params={},
            evaluate=lambda x, y: 1 if x == y else 0,
        )
        cert = check_fooling_set(game, [(w, w) for w in words], 1)
        assert cert.valid and cert.bound_bits == bits


def test_sampled_mode_flagged():
    game = equality_game(2)
    diagonal = [(w, w) for w in game.xs]
    cert = check_fooling_set(game, diagonal, 1, budget=5, sample_pairs=30, seed=3)
    assert cert.mode == "sampled:30"
    assert cert.seed == 3
    assert cert.valid
    assert "non-exhaustive" in certificate_report(cert)


def test_type1_game_diagonal_exhaustive():
    game = type1_game(64)
    assert len(game.xs) >= 16
    values = {game(u, v) for u in game.xs for v in game.ys}
    assert INVALID not in values
    for u in game.xs:
        assert game(u, u) == 1
    u, v = game.xs[0], game.xs[1]
    assert 0 in (game(u, v), game(v, u))
    cert = check_fooling_set(game, [(u, u) for u in game.xs], 1)
    assert cert.valid
    assert cert.set_size == len(game.xs)
    assert cert.bound_bits >= 4
    report = certificate_report(cert)
    assert f">= {cert.bound_bits} bits" in report


def test_type1_game_rejects_mismatched_codes():
    with pytest.raises(FoolingError, match="weave"):
        type1_game(64, code=BlockCode(2, 8, ((0,) * 8, (1,) * 8), 8))
    weak = BlockCode(2, 16, ((0,) * 16, (1,) + (0,) * 15), 1)
    with pytest.raises(FoolingError, match="distance"):
        type1_game(64, code=weak)


def test_type2_game_needs_separating_scale():
    with pytest.raises(FoolingError, match=r"\(22, 19\)"):
        type2_game(2, 2)


def test_type2_game_at_separating_scale():
    game = type2_game(80, 320, domain_size=6, seed=1)
    for u in game.xs[:3]:
        assert game(u, u) == 1
    assert game(game.xs[0], game.xs[1]) == 0
    cert = check_fooling_set(game, [(u, u) for u in game.xs], 1)
    assert cert.valid
    assert cert.set_size == 6 and cert.bound_bits == 3


def test_certificate_json_contract():
    cert = check_fooling_set(equality_game(1), [((0,), (0,)), ((1,), (1,))], 1)
    doc = certificate_json(cert)
    assert set(doc) == {
        "game", "params", "set_size", "bound_bits", "mode", "seed", "violations",
    }
    assert json.loads(json.dumps(doc, sort_keys=True)) == doc


def test_report_shapes():
    cert = check_fooling_set(equality_game(2), [(w, w) for w in equality_game(2).xs], 1)
    report = certificate_report(cert)
    assert ">= 2 bits" in report
    assert "exhaustively" in report and "no violations" in report
    broken = check_fooling_set(constant_game(), [("a", "a"), ("b", "b")], 1)
    assert "VIOLATIONS: 1" in certificate_report(broken)
