"""Interleaving gadget: case table, gap bounds, embeddings, disjointness."""

from __future__ import annotations

import random

import pytest

from lislab.codes import min_distance, sample_distinct_pair
from lislab.core import Sequence, lis_dp, lis_exhaustive, lis_patience
from lislab.orders import oddeven_order, random_order, type1_witness
from lislab.type1 import (
    GadgetError,
    build_z,
    block_case,
    disj_gadget,
    embed_in_order,
    expand_alice,
    expand_bob,
    gap_code,
    instance_sidecar,
    type1_gap,
)


def test_expansion_rules():
    assert expand_alice((0,)) == (0, 1)
    assert expand_alice((1,)) == (1, 0)
    assert expand_alice((1, 0)) == (1, 0, 0, 3)
    assert expand_bob((0,)) == (0, 2)
    assert expand_bob((1,)) == (2, 0)
    assert expand_bob((0, 1)) == (0, 2, 4, 0)
    with pytest.raises(GadgetError):
        expand_alice((0, 2))


def test_block_case_table():
    # one block per case, read straight off the construction
    assert build_z((0,), (0,)).z_uv.symbols == (0, 0, 1, 2)
    assert build_z((1,), (0,)).z_uv.symbols == (1, 0, 0, 2)
    assert build_z((0,), (1,)).z_uv.symbols == (0, 2, 1, 0)
    assert build_z((1,), (1,)).z_uv.symbols == (1, 2, 0, 0)
    assert [block_case(u, v) for u, v in ((0, 0), (1, 0), (0, 1), (1, 1))] == [1, 2, 3, 4]


def test_case_blocks_at_every_position():
    # per-block lis over nonzeros: 2 for cases 1, 2, 4 and 1 for case 3
    expected = {1: 2, 2: 2, 3: 1, 4: 2}
    for i in range(1, 17):
        for u_bit, v_bit in ((0, 0), (1, 0), (0, 1), (1, 1)):
            u = [0] * 16
            v = [0] * 16
            u[i - 1] = u_bit
            v[i - 1] = v_bit
            inst = build_z(tuple(u), tuple(v))
            block = inst.block(i)
            nonzeros = [s for s in block if s]
            got = lis_dp(Sequence.of(nonzeros)) if nonzeros else 0
            assert got == expected[block_case(u_bit, v_bit)]
            assert inst.cases[i - 1] == block_case(u_bit, v_bit)


def test_equal_pair_reaches_half():
    inst = build_z((1, 0), (1, 0))
    assert inst.z_uv.symbols == (1, 2, 0, 0, 0, 0, 3, 4)
    assert lis_exhaustive(inst.z_uv) == 4  # n/2 with n = 8
    assert lis_patience(inst.z_uv)[0] == 4


def test_single_disagreement_orientations():
    inst = build_z((1,), (0,))
    assert inst.z_uv.symbols == (1, 0, 0, 2)
    assert inst.z_vu.symbols == (0, 2, 1, 0)
    assert lis_exhaustive(inst.z_uv) == 2
    assert lis_exhaustive(inst.z_vu) == 2
    assert min(lis_dp(inst.z_uv), lis_dp(inst.z_vu)) <= 15 * 4 / 32 + 1


def test_build_z_validation():
    with pytest.raises(GadgetError):
        build_z((0, 1), (0,))
    with pytest.raises(GadgetError):
        build_z((), ())
    with pytest.raises(GadgetError):
        build_z((2,), (0,))


def test_odd_positions_ignore_second_word():
    rng = random.Random(321)
    for _ in range(50):
        k = rng.randrange(1, 9)
        u = tuple(rng.randrange(2) for _ in range(k))
        v = list(rng.randrange(2) for _ in range(k))
        base = build_z(u, tuple(v)).z_uv.symbols
        flip = rng.randrange(k)
        v[flip] ^= 1
        flipped = build_z(u, tuple(v)).z_uv.symbols
        assert base[0::2] == flipped[0::2]
        # the flipped bit swaps its expansion pair, so both even slots of
        # that block move
        assert base[4 * flip + 1] != flipped[4 * flip + 1]
        assert base[4 * flip + 3] != flipped[4 * flip + 3]


def test_gap_bounds_formulas():
    assert type1_gap(64) == (32, 31)
    assert type1_gap(32) == (16, 16)
    assert type1_gap(128) == (64, 61)
    with pytest.raises(GadgetError):
        type1_gap(48)
    with pytest.raises(GadgetError):
        type1_gap(0)


def test_gap_code_matches_gadget_scale():
    code = gap_code(64, seed=0)
    assert code.length == 16
    assert code.size >= 16
    assert min_distance(code) >= 4
    with pytest.raises(GadgetError):
        gap_code(40)


def test_code_pairs_at_n32():
    # every equal pair reaches n/2; every distinct pair's better orientation
    # stays within the stated ceiling (no gap yet at this scale)
    code = gap_code(32, seed=1)
    equal_lb, unequal_ub = type1_gap(32)
    for u in code.codewords:
        assert lis_patience(build_z(u, u).z_uv)[0] >= equal_lb
    for i in range(code.size):
        for j in range(i + 1, code.size):
            inst = build_z(code.codewords[i], code.codewords[j])
            got = min(lis_patience(inst.z_uv)[0], lis_patience(inst.z_vu)[0])
            assert got <= unequal_ub


def test_identity_embedding_returns_gadget():
    inst = build_z((1, 0), (0, 0))
    order = oddeven_order(8)
    w = type1_witness(order, 4)
    assert embed_in_order(inst, order, w).symbols == inst.z_uv.symbols
    assert embed_in_order(inst, order, w, swap=True).symbols == inst.z_vu.symbols


def test_all_zero_words_embed_as_rising_run():
    inst = build_z((0, 0), (0, 0))
    order = random_order(12, seed=4)  # first seed whose order has an m=4 witness
    w = type1_witness(order, 4, exhaustive=True)
    assert w is not None
    out = embed_in_order(inst, order, w)
    assert [s for s in out.symbols if s] == [1, 2, 3, 4]


def test_embedding_preserves_gap_within_one():
    rng = random.Random(77)
    code = gap_code(32, seed=2)
    hits = 0
    for seed in range(60):
        order = random_order(12, seed)
        w = type1_witness(order, 4)
        if w is None:
            continue
        hits += 1
        u, v = sample_distinct_pair(code, seed=rng.randrange(1 << 30))
        inst = build_z(u[:2], v[:2])  # length-2 words give a length-8 gadget, m = 4
        base = lis_dp(inst.z_uv)
        spread = lis_dp(embed_in_order(inst, order, w))
        assert base <= spread <= base + 1
    assert hits >= 10


def test_embedding_validation():
    inst = build_z((1,), (0,))
    order = oddeven_order(8)
    w = type1_witness(order, 4)
    with pytest.raises(GadgetError):
        embed_in_order(inst, order, w)  # m = 4 but gadget wants m = 2
    other = oddeven_order(4)
    w2 = type1_witness(other, 2)
    with pytest.raises(GadgetError):
        embed_in_order(inst, order, w2)  # witness certifies a different order


def test_disjointness_examples():
    assert disj_gadget((1, 0), (0, 1)).symbols == (0, 2, 0, 0, 3)
    assert lis_dp(disj_gadget((1, 0), (0, 1))) == 3
    assert disj_gadget((1,), (1,)).symbols == (0, 2, 1)
    assert lis_dp(disj_gadget((1,), (1,))) == 2
    empty = disj_gadget((0, 0), (0, 0))
    assert set(empty.symbols) == {0}
    assert lis_dp(empty) == 1
    with pytest.raises(GadgetError):
        disj_gadget((1, 0), (1,))


def test_disjointness_iff_sweep():
    # all support pairs of size <= 2 at universe size 3
    import itertools

    for k in (1, 2):
        for sa in itertools.combinations(range(3), k):
            for sb in itertools.combinations(range(3), k):
                a = tuple(1 if i in sa else 0 for i in range(3))
                b = tuple(1 if i in sb else 0 for i in range(3))
                got = lis_exhaustive(disj_gadget(a, b))
                if set(sa) & set(sb):
                    assert got <= 2 * k
                else:
                    assert got == 2 * k + 1


def test_sidecar_record():
    inst = build_z((1, 0), (0, 0))
    order = oddeven_order(8)
    w = type1_witness(order, 4)
    record = instance_sidecar(inst, w)
    assert record["u"] == [1, 0]
    assert record["cases"] == [2, 1]
    assert record["witness"]["early"] == [1, 2, 3, 4]
    assert instance_sidecar(inst)["witness"] is None
