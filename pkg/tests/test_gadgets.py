"""Wire map evaluators against a pure-int reference implementation."""

import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from maskwire.gadgets import (
    BarrettParams,
    ScopeConditionError,
    barrett_algebraic_eval,
    barrett_algebraic_eval_vec,
    barrett_nat_eval,
    barrett_nat_eval_vec,
    identity_mask_eval,
    make_barrett_gadget,
    make_identity_gadget,
)
from maskwire.modring import Modulus, ZqElem

from reference import ceil_log2, ref_wire, ref_wire_hw


def test_params_construction():
    p = BarrettParams.create(3329, 24)
    assert p.q.q == 3329
    assert p.s == 24
    assert p.r.val == 2385
    assert p.scope_ok()
    p.require_scope()


def test_scope_condition():
    # 2^s below q: the width-s wrap can strand values, so the hw form refuses.
    p = BarrettParams.create(5, 2)
    assert not p.scope_ok()
    with pytest.raises(ScopeConditionError):
        p.require_scope()
    x, m = ZqElem(3, p.q), ZqElem(1, p.q)
    with pytest.raises(ScopeConditionError):
        barrett_nat_eval(p, x, m)
    with pytest.raises(ScopeConditionError):
        barrett_nat_eval_vec(p, 3, np.arange(5, dtype=np.int64))
    # The algebraic form has no width and stays defined.
    assert barrett_algebraic_eval(p, x, m).val == ref_wire(5, 2, 3, 1)


def test_branch_examples():
    p = BarrettParams.create(7, 3)  # r = 1
    q = p.q
    assert barrett_algebraic_eval(p, ZqElem(3, q), ZqElem(2, q)).val == 1
    assert barrett_algebraic_eval(p, ZqElem(3, q), ZqElem(3, q)).val == 0
    assert barrett_algebraic_eval(p, ZqElem(3, q), ZqElem(5, q)).val == 6
    assert barrett_algebraic_eval(p, ZqElem(0, q), ZqElem(0, q)).val == 0


@pytest.mark.parametrize("q", list(range(1, 65)))
def test_two_branch_law_exhaustive(q):
    for s in (ceil_log2(q), 2 * ceil_log2(q) + 1):
        p = BarrettParams.create(q, s)
        ring = p.q
        for x in range(q):
            for m in range(q):
                got = barrett_algebraic_eval(p, ZqElem(x, ring), ZqElem(m, ring)).val
                assert got == ref_wire(q, s, x, m)


def test_two_branch_law_exhaustive_to_256():
    # Scalar and vector paths are pinned to each other elsewhere; ride the
    # array evaluator so covering every modulus up to 256 stays cheap.
    for q in range(1, 257):
        p = BarrettParams.create(q, ceil_log2(q))
        r = p.r.val
        m = np.arange(q, dtype=np.int64)
        for x in range(q):
            want = np.where(m <= x, (x - m) % q, (x - m + r) % q)
            assert np.array_equal(barrett_algebraic_eval_vec(p, x, m), want)


def test_two_branch_law_million_samples():
    rng = np.random.default_rng(0)
    n = 10**6
    for q, s in ((3329, 24), (8380417, 48)):
        p = BarrettParams.create(q, s)
        r = p.r.val
        xs = rng.integers(0, q, size=n)
        ms = rng.integers(0, q, size=n)
        want = np.where(ms <= xs, (xs - ms) % q, (xs - ms + r) % q)
        assert np.array_equal(barrett_algebraic_eval_vec(p, xs, ms), want)
        ring = p.q
        for i in range(0, n, n // 8):
            got = barrett_algebraic_eval(
                p, ZqElem(int(xs[i]), ring), ZqElem(int(ms[i]), ring)
            )
            assert got.val == int(want[i])


@pytest.mark.parametrize("q,s", [(7, 3), (16, 4), (61, 6), (64, 6), (64, 12)])
def test_hw_form_exhaustive(q, s):
    p = BarrettParams.create(q, s)
    ring = p.q
    for x in range(q):
        for m in range(q):
            got = barrett_nat_eval(p, ZqElem(x, ring), ZqElem(m, ring)).val
            assert got == ref_wire_hw(q, s, x, m)


@pytest.mark.parametrize("q,s", [(7, 3), (61, 6), (3329, 24), (1, 0)])
def test_forms_agree_spot(q, s):
    p = BarrettParams.create(q, s)
    ring = p.q
    for x in range(q) if q <= 64 else random.Random(1).sample(range(q), 64):
        for m in range(q) if q <= 64 else random.Random(2).sample(range(q), 64):
            xe, me = ZqElem(x, ring), ZqElem(m, ring)
            assert barrett_algebraic_eval(p, xe, me) == barrett_nat_eval(p, xe, me)


def test_degenerate_offset_is_bijection():
    # q = 2^s makes r = 0; the wire collapses to plain m -> x - m.
    p = BarrettParams.create(16, 4)
    assert p.r.val == 0
    ring = p.q
    for x in range(16):
        vals = {
            barrett_algebraic_eval(p, ZqElem(x, ring), ZqElem(m, ring)).val
            for m in range(16)
        }
        assert vals == set(range(16))


def test_identity_gadget():
    ring = Modulus(11)
    for x in range(11):
        for m in range(11):
            assert identity_mask_eval(ring, ZqElem(x, ring), ZqElem(m, ring)).val == (
                x - m
            ) % 11
    g = make_identity_gadget(ring)
    assert g.name == "identity"
    assert g.claimed_max_mult == 1
    assert g.plain(ZqElem(4, ring)).val == 4


@pytest.mark.parametrize("q,s", [(7, 3), (64, 6), (3329, 24), (8380417, 48)])
def test_vectorized_matches_scalar(q, s):
    p = BarrettParams.create(q, s)
    ring = p.q
    rng = random.Random(7)
    if q <= 4096:
        xs = list(range(q))
    else:
        xs = [rng.randrange(q) for _ in range(8)]
    masks = np.arange(q, dtype=np.int64)
    sample = [rng.randrange(q) for _ in range(32)]
    for x in xs:
        alg = barrett_algebraic_eval_vec(p, x, masks)
        hw = barrett_nat_eval_vec(p, x, masks)
        assert alg.dtype == np.int64
        for m in sample:
            xe, me = ZqElem(x, ring), ZqElem(m, ring)
            assert int(alg[m]) == barrett_algebraic_eval(p, xe, me).val
            assert int(hw[m]) == barrett_nat_eval(p, xe, me).val


def test_vectorized_array_secret_broadcast():
    p = BarrettParams.create(3329, 24)
    rng = random.Random(3)
    xs = np.array([rng.randrange(3329) for _ in range(1000)], dtype=np.int64)
    ms = np.array([rng.randrange(3329) for _ in range(1000)], dtype=np.int64)
    alg = barrett_algebraic_eval_vec(p, xs, ms)
    hw = barrett_nat_eval_vec(p, xs, ms)
    for i in range(0, 1000, 37):
        assert int(alg[i]) == ref_wire(3329, 24, int(xs[i]), int(ms[i]))
        assert int(hw[i]) == ref_wire_hw(3329, 24, int(xs[i]), int(ms[i]))


def test_wide_datapath_vector_path():
    # s beyond the int64-safe range falls back to exact Python ints.
    p = BarrettParams.create(3329, 80)
    masks = np.arange(3329, dtype=np.int64)
    hw = barrett_nat_eval_vec(p, 100, masks)
    ring = p.q
    for m in (0, 1, 99, 100, 101, 3328):
        assert int(hw[m]) == ref_wire_hw(3329, 80, 100, m)
        assert (
            barrett_nat_eval(p, ZqElem(100, ring), ZqElem(m, ring)).val
            == ref_wire_hw(3329, 80, 100, m)
        )


def test_barrett_gadget_wrapper():
    p = BarrettParams.create(3329, 24)
    g = make_barrett_gadget(p)
    assert g.name == "barrett"
    assert g.claimed_max_mult == 2
    assert g.barrett_params is p
    ring = p.q
    xe, me = ZqElem(100, ring), ZqElem(2485, ring)
    assert g.eval(xe, me) == barrett_algebraic_eval(p, xe, me)
    assert g.plain(xe) == xe
    got = g.eval_vec(100, np.arange(3329, dtype=np.int64))
    assert int(got[2485]) == barrett_algebraic_eval(p, xe, me).val


def test_gadget_validation():
    from maskwire.gadgets import WireGadget

    ring = Modulus(7)
    with pytest.raises(ValueError):
        WireGadget(
            name="bad",
            q=ring,
            eval=lambda x, m: x,
            plain=lambda x: x,
            claimed_max_mult=0,
        )


@given(
    st.integers(min_value=1, max_value=2**20),
    st.integers(min_value=0, max_value=48),
    st.data(),
)
def test_two_branch_law_random(q, s, data):
    p = BarrettParams.create(q, s)
    ring = p.q
    x = data.draw(st.integers(min_value=0, max_value=q - 1))
    m = data.draw(st.integers(min_value=0, max_value=q - 1))
    got = barrett_algebraic_eval(p, ZqElem(x, ring), ZqElem(m, ring)).val
    assert got == ref_wire(q, s, x, m)
