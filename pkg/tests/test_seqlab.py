import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aidepth.seqlab import (
    Compress,
    Custom,
    EstimatorRefusal,
    Exact,
    HaltingChar,
    Interleave,
    Oracle,
    PrefixProfile,
    RandomPool,
    ThueMorse,
    ZeroDilute,
    Zeros,
    dim_depth_profile,
    dim_lemma_check,
    dim_mutual_info,
    dim_profile,
    dim_t_profile,
    example_pair,
    im_star,
    levin_mi_profile,
    log_term,
    ordered_pair,
    super_deep_diag,
)
from aidepth.seqlab.estimators import lz_blocks
from aidepth.seqlab.generators import pool_bits, splitmix64
from aidepth.timebounds import TimeFamily
from conftest import get_table

GRID = [256, 512, 1024, 2048, 4096]


def test_splitmix_reference_value():
    # first output of the reference splitmix64 stream seeded with 0
    assert splitmix64(0x9E3779B97F4A7C15) == 0xE220A8397B1DCDAF


def test_pool_bits_layout():
    word = format(splitmix64(7), "064b")
    assert pool_bits(7, 70)[:64] == word
    assert RandomPool(7).bits(70) == pool_bits(7, 70)


@given(st.integers(0, 300), st.integers(0, 300))
@settings(max_examples=30)
def test_prefixes_are_consistent(a, b):
    gen = Interleave(RandomPool(3), ThueMorse())
    lo, hi = sorted((a, b))
    assert gen.bits(hi).startswith(gen.bits(lo))
    assert len(gen.prefix(hi).sources) == hi


def test_generators():
    assert ThueMorse().bits(8) == "01101001"
    assert Zeros().bits(3) == "000"
    assert ZeroDilute(Custom(lambda n: "1" * n, "ones")).bits(6) == "101010"
    alpha, beta = example_pair()
    assert beta.bits(8)[::2] == alpha.bits(4)
    assert ordered_pair(alpha, beta).id == ordered_pair(beta, alpha).id
    with pytest.raises(ValueError):
        Custom(lambda n: "1", "bad").bits(3)


def test_halting_char_follows_canonical_order():
    # k = 1 bodies: only HALT (index 6) halts
    assert HaltingChar(10).bits(8) == "00000010"


def test_oracle_invariants():
    est = Oracle()
    for gen in (RandomPool(1), Zeros(), ZeroDilute(RandomPool(2)), example_pair()[1]):
        for n in (0, 1, 17, 300):
            x = gen.prefix(n)
            assert est.estimate(x) <= n + log_term(n)
            assert est.cond(x, x) == log_term(n)
            y = RandomPool(5).prefix(n)
            assert est.joint(x, y) <= est.estimate(x) + est.estimate(y)


def test_compress_budget_monotone():
    for gen in (ThueMorse(), RandomPool(4), Zeros(), ZeroDilute(RandomPool(1))):
        x = gen.prefix(2048)
        values = [Compress(p).estimate(x) for p in range(1, 9)]
        assert values == sorted(values, reverse=True)
        assert values[-1] <= 2048 + 3 + log_term(2048)
    with pytest.raises(ValueError):
        Compress(0)


def test_lz_blocks_compresses_repetition():
    assert lz_blocks("0" * 4096, 1) < 4096 // 4
    assert lz_blocks("0" * 4096, 64) < 128
    assert lz_blocks("01" * 2048, 2) < lz_blocks("01" * 2048, 1)


def test_dim_proxies():
    grid = [1024, 2048, 4096, 8192]
    assert dim_profile(Zeros(), Oracle(), grid).tail_inf <= 0.02
    assert dim_profile(RandomPool(1), Oracle(), grid).tail_inf >= 0.98
    assert 0.48 <= dim_profile(ZeroDilute(RandomPool(1)), Oracle(), grid).tail_inf <= 0.52


def test_profile_output_formats():
    prof = dim_profile(Zeros(), Oracle(), [4, 8])
    assert prof.to_csv() == "n,value\n4,1.500000\n8,0.875000\n"
    doc = prof.to_json()
    assert doc["generator"] == "zeros" and doc["estimator"] == "oracle"
    assert doc["tail_inf"] == doc["tail_sup"] == 0.875
    with pytest.raises(ValueError):
        dim_profile(Zeros(), Oracle(), [8, 4])
    with pytest.raises(ValueError):
        PrefixProfile([1, 2], [0.0])


def test_dim_t_profile():
    grid = [512, 1024, 2048]
    full = dim_profile(ThueMorse(), Compress(), grid)
    assert dim_t_profile(ThueMorse(), Compress(), None, grid).values == full.values
    one = dim_t_profile(ThueMorse(), Compress(), 1, grid)
    four = dim_t_profile(ThueMorse(), Compress(), 4, grid)
    assert all(a >= b for a, b in zip(one.values, four.values))
    assert all(a >= b for a, b in zip(four.values, full.values))


def test_dim_t_profile_exact_budgets():
    table = get_table(5)
    grid = [1, 2]
    lo = dim_t_profile(Zeros(), Exact(table), 3, grid)
    hi = dim_t_profile(Zeros(), Exact(table), 256, grid)
    assert all(a >= b for a, b in zip(lo.values, hi.values))
    with pytest.raises(EstimatorRefusal):
        dim_profile(RandomPool(1), Exact(table), [40])
    with pytest.raises(EstimatorRefusal):
        Exact(table).cond(Zeros().prefix(1), Zeros().prefix(1))


def test_levin_profiles():
    alpha, beta = example_pair()
    prof = levin_mi_profile(alpha, beta, Oracle(), GRID)
    assert all(a < b for a, b in zip(prof.values, prof.values[1:]))
    assert prof.values[-1] == pytest.approx(4096 / 2, rel=0.02)
    indep = levin_mi_profile(RandomPool(1), RandomPool(2), Oracle(), GRID)
    assert max(indep.values) <= 2 * log_term(4096)
    same = levin_mi_profile(alpha, alpha, Oracle(), GRID)
    assert same.values[-1] == Oracle().estimate(alpha.prefix(4096))


def test_im_star_example_pair():
    alpha, beta = example_pair()
    ba = im_star(beta, alpha, Oracle(), GRID)
    ab = im_star(alpha, beta, Oracle(), GRID)
    assert 0.95 <= ba.lower <= ba.upper <= 1.05
    assert 0.45 <= ab.lower <= ab.upper <= 0.55
    ind = im_star(RandomPool(1), RandomPool(2), Oracle(), GRID)
    assert -0.1 <= ind.lower and ind.upper <= 0.05
    with pytest.raises(ValueError):
        im_star(alpha, beta, Oracle(), GRID, m_factor=0)


def test_im_star_skips_tiny_self_information():
    rep = im_star(Zeros(), Zeros(), Compress(), [1])
    assert rep.skipped == () or rep.skipped == (1,)


def test_dim_mutual_info():
    grid = [1024, 2048, 4096]
    alpha = RandomPool(1)
    assert dim_mutual_info(alpha, alpha, Oracle(), grid) == pytest.approx(1, abs=0.05)
    assert dim_mutual_info(alpha, RandomPool(2), Oracle(), grid) == pytest.approx(0, abs=0.05)
    a, b = RandomPool(1), ZeroDilute(RandomPool(1))
    assert dim_mutual_info(a, b, Oracle(), grid) == dim_mutual_info(b, a, Oracle(), grid)


def test_dim_lemma_example_pair():
    alpha, beta = example_pair()
    for a, b in ((alpha, beta), (beta, alpha), (alpha, alpha)):
        assert dim_lemma_check(a, b, Oracle(), GRID).holds
    # alpha_n shares only its first half with beta_n: equality case
    rep = dim_lemma_check(alpha, beta, Oracle(), GRID)
    assert rep.lhs == pytest.approx(0.5, abs=0.05) and rep.rhs == pytest.approx(0.5, abs=0.05)
    # beta knows all of alpha; half of beta_n is the gamma part
    rep = dim_lemma_check(beta, alpha, Oracle(), GRID)
    assert rep.lhs == pytest.approx(1, abs=0.05) and rep.rhs == pytest.approx(0.5, abs=0.05)


def test_dim_depth():
    grid = [512, 1024, 2048]
    for gen in (Zeros(), ThueMorse(), ZeroDilute(RandomPool(3))):
        for passes in (1, 4):
            rep = dim_depth_profile(gen, Compress(), passes, grid)
            assert rep.holds
            assert min(rep.profile.values) >= 0
    full = dim_depth_profile(ThueMorse(), Compress(), None, grid)
    assert set(full.profile.values) == {0}
    # a single block-1 pass pays a vanishing overhead on constant sequences
    zeros = dim_depth_profile(Zeros(), Compress(), 1, [512, 2048, 8192]).profile.values
    assert zeros == sorted(zeros, reverse=True) and zeros[-1] < 0.1


def test_time_family():
    assert TimeFamily.parse("lin:4")(3) == 12
    assert TimeFamily.parse("poly:2")(5) == 25
    assert TimeFamily.parse("exp:1")(0) == 1
    assert TimeFamily.parse("const:0", minimum=0)(9) == 0
    for bad in ("lin", "quad:2", "lin:-1"):
        with pytest.raises(ValueError):
            TimeFamily.parse(bad)


def test_super_deep_zeros_is_shallow():
    table = get_table(6)
    s = [TimeFamily("const", 1, 0), TimeFamily("const", 2, 0)]
    t = [TimeFamily("lin", 4), TimeFamily("const", 256)]
    rep = super_deep_diag(Zeros(), table, s, t, [1, 2, 3, 4])
    assert rep.demonstrative and not rep.violations
    assert not any(r["ldepth"] or r["depth"] or r["mass"] for r in rep.rows)
    # s = 0 at t_max: depth^t = 0 is not > 0, and the mass condition sits on its boundary
    rep = super_deep_diag(Zeros(), table, [TimeFamily("const", 0, 0)], [TimeFamily("const", 256)], [1, 2])
    assert not any(r["depth"] or r["ldepth"] for r in rep.rows)
    assert all(r["mass"] and r["gap"] == 0 for r in rep.rows)


def test_super_deep_halting_char():
    table = get_table(6)
    gen = HaltingChar(10)
    grid = [n for n in range(1, 9) if gen.bits(n) in table]
    assert grid
    s = [TimeFamily("const", c, 0) for c in (0, 1, 2)]
    t = [TimeFamily("const", c) for c in (1, 2, 5, 20)]
    rep = super_deep_diag(gen, table, s, t, grid)
    assert not rep.violations
    assert math.isfinite(rep.depth_over_gap) and rep.depth_over_gap <= rep.spread + 1
    assert rep.to_json()["demonstrative"] is True


def test_super_deep_refuses_outside_horizon():
    with pytest.raises(EstimatorRefusal):
        super_deep_diag(RandomPool(1), get_table(2, 20), [TimeFamily("const", 0, 0)], [TimeFamily("const", 1)], [30])
