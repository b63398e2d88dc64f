import random

import numpy as np
import pytest

from aidepth import cache
from aidepth._kernel import simulate_block
from aidepth.dyadic import DyadicRational
from aidepth.enumerator import (
    Horizon,
    HorizonError,
    NotFound,
    body_bits,
    enumerate_programs,
    halted_per_k,
    is_prefix_free,
)
from aidepth.upm import Status, encode_gamma, run_bits
from conftest import get_table
from oracle import brute_records

_CODES = {Status.HALTED: 0, Status.OUT_OF_GAS: 1, Status.DIVERGED_STATIC: 2, Status.MALFORMED: 3}


def _kernel_block(k, start, stop, t_max):
    n = stop - start
    status = np.zeros(n, np.int8)
    steps = np.zeros(n, np.int64)
    out_len = np.zeros(n, np.int64)
    out_chars = np.zeros((n, t_max), np.uint8)
    simulate_block(k, start, stop, t_max, status, steps, out_len, out_chars)
    return status, steps, out_len, out_chars


def _check_against_reference(k, indices, t_max):
    for idx in indices:
        status, steps, out_len, out_chars = _kernel_block(k, idx, idx + 1, t_max)
        ref = run_bits(encode_gamma(k) + body_bits(k, idx), t_max)
        assert status[0] == _CODES[ref.status], (k, idx)
        if ref.halted:
            assert steps[0] == ref.halt_step
            assert bytes(out_chars[0, : out_len[0]]).decode() == ref.output


@pytest.mark.parametrize("t_max", [1, 3, 17])
def test_kernel_matches_reference_exhaustive_small(t_max):
    for k in (1, 2, 3):
        _check_against_reference(k, range(8**k), t_max)


@pytest.mark.parametrize("k", [4, 5, 6, 7])
def test_kernel_matches_reference_sampled(k):
    rng = random.Random(k)
    for t_max in (5, 64, 256):
        _check_against_reference(k, rng.sample(range(8**k), 300), t_max)


@pytest.mark.parametrize("k_max, t_max", [(1, 20), (2, 20), (2, 1), (3, 20), (3, 4)])
def test_records_match_bruteforce_oracle(k_max, t_max):
    table = get_table(k_max, t_max)
    got = sorted((r.program, r.halt_step, r.output) for r in table.records)
    want = sorted((bits, step, x) for x, rows in brute_records(k_max, t_max).items() for _, step, bits in rows)
    assert got == want


def test_spec_enumeration_examples():
    t1 = get_table(1, 20)
    assert halted_per_k(t1) == {1: 1}
    assert sum(t1.non_halt[0]) == 7
    assert halted_per_k(get_table(2, 20))[2] == 13
    assert halted_per_k(get_table(2, 1))[2] == 8


def test_spot_values(table2, table3):
    assert table3.k_model("") == 4
    assert table3.k_t("", 1) == 4
    assert table3.k_t("0", 20) == 9
    assert table3.k_model("1") == 12
    assert table2.q_model("") == DyadicRational(11, 7)
    assert table2.q_model("0") == DyadicRational(1, 9)
    assert table2.q_t("", 1) == DyadicRational(5, 6)
    assert get_table(1, 20).q_model("") == DyadicRational(1, 4)
    with pytest.raises(NotFound):
        table2.k_model("1")


def test_frozen_output_counts(table3):
    counts = {x: sum(r.output == x for r in table3.records) for x in table3.outputs()}
    assert counts == {"": 126, "0": 16, "1": 1, "00": 1}


def test_kraft_sums():
    assert get_table(1, 20).kraft_sum() == DyadicRational(1, 4)
    assert get_table(2, 20).kraft_sum() == DyadicRational(45, 9)


def test_budget_out_of_range(table2):
    with pytest.raises(ValueError):
        table2.k_t("", 21)
    with pytest.raises(ValueError):
        table2.q_t("", 0)


def test_horizon_limit():
    with pytest.raises(HorizonError):
        enumerate_programs(Horizon(9, 10))
    with pytest.raises(HorizonError):
        enumerate_programs(Horizon(4, 10), max_simulations=100)


def test_coding_spread_example(table2):
    spread = table2.coding_spread()
    assert spread.bits == pytest.approx(4 + np.log2(11 / 128))
    assert spread.witness == ""


def test_table_invariants(table5):
    t_max = table5.horizon.t_max
    for x in table5.outputs():
        assert table5.q_model(x) >= DyadicRational.pow2(table5.k_model(x))
        prev_k, prev_q = None, None
        for t in sorted(set(table5.halt_steps(x)) | {1, t_max}):
            q = table5.weight_t(x, t)
            assert prev_q is None or q >= prev_q
            prev_q = q
            try:
                k = table5.k_t(x, t)
            except NotFound:
                continue
            assert prev_k is None or k <= prev_k
            prev_k = k
            # exactness: nothing shorter finishes within t
            shorter = [r for r in table5.records if r.output == x and r.halt_step <= t and r.program_length < k]
            assert not shorter


def test_prefix_free(table5):
    assert is_prefix_free(r.program for r in table5.records)


def test_shard_independence(tmp_path):
    h = Horizon(4, 40)
    one = cache.dumps(enumerate_programs(h, shards=1))
    four = cache.dumps(enumerate_programs(h, shards=4))
    assert one == four


def test_cache_round_trip(tmp_path, table3):
    path = tmp_path / "t.aitc"
    cache.save(table3, path)
    back = cache.load(path)
    assert back.records == table3.records
    assert back.non_halt == table3.non_halt
    assert cache.dumps(back) == path.read_bytes()


def test_cache_rejects_bad_input(table2):
    data = cache.dumps(table2)
    with pytest.raises(cache.CacheError):
        cache.loads(data, expected_hash=12345)
    with pytest.raises(cache.CacheError):
        cache.loads(b"XXXX" + data[4:])
    with pytest.raises(cache.CacheError):
        cache.loads(data[:-3])
    with pytest.raises(cache.CacheError):
        cache.loads(data + b"\0")


def test_outputs_order(table5):
    outs = table5.outputs()
    assert outs == sorted(outs, key=lambda x: (len(x), x))
    assert all(x in table5 for x in outs)
    assert "10101010" not in table5
