"""Exhaustive enumeration of the reference machine and exact K^T / Q^T tables."""
from __future__ import annotations

import bisect
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from . import _kernel
from .dyadic import DyadicRational, floor_log2, log2
from .upm import MACHINE_HASH, encode_gamma, program_length

DEFAULT_MAX_SIMULATIONS = 1 << 22  # covers k_max = 7
_BLOCK = 1 << 15


class HorizonError(RuntimeError):
    """The requested horizon exceeds the configured resource budget."""


class NotFound(LookupError):
    """No program within the horizon outputs the string in the given time."""


@dataclass(frozen=True)
class Horizon:
    k_max: int
    t_max: int

    def __post_init__(self) -> None:
        if self.k_max < 1 or self.t_max < 1:
            raise ValueError(f"horizon needs k_max >= 1 and t_max >= 1, got {self}")
        if self.k_max > 255 or self.t_max >= 1 << 32:
            raise ValueError("horizon does not fit the cache header")

    @property
    def simulations(self) -> int:
        return sum(8**k for k in range(1, self.k_max + 1))

    @property
    def max_program_length(self) -> int:
        return program_length(self.k_max)


class HaltRecord(NamedTuple):
    program_length: int
    halt_step: int
    output: str
    program: str


class NonHaltCounts(NamedTuple):
    out_of_gas: int
    diverged_static: int
    malformed: int


@dataclass(frozen=True)
class CodingSpread:
    """Empirical Coding Theorem constant of a horizon.

    ``bits`` is ``max_x K(x) + log2 Q(x)`` in real arithmetic, ``floor_bits``
    the same with ``floor_log2``; ``witness`` attains ``bits``.
    """

    bits: float
    floor_bits: int
    witness: str


@dataclass(frozen=True)
class _Staircase:
    steps: tuple[int, ...]
    cum_weight: tuple[int, ...]
    min_len: tuple[int, ...]


@dataclass
class ComplexityTable:
    horizon: Horizon
    records: list[HaltRecord]
    non_halt: list[NonHaltCounts]
    machine_hash: int = MACHINE_HASH
    per_output: dict[str, list[HaltRecord]] = field(init=False, repr=False)
    _stairs: dict[str, _Staircase] = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        per: dict[str, list[HaltRecord]] = {}
        for r in self.records:
            per.setdefault(r.output, []).append(r)
        for recs in per.values():
            recs.sort(key=lambda r: (r.halt_step, r.program_length, r.program))
        self.per_output = per

    # --- weights are integers over 2**unit -------------------------------------------
    @property
    def unit(self) -> int:
        return self.horizon.max_program_length

    def _weight(self, length: int) -> int:
        return 1 << (self.unit - length)

    def _stair(self, x: str) -> _Staircase:
        s = self._stairs.get(x)
        if s is None:
            recs = self.per_output.get(x)
            if not recs:
                raise NotFound(f"no program in horizon {self.horizon} outputs {x!r}")
            steps: list[int] = []
            cum: list[int] = []
            mins: list[int] = []
            total, best = 0, math.inf
            for r in recs:
                total += self._weight(r.program_length)
                best = min(best, r.program_length)
                if steps and steps[-1] == r.halt_step:
                    cum[-1], mins[-1] = total, best
                else:
                    steps.append(r.halt_step)
                    cum.append(total)
                    mins.append(best)
            s = _Staircase(tuple(steps), tuple(cum), tuple(mins))
            self._stairs[x] = s
        return s

    def _check_budget(self, t: int) -> None:
        if not 1 <= t <= self.horizon.t_max:
            raise ValueError(f"time budget {t} outside [1, {self.horizon.t_max}]")

    def outputs(self) -> list[str]:
        """All outputs in the table, shortest first then lexicographic."""
        return sorted(self.per_output, key=lambda x: (len(x), x))

    def __contains__(self, x: str) -> bool:
        return x in self.per_output

    def halt_steps(self, x: str) -> tuple[int, ...]:
        """Distinct halting times of programs for ``x``, ascending."""
        return self._stair(x).steps

    # --- queries ---------------------------------------------------------------------
    def weight_t(self, x: str, t: int) -> int:
        """``Q^t(x)`` as an integer numerator over ``2**unit``."""
        self._check_budget(t)
        try:
            s = self._stair(x)
        except NotFound:
            return 0
        i = bisect.bisect_right(s.steps, t)
        return s.cum_weight[i - 1] if i else 0

    def k_t(self, x: str, t: int) -> int:
        self._check_budget(t)
        s = self._stair(x)
        i = bisect.bisect_right(s.steps, t)
        if not i:
            raise NotFound(f"{x!r} not produced within {t} steps in horizon {self.horizon}")
        return s.min_len[i - 1]

    def q_t(self, x: str, t: int) -> DyadicRational:
        return DyadicRational(self.weight_t(x, t), self.unit)

    def k_model(self, x: str) -> int:
        """Horizon stand-in for unbounded K: ``k_t`` at ``t_max``."""
        return self.k_t(x, self.horizon.t_max)

    def q_model(self, x: str) -> DyadicRational:
        """Horizon stand-in for Q_U: ``q_t`` at ``t_max`` (zero when absent)."""
        return self.q_t(x, self.horizon.t_max)

    def kraft_sum(self) -> DyadicRational:
        total = sum(self._weight(r.program_length) for r in self.records)
        return DyadicRational(total, self.unit)

    def coding_spread(self) -> CodingSpread:
        if not self.per_output:
            raise ValueError("coding spread of an empty table")
        best, best_floor, witness = -math.inf, -math.inf, ""
        for x in self.outputs():
            k = self.k_model(x)
            q = self.q_model(x)
            real = k + log2(q)
            if real > best:
                best, witness = real, x
            best_floor = max(best_floor, abs(k + floor_log2(q)))
        return CodingSpread(best, int(best_floor), witness)


# --- enumeration --------------------------------------------------------------------


def body_bits(k: int, index: int) -> str:
    return format(index, f"0{3 * k}b")


def _shard_pieces(k_max: int, shard: int, shards: int) -> list[tuple[int, int, int]]:
    sizes = [8**k for k in range(1, k_max + 1)]
    total = sum(sizes)
    lo, hi = shard * total // shards, (shard + 1) * total // shards
    pieces = []
    offset = 0
    for k, size in enumerate(sizes, start=1):
        a, b = max(lo, offset), min(hi, offset + size)
        if a < b:
            pieces.append((k, a - offset, b - offset))
        offset += size
    return pieces


def _simulate_pieces(
    pieces: list[tuple[int, int, int]], k_max: int, t_max: int
) -> tuple[list[tuple[int, int, int, str]], np.ndarray]:
    found: list[tuple[int, int, int, str]] = []
    counts = np.zeros((k_max + 1, 4), np.int64)
    for k, start, stop in pieces:
        for a in range(start, stop, _BLOCK):
            b = min(stop, a + _BLOCK)
            m = b - a
            status = np.empty(m, np.int8)
            steps = np.empty(m, np.int64)
            out_len = np.empty(m, np.int64)
            out_chars = np.empty((m, t_max), np.uint8)
            _kernel.simulate_block(k, a, b, t_max, status, steps, out_len, out_chars)
            counts[k] += np.bincount(status, minlength=4)
            for row in np.flatnonzero(status == _kernel.HALTED):
                out = out_chars[row, : out_len[row]].tobytes().decode("ascii")
                found.append((k, a + int(row), int(steps[row]), out))
    return found, counts


def enumerate_programs(
    horizon: Horizon, shards: int = 1, max_simulations: int = DEFAULT_MAX_SIMULATIONS
) -> ComplexityTable:
    """Simulate every program with at most ``k_max`` instructions for ``t_max`` steps.

    Work is split into ``shards`` contiguous slices of the canonical
    ``(k, body)`` order; with ``shards > 1`` slices run in worker processes.
    The result does not depend on ``shards``.
    """
    if shards < 1:
        raise ValueError("shards must be positive")
    if horizon.simulations > max_simulations:
        raise HorizonError(
            f"horizon {horizon} needs {horizon.simulations} simulations, "
            f"budget is {max_simulations}"
        )
    jobs = [_shard_pieces(horizon.k_max, s, shards) for s in range(shards)]
    if shards == 1:
        parts = [_simulate_pieces(jobs[0], horizon.k_max, horizon.t_max)]
    else:
        with ProcessPoolExecutor(max_workers=shards) as pool:
            parts = list(
                pool.map(
                    _simulate_pieces,
                    jobs,
                    [horizon.k_max] * shards,
                    [horizon.t_max] * shards,
                )
            )
    found = [f for part, _ in parts for f in part]
    found.sort(key=lambda f: (f[0], f[1]))
    counts = sum(c for _, c in parts)

    headers = {k: encode_gamma(k) for k in range(1, horizon.k_max + 1)}
    records = [
        HaltRecord(program_length(k), steps, out, headers[k] + body_bits(k, idx))
        for k, idx, steps, out in found
    ]
    non_halt = [
        NonHaltCounts(int(counts[k, 1]), int(counts[k, 2]), int(counts[k, 3]))
        for k in range(1, horizon.k_max + 1)
    ]
    return ComplexityTable(horizon, records, non_halt)


def iter_programs(k_max: int) -> Iterator[str]:
    """All program bit strings up to ``k_max`` instructions in canonical order."""
    for k in range(1, k_max + 1):
        header = encode_gamma(k)
        for idx in range(8**k):
            yield header + body_bits(k, idx)


def halted_per_k(table: ComplexityTable) -> dict[int, int]:
    counts: dict[int, int] = {}
    lengths = {program_length(k): k for k in range(1, table.horizon.k_max + 1)}
    for r in table.records:
        k = lengths[r.program_length]
        counts[k] = counts.get(k, 0) + 1
    return counts


def is_prefix_free(programs: Iterable[str]) -> bool:
    """True iff no string is a proper prefix of another (sorted-neighbour scan)."""
    ordered = sorted(programs)
    return not any(b.startswith(a) and a != b for a, b in zip(ordered, ordered[1:]))
