"""Complexity estimators for sequence prefixes.

``Oracle`` does exact bit accounting for pool-built generators, ``Compress``
is a self-contained dictionary coder, and ``Exact`` reads the enumeration
table (tiny prefixes only).
"""
from __future__ import annotations

import math

from ..enumerator import ComplexityTable, NotFound
from ..measures import pair_string
from .generators import Prefix

MAX_PASSES = 8
_VARIANT_HEADER = 3  # bits naming the variant; fixed so extra passes never cost more


class EstimatorRefusal(ValueError):
    """The estimator cannot evaluate this prefix (e.g. outside the horizon)."""


def log_term(n: int) -> int:
    return math.ceil(2 * math.log2(n + 2))


class Estimator:
    name = "estimator"
    budget: int | None = None

    def estimate(self, x: Prefix) -> float:
        raise NotImplementedError

    def joint(self, x: Prefix, y: Prefix) -> float:
        raise NotImplementedError

    def cond(self, x: Prefix, y: Prefix) -> float:
        raise NotImplementedError

    def mutual(self, x: Prefix, y: Prefix) -> float:
        return self.estimate(x) + self.estimate(y) - self.joint(x, y)

    def with_budget(self, budget: int | None) -> Estimator:
        raise EstimatorRefusal(f"{self.name} has no time budget")

    def unbounded(self) -> Estimator:
        return self.with_budget(None)


class Oracle(Estimator):
    """Counts distinct entropy-pool bits plus ``ceil(2 log2(n + 2))``."""

    name = "oracle"

    @staticmethod
    def _pool(x: Prefix) -> set:
        return {s for s in x.sources if s is not None}

    def estimate(self, x: Prefix) -> float:
        return len(self._pool(x)) + log_term(len(x))

    def joint(self, x: Prefix, y: Prefix) -> float:
        return len(self._pool(x) | self._pool(y)) + log_term(max(len(x), len(y)))

    def cond(self, x: Prefix, y: Prefix) -> float:
        return len(self._pool(x) - self._pool(y)) + log_term(len(x))

    def with_budget(self, budget: int | None) -> Estimator:
        return self


class Exact(Estimator):
    """``K^T`` from an enumeration table; ``budget=None`` means ``t_max``."""

    def __init__(self, table: ComplexityTable, budget: int | None = None) -> None:
        self.table = table
        self.budget = budget
        self.name = "exact" if budget is None else f"exact@{budget}"

    def _k(self, bits: str) -> int:
        t = self.budget or self.table.horizon.t_max
        try:
            return self.table.k_t(bits, t)
        except NotFound as exc:
            raise EstimatorRefusal(str(exc)) from None

    def estimate(self, x: Prefix) -> float:
        return self._k(x.bits)

    def joint(self, x: Prefix, y: Prefix) -> float:
        return self._k(pair_string(x.bits, y.bits))

    def cond(self, x: Prefix, y: Prefix) -> float:
        raise EstimatorRefusal("the reference machine has no condition tape")

    def with_budget(self, budget: int | None) -> Exact:
        return Exact(self.table, budget)


def lz_blocks(bits: str, block: int) -> int:
    """Code length in bits of an LZ78 parse of ``bits`` over ``block``-bit symbols.

    Each new phrase pays the index of its parent phrase plus its last symbol;
    symbols come from a growing alphabet with an escape for unseen blocks.
    Trailing bits that do not fill a block are sent raw.
    """
    m = len(bits) // block
    trie: dict[tuple[int, str], int] = {}
    alphabet: set[str] = set()
    size = 1
    cost = len(bits) - m * block
    node = 0
    for j in range(m):
        sym = bits[j * block:(j + 1) * block]
        child = trie.get((node, sym))
        if child is not None:
            node = child
            continue
        cost += math.ceil(math.log2(size)) if size > 1 else 0
        cost += math.ceil(math.log2(len(alphabet) + 1))
        if sym not in alphabet:
            alphabet.add(sym)
            cost += block
        trie[(node, sym)] = size
        size += 1
        node = 0
    if node:
        cost += math.ceil(math.log2(size))
    return cost


class Compress(Estimator):
    """Best of a raw copy and ``passes`` LZ78 variants over 1, 2, 4, ... bit symbols.

    ``passes`` is the time budget: more passes try a superset of variants, so
    estimates never grow with the budget. The default is the unbounded mode.
    """

    def __init__(self, passes: int | None = None) -> None:
        passes = MAX_PASSES if passes is None else passes
        if not 1 <= passes <= MAX_PASSES:
            raise ValueError(f"passes must lie in [1, {MAX_PASSES}]")
        self.passes = passes
        self.budget = passes
        self.name = f"compress@{passes}"
        self._memo: dict[str, int] = {}

    def _k(self, bits: str) -> int:
        got = self._memo.get(bits)
        if got is None:
            got = _VARIANT_HEADER + log_term(len(bits)) + min(
                len(bits), *(lz_blocks(bits, 1 << j) for j in range(self.passes))
            )
            if len(self._memo) < 4096:
                self._memo[bits] = got
        return got

    def estimate(self, x: Prefix) -> float:
        return self._k(x.bits)

    def joint(self, x: Prefix, y: Prefix) -> float:
        return self._k(x.bits + y.bits)

    def cond(self, x: Prefix, y: Prefix) -> float:
        return max(0, self._k(y.bits + x.bits) - self._k(y.bits))

    def with_budget(self, budget: int | None) -> Compress:
        return Compress(budget)
