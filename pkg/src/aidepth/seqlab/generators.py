"""Deterministic infinite-sequence generators with per-bit provenance.

Every generator emits prefixes together with the *source* of each bit: a
``(seed, index)`` pair naming the entropy-pool bit it copies, or ``None`` for
bits that are computable without the pool. The oracle estimator counts
distinct sources, so provenance must be exact.

Pool bits come from a counter-based construction that reproduces across
platforms: word ``j`` of pool ``seed`` is ``splitmix64(seed + j * GOLDEN)``
and bit ``i`` is bit ``63 - i % 64`` of word ``i // 64``.
"""
from __future__ import annotations

from typing import Callable, NamedTuple, Optional

from ..upm import run_bits

GOLDEN = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1

Source = Optional[tuple[int, int]]


def splitmix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def pool_bits(seed: int, n: int) -> str:
    words = (n + 63) // 64
    text = "".join(format(splitmix64(seed + j * GOLDEN), "064b") for j in range(words))
    return text[:n]


class Prefix(NamedTuple):
    bits: str
    sources: tuple[Source, ...]

    def __len__(self) -> int:
        return len(self.bits)


class SequenceGen:
    """Base class: subclasses implement ``_emit(n)`` returning a :class:`Prefix`."""

    id: str = "seq"

    def __init__(self) -> None:
        self._memo = Prefix("", ())

    def _emit(self, n: int) -> Prefix:
        raise NotImplementedError

    def prefix(self, n: int) -> Prefix:
        if n < 0:
            raise ValueError("prefix length must be non-negative")
        if n > len(self._memo):
            self._memo = self._emit(max(n, 2 * len(self._memo)))
        m = self._memo
        return Prefix(m.bits[:n], m.sources[:n])

    def bits(self, n: int) -> str:
        return self.prefix(n).bits

    def __repr__(self) -> str:
        return self.id


class RandomPool(SequenceGen):
    def __init__(self, seed: int) -> None:
        super().__init__()
        self.seed = seed & _MASK
        self.id = f"pool{self.seed}"

    def _emit(self, n: int) -> Prefix:
        return Prefix(pool_bits(self.seed, n), tuple((self.seed, i) for i in range(n)))


class Zeros(SequenceGen):
    id = "zeros"

    def _emit(self, n: int) -> Prefix:
        return Prefix("0" * n, (None,) * n)


class ThueMorse(SequenceGen):
    id = "thuemorse"

    def _emit(self, n: int) -> Prefix:
        return Prefix("".join(str(bin(i).count("1") & 1) for i in range(n)), (None,) * n)


class Interleave(SequenceGen):
    """``a0 b0 a1 b1 ...``"""

    def __init__(self, a: SequenceGen, b: SequenceGen) -> None:
        super().__init__()
        self.a, self.b = a, b
        self.id = f"interleave({a.id},{b.id})"

    def _emit(self, n: int) -> Prefix:
        pa = self.a.prefix((n + 1) // 2)
        pb = self.b.prefix(n // 2)
        bits, src = [], []
        for i in range(n):
            p = pa if i % 2 == 0 else pb
            bits.append(p.bits[i // 2])
            src.append(p.sources[i // 2])
        return Prefix("".join(bits), tuple(src))


def ordered_pair(a: SequenceGen, b: SequenceGen) -> Interleave:
    """Interleave with the lexicographically smaller id first (order-free pairing)."""
    return Interleave(a, b) if a.id <= b.id else Interleave(b, a)


class ZeroDilute(SequenceGen):
    """``g0 0 g1 0 g2 0 ...``: half the density of ``g``."""

    def __init__(self, gen: SequenceGen) -> None:
        super().__init__()
        self.gen = gen
        self.id = f"dilute({gen.id})"

    def _emit(self, n: int) -> Prefix:
        return Interleave(self.gen, Zeros())._emit(n)


class HaltingChar(SequenceGen):
    """Bit ``i`` is 1 iff the ``i``-th program in canonical order halts within ``step_cap``.

    A computable stand-in for the halting sequence; demonstrative only.
    """

    def __init__(self, step_cap: int) -> None:
        super().__init__()
        self.step_cap = step_cap
        self.id = f"halting({step_cap})"

    def _emit(self, n: int) -> Prefix:
        from ..enumerator import body_bits
        from ..upm import encode_gamma

        bits = []
        k, idx = 1, 0
        while len(bits) < n:
            if idx == 8**k:
                k, idx = k + 1, 0
            outcome = run_bits(encode_gamma(k) + body_bits(k, idx), self.step_cap)
            bits.append("1" if outcome.halted else "0")
            idx += 1
        return Prefix("".join(bits), (None,) * n)


class Custom(SequenceGen):
    """Wraps ``fn(n) -> bit string``; bits are treated as pool-free."""

    def __init__(self, fn: Callable[[int], str], id: str) -> None:
        super().__init__()
        self.fn = fn
        self.id = id

    def _emit(self, n: int) -> Prefix:
        bits = self.fn(n)
        if len(bits) != n:
            raise ValueError(f"{self.id} produced {len(bits)} bits, wanted {n}")
        return Prefix(bits, (None,) * n)


def example_pair(seed_alpha: int = 1, seed_gamma: int = 2) -> tuple[RandomPool, Interleave]:
    """Two random sequences ``alpha`` and ``beta = alpha^1 gamma^1 alpha^2 gamma^2 ...``."""
    alpha = RandomPool(seed_alpha)
    return alpha, Interleave(alpha, RandomPool(seed_gamma))
