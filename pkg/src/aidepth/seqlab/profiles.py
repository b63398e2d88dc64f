"""Finite-prefix profiles for dimension, mutual information and dimensional depth.

A limit inferior or superior over ``n`` is read off as the inf or sup over
the tail window of the grid (by default its last half). None of these
numbers certify an asymptotic property; they are honest finite surrogates.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from ..dyadic import log2
from ..enumerator import ComplexityTable, NotFound
from ..measures import depth_t, ldepth
from .estimators import Estimator, EstimatorRefusal
from .generators import SequenceGen, ordered_pair

DEFAULT_TOLERANCE = 0.05


@dataclass
class PrefixProfile:
    n_grid: list[int]
    values: list[float]
    window: int | None = None
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.values) != len(self.n_grid):
            raise ValueError("one value per grid point")
        if self.window is None:
            self.window = (len(self.n_grid) + 1) // 2

    @property
    def tail(self) -> list[float]:
        return self.values[-self.window:] if self.values else []

    @property
    def tail_inf(self) -> float:
        return min(self.tail, default=math.nan)

    @property
    def tail_sup(self) -> float:
        return max(self.tail, default=math.nan)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "value"])
        for n, v in zip(self.n_grid, self.values):
            w.writerow([n, f"{v:.6f}"])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "generator": self.meta.get("generator"),
            "estimator": self.meta.get("estimator"),
            "params": {k: v for k, v in self.meta.items() if k not in ("generator", "estimator")},
            "n_grid": list(self.n_grid),
            "values": [round(v, 6) for v in self.values],
            "tail_inf": round(self.tail_inf, 6),
            "tail_sup": round(self.tail_sup, 6),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _check_grid(n_grid: Sequence[int]) -> list[int]:
    grid = list(n_grid)
    if not grid or any(n < 1 for n in grid) or grid != sorted(set(grid)):
        raise ValueError("n_grid must be strictly ascending positive integers")
    return grid


def dim_profile(
    gen: SequenceGen, est: Estimator, n_grid: Sequence[int], window: int | None = None
) -> PrefixProfile:
    """``estimate(prefix(n)) / n``; the tail inf estimates the constructive dimension."""
    grid = _check_grid(n_grid)
    values = [est.estimate(gen.prefix(n)) / n for n in grid]
    return PrefixProfile(grid, values, window, {"generator": gen.id, "estimator": est.name})


def dim_t_profile(
    gen: SequenceGen, est: Estimator, budget: int | None, n_grid: Sequence[int],
    window: int | None = None,
) -> PrefixProfile:
    """Time-bounded dimension profile: :func:`dim_profile` with ``est`` at ``budget``."""
    prof = dim_profile(gen, est.with_budget(budget), n_grid, window)
    prof.meta["budget"] = budget
    return prof


def levin_mi_profile(
    gen_a: SequenceGen, gen_b: SequenceGen, est: Estimator, n_grid: Sequence[int],
    window: int | None = None,
) -> PrefixProfile:
    """Same-index mutual information ``I(A_n : B_n)``; unbounded growth reads as infinite."""
    grid = _check_grid(n_grid)
    values = [est.mutual(gen_a.prefix(n), gen_b.prefix(n)) for n in grid]
    prof = PrefixProfile(grid, values, window, {"generator": f"{gen_a.id}:{gen_b.id}", "estimator": est.name})
    prof.meta["sup"] = max(values)
    return prof


@dataclass(frozen=True)
class ImStar:
    lower: float
    upper: float
    profile: PrefixProfile
    skipped: tuple[int, ...] = ()


def im_star(
    gen_b: SequenceGen,
    gen_a: SequenceGen,
    est: Estimator,
    n_grid: Sequence[int],
    m_factor: int = 4,
    window: int | None = None,
) -> ImStar:
    """Normalized information that ``gen_b`` has about ``gen_a``.

    ``ratio(n) = I(B_m : A_n) / I(A_n : A_n)`` with ``m = m_factor * n``;
    returns tail inf and tail sup of the ratio. Points whose denominator is
    under one bit are skipped.
    """
    if m_factor < 1:
        raise ValueError("m_factor must be at least 1")
    grid, values, skipped = [], [], []
    for n in _check_grid(n_grid):
        a = gen_a.prefix(n)
        self_info = est.mutual(a, a)
        if self_info < 1:
            skipped.append(n)
            continue
        grid.append(n)
        values.append(est.mutual(gen_b.prefix(m_factor * n), a) / self_info)
    prof = PrefixProfile(
        grid, values, window,
        {"generator": f"{gen_b.id}:{gen_a.id}", "estimator": est.name, "m_factor": m_factor},
    )
    return ImStar(prof.tail_inf, prof.tail_sup, prof, tuple(skipped))


def dim_mutual_info(
    gen_a: SequenceGen, gen_b: SequenceGen, est: Estimator, n_grid: Sequence[int],
    window: int | None = None,
) -> float:
    """``dim(A) + dim(B) - 2 dim<A, B>`` with ``<A, B>`` the id-ordered bit interleave."""
    da = dim_profile(gen_a, est, n_grid, window).tail_inf
    db = dim_profile(gen_b, est, n_grid, window).tail_inf
    dab = dim_profile(ordered_pair(gen_a, gen_b), est, n_grid, window).tail_inf
    return da + db - 2 * dab


@dataclass(frozen=True)
class LemmaCheck:
    lhs: float
    rhs: float
    tolerance: float

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs - self.tolerance


def dim_lemma_check(
    gen_a: SequenceGen,
    gen_b: SequenceGen,
    est: Estimator,
    n_grid: Sequence[int],
    m_factor: int = 4,
    tolerance: float = DEFAULT_TOLERANCE,
    window: int | None = None,
) -> LemmaCheck:
    """``I*(A:B) dim(B) >= dim(A) + liminf -K(A_n | B_n) / n`` on the tail window."""
    upper = im_star(gen_a, gen_b, est, n_grid, m_factor, window).upper
    lhs = upper * dim_profile(gen_b, est, n_grid, window).tail_inf
    grid = _check_grid(n_grid)
    hardness = PrefixProfile(
        grid, [-est.cond(gen_a.prefix(n), gen_b.prefix(n)) / n for n in grid], window
    )
    rhs = dim_profile(gen_a, est, n_grid, window).tail_inf + hardness.tail_inf
    return LemmaCheck(lhs, rhs, tolerance)


@dataclass(frozen=True)
class DimDepth:
    profile: PrefixProfile
    dim_t: float
    dim: float
    tolerance: float

    @property
    def depth(self) -> float:
        return self.profile.tail_inf

    @property
    def bound(self) -> float:
        return self.dim_t - self.dim

    @property
    def holds(self) -> bool:
        return self.depth <= self.bound + self.tolerance


def dim_depth_profile(
    gen: SequenceGen,
    est: Estimator,
    budget: int | None,
    n_grid: Sequence[int],
    tolerance: float = DEFAULT_TOLERANCE,
    window: int | None = None,
) -> DimDepth:
    """``(K^t(A_n) - K(A_n)) / n`` and the bound ``dim^t - dim``."""
    grid = _check_grid(n_grid)
    bounded, full = est.with_budget(budget), est.unbounded()
    values = []
    for n in grid:
        p = gen.prefix(n)
        values.append((bounded.estimate(p) - full.estimate(p)) / n)
    prof = PrefixProfile(
        grid, values, window, {"generator": gen.id, "estimator": est.name, "budget": budget}
    )
    return DimDepth(
        prof,
        dim_profile(gen, bounded, grid, window).tail_inf,
        dim_profile(gen, full, grid, window).tail_inf,
        tolerance,
    )


# --- super-deepness diagnostics ------------------------------------------------------


@dataclass
class SuperDeepReport:
    """Finite-``n`` evaluation of three equivalent super-deepness conditions.

    Demonstrative only: no finite prefix set certifies super-deepness.
    """

    generator: str
    rows: list[dict] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)
    depth_over_gap: float = -math.inf
    gap_over_depth: float = -math.inf
    spread: float = 0.0
    demonstrative: bool = True

    def to_json(self) -> dict:
        return {
            "check": "superdeep",
            "generator": self.generator,
            "demonstrative": self.demonstrative,
            "fitted_constant": {"c_depth_minus_gap": self.depth_over_gap, "c_gap_minus_depth": self.gap_over_depth},
            "coding_spread": self.spread,
            "rows": self.rows,
            "violations": self.violations,
        }


def super_deep_diag(
    gen: SequenceGen,
    table: ComplexityTable,
    s_family: Sequence[Callable[[int], int]],
    t_family: Sequence[Callable[[int], int]],
    n_grid: Sequence[int],
) -> SuperDeepReport:
    """Evaluate, for each prefix and each ``(s, t)``:

    * ``ldepth``: ``ldepth_{s(n)}(A_n) > t(n)``
    * ``depth``: ``depth^{t(n)}(A_n) > s(n)``
    * ``mass``: ``Q(A_n) >= 2**s(n) Q^{t(n)}(A_n)``

    ``ldepth`` implies ``mass`` exactly (they differ only when the two sides
    are equal), and ``mass`` implies ``depth^t >= s - spread`` with the
    table's coding spread. Failures of these implications are violations.
    The constants ``max(depth - gap)`` and ``max(gap - depth)``, where
    ``gap = log2(Q / Q^t)``, are fitted and reported.
    """
    t_max = table.horizon.t_max
    spread = table.coding_spread().bits
    rep = SuperDeepReport(gen.id, spread=spread)
    for n in _check_grid(n_grid) if n_grid else []:
        x = gen.bits(n)
        if x not in table:
            raise EstimatorRefusal(f"prefix of length {n} ({x!r}) outside horizon {table.horizon}")
        q = table.weight_t(x, t_max)
        for s_fn in s_family:
            s = s_fn(n)
            for t_fn in t_family:
                t_req = t_fn(n)
                t = min(t_req, t_max)
                qt = table.weight_t(x, t)
                try:
                    d: float = depth_t(table, x, t)
                except NotFound:
                    d = math.inf
                gap = log2(Fraction(q, qt)) if qt else math.inf
                row = {
                    "n": n,
                    "s": s,
                    "t": t,
                    "t_clamped": t != t_req,
                    "ldepth": ldepth(table, x, s) > t,
                    "depth": d > s,
                    "mass": q >= qt << s,
                    "depth_value": d,
                    "gap": gap,
                }
                rep.rows.append(row)
                if math.isfinite(d):
                    rep.depth_over_gap = max(rep.depth_over_gap, d - gap)
                    rep.gap_over_depth = max(rep.gap_over_depth, gap - d)
                if row["ldepth"] and not row["mass"]:
                    rep.violations.append({**row, "why": "ldepth without mass"})
                if row["mass"] and not row["ldepth"] and q != qt << s:
                    rep.violations.append({**row, "why": "mass without ldepth off the boundary"})
                if row["mass"] and d < s - spread:
                    rep.violations.append({**row, "why": "mass without depth beyond spread"})
    return rep
