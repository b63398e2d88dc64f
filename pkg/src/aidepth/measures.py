"""Depth, deficiency and mutual information of finite strings over a horizon table.

All comparisons are exact: probabilities are integer numerators over
``2**table.unit`` (or :class:`~fractions.Fraction` for external measures) and
logarithms are taken with :func:`~aidepth.dyadic.floor_log2`.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .dyadic import DyadicRational, ceil_log2, floor_log2
from .enumerator import ComplexityTable, NotFound
from .upm import encode_gamma

DEFAULT_SIGMA_CAP = 24


# --- measures and weights ---------------------------------------------------------


class CylinderMeasure:
    """A probability measure on infinite sequences, evaluated on cylinders."""

    name = "measure"

    def __call__(self, x: str) -> Fraction:
        raise NotImplementedError

    def check_additive(self, max_len: int) -> bool:
        """Verify ``mu(eps) == 1`` and ``mu(x) == mu(x0) + mu(x1)`` below ``max_len``."""
        if self("") != 1:
            return False
        frontier = [""]
        for _ in range(max_len):
            nxt = []
            for x in frontier:
                if self(x) != self(x + "0") + self(x + "1"):
                    return False
                nxt += [x + "0", x + "1"]
            frontier = nxt
        return True


class Bernoulli(CylinderMeasure):
    def __init__(self, p: Fraction | int | str) -> None:
        p = Fraction(p)
        if not 0 < p < 1:
            raise ValueError(f"Bernoulli parameter must lie in (0, 1), got {p}")
        self.p = p
        self.name = f"bernoulli({p})"

    def __call__(self, x: str) -> Fraction:
        ones = x.count("1")
        return self.p**ones * (1 - self.p) ** (len(x) - ones)


class Uniform(Bernoulli):
    def __init__(self) -> None:
        super().__init__(Fraction(1, 2))
        self.name = "uniform"

    def __call__(self, x: str) -> Fraction:
        return Fraction(1, 1 << len(x))


class TableMeasure(CylinderMeasure):
    """Finite table of cylinder values; strings beyond the table are not evaluable."""

    def __init__(self, values: dict[str, Fraction | int], name: str = "table") -> None:
        self.values = {x: Fraction(v) for x, v in values.items()}
        self.depth = max(len(x) for x in self.values)
        self.name = name
        if not self.check_additive(self.depth):
            raise ValueError("table is not a cylinder measure")

    def __call__(self, x: str) -> Fraction:
        try:
            return self.values[x]
        except KeyError:
            raise KeyError(f"{x!r} outside the measure table") from None


@dataclass(frozen=True)
class WeightFunction:
    """A positive weight on strings; not necessarily a measure (e.g. ``2**-K^t``)."""

    evaluator: Callable[[str], Fraction]
    name: str
    measure_validated: bool = False

    def __call__(self, x: str) -> Fraction:
        return Fraction(self.evaluator(x))


def m_t(table: ComplexityTable, t: int) -> WeightFunction:
    """``z -> 2**-K^t(z)``; zero for strings with no program within ``t``."""

    def weight(z: str) -> Fraction:
        try:
            return Fraction(1, 1 << table.k_t(z, t))
        except NotFound:
            return Fraction(0)

    return WeightFunction(weight, f"m^{t}")


def q_t_weight(table: ComplexityTable, t: int) -> WeightFunction:
    return WeightFunction(lambda z: table.q_t(z, t).to_fraction(), f"Q^{t}")


def q_model_weight(table: ComplexityTable) -> WeightFunction:
    return q_t_weight(table, table.horizon.t_max)


# --- reports ----------------------------------------------------------------------


@dataclass
class SlackReport:
    check: str
    horizon: tuple[int, int]
    fitted_constant: float = 0
    violations: list[tuple[str, dict]] = field(default_factory=list)
    skipped: list[tuple[str, dict]] = field(default_factory=list)
    cap: float | None = None
    notes: dict[str, Any] = field(default_factory=dict)

    @property
    def violation_count(self) -> int:
        return len(self.violations)

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: SlackReport) -> None:
        self.fitted_constant = max(self.fitted_constant, other.fitted_constant)
        self.violations += other.violations
        self.skipped += other.skipped

    def to_json(self) -> dict:
        k_max, t_max = self.horizon
        doc = {
            "check": self.check,
            "horizon": {"k_max": k_max, "t_max": t_max},
            "fitted_constant": self.fitted_constant,
            "violations": [{"x": x, "details": d} for x, d in self.violations],
            "skipped": [{"x": x, "details": d} for x, d in self.skipped],
        }
        if self.cap is not None:
            doc["cap"] = self.cap
        if self.notes:
            doc["notes"] = self.notes
        return doc


def _report(table: ComplexityTable, check: str, **kw: Any) -> SlackReport:
    return SlackReport(check, (table.horizon.k_max, table.horizon.t_max), **kw)


# --- depth and deficiency ----------------------------------------------------------


def depth_t(table: ComplexityTable, x: str, t: int) -> int:
    """Computational depth ``K^t(x) - K(x)``."""
    return table.k_t(x, t) - table.k_model(x)


def ldepth(table: ComplexityTable, x: str, b: int) -> int:
    """Least budget whose programs carry at least ``2**-b`` of ``Q(x)``."""
    if b < 0:
        raise ValueError("significance level must be non-negative")
    q = table.weight_t(x, table.horizon.t_max)
    if not q:
        raise NotFound(f"{x!r} not in horizon")
    for t in table.halt_steps(x):
        if table.weight_t(x, t) << b >= q:
            return t
    raise AssertionError("unreachable: ratio is 1 at t_max")


def deficiency(table: ComplexityTable, x: str, w: Callable[[str], Fraction]) -> int:
    """``floor(log2(Q(x) / w(x)))``, possibly negative at small horizons."""
    q = table.q_model(x)
    if not q:
        raise NotFound(f"{x!r} not in horizon")
    wx = Fraction(w(x))
    if wx <= 0:
        raise ValueError(f"weight vanishes at {x!r}; deficiency undefined")
    return floor_log2(q.to_fraction() / wx)


def deficiency_identity_check(
    table: ComplexityTable,
    x: str,
    b_grid: Iterable[int],
    t_grid: Iterable[int],
    spread: float | None = None,
) -> SlackReport:
    """Logical and computational depth as deficiencies.

    (a) ``ldepth_b(x) == min{T : ceil(log2(Q/Q^T)) <= b}`` exactly, and the
    floored deficiency form is sandwiched as
    ``ldepth_{b+1} <= min{T : floor(log2(Q/Q^T)) <= b} <= ldepth_b``.
    (b) ``|depth^T(x) - deficiency(x | 2**-K^T)|`` stays within the coding spread + 1.
    """
    if spread is None:
        spread = table.coding_spread().bits
    rep = _report(table, "lemma4", cap=spread + 1)
    q = table.weight_t(x, table.horizon.t_max)
    steps = table.halt_steps(x)

    def first(pred: Callable[[int], bool]) -> int:
        return next(t for t in steps if pred(table.weight_t(x, t)))

    for b in b_grid:
        lhs = ldepth(table, x, b)
        by_ceil = first(lambda w: ceil_log2(Fraction(q, w)) <= b)
        by_floor = first(lambda w: floor_log2(Fraction(q, w)) <= b)
        upper, lower = lhs, ldepth(table, x, b + 1)
        if lhs != by_ceil or not lower <= by_floor <= upper:
            rep.violations.append(
                (x, {"part": "a", "b": b, "ldepth": lhs, "ceil_form": by_ceil, "floor_form": by_floor})
            )

    gap_max = 0
    for t in t_grid:
        try:
            d = depth_t(table, x, t)
        except NotFound:
            rep.skipped.append((x, {"part": "b", "T": t, "reason": "no program within T"}))
            continue
        gap = abs(d - deficiency(table, x, m_t(table, t)))
        gap_max = max(gap_max, gap)
        if gap > spread + 1:
            rep.violations.append((x, {"part": "b", "T": t, "gap": gap}))
    rep.fitted_constant = gap_max
    return rep


# --- theorem checkers -------------------------------------------------------------


def least_significance(table: ComplexityTable, x: str, t: int) -> int | None:
    """Least ``b >= 0`` with ``ldepth_b(x) == t``, or None if ``t`` is no ldepth of ``x``."""
    q = table.weight_t(x, table.horizon.t_max)
    w = table.weight_t(x, t)
    if not w:
        return None
    b = max(0, ceil_log2(Fraction(q, w)))
    prev = table.weight_t(x, t - 1) if t > 1 else 0
    return b if prev << b < q else None


def theorem_part_i(
    table: ComplexityTable, x: str, t_grid: Iterable[int], spread: float | None = None
) -> SlackReport:
    """Check ``depth^T(x) >= b_min - c`` where ``b_min`` is least with ``ldepth_b(x) = T``."""
    if spread is None:
        spread = table.coding_spread().bits
    rep = _report(table, "thm3i", cap=spread + 1)
    c = 0
    for t in t_grid:
        b = least_significance(table, x, t)
        if b is None:
            rep.skipped.append((x, {"T": t, "reason": "T is not ldepth_b(x) for any b"}))
            continue
        d = depth_t(table, x, t)
        c = max(c, b - d)
        if b - d > spread + 1:
            rep.violations.append((x, {"T": t, "b_min": b, "depth": d}))
    rep.fitted_constant = c
    return rep


def theorem_part_ii(
    table: ComplexityTable, x: str, t: int, sigma_cap: int = DEFAULT_SIGMA_CAP
) -> SlackReport:
    """Slack needed for logical depth to follow from computational depth ``b``.

    ``t`` is first lowered to the earliest budget with the same ``K^t(x)``,
    so ``x`` is ``(t, b)``-deep. Two slacks are fitted:

    * ``sigma_time``: least ``s >= 0`` with ``ldepth_{b-s}(x) >= t``, i.e.
      every budget below ``t`` carries less than ``2**(s-b)`` of ``Q(x)``;
    * ``sigma_mass``: least ``s >= 0`` with ``Q^t(x) >= 2**-(b+s) Q(x)``.

    Either exceeding ``sigma_cap`` is a violation.
    """
    rep = _report(table, "thm3ii", cap=sigma_cap)
    b = depth_t(table, x, t)
    k = table.k_t(x, t)
    t_deep = next(s for s in table.halt_steps(x) if s <= t and table.k_t(x, s) == k)
    q = table.weight_t(x, table.horizon.t_max)
    prev = table.weight_t(x, t_deep - 1) if t_deep > 1 else 0
    sigma_time = max(0, floor_log2(Fraction(prev << b, q)) + 1) if prev else 0
    sigma_mass = max(0, ceil_log2(Fraction(q, table.weight_t(x, t_deep))) - b)
    sigma = max(sigma_time, sigma_mass)
    rep.fitted_constant = sigma
    rep.notes = {x: {"T": t, "T_deep": t_deep, "b": b, "sigma_time": sigma_time, "sigma_mass": sigma_mass}}
    if sigma > sigma_cap:
        rep.violations.append((x, rep.notes[x]))
    return rep


# --- mutual information -----------------------------------------------------------


def pair_string(x: str, y: str) -> str:
    """Self-delimiting encoding of ``(x, y)`` as a single output string."""
    return encode_gamma(len(x) + 1) + x + y


def mutual_info(table: ComplexityTable, x: str, y: str) -> int:
    """``K(x) + K(y) - K(x, y)`` with the pair encoded by :func:`pair_string`."""
    return table.k_model(x) + table.k_model(y) - table.k_model(pair_string(x, y))


def mutual_info_bruteforce(table: ComplexityTable, x: str, y: str) -> int:
    """Same as :func:`mutual_info` recomputed straight from the halt records."""

    def k(z: str) -> int:
        lengths = [r.program_length for r in table.records if r.output == z]
        if not lengths:
            raise NotFound(z)
        return min(lengths)

    return k(x) + k(y) - k(pair_string(x, y))


def mutual_info_sweep(table: ComplexityTable) -> tuple[SlackReport, SlackReport]:
    """Fit the symmetry constant and the ``I(x:y) <= min(K(x), K(y)) + c`` constant."""
    sym = _report(table, "mi_symmetry")
    bound = _report(table, "mi_bound")
    outs = table.outputs()
    pairs = 0
    for x in outs:
        for y in outs:
            try:
                ixy = mutual_info(table, x, y)
            except NotFound:
                continue
            pairs += 1
            bound.fitted_constant = max(
                bound.fitted_constant, ixy - min(table.k_model(x), table.k_model(y))
            )
            try:
                iyx = mutual_info(table, y, x)
            except NotFound:
                sym.skipped.append((x, {"y": y, "reason": "reverse pair outside horizon"}))
                continue
            sym.fitted_constant = max(sym.fitted_constant, abs(ixy - iyx))
    sym.notes = bound.notes = {"pairs": pairs, "pairing": "gamma(|x|+1) ++ x ++ y"}
    return sym, bound


# --- horizon sweeps ---------------------------------------------------------------


def sweep(
    table: ComplexityTable,
    check: Callable[..., SlackReport],
    *args: Any,
    outputs: Sequence[str] | None = None,
    **kw: Any,
) -> SlackReport:
    """Run a per-string checker over every output, merged in output order."""
    merged: SlackReport | None = None
    for x in outputs if outputs is not None else table.outputs():
        rep = check(table, x, *args, **kw)
        if merged is None:
            merged = rep
        else:
            merged.merge(rep)
            merged.notes.update(rep.notes)
    assert merged is not None, "empty table"
    return merged


def theorem_part_ii_sweep(table: ComplexityTable, sigma_cap: int = DEFAULT_SIGMA_CAP) -> SlackReport:
    """Part (ii) at every halting time of every output."""
    rep = _report(table, "thm3ii", cap=sigma_cap)
    for x in table.outputs():
        for t in table.halt_steps(x):
            one = theorem_part_ii(table, x, t, sigma_cap)
            rep.merge(one)
            rep.notes[f"{x}@{t}"] = one.notes[x]
    return rep


def uniform_test_sum(table: ComplexityTable, n: int) -> Fraction:
    """``sum_{|x|=n} 2**-n * 2**deficiency(x | uniform)`` over strings in the horizon.

    Deficiency is a uniform test: the sum never exceeds ``kraft_sum``.
    """
    u = Uniform()
    total = Fraction(0)
    for x in table.outputs():
        if len(x) == n:
            total += u(x) * Fraction(2) ** deficiency(table, x, u)
    return total


def monotonicity_report(table: ComplexityTable, b_max: int = 16) -> SlackReport:
    """Exhaustive in-horizon monotonicity of ``K^T``, ``Q^T``, ``ldepth_b`` and ``depth^T``."""
    rep = _report(table, "monotonicity")
    t_max = table.horizon.t_max
    for x in table.outputs():
        prev_k, prev_q, prev_d = math.inf, -1, math.inf
        for t in range(1, t_max + 1):
            w = table.weight_t(x, t)
            try:
                k = table.k_t(x, t)
                d = depth_t(table, x, t)
            except NotFound:
                k = d = math.inf
            if k > prev_k:
                rep.violations.append((x, {"kind": "K^T increased", "T": t}))
            if w < prev_q:
                rep.violations.append((x, {"kind": "Q^T decreased", "T": t}))
            if d > prev_d:
                rep.violations.append((x, {"kind": "depth^T increased", "T": t}))
            prev_k, prev_q, prev_d = k, w, d
        prev_l = math.inf
        for b in range(b_max + 1):
            ld = ldepth(table, x, b)
            if ld > prev_l:
                rep.violations.append((x, {"kind": "ldepth_b increased", "b": b}))
            prev_l = ld
    return rep


# --- tabular output ---------------------------------------------------------------


def table_csv(table: ComplexityTable, t_grid: Sequence[int], b_grid: Sequence[int]) -> str:
    """CSV dump: ``x, K, K_T..., Q, depth_T..., ldepth_b...``; blanks where undefined."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(
        ["x", "K"]
        + [f"K_{t}" for t in t_grid]
        + ["Q"]
        + [f"depth_{t}" for t in t_grid]
        + [f"ldepth_{b}" for b in b_grid]
    )

    def maybe(f: Callable[[], Any]) -> Any:
        try:
            return f()
        except NotFound:
            return ""

    for x in table.outputs():
        w.writerow(
            [x, table.k_model(x)]
            + [maybe(lambda t=t: table.k_t(x, t)) for t in t_grid]
            + [str(table.q_model(x))]
            + [maybe(lambda t=t: depth_t(table, x, t)) for t in t_grid]
            + [ldepth(table, x, b) for b in b_grid]
        )
    return buf.getvalue()


__all__ = [
    "Bernoulli",
    "CylinderMeasure",
    "DyadicRational",
    "SlackReport",
    "TableMeasure",
    "Uniform",
    "WeightFunction",
    "deficiency",
    "deficiency_identity_check",
    "depth_t",
    "ldepth",
    "least_significance",
    "m_t",
    "monotonicity_report",
    "mutual_info",
    "mutual_info_bruteforce",
    "mutual_info_sweep",
    "pair_string",
    "q_model_weight",
    "q_t_weight",
    "sweep",
    "table_csv",
    "theorem_part_i",
    "theorem_part_ii",
    "theorem_part_ii_sweep",
    "uniform_test_sum",
]
