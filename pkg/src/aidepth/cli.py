"""``aidepth`` command line.

Exit codes: 0 success, 1 usage error, 2 computation refused (value outside
the horizon, cache/machine mismatch, resource limit). Results go to
``--out`` or stdout; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import cache as cache_io
from .enumerator import ComplexityTable, HorizonError, Horizon, NotFound, enumerate_programs, is_prefix_free
from .measures import (
    Bernoulli,
    DEFAULT_SIGMA_CAP,
    SlackReport,
    Uniform,
    deficiency,
    deficiency_identity_check,
    depth_t,
    ldepth,
    m_t,
    mutual_info,
    q_t_weight,
    sweep,
    theorem_part_i,
    theorem_part_ii_sweep,
)
from .seqlab import (
    Compress,
    Estimator,
    EstimatorRefusal,
    Exact,
    HaltingChar,
    Interleave,
    Oracle,
    RandomPool,
    SequenceGen,
    ThueMorse,
    ZeroDilute,
    Zeros,
    dim_depth_profile,
    dim_lemma_check,
    dim_mutual_info,
    dim_profile,
    dim_t_profile,
    im_star,
    levin_mi_profile,
    super_deep_diag,
)
from .timebounds import TimeFamily
from .upm import Status, run_bits
from .cache import CacheError

SUITES = ("kraft", "prefixfree", "coding", "lemma4", "thm3i", "thm3ii", "dimlemmas")


class UsageError(Exception):
    pass


class Refusal(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


# --- parsing helpers ---------------------------------------------------------------


def parse_generator(text: str) -> SequenceGen:
    """``zeros``, ``thuemorse``, ``pool:SEED``, ``halting:CAP``, ``dilute(G)``,
    ``interleave(G,G)``, ``alpha:SEED`` and ``beta:SEED_ALPHA+SEED_GAMMA``."""
    gen, rest = _parse_gen(text.replace(" ", ""))
    if rest:
        raise UsageError(f"trailing text in generator spec: {rest!r}")
    return gen


def _parse_gen(s: str) -> tuple[SequenceGen, str]:
    for name in ("dilute(", "interleave("):
        if s.startswith(name):
            a, rest = _parse_gen(s[len(name):])
            if name == "dilute(":
                if not rest.startswith(")"):
                    raise UsageError("expected ')' after dilute argument")
                return ZeroDilute(a), rest[1:]
            if not rest.startswith(","):
                raise UsageError("interleave takes two generators")
            b, rest = _parse_gen(rest[1:])
            if not rest.startswith(")"):
                raise UsageError("expected ')' after interleave arguments")
            return Interleave(a, b), rest[1:]
    end = min([i for i in (s.find(","), s.find(")")) if i >= 0], default=len(s))
    head, rest = s[:end], s[end:]
    kind, _, arg = head.partition(":")
    try:
        if kind == "zeros":
            return Zeros(), rest
        if kind == "thuemorse":
            return ThueMorse(), rest
        if kind in ("pool", "alpha"):
            return RandomPool(int(arg)), rest
        if kind == "halting":
            return HaltingChar(int(arg)), rest
        if kind == "beta":
            seed_a, _, seed_g = arg.partition("+")
            return Interleave(RandomPool(int(seed_a)), RandomPool(int(seed_g))), rest
    except ValueError:
        raise UsageError(f"bad generator argument in {head!r}") from None
    raise UsageError(f"unknown generator {head!r}")


def parse_estimator(text: str, table: ComplexityTable | None) -> Estimator:
    kind, _, arg = text.partition(":")
    if kind == "oracle":
        return Oracle()
    if kind == "compress":
        return Compress(int(arg) if arg else None)
    if kind == "exact":
        if table is None:
            raise UsageError("exact estimator needs --cache")
        return Exact(table, int(arg) if arg else None)
    raise UsageError(f"unknown estimator {text!r}")


def parse_grid(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, _, hi = text.partition("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise UsageError(f"bad grid {text!r}") from None


def parse_family(text: str, minimum: int) -> TimeFamily:
    try:
        return TimeFamily.parse(text, minimum)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _fmt_float(v: float) -> Any:
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return round(v, 6)
    return v


def _clean(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return _fmt_float(obj)


# --- output ------------------------------------------------------------------------


class Output:
    def __init__(self, target: str | None) -> None:
        self.target = target
        self.parts: list[str] = []

    def text(self, s: str) -> None:
        self.parts.append(s if s.endswith("\n") else s + "\n")

    def json(self, doc: Any) -> None:
        self.text(json.dumps(_clean(doc), sort_keys=True))

    def flush(self) -> None:
        data = "".join(self.parts)
        if self.target and self.target != "-":
            Path(self.target).write_text(data)
        else:
            sys.stdout.write(data)


def _load(args: argparse.Namespace) -> ComplexityTable:
    path = args.cache or os.environ.get("AIDEPTH_CACHE")
    if not path:
        raise UsageError("--cache is required (or set AIDEPTH_CACHE)")
    if not Path(path).exists():
        raise UsageError(f"no cache at {path}")
    return cache_io.load(path)


def _budget(args: argparse.Namespace, table: ComplexityTable, x: str) -> int:
    if args.steps is not None:
        t = args.steps
    elif args.t_family:
        t = parse_family(args.t_family, 1)(len(x))
    else:
        t = table.horizon.t_max
    if not 1 <= t <= table.horizon.t_max:
        raise Refusal(f"time budget {t} outside horizon [1, {table.horizon.t_max}]")
    return t


# --- commands ----------------------------------------------------------------------


def cmd_machine_run(args: argparse.Namespace, out: Output) -> int:
    if any(c not in "01" for c in args.program):
        raise UsageError("--program must be a bit string")
    outcome = run_bits(args.program, args.max_steps)
    doc = {"status": "halted" if outcome.status is Status.HALTED else outcome.status.value}
    if outcome.halted:
        doc.update(output=outcome.output, steps=outcome.halt_step)
    out.json(doc)
    return 0


def cmd_enum_build(args: argparse.Namespace, out: Output) -> int:
    table = enumerate_programs(Horizon(args.k_max, args.t_max), shards=args.shards)
    cache_io.save(table, args.out_cache)
    print(f"wrote {len(table.records)} halting programs to {args.out_cache}", file=sys.stderr)
    return 0


def cmd_enum_info(args: argparse.Namespace, out: Output) -> int:
    table = _load(args)
    out.json(
        {
            "horizon": {"k_max": table.horizon.k_max, "t_max": table.horizon.t_max},
            "machine_hash": f"{table.machine_hash:016x}",
            "halted": len(table.records),
            "outputs": len(table.per_output),
            "kraft_sum": str(table.kraft_sum()),
            "non_halt": [c._asdict() for c in table.non_halt],
        }
    )
    return 0


def cmd_k(args: argparse.Namespace, out: Output) -> int:
    table = _load(args)
    out.text(str(table.k_t(args.x, _budget(args, table, args.x))))
    return 0


def cmd_q(args: argparse.Namespace, out: Output) -> int:
    table = _load(args)
    out.text(str(table.q_t(args.x, _budget(args, table, args.x))))
    return 0


def cmd_depth(args: argparse.Namespace, out: Output) -> int:
    table = _load(args)
    out.text(str(depth_t(table, args.x, _budget(args, table, args.x))))
    return 0


def cmd_ldepth(args: argparse.Namespace, out: Output) -> int:
    table = _load(args)
    out.text(str(ldepth(table, args.x, args.b)))
    return 0


def _weight(spec: str, table: ComplexityTable) -> Callable:
    kind, _, arg = spec.partition(":")
    if kind == "uniform":
        return Uniform()
    if kind == "bernoulli":
        return Bernoulli(arg)
    if kind == "m":
        return m_t(table, int(arg) if arg else table.horizon.t_max)
    if kind == "q":
        return q_t_weight(table, int(arg) if arg else table.horizon.t_max)
    raise UsageError(f"unknown measure {spec!r}")


def cmd_deficiency(args: argparse.Namespace, out: Output) -> int:
    table = _load(args)
    try:
        w = _weight(args.measure, table)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        out.text(str(deficiency(table, args.x, w)))
    except ValueError as exc:
        raise Refusal(str(exc)) from None
    return 0


def cmd_mi(args: argparse.Namespace, out: Output) -> int:
    table = _load(args)
    out.text(str(mutual_info(table, args.x, args.y)))
    return 0


def _family() -> list[tuple[SequenceGen, SequenceGen]]:
    alpha, gamma = RandomPool(1), RandomPool(2)
    beta = Interleave(alpha, gamma)
    return [
        (alpha, beta),
        (beta, alpha),
        (alpha, alpha),
        (alpha, RandomPool(3)),
        (ZeroDilute(alpha), alpha),
        (alpha, ZeroDilute(alpha)),
        (ThueMorse(), alpha),
    ]


def dim_lemmas_report(n_grid: Sequence[int] = (256, 512, 1024, 2048, 4096)) -> SlackReport:
    """Dimension-level lemmas over the built-in generator family (oracle estimator)."""
    rep = SlackReport("dimlemmas", (0, 0), cap=0.05)
    est = Oracle()
    for a, b in _family():
        key = f"{a.id}|{b.id}"
        idim = dim_mutual_info(a, b, est, n_grid)
        bound = min(im_star(a, b, est, n_grid).lower, im_star(b, a, est, n_grid).lower)
        lemma = dim_lemma_check(a, b, est, n_grid)
        rep.notes[key] = {"I_dim": idim, "min_im_lower": bound, "lemma_lhs": lemma.lhs, "lemma_rhs": lemma.rhs}
        rep.fitted_constant = max(rep.fitted_constant, idim - bound, lemma.rhs - lemma.lhs)
        if idim > bound + 0.05:
            rep.violations.append((key, {"kind": "I_dim above min I_m*", "I_dim": idim, "bound": bound}))
        if not lemma.holds:
            rep.violations.append((key, {"kind": "dimension lemma", "lhs": lemma.lhs, "rhs": lemma.rhs}))
    for gen in [Zeros(), ThueMorse(), RandomPool(1), ZeroDilute(RandomPool(1))]:
        for passes in (1, 4):
            dd = dim_depth_profile(gen, Compress(), passes, n_grid[:4])
            if not dd.holds:
                rep.violations.append(
                    (gen.id, {"kind": "dimensional depth bound", "passes": passes, "depth": dd.depth, "bound": dd.bound})
                )
    return rep


def cmd_verify(args: argparse.Namespace, out: Output) -> int:
    suite = args.suite
    if suite == "dimlemmas":
        rep = dim_lemmas_report()
    else:
        table = _load(args)
        h = (table.horizon.k_max, table.horizon.t_max)
        t_grid = range(1, table.horizon.t_max + 1)
        if suite == "kraft":
            kraft = table.kraft_sum()
            rep = SlackReport("kraft", h, notes={"kraft_sum": str(kraft)})
            if kraft > 1:
                rep.violations.append(("", {"kraft_sum": str(kraft)}))
        elif suite == "prefixfree":
            rep = SlackReport("prefixfree", h, notes={"programs": len(table.records)})
            if not is_prefix_free(r.program for r in table.records):
                progs = sorted(r.program for r in table.records)
                for a, b in zip(progs, progs[1:]):
                    if b.startswith(a):
                        rep.violations.append((a, {"extended_by": b}))
        elif suite == "coding":
            cs = table.coding_spread()
            rep = SlackReport("coding", h, fitted_constant=cs.bits, cap=args.spread_cap,
                              notes={"floor_bits": cs.floor_bits, "witness": cs.witness})
            if cs.bits > args.spread_cap:
                rep.violations.append((cs.witness, {"spread": cs.bits}))
        elif suite == "lemma4":
            spread = table.coding_spread().bits
            rep = sweep(table, deficiency_identity_check, range(0, 17), t_grid, spread)
        elif suite == "thm3i":
            rep = sweep(table, theorem_part_i, t_grid, table.coding_spread().bits)
            rep.skipped = [("*", {"count": len(rep.skipped)})]
        else:
            rep = theorem_part_ii_sweep(table, args.sigma_cap)
    doc = rep.to_json()
    out.json(doc)
    if args.report:
        Path(args.report).write_text(json.dumps(_clean(doc), sort_keys=True, indent=1) + "\n")
    status = "pass" if rep.ok else "FAIL"
    print(f"verify {suite}: {status} ({rep.violation_count} violations, constant {_fmt_float(rep.fitted_constant)})",
          file=sys.stderr)
    return 0 if rep.ok else 2


def _maybe_table(args: argparse.Namespace) -> ComplexityTable | None:
    path = args.cache or os.environ.get("AIDEPTH_CACHE")
    return cache_io.load(path) if path else None


def cmd_seq_profile(args: argparse.Namespace, out: Output) -> int:
    table = _maybe_table(args) if args.estimator.startswith("exact") else None
    est = parse_estimator(args.estimator, table)
    gen = parse_generator(args.gen)
    grid = parse_grid(args.n_grid)
    if args.budget is not None:
        prof = dim_t_profile(gen, est, args.budget, grid, args.window)
    else:
        prof = dim_profile(gen, est, grid, args.window)
    if args.format == "csv":
        out.text(prof.to_csv())
    else:
        out.json(prof.to_json())
    return 0


def cmd_seq_mi(args: argparse.Namespace, out: Output) -> int:
    est = parse_estimator(args.estimator, None)
    a, b = parse_generator(args.gen_a), parse_generator(args.gen_b)
    grid = parse_grid(args.n_grid)
    ab = im_star(a, b, est, grid, args.m_factor, args.window)
    ba = im_star(b, a, est, grid, args.m_factor, args.window)
    levin = levin_mi_profile(a, b, est, grid, args.window)
    out.json(
        {
            "generators": [a.id, b.id],
            "estimator": est.name,
            "m_factor": args.m_factor,
            "im_a_about_b": {"lower": ab.lower, "upper": ab.upper, "skipped": list(ab.skipped)},
            "im_b_about_a": {"lower": ba.lower, "upper": ba.upper, "skipped": list(ba.skipped)},
            "levin_profile": levin.to_json(),
            "i_dim": dim_mutual_info(a, b, est, grid, args.window),
            "pairing": "bit interleave, smaller generator id first",
        }
    )
    return 0


def cmd_seq_diag(args: argparse.Namespace, out: Output) -> int:
    table = _load(args)
    gen = parse_generator(args.gen)
    s_fam = [parse_family(s, 0) for s in args.s_family]
    t_fam = [parse_family(t, 1) for t in args.t_family]
    rep = super_deep_diag(gen, table, s_fam, t_fam, parse_grid(args.n_grid))
    out.json(rep.to_json())
    return 0 if not rep.violations else 2


# --- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="aidepth", description="Exact algorithmic-information quantities at desk scale.")
    p.add_argument("--out", help="output file (default stdout)")
    sub = p.add_subparsers(dest="verb", required=True)

    def with_cache(sp: argparse.ArgumentParser) -> argparse.ArgumentParser:
        sp.add_argument("--cache", help="AITC cache (default $AIDEPTH_CACHE)")
        return sp

    def with_time(sp: argparse.ArgumentParser) -> None:
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--steps", type=int, help="absolute step budget")
        g.add_argument("--t-family", help="time bound evaluated at |x|: lin:c, poly:c, exp:c, const:c")

    machine = sub.add_parser("machine").add_subparsers(dest="action", required=True)
    mr = machine.add_parser("run")
    mr.add_argument("--program", required=True)
    mr.add_argument("--max-steps", type=int, required=True)
    mr.set_defaults(func=cmd_machine_run)

    enum = sub.add_parser("enum").add_subparsers(dest="action", required=True)
    eb = enum.add_parser("build")
    eb.add_argument("--k-max", type=int, required=True)
    eb.add_argument("--t-max", type=int, required=True)
    eb.add_argument("--shards", type=int, default=1)
    eb.add_argument("--out", dest="out_cache", required=True)
    eb.set_defaults(func=cmd_enum_build)
    with_cache(enum.add_parser("info")).set_defaults(func=cmd_enum_info)

    for name, func in (("k", cmd_k), ("q", cmd_q), ("depth", cmd_depth)):
        sp = with_cache(sub.add_parser(name))
        sp.add_argument("--x", required=True)
        with_time(sp)
        sp.set_defaults(func=func)

    sp = with_cache(sub.add_parser("ldepth"))
    sp.add_argument("--x", required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.set_defaults(func=cmd_ldepth)

    sp = with_cache(sub.add_parser("deficiency"))
    sp.add_argument("--x", required=True)
    sp.add_argument("--measure", default="uniform", help="uniform, bernoulli:p, m:T or q:T")
    sp.set_defaults(func=cmd_deficiency)

    sp = with_cache(sub.add_parser("mi"))
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.set_defaults(func=cmd_mi)

    sp = with_cache(sub.add_parser("verify"))
    sp.add_argument("suite", choices=SUITES)
    sp.add_argument("--report", help="also write the JSON report here")
    sp.add_argument("--spread-cap", type=float, default=16.0)
    sp.add_argument("--sigma-cap", type=int, default=DEFAULT_SIGMA_CAP)
    sp.set_defaults(func=cmd_verify)

    seq = sub.add_parser("seq").add_subparsers(dest="action", required=True)
    sp = with_cache(seq.add_parser("profile"))
    sp.add_argument("--gen", required=True)
    sp.add_argument("--estimator", default="oracle")
    sp.add_argument("--n-grid", required=True)
    sp.add_argument("--budget", type=int)
    sp.add_argument("--window", type=int)
    sp.add_argument("--format", choices=("csv", "json"), default="json")
    sp.set_defaults(func=cmd_seq_profile)

    sp = seq.add_parser("mi")
    sp.add_argument("--gen-a", required=True)
    sp.add_argument("--gen-b", required=True)
    sp.add_argument("--estimator", default="oracle")
    sp.add_argument("--n-grid", required=True)
    sp.add_argument("--m-factor", type=int, default=4)
    sp.add_argument("--window", type=int)
    sp.set_defaults(func=cmd_seq_mi)

    sp = with_cache(seq.add_parser("diag"))
    sp.add_argument("--gen", required=True)
    sp.add_argument("--n-grid", required=True)
    sp.add_argument("--s-family", action="append", required=True)
    sp.add_argument("--t-family", action="append", required=True)
    sp.set_defaults(func=cmd_seq_diag)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        out = Output(args.out)
        code = args.func(args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except NotFound as exc:
        print(f"NotFound: {exc}", file=sys.stderr)
        return 2
    except (Refusal, HorizonError, CacheError, EstimatorRefusal) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"invalid argument: {exc}", file=sys.stderr)
        return 1
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
