"""Command-line surface: compute, decide, generate, verify, benchmark.

Subcommands
-----------
exact       bounded weighted edit distance with exact rational output
approx      gap decision YES/NO at relative slack eps
bicriteria  indel/substitution budget feasibility
gen-gadget  write a hardness instance bundle to disk
verify      recheck a bundle or a claimed bound with the brute-force referee
bench       per-size wall time and probe counts as JSON rows

Inputs are raw byte files or inline --x-str/--y-str literals.  Every
subcommand takes --json and then prints a single report object; identical
inputs and seed reproduce the report byte for byte except for wall_time.
Exit codes: 0 success or PASS, 1 verification FAIL, 2 usage error.
"""

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from .approx import approx_eda, bicriteria_approx, plant_edits
from .approx_lce import build_approx_lce
from .core import (ByteText, ProbeCounter, RandomSource, ScaledCost,
                   load_text, parse_threshold)
from .exact import EXCEEDS, bicriteria_exact, eda_exact
from .gadgets import ov_reduce, random_ov_instance, read_bundle, write_bundle
from .oracle import oracle_eda_units, oracle_ov


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


@dataclass
class RunReport:
    """Machine-readable outcome of one command.

    Identical seeds and inputs reproduce every field except wall_time;
    probe_count is present exactly when counting was requested.
    """

    command: str
    params: Dict[str, object]
    verdict: Optional[str] = None
    value: Optional[str] = None
    value_units: Optional[int] = None
    regime: Optional[str] = None
    probe_count: Optional[int] = None
    seed: Optional[int] = None
    rows: Optional[List[dict]] = None
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        out: Dict[str, object] = {"command": self.command,
                                  "params": self.params,
                                  "wall_time": self.wall_time}
        for key in ("verdict", "value", "value_units", "regime",
                    "probe_count", "seed", "rows"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out

    def emit(self, as_json: bool) -> None:
        if as_json:
            print(json.dumps(self.to_dict(), sort_keys=True))
            return
        if self.seed is not None:
            print(f"seed: {self.seed}")
        if self.regime is not None:
            print(f"regime: {self.regime}")
        if self.verdict == "EXCEEDS":
            print(f"EXCEEDS {self.params['k']}")
        elif self.verdict is not None:
            print(f"verdict: {self.verdict}")
        if self.value is not None:
            label = "threshold" if self.command == "gen-gadget" else "value"
            print(f"{label}: {self.value} ({self.value_units} units)")
        if self.rows is not None:
            for row in self.rows:
                print(json.dumps(row, sort_keys=True))
        if self.probe_count is not None:
            print(f"probes: {self.probe_count}")
        print(f"wall_time: {self.wall_time:.6f}s")


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer: {text}")
    return v


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text}")
    return v


def _resolve_seed(given: Optional[int]) -> int:
    if given is not None:
        return given
    return int.from_bytes(os.urandom(4), "big")


def _load_pair(args, counter: Optional[ProbeCounter]):
    texts = []
    for path, inline, name in ((args.x, args.x_str, "x"),
                               (args.y, args.y_str, "y")):
        if (path is None) == (inline is None):
            raise UsageError(
                f"give exactly one of a {name} file or --{name}-str")
        if inline is not None:
            texts.append(ByteText(inline.encode("utf-8"), counter))
        else:
            texts.append(load_text(path, counter))
    return texts[0], texts[1]


def _pair_echo(args) -> Dict[str, object]:
    echo: Dict[str, object] = {}
    for path, inline, name in ((args.x, args.x_str, "x"),
                               (args.y, args.y_str, "y")):
        if inline is not None:
            echo[f"{name}_str"] = inline
        elif path is not None:
            echo[f"{name}_file"] = str(path)
    return echo


def cmd_exact(args) -> int:
    k = parse_threshold(args.k)
    counter = ProbeCounter() if args.count_probes else None
    x, y = _load_pair(args, counter)
    params = _pair_echo(args)
    params.update(a=args.a, k=_frac_str(k), count_probes=args.count_probes)
    t0 = time.perf_counter()
    res = eda_exact(x, y, args.a, k)
    dt = time.perf_counter() - t0
    report = RunReport("exact", params, wall_time=dt,
                       probe_count=counter.count if counter else None)
    if res is EXCEEDS:
        report.verdict = "EXCEEDS"
    else:
        report.value = _frac_str(res.value)
        report.value_units = res.units
    report.emit(args.json)
    return 0


def cmd_approx(args) -> int:
    k = parse_threshold(args.k)
    eps = parse_threshold(args.eps)
    seed = _resolve_seed(args.seed)
    counter = ProbeCounter() if args.count_probes else None
    x, y = _load_pair(args, counter)
    params = _pair_echo(args)
    params.update(a=args.a, k=_frac_str(k), eps=_frac_str(eps),
                  count_probes=args.count_probes)
    t0 = time.perf_counter()
    verdict = approx_eda(x, y, args.a, k, eps, RandomSource(seed))
    dt = time.perf_counter() - t0
    RunReport("approx", params, verdict=verdict.verdict,
              regime=verdict.regime, seed=seed, wall_time=dt,
              probe_count=counter.count if counter else None).emit(args.json)
    return 0


def cmd_bicriteria(args) -> int:
    if args.exact == (args.eps is not None):
        raise UsageError("choose exactly one of --exact or --eps")
    counter = ProbeCounter() if args.count_probes else None
    x, y = _load_pair(args, counter)
    params = _pair_echo(args)
    params.update(ki=args.ki, ks=args.ks, count_probes=args.count_probes)
    if args.exact:
        params["exact"] = True
        t0 = time.perf_counter()
        feasible = bicriteria_exact(x, y, args.ki, args.ks)
        dt = time.perf_counter() - t0
        seed = None
        regime = "EXACT"
    else:
        eps = parse_threshold(args.eps)
        seed = _resolve_seed(args.seed)
        params["eps"] = _frac_str(eps)
        t0 = time.perf_counter()
        feasible = bicriteria_approx(x, y, args.ki, args.ks, eps,
                                     RandomSource(seed))
        dt = time.perf_counter() - t0
        # same routing test the decision procedure applies
        regime = "EXACT" if float(eps) * args.ks / 5 < 2 + args.ki else "CORE"
    RunReport("bicriteria", params, verdict="YES" if feasible else "NO",
              regime=regime, seed=seed, wall_time=dt,
              probe_count=counter.count if counter else None).emit(args.json)
    return 0


def cmd_gen_gadget(args) -> int:
    m = args.m if args.m is not None else 1
    seed = _resolve_seed(args.seed)
    params = {"n": args.n, "d": args.d, "a": args.a, "m": m,
              "out_dir": str(args.out_dir)}
    t0 = time.perf_counter()
    inst = random_ov_instance(args.n, args.d, RandomSource(seed))
    gadget = ov_reduce(inst, args.a, m)
    out = write_bundle(gadget, args.out_dir, seed=seed)
    dt = time.perf_counter() - t0
    params["out_dir"] = str(out)
    RunReport("gen-gadget", params, seed=seed, wall_time=dt,
              value=_frac_str(Fraction(gadget.threshold_units, args.a)),
              value_units=gadget.threshold_units).emit(args.json)
    return 0


def cmd_verify(args) -> int:
    if args.bundle is not None:
        gadget = read_bundle(Path(args.bundle))
        inst = gadget.provenance.get("ov")
        if inst is None:
            raise UsageError("bundle carries no instance to recheck against")
        params: Dict[str, object] = {"bundle": str(args.bundle),
                                     "max_cells": args.max_cells}
        t0 = time.perf_counter()
        units = oracle_eda_units(gadget.x, gadget.y, gadget.weight_a,
                                 max_cells=args.max_cells)
        want_yes = oracle_ov(inst) is not None
        dt = time.perf_counter() - t0
        got_yes = units <= gadget.threshold_units
        ok = got_yes == want_yes
        report = RunReport("verify", params, wall_time=dt,
                           verdict="PASS" if ok else "FAIL",
                           value=_frac_str(Fraction(units, gadget.weight_a)),
                           value_units=units)
    else:
        if args.a is None or args.k is None:
            raise UsageError("claim form needs --a and --k")
        k = parse_threshold(args.k)
        x, y = _load_pair(args, None)
        params = _pair_echo(args)
        params.update(a=args.a, k=_frac_str(k),
                      max_cells=args.max_cells)
        t0 = time.perf_counter()
        units = oracle_eda_units(x, y, args.a, max_cells=args.max_cells)
        dt = time.perf_counter() - t0
        ok = Fraction(units, args.a) <= k
        report = RunReport("verify", params, wall_time=dt,
                           verdict="PASS" if ok else "FAIL",
                           value=_frac_str(Fraction(units, args.a)),
                           value_units=units)
    report.emit(args.json)
    return 0 if report.verdict == "PASS" else 1


def _random_word(n: int, rng: RandomSource, sigma: int = 4) -> bytes:
    return bytes(np.asarray(97 + rng.integers(0, sigma, n), dtype=np.uint8))


def _bench_row(n: int, counter: ProbeCounter, t0: float, **extra) -> dict:
    row = {"n": n, "wall_time": time.perf_counter() - t0,
           "probe_count": counter.count}
    row.update(extra)
    return row


def run_bench(suite: str, sizes: List[int], seed: int,
              knobs: Dict[str, object]) -> List[dict]:
    """One row per size; every row carries wall_time and probe_count."""
    root = RandomSource(seed)
    rows = []
    for n in sizes:
        rng = root.child(n)
        base = _random_word(n, rng.child(0))
        counter = ProbeCounter()
        if suite == "exact":
            a, k = knobs["a"], parse_threshold(knobs["k"])
            edits = max(1, int(k) // 2)
            other = plant_edits(base, edits, edits, rng.child(1))
            x, y = ByteText(base, counter), ByteText(other, counter)
            t0 = time.perf_counter()
            res = eda_exact(x, y, a, k)
            units = "EXCEEDS" if res is EXCEEDS else res.units
            rows.append(_bench_row(n, counter, t0, units=units))
        elif suite == "approx":
            a, k = knobs["a"], parse_threshold(knobs["k"])
            indels = 1 if k >= 1 else 0
            subs = int((k - indels) * a)
            other = plant_edits(base, indels, subs, rng.child(1))
            x, y = ByteText(base, counter), ByteText(other, counter)
            t0 = time.perf_counter()
            v = approx_eda(x, y, a, k, knobs["eps"], rng.child(2))
            rows.append(_bench_row(n, counter, t0, verdict=v.verdict,
                                   regime=v.regime))
        elif suite == "bicriteria":
            ki, ks = knobs["ki"], knobs["ks"]
            other = plant_edits(base, ki // 2, ks // 2, rng.child(1))
            x, y = ByteText(base, counter), ByteText(other, counter)
            t0 = time.perf_counter()
            feasible = bicriteria_approx(x, y, ki, ks, knobs["eps"],
                                         rng.child(2))
            rows.append(_bench_row(n, counter, t0,
                                   verdict="YES" if feasible else "NO"))
        else:
            other = plant_edits(base, 4, 4 * knobs["d"], rng.child(1))
            x, y = ByteText(base, counter), ByteText(other, counter)
            t0 = time.perf_counter()
            idx = build_approx_lce(x, y, knobs["d"], float(knobs["eps"]),
                                   knobs["w"], rng.child(2))
            ell = idx.query(0, 0)
            rows.append(_bench_row(n, counter, t0, lce=ell))
    return rows


_BENCH_DEFAULTS = {
    "exact": {"a": 2, "k": "16"},
    "approx": {"a": 1024, "k": "4", "eps": "0.5"},
    "bicriteria": {"ki": 4, "ks": 64, "eps": "0.5"},
    "lce": {"d": 8, "w": 4, "eps": "0.5"},
}


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    if not sizes or any(s < 1 for s in sizes):
        raise UsageError(f"bad --sizes list: {args.sizes}")
    knobs = dict(_BENCH_DEFAULTS[args.suite])
    for name in knobs:
        given = getattr(args, name, None)
        if given is not None:
            knobs[name] = given
    seed = _resolve_seed(args.seed)
    t0 = time.perf_counter()
    rows = run_bench(args.suite, sizes, seed, knobs)
    dt = time.perf_counter() - t0
    params = {"suite": args.suite, "sizes": sizes}
    params.update(knobs)
    report = RunReport("bench", params, seed=seed, rows=rows, wall_time=dt)
    if args.json_out:
        Path(args.json_out).write_text(
            json.dumps(report.to_dict(), sort_keys=True) + "\n")
    report.emit(args.json)
    return 0


def _add_pair_args(sub) -> None:
    sub.add_argument("x", nargs="?", default=None,
                     help="path to the left byte string")
    sub.add_argument("y", nargs="?", default=None,
                     help="path to the right byte string")
    sub.add_argument("--x-str", help="inline left string instead of a file")
    sub.add_argument("--y-str", help="inline right string instead of a file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wedit",
        description="weighted edit distance toolkit")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("exact", help="bounded distance, exact value")
    _add_pair_args(p)
    p.add_argument("--a", type=_positive_int, required=True,
                   help="substitutions cost 1/a, indels cost 1")
    p.add_argument("--k", required=True,
                   help='threshold, "p/q" or decimal')
    p.add_argument("--count-probes", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_exact)

    p = subs.add_parser("approx", help="gap decision at slack eps")
    _add_pair_args(p)
    p.add_argument("--a", type=_positive_int, required=True)
    p.add_argument("--k", required=True)
    p.add_argument("--eps", required=True, help="slack in (0, 1)")
    p.add_argument("--seed", type=_nonneg_int,
                   help="omit to draw one (it is echoed either way)")
    p.add_argument("--count-probes", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_approx)

    p = subs.add_parser("bicriteria", help="indel/substitution feasibility")
    _add_pair_args(p)
    p.add_argument("--ki", type=_nonneg_int, required=True,
                   help="indel budget")
    p.add_argument("--ks", type=_nonneg_int, required=True,
                   help="substitution budget")
    p.add_argument("--eps", help="slack for the approximate path")
    p.add_argument("--exact", action="store_true",
                   help="force the exact wave path")
    p.add_argument("--seed", type=_nonneg_int)
    p.add_argument("--count-probes", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bicriteria)

    p = subs.add_parser("gen-gadget", help="write a hardness instance bundle")
    p.add_argument("--n", type=_positive_int, required=True,
                   help="vectors per side")
    p.add_argument("--d", type=_positive_int, required=True,
                   help="vector dimension")
    p.add_argument("--a", type=_positive_int, required=True)
    p.add_argument("--m", type=_positive_int,
                   help="cover subsets, 1 <= m <= n (default 1)")
    p.add_argument("--seed", type=_nonneg_int)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gen_gadget)

    p = subs.add_parser("verify", help="recheck with the brute-force referee")
    p.add_argument("bundle", nargs="?", default=None,
                   help="bundle directory from gen-gadget")
    p.add_argument("--x", dest="x", help="claim form: left byte file")
    p.add_argument("--y", dest="y", help="claim form: right byte file")
    p.add_argument("--x-str", help="claim form: inline left string")
    p.add_argument("--y-str", help="claim form: inline right string")
    p.add_argument("--a", type=_positive_int)
    p.add_argument("--k", help="claimed bound to check")
    p.add_argument("--max-cells", type=_positive_int, default=10_000_000,
                   help="referee table size refusal limit")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("bench", help="per-size timings and probe counts")
    p.add_argument("--suite", required=True,
                   choices=("exact", "approx", "bicriteria", "lce"))
    p.add_argument("--sizes", required=True,
                   help="comma-separated input lengths")
    p.add_argument("--seed", type=_nonneg_int)
    p.add_argument("--a", type=_positive_int)
    p.add_argument("--k")
    p.add_argument("--eps")
    p.add_argument("--ki", type=_nonneg_int)
    p.add_argument("--ks", type=_nonneg_int)
    p.add_argument("--d", type=_positive_int)
    p.add_argument("--w", type=_positive_int)
    p.add_argument("--json-out", help="also write the report to this file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
