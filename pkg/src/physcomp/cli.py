"""Command-line entry point: ``physcomp <namespace> <command> [options]``.

Every leaf command accepts ``--seed``, ``--fuel``, ``--trials``, ``--workers``
and ``--format {json,csv}``.  Output echoes all parameters, the seed and the
package version; exact fractions are rendered as ``{"fraction": "n/d",
"decimal": ...}``.  Experiment outcomes such as fuel exhaustion are data and
exit 0; bad usage or unreadable inputs exit non-zero with a message on stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from . import machines as M
from . import omega as O
from . import perturbation as P
from . import quantum as Q
from . import symbolic as S
from .trials import chunk_rng

DEFAULT_SEED = 20240101
DEFAULT_TRIALS = 100_000


# rendering

def _plain(x):
    if isinstance(x, Fraction):
        return {"fraction": f"{x.numerator}/{x.denominator}", "decimal": repr(float(x))}
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if x is M.TooLarge:
        return "TooLarge"
    return x


def _cell(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (list, tuple)):
        return "".join(map(str, x))
    return x


def emit(document: dict, fmt: str = "json") -> str:
    """Render a result document.

    JSON is canonical: sorted keys, one line.  CSV writes the
    document's ``columns``/``rows`` table when it has one, else ``key,value``
    pairs of the top-level fields.
    """
    if fmt == "json":
        return json.dumps(_plain(document), sort_keys=True) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if "columns" in document:
        w.writerow(document["columns"])
        for row in document.get("rows", []):
            w.writerow([_cell(v) for v in row])
    else:
        w.writerow(["key", "value"])
        for k in sorted(document):
            v = document[k]
            w.writerow([k, json.dumps(_plain(v), sort_keys=True) if isinstance(v, (dict, list)) else _cell(v)])
    return buf.getvalue()


def _doc(experiment: str, args, parameters: dict, stochastic: bool = False, **fields) -> dict:
    doc = {"experiment": experiment, "parameters": parameters, "version": __version__}
    if stochastic:
        doc["seed"] = args.seed
    doc.update(fields)
    return doc


def _bits(text: str | None) -> tuple:
    if not text:
        return ()
    if any(ch not in "01" for ch in text):
        raise argparse.ArgumentTypeError(f"not a bit string: {text!r}")
    return tuple(int(ch) for ch in text)


def _fraction(text: str) -> Fraction:
    try:
        return P.parse_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("window must look like -8:8") from exc
    if hi < lo:
        raise argparse.ArgumentTypeError("window end precedes start")
    return lo, hi


def _address(text: str) -> S.Address:
    try:
        return S.Address.from_json(text) if text.lstrip().startswith("{") else S.Address.parse(text)
    except (ValueError, KeyError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _machine(path: str) -> M.TuringMachine:
    return M.TuringMachine.load(Path(path).read_text())


def _config(c: M.TapeConfiguration) -> dict:
    return {"state": c.state, "left": c.left, "right": c.right, "steps": c.steps, "ones": c.ones()}


# tm / cm

def cmd_tm_run(args):
    tm = _machine(args.machine)
    r = M.tm_run(tm, _bits(args.input), args.fuel)
    return _doc("tm.run", args, {"machine": args.machine, "input": args.input or "", "fuel": args.fuel},
                outcome=r.outcome, steps=r.steps, final=_config(r.final))


def cmd_tm_compile(args):
    cm = M.compile_tm_to_cm(_machine(args.machine))
    return _doc("tm.compile", args, {"machine": args.machine},
                instructions=len(cm.program), listing=cm.to_listing())


def cmd_tm_diag(args):
    v = M.hyper_diagonal(args.i, args.budget)
    return _doc("tm.diag", args, {"i": args.i, "digit_budget": args.budget},
                value=str(v) if v is not M.TooLarge else "TooLarge")


def cmd_cm_run(args):
    text = Path(args.program).read_text()
    cm = M.CounterMachine.from_listing(text)
    regs = tuple(int(v) for v in args.registers.split(",")) if args.registers else (0,) * cm.register_count
    r = M.cm_run(cm, M.RegisterState(regs), args.fuel, args.cost_model)
    return _doc("cm.run", args, {"program": args.program, "registers": list(regs), "fuel": args.fuel,
                                 "cost_model": args.cost_model},
                outcome=r.outcome, instructions=r.steps, registers=list(r.final.registers),
                pc=r.final.pc, unit_cost=r.unit_cost, distance_cost=r.distance_cost)


def cmd_cm_slowdown(args):
    tm = _machine(args.machine)
    inputs = [_bits(s) for s in args.inputs.split(",")] if args.inputs else []
    rows = M.slowdown_profile(tm, inputs, args.fuel)
    return _doc("cm.slowdown", args, {"machine": args.machine, "inputs": args.inputs or "",
                                      "fuel": args.fuel},
                columns=["input", "tm_steps", "cm_unit_cost", "cm_distance_cost"],
                rows=[["".join(map(str, r.input)), r.tm_steps, r.cm_unit_cost, r.cm_distance_cost]
                      for r in rows])


# dyn / gshift / ca

def cmd_dyn_ff(args):
    ff = S.fast_forward(args.address, args.t, args.window)
    return _doc("dyn.ff", args, {"address": str(args.address), "t": args.t,
                                 "window": f"{args.window[0]}:{args.window[1]}"},
                bits="".join(map(str, ff.bits)), ops=ff.ops)


def cmd_dyn_shift(args):
    return _doc("dyn.shift", args, {"address": str(args.address), "n": args.n},
                address=str(S.iterate_shift(args.address, args.n)))


def cmd_dyn_embed(args):
    x, y = S.embed(args.address, args.base)
    return _doc("dyn.embed", args, {"address": str(args.address), "base": args.base}, x=x, y=y)


def cmd_dyn_diverge(args):
    ds = S.divergence(args.a, args.b, args.n, args.base)
    return _doc("dyn.diverge", args, {"a": str(args.a), "b": str(args.b), "n": args.n, "base": args.base},
                columns=["step", "numerator", "denominator", "decimal"],
                rows=[[k, d.numerator, d.denominator, repr(float(d))] for k, d in enumerate(ds)])


def cmd_dyn_reach(args):
    hit = S.reaches_region(args.address, _bits(args.pattern), args.offset)
    return _doc("dyn.reach", args, {"address": str(args.address), "pattern": args.pattern,
                                    "offset": args.offset}, reaches=hit)


def cmd_gshift_run(args):
    tm = _machine(args.machine)
    g = S.gshift_from_tm(tm)
    a = S.encode_address(M.initial_config(tm, _bits(args.input)), tm)
    steps = 0
    fixed = False
    while steps < args.fuel:
        if S.at_rest(g, a):
            fixed = True
            break
        a, steps = S.gshift_step(g, a), steps + 1
    final = S.decode_address(a, tm, steps)
    return _doc("gshift.run", args, {"machine": args.machine, "input": args.input or "", "fuel": args.fuel},
                fixed_point=fixed, steps=steps, address=str(a), final=_config(final))


def cmd_ca_run(args):
    row = S.CaRow(_bits(args.row), args.offset)
    out = S.ca_fast_forward(row, args.t, with_ops=True)
    return _doc("ca.run", args, {"row": args.row, "offset": args.offset, "t": args.t},
                row=str(out.row), offset=out.row.offset, ones=out.row.ones(), ops=out.ops)


# q

def _empirical(count: int, trials: int) -> dict:
    return {"count": count, "rate": Fraction(count, trials) if trials else None}


def cmd_q_xor2(args):
    f = Q.BooleanOracle(_bits(args.f))
    counts = Q.deutsch_xor2_counts(f, args.trials, args.seed, args.workers)
    return _doc("q.xor2", args, {"f": args.f}, stochastic=True, trials=args.trials,
                analytic={"fail": Fraction(1, 2), "answer": Fraction(1, 2), "wrong_answer": Fraction(0)},
                empirical={"fail": _empirical(counts["trials"] - counts["answers"], counts["trials"]),
                           "answer": _empirical(counts["answers"], counts["trials"]),
                           "correct": counts["correct"]})


def cmd_q_xor4(args):
    f = Q.BooleanOracle(_bits(args.f))
    counts = Q.xor4_counts(f, args.trials, args.seed, args.workers)
    return _doc("q.xor4", args, {"f": args.f}, stochastic=True, trials=args.trials,
                analytic={"answer": Fraction(1, 8), "deutsch_bound": Q.parallel_success_probability(4)},
                empirical={"answer": _empirical(counts["answers"], counts["trials"]),
                           "correct": counts["correct"]})


def cmd_q_parallel(args):
    values = list(_bits(args.values)) if args.values else [0] * args.N
    counts = Q.semantic_counts(args.N, values, None, args.trials, args.seed, args.workers)
    return _doc("q.parallel", args, {"N": args.N, "values": "".join(map(str, values))}, stochastic=True,
                trials=args.trials,
                analytic={"success": Q.parallel_success_probability(args.N),
                          "expected_time_ratio": Q.expected_time_ratio(args.N)},
                empirical={"answer": _empirical(counts["answers"], counts["trials"]),
                           "retries": Q.retry_estimate(counts) if counts["answers"] else None, "value": counts["value"]})


def cmd_q_conp(args):
    table = _bits(args.table)
    n = (len(table) - 1).bit_length()
    if len(table) != 2 ** n:
        raise ValueError("truth table length must be a power of two")
    counts = Q.conp_counts(table, n, args.trials, args.seed, args.workers)
    big_n = 2 ** n
    return _doc("q.conp", args, {"table": args.table, "n": n}, stochastic=True, trials=args.trials,
                analytic={"success": Q.parallel_success_probability(big_n),
                          "expected_time_ratio": Q.expected_time_ratio(big_n)},
                empirical={"answer": _empirical(counts["answers"], counts["trials"]),
                           "tautology": bool(counts["value"])})


def cmd_q_fault(args):
    classical, quantum = Q.fault_tolerance(args.N, args.R, args.p)
    doc = _doc("q.fault", args, {"N": args.N, "R": args.R, "p": args.p},
               analytic={"classical": classical, "quantum": quantum, "improvement": quantum - classical})
    if args.explicit_trials and args.N == 2:
        counts = Q.fault_tolerance_monte_carlo(args.R, args.p, args.trials, args.seed, 2, args.workers)
        doc.update(seed=args.seed, trials=args.trials,
                   empirical={"classical": _empirical(counts["classical"], counts["trials"]),
                              "quantum": _empirical(counts["quantum"], counts["trials"])})
    return doc


# omega / series

def cmd_omega_bound(args):
    b = O.omega_lower_bound(args.fuel, args.max_len, args.workers)
    return _doc("omega.bound", args, {"fuel": args.fuel, "max_len": args.max_len},
                value=b.value, contributors=b.contributors, fuel=b.fuel, max_len=b.max_len)


def cmd_omega_bitest(args):
    source = O.bernoulli_source(args.p)
    rows = []
    for n in range(1, args.bits + 1):
        est = O.estimate_probability_bit(source, n, chunk_rng(args.seed, n), args.c1, args.c2, args.cap)
        rows.append([n, est.bit, est.trials, est.successes, args.seed,
                     O.bit_error_probability(args.p, n, args.c1, args.c2)])
    return _doc("omega.bitest", args, {"p": args.p, "bits": args.bits, "c1": args.c1, "c2": args.c2},
                stochastic=True,
                columns=["n", "bit", "trials", "successes", "seed", "error_probability"], rows=rows)


_RULES = {"factorial": lambda a, k: P.factorial_rule(a, k), "unit": lambda a, k: P.geometric_rule(a)}


def cmd_series_truncate(args):
    series = _RULES[args.rule](args.alpha, args.k)
    res = P.minimal_term_index(series, args.nmax)
    summary = ({"minimal_index": res.index, "minimal_term": res.term}
               if isinstance(res, P.MinimalTerm) else {"minimal_index": None, "outcome": "NotYetDivergent"})
    rows = []
    prev = None
    for n in range(args.nmax + 1):
        t = P.term(series, n)
        rows.append([n, t.numerator, t.denominator, repr(float(t)),
                     "" if prev in (None, 0) else repr(float(t / prev))])
        prev = t
    return _doc("series.truncate", args, {"rule": args.rule, "alpha": args.alpha, "k": args.k,
                                          "nmax": args.nmax},
                summary=summary, columns=["n", "numerator", "denominator", "decimal", "ratio"], rows=rows)


# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="64-bit seed for stochastic runs")
    common.add_argument("--fuel", type=int, default=10_000, help="step/instruction budget")
    common.add_argument("--trials", type=int, default=None,
                        help=f"Monte-Carlo trial count (default {DEFAULT_TRIALS})")
    common.add_argument("--workers", type=int, default=1, help="parallel workers (output is unaffected)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = argparse.ArgumentParser(prog="physcomp", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    spaces = parser.add_subparsers(dest="namespace", required=True)

    def leaf(space, name, fn, example):
        p = space.add_parser(name, parents=[common], help=f"e.g. {example}",
                             description=f"example: physcomp {example}")
        p.set_defaults(fn=fn)
        return p

    tm = spaces.add_parser("tm", help="Turing machines").add_subparsers(dest="command", required=True)
    p = leaf(tm, "run", cmd_tm_run, "tm run --machine bb2.json --fuel 100")
    p.add_argument("--machine", required=True)
    p.add_argument("--input", default="")
    p = leaf(tm, "compile", cmd_tm_compile, "tm compile --machine bb2.json")
    p.add_argument("--machine", required=True)
    p = leaf(tm, "diag", cmd_tm_diag, "tm diag --i 3 --budget 100")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--budget", type=int, default=10**6)

    cm = spaces.add_parser("cm", help="counter machines").add_subparsers(dest="command", required=True)
    p = leaf(cm, "run", cmd_cm_run, "cm run --program prog.cm --registers 8,0,0")
    p.add_argument("--program", required=True)
    p.add_argument("--registers", default="")
    p.add_argument("--cost-model", choices=(M.UNIT, M.DISTANCE), default=M.UNIT)
    p = leaf(cm, "slowdown", cmd_cm_slowdown, "cm slowdown --machine shuttle.txt --inputs 1,11,111")
    p.add_argument("--machine", required=True)
    p.add_argument("--inputs", default="")

    dyn = spaces.add_parser("dyn", help="shift-map dynamics").add_subparsers(dest="command", required=True)
    p = leaf(dyn, "ff", cmd_dyn_ff, "dyn ff --address zeros --t 1000000000000")
    p.add_argument("--address", type=_address, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--window", type=_window, default=(-8, 8))
    p = leaf(dyn, "shift", cmd_dyn_shift, "dyn shift --address 'left: pre=; per=0 | right: pre=101; per=0' --n 2")
    p.add_argument("--address", type=_address, required=True)
    p.add_argument("--n", type=int, default=1)
    p = leaf(dyn, "embed", cmd_dyn_embed, "dyn embed --address zeros --base ternary")
    p.add_argument("--address", type=_address, required=True)
    p.add_argument("--base", choices=("ternary", "dyadic"), default="ternary")
    p = leaf(dyn, "diverge", cmd_dyn_diverge, "dyn diverge --a zeros --b '...' --n 3 --format csv")
    p.add_argument("--a", type=_address, required=True)
    p.add_argument("--b", type=_address, required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--base", choices=("ternary", "dyadic"), default="ternary")
    p = leaf(dyn, "reach", cmd_dyn_reach, "dyn reach --address zeros --pattern 1")
    p.add_argument("--address", type=_address, required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--offset", type=int, default=0)

    gs = spaces.add_parser("gshift", help="generalized shifts").add_subparsers(dest="command", required=True)
    p = leaf(gs, "run", cmd_gshift_run, "gshift run --machine bb2.json --fuel 100")
    p.add_argument("--machine", required=True)
    p.add_argument("--input", default="")

    ca = spaces.add_parser("ca", help="mod-2 cellular automaton").add_subparsers(dest="command", required=True)
    p = leaf(ca, "run", cmd_ca_run, "ca run --row 1 --t 1024")
    p.add_argument("--row", required=True)
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--t", type=int, required=True)

    q = spaces.add_parser("q", help="quantum parallelism").add_subparsers(dest="command", required=True)
    p = leaf(q, "xor2", cmd_q_xor2, "q xor2 --f 01 --trials 100000")
    p.add_argument("--f", default="01")
    p = leaf(q, "xor4", cmd_q_xor4, "q xor4 --f 0110")
    p.add_argument("--f", default="0110")
    p = leaf(q, "parallel", cmd_q_parallel, "q parallel --N 3")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--values", default="")
    p = leaf(q, "conp", cmd_q_conp, "q conp --table 1111")
    p.add_argument("--table", required=True)
    p = leaf(q, "fault", cmd_q_fault, "q fault --N 2 --R 2 --p 1/2")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--p", type=_fraction, required=True)

    om = spaces.add_parser("omega", help="halting probability").add_subparsers(dest="command", required=True)
    p = leaf(om, "bound", cmd_omega_bound, "omega bound --fuel 1000 --max-len 16")
    p.add_argument("--max-len", type=int, required=True)
    p = leaf(om, "bitest", cmd_omega_bitest, "omega bitest --p 1/3 --bits 4 --c2 6")
    p.add_argument("--p", type=_fraction, required=True)
    p.add_argument("--bits", type=int, default=4)
    p.add_argument("--c1", type=float, default=2.1)
    p.add_argument("--c2", type=float, default=10.0)
    p.add_argument("--cap", type=int, default=2**40)

    se = spaces.add_parser("series", help="divergent series").add_subparsers(dest="command", required=True)
    p = leaf(se, "truncate", cmd_series_truncate, "series truncate --rule factorial --alpha 1/137.03597 --nmax 300")
    p.add_argument("--rule", choices=sorted(_RULES), default="factorial")
    p.add_argument("--alpha", type=_fraction, required=True)
    p.add_argument("--k", type=_fraction, default=Fraction(1))
    p.add_argument("--nmax", type=int, default=300)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # q fault runs its Monte-Carlo check only when --trials is given
    args.explicit_trials = args.trials is not None
    if args.trials is None:
        args.trials = DEFAULT_TRIALS
    if args.fuel < 1 or args.trials < 0 or args.workers < 1:
        parser.error("--fuel and --workers must be positive, --trials non-negative")
    try:
        doc = args.fn(args)
    except (OSError, ValueError, KeyError, argparse.ArgumentTypeError, M.InvalidProgram, S.NotComparable,
            O.TrialBudgetOverflow, Q.UnsupportedCircuit) as exc:
        print(f"physcomp: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(emit(doc, args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
