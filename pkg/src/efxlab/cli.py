"""``efxlab`` command-line front end.

Exit codes: 0 success, 2 verification failure, 3 limit exceeded, 4 parse error.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import sys
import time
from pathlib import Path

from . import generators, limits
from .allocation import (
    Allocation,
    Instance,
    brute_force_efx,
    brute_force_leximinpp_max,
    is_efx,
    leximinpp_local_search,
)
from .bundles import parse_value
from .circuits import evaluate
from .errors import LimitExceededError, ParseError, ReductionError, VerificationError
from .greedy import cut_and_choose, greedy_efx
from .io import digest, dumps, load_circuit, load_instance, load_valuation, read_json
from .pls_lab import (
    MAXIMIZE,
    MINIMIZE,
    FlipInstance,
    KneserInstance,
    end_to_end,
    flip_to_kneser,
    kneser_to_efx,
    local_search,
    problem_from_json,
)
from .rng import SplitMix64
from .valuations import CHECKS, check_well_layered_at_price

EXIT_OK, EXIT_VERIFY, EXIT_LIMIT, EXIT_PARSE = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _emit(args, report: dict) -> None:
    text = dumps(report)
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _report(args, command: str, source, result, **extra) -> dict:
    report = {"command": command, "digest": digest(source), "result": result}
    if getattr(args, "seed", None) is not None:
        report["seed"] = args.seed
    report.update(extra)
    return report


def _common(inst: Instance):
    v = inst.valuations[0]
    if not inst.identical and any(w != v for w in inst.valuations[1:]):
        raise ParseError("this algorithm needs identical agents")
    return v


def solve_instance(inst: Instance, algo: str, cutter: int = 0, rng: SplitMix64 | None = None):
    """Run ``algo``; returns ``(allocation or None, extras dict)``."""
    if algo == "greedy":
        X, trace = greedy_efx(_common(inst), inst.n, rng)
        return X, {"steps": len(trace.steps), "trace": trace.log_lines()}
    if algo == "cut-and-choose":
        if inst.n != 2 or cutter not in (0, 1):
            raise ParseError("cut-and-choose needs two agents and --cutter 0 or 1")
        v1, v2 = inst.valuations[cutter], inst.valuations[1 - cutter]
        X = cut_and_choose(v1, v2)
        if cutter == 1:
            X = Allocation(X.bundles[::-1], X.m)
        return X, {"steps": 1}
    if algo == "leximin-local":
        sol = leximinpp_local_search(_common(inst), inst.n)
        extra = {"steps": sol.steps}
        if not sol.is_efx:
            extra["monotonicity_violation"] = sol.violation.to_json()
        return sol.allocation, extra
    if algo == "brute":
        if inst.identical:
            return brute_force_leximinpp_max(inst.common, inst.n), {"steps": 0}
        found = brute_force_efx(inst.valuations, inst.n)
        return (found[0] if found else None), {"steps": 0, "efx_count": len(found)}
    raise ParseError(f"unknown algorithm {algo!r}")


def cmd_solve(args) -> int:
    obj = read_json(args.instance)
    inst = load_instance(obj)
    rng = SplitMix64(args.seed) if args.random_ties else None
    start = time.perf_counter()
    X, extra = solve_instance(inst, args.algo, args.cutter, rng)
    elapsed = time.perf_counter() - start
    trace = extra.pop("trace", None)
    if trace is not None and args.trace:
        Path(args.trace).write_text("".join(line + "\n" for line in trace))
    result = {"allocation": X.to_json() if X is not None else None}
    code = EXIT_OK
    if args.verify:
        verdict = is_efx(inst.valuations, X) if X is not None else None
        result["verify"] = verdict.to_json() if verdict is not None else {"verdict": "no allocation"}
        if not verdict:
            code = EXIT_VERIFY
    if args.timing:
        extra["wall_time_s"] = round(elapsed, 6)
    _emit(args, _report(args, f"solve --algo {args.algo}", obj, result, **extra))
    return code


def _parse_prices(text: str):
    return tuple(parse_value(t) for t in text.split(","))


def cmd_check_class(args) -> int:
    obj = read_json(args.valuation)
    v = load_valuation(obj, args.agent)
    if args.property == "well-layered-at-price":
        if not args.prices:
            raise ParseError("--prices is required for well-layered-at-price")
        res = check_well_layered_at_price(v, _parse_prices(args.prices))
    else:
        res = CHECKS[args.property](v)
    _emit(args, _report(args, f"check-class {args.property}", obj, res.to_json()))
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == "flip-circuit":
        c = generators.flip_circuit(SplitMix64(args.seed), args.m, args.gates)
        out = FlipInstance(c).to_json()
    else:
        v = generators.generate(args.kind, args.m, args.seed)
        out = v.to_json()
        if args.agents:
            out = Instance.identical_agents(v, args.agents).to_json()
    _emit(args, out)
    return EXIT_OK


def _load_problem(path):
    """A Flip/Kneser problem JSON, or a bare circuit."""
    text = Path(path).read_text().lstrip()
    if text.startswith("{"):
        obj = read_json(path)
        if isinstance(obj, dict) and "target" in obj:
            obj = obj["target"]
        if isinstance(obj, dict) and obj.get("kind") in ("flip", "kneser"):
            try:
                return problem_from_json(obj)
            except (KeyError, ValueError) as exc:
                raise ParseError(str(exc)) from exc
    return load_circuit(path)


def cmd_reduce(args) -> int:
    src = _load_problem(args.circuit)
    if args.which == "flip-to-kneser":
        flip = src if isinstance(src, FlipInstance) else FlipInstance(getattr(src, "circuit", src))
        art = flip_to_kneser(flip)
    else:
        if isinstance(src, KneserInstance):
            kneser = src
        else:
            if args.k is None:
                raise ParseError("--k is required for a bare circuit")
            kneser = KneserInstance(getattr(src, "circuit", src), args.k, args.direction)
        if kneser.direction == MINIMIZE:
            kneser = kneser.negated()
        art = kneser_to_efx(kneser)
    _emit(args, art.to_json())
    return EXIT_OK


def cmd_pipeline(args) -> int:
    src = _load_problem(args.circuit)
    flip = src if isinstance(src, FlipInstance) else FlipInstance(getattr(src, "circuit", src))
    res = end_to_end(flip, args.solver)
    _emit(args, _report(args, "pipeline", flip.to_json(), res.to_json(), steps=res.solver_steps))
    return EXIT_OK if res.verified else EXIT_VERIFY


def _bits(x: int, width: int) -> str:
    return "".join(str(x >> i & 1) for i in range(width))


def cmd_search(args) -> int:
    src = _load_problem(args.circuit)
    if isinstance(src, (FlipInstance, KneserInstance)):
        prob = src
    elif args.k is not None:
        prob = KneserInstance(src, args.k, args.direction or MAXIMIZE)
    else:
        prob = FlipInstance(src, args.direction or MINIMIZE)
    start = _parse_bits(args.start, prob.n) if args.start else next(prob.points())
    if not prob.feasible(start):
        raise ParseError("--start is not a feasible point")
    res = local_search(prob, start, args.pivot)
    result = {
        "point": _bits(res.point, prob.n),
        "cost": prob.cost(res.point),
        "trajectory": [_bits(x, prob.n) for x in res.trajectory],
        "local_optimum": prob.is_local_optimum(res.point),
    }
    _emit(args, _report(args, f"search --pivot {args.pivot}", prob.to_json(), result, steps=res.steps))
    return EXIT_OK


def _parse_bits(text: str, width: int) -> int:
    text = text.strip()
    if len(text) != width or set(text) - {"0", "1"}:
        raise ParseError(f"--x must be {width} characters of 0/1 (input 0 first)")
    return sum(int(ch) << i for i, ch in enumerate(text))


def cmd_eval(args) -> int:
    src = _load_problem(args.circuit)
    c = getattr(src, "circuit", src)
    x = _parse_bits(args.x, c.n_inputs)
    _emit(args, {"x": args.x, "value": evaluate(c, x)})
    return EXIT_OK


BENCH_FIELDS = ["file", "algo", "m", "n", "steps", "time_s", "efx_verified"]


def bench_rows(corpus: Path, algos: list[str]) -> list[dict]:
    rows = []
    for path in sorted(corpus.glob("*.json")):
        inst = load_instance(read_json(path))
        for algo in algos:
            start = time.perf_counter()
            X, extra = solve_instance(inst, algo)
            elapsed = time.perf_counter() - start
            ok = X is not None and bool(is_efx(inst.valuations, X))
            rows.append({
                "file": path.name, "algo": algo, "m": inst.m, "n": inst.n,
                "steps": extra.get("steps", 0), "time_s": f"{elapsed:.6f}",
                "efx_verified": str(ok).lower(),
            })
    return rows


def cmd_bench(args) -> int:
    rows = bench_rows(Path(args.corpus), args.algo.split(","))
    buf = _io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if args.out:
        Path(args.out).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--limit", default=argparse.SUPPRESS,
                        help="override enumeration caps (integer or field=value,...)")
    p = _Parser(prog="efxlab", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    s = sub.add_parser("solve", help="compute an allocation")
    s.add_argument("instance")
    s.add_argument("--algo", choices=["greedy", "cut-and-choose", "leximin-local", "brute"], default="greedy")
    s.add_argument("--cutter", type=int, default=0)
    s.add_argument("--verify", action="store_true")
    s.add_argument("--seed", type=int)
    s.add_argument("--random-ties", action="store_true", help="break greedy ties with the seeded PRNG")
    s.add_argument("--trace", help="write the greedy trace ('round agent good value' lines)")
    s.add_argument("--timing", action="store_true", help="include wall time in the report")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("check-class", help="brute-force valuation class check")
    s.add_argument("valuation")
    s.add_argument("--property", required=True,
                   choices=["monotone", "submodular", "cancelable", "wwl", "well-layered-at-price"])
    s.add_argument("--prices", help="comma-separated prices, e.g. 1,1,2 or 1/2,0,3")
    s.add_argument("--agent", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_check_class)

    s = sub.add_parser("gen", help="generate a seeded valuation, instance or Flip circuit")
    s.add_argument("kind", choices=sorted(generators.KINDS) + ["flip-circuit"])
    s.add_argument("m", type=int, help="number of goods (Flip inputs for flip-circuit)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--agents", type=int, help="wrap in an identical-agents instance")
    s.add_argument("--gates", type=int, default=40, help="gate cap for flip-circuit")
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("reduce", help="apply one reduction")
    s.add_argument("which", choices=["flip-to-kneser", "kneser-to-efx"])
    s.add_argument("circuit")
    s.add_argument("--k", type=int)
    s.add_argument("--direction", choices=[MAXIMIZE, MINIMIZE], default=MAXIMIZE)
    s.add_argument("--out")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("pipeline", help="solve Flip through the EFX reduction chain")
    s.add_argument("circuit")
    s.add_argument("--solver", choices=["local", "brute"], default="local")
    s.add_argument("--out")
    s.set_defaults(func=cmd_pipeline)

    s = sub.add_parser("search", help="local search on a Flip or Kneser instance")
    s.add_argument("circuit")
    s.add_argument("--pivot", choices=["best", "first"], default="best")
    s.add_argument("--start", help="start point bits, input 0 first (default: first feasible point)")
    s.add_argument("--k", type=int, help="treat a bare circuit as a Kneser instance")
    s.add_argument("--direction", choices=[MAXIMIZE, MINIMIZE])
    s.add_argument("--out")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("eval", help="evaluate a circuit on one input")
    s.add_argument("circuit")
    s.add_argument("--x", required=True, help="input bits, input 0 first")
    s.add_argument("--out")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("bench", help="run solvers over a directory of instances, CSV out")
    s.add_argument("corpus")
    s.add_argument("--algo", default="greedy", help="comma-separated algorithms")
    s.add_argument("--out")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help (0) or a usage error (4)
        return exc.code
    saved = limits.get_limits()
    try:
        if getattr(args, "limit", None):
            limits.set_limits(limits.parse_limit_spec(args.limit, saved))
        return args.func(args)
    except (VerificationError, ReductionError) as exc:
        print(f"efxlab: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except LimitExceededError as exc:
        print(f"efxlab: limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ParseError, FileNotFoundError, ValueError) as exc:
        # ParseError is a ValueError; bad shapes (k vs. input width, m mismatch) land here too
        print(f"efxlab: {exc}", file=sys.stderr)
        return EXIT_PARSE
    finally:
        limits.set_limits(saved)


if __name__ == "__main__":
    sys.exit(main())
