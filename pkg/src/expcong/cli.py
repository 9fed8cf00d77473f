"""Command-line harness: ``expcong {solve,census,count,weil,grover,costs,scan}``.

Exit codes: solve returns 0 (found), 1 (no solution) or 2 (inconclusive);
census and weil return 0 when every bound holds and 1 otherwise. Malformed
input exits 64, capacity overruns exit 65.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path

import numpy as np

from . import census as cen
from . import qmodel
from .errors import CapacityError, DomainError, ParameterError
from .ff import field_from_spec
from .solver import Status, solve_classical

EXIT_USAGE = 64
EXIT_CAPACITY = 65


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return f"{x:.12g}"


def _jsonable(x):
    if isinstance(x, float):
        return float(fmt(x)) if math.isfinite(x) else str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return _jsonable(float(x))
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):
        return x.value
    return x


# -- configuration -------------------------------------------------------------------------


@dataclass
class RunConfig:
    field: str = "7"
    terms: list[tuple[int, int]] = dc_field(default_factory=lambda: [(1, 3), (1, 3), (1, 3)])
    b: int = 0
    delta: str = "sqrt-log"
    seed: int = 0
    out: str | None = None
    count_limit: int = cen.COUNT_LIMIT
    scan_limit: int = cen.BRUTE_LIMIT

    def to_json(self) -> str:
        d = asdict(self)
        d["terms"] = format_terms(self.terms)
        return json.dumps(d, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        d = dict(d)
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        if isinstance(d.get("terms"), str):
            d["terms"] = parse_terms(d["terms"])
        elif "terms" in d:
            d["terms"] = [tuple(t) for t in d["terms"]]
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> RunConfig:
        return cls.from_dict(json.loads(text))

    def delta_value(self, q: int) -> float:
        if self.delta == "sqrt-log":
            return cen.sqrt_log_delta(q)
        try:
            val = float(self.delta)
        except ValueError:
            raise UsageError(f"bad delta token {self.delta!r}") from None
        if not val > 0:
            raise UsageError(f"delta must be positive, got {self.delta!r}")
        return val

    def instance(self) -> cen.EquationInstance:
        F = field_from_spec(self.field)
        for a, g in self.terms:
            for tok in (a, g):
                if not 0 <= tok < F.q:
                    raise UsageError(f"bad element token {tok!r}: not an encoding in [0, {F.q})")
        if not 0 <= self.b < F.q:
            raise UsageError(f"bad element token {self.b!r}: not an encoding in [0, {F.q})")
        return cen.EquationInstance.build(F, self.terms, self.b)


def parse_terms(text: str) -> list[tuple[int, int]]:
    out = []
    for tok in text.split(","):
        a, sep, g = tok.partition(":")
        try:
            if not sep:
                raise ValueError
            out.append((int(a), int(g)))
        except ValueError:
            raise UsageError(f"bad term token {tok!r}, expected a:g") from None
    return out


def format_terms(terms) -> str:
    return ",".join(f"{a}:{g}" for a, g in terms)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer token {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON RunConfig; command-line flags override it")
    common.add_argument("--field", help='field spec, e.g. "7" or "3^2/1,0,1"')
    common.add_argument("--terms", help="comma-separated a:g encodings")
    common.add_argument("--b", type=_int, help="target encoding")
    common.add_argument("--delta", help='"sqrt-log" (default) or a positive real')
    common.add_argument("--r", type=_int, help="override the truncation r")
    common.add_argument("--seed", type=_int)
    common.add_argument("--out", help="write CSV (or JSON with --json) here")
    common.add_argument("--json", action="store_true", help="emit one JSON document")
    common.add_argument("--count-limit", type=_int)

    p = _Parser(prog="expcong", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", parents=[common], help="find a solution")
    s.add_argument("--full-scan", action="store_true", help="scan all of X_3 instead of X_3(r)")
    s.add_argument("--quantum", action="store_true", help="simulated Grover/BBHT search")
    s.add_argument("--known-m", action="store_true", help="Grover with the exact marked count")

    sub.add_parser("census", parents=[common], help="deviation census over all b")

    c = sub.add_parser("count", parents=[common], help="solution counts N_b(r)")
    c.add_argument("--method", choices=["convolution", "brute", "charsum"], default="convolution")
    c.add_argument("--all-b", action="store_true", help="every b instead of --b only")

    w = sub.add_parser("weil", parents=[common], help="character-sum magnitudes vs sqrt(q)")
    w.add_argument("--term", type=_int, default=0, help="which term's (a, g) to use")

    g = sub.add_parser("grover", parents=[common], help="Monte-Carlo Grover/BBHT statistics")
    g.add_argument("--t", type=_int, required=True)
    g.add_argument("--m", type=_int, required=True)
    g.add_argument("--mode", choices=["known", "bbht"], default="bbht")
    g.add_argument("--trials", type=_int, default=1000)

    sub.add_parser("costs", parents=[common], help="classical and quantum cost report")

    sc = sub.add_parser("scan", parents=[common], help="fit cost exponents over primes")
    sc.add_argument("--primes", help="comma-separated primes")
    sc.add_argument("--range", dest="prange", help="lo:hi for log-spaced primes")
    sc.add_argument("--count", type=_int, default=9, help="number of primes with --range")
    sc.add_argument("--policy", choices=["max-order", "worst-case"], default="max-order")
    sc.add_argument("--m", type=_int, choices=[2, 3], default=3)
    return p


def _config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            cfg = RunConfig.from_json(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError, TypeError) as e:
            raise UsageError(f"bad config {args.config!r}: {e}") from None
    if args.field is not None:
        cfg.field = args.field
    if args.terms is not None:
        cfg.terms = parse_terms(args.terms)
    if args.b is not None:
        cfg.b = args.b
    if args.delta is not None:
        cfg.delta = args.delta
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out is not None:
        cfg.out = args.out
    if args.count_limit is not None:
        cfg.count_limit = args.count_limit
    return cfg


class _Emitter:
    def __init__(self, cfg: RunConfig, as_json: bool):
        self.cfg = cfg
        self.as_json = as_json

    def emit(self, doc: dict, csv: str | None, text: list[str]) -> None:
        if self.as_json:
            payload = json.dumps(_jsonable(doc), sort_keys=True, indent=1) + "\n"
            if self.cfg.out:
                Path(self.cfg.out).write_text(payload)
            else:
                sys.stdout.write(payload)
            return
        if csv is not None and self.cfg.out:
            Path(self.cfg.out).write_text(csv)
            for line in text:
                print(line)
        elif csv is not None:
            sys.stdout.write(csv)
            for line in text:
                print(line, file=sys.stderr)
        else:
            for line in text:
                print(line)


# -- subcommands -------------------------------------------------------------------------------


def cmd_solve(args, cfg: RunConfig, em: _Emitter) -> int:
    inst = cfg.instance()
    delta = cfg.delta_value(inst.field.q)
    if args.quantum:
        mode = qmodel.KnownM(0) if args.known_m else qmodel.BBHT
        qo = qmodel.quantum_solve_simulated(inst, delta, mode, cfg.seed, args.full_scan, args.r)
        out = qo.outcome
        extra = {
            "oracle_queries": qo.oracle_queries,
            "marked": qo.marked,
            "grid_size": qo.run.t,
            "bbht_timeout": min(math.ceil(4.5 * math.sqrt(qo.run.t)), qo.run.t),
            "fallback_used": qo.run.fallback_used,
            "t2_bound": inst.field.q ** 0.6,
        }
    else:
        out = solve_classical(inst, delta, args.full_scan, args.r)
        extra = {
            "dlog_queries": out.dlog_queries,
            "giant_steps": out.giant_steps,
            "max_giant_steps": out.max_giant_steps,
            "giant_bound": out.plan.giant_bound,
            "work_bound": out.scanned_size * out.plan.giant_bound,
            "classical_bound": inst.field.q ** 1.5,
        }
    pl = out.plan
    doc = {
        "status": out.status.value,
        "solution": list(out.solution) if out.solution else None,
        "orders": list(inst.orders),
        "r": pl.r,
        "case": pl.case.value,
        "pairs_scanned": out.pairs_scanned,
        "scanned_r": out.scanned_r,
        **extra,
    }
    lines = [f"status: {out.status.value}"]
    if out.solution:
        lines.append("solution: (" + ",".join(map(str, out.solution)) + ")")
    lines.append(f"orders: {inst.orders}  r={pl.r}  case={pl.case.value}  scanned_r={out.scanned_r}")
    for k, v in extra.items():
        lines.append(f"{k}: {fmt(v) if isinstance(v, float) else v}")
    em.emit(doc, None, lines)
    return {Status.FOUND: 0, Status.NO_SOLUTION: 1, Status.INCONCLUSIVE: 2}[out.status]


def _region(inst, args, delta):
    if args.r is not None:
        return cen.region_with_r(inst, args.r)
    return cen.min_r(inst, delta)


def cmd_census(args, cfg: RunConfig, em: _Emitter) -> int:
    inst = cfg.instance()
    delta = cfg.delta_value(inst.field.q)
    region = _region(inst, args, delta)
    rep = cen.census(inst, delta, region, cfg.count_limit)
    remark = cen.necessary_condition(inst)
    doc = {
        "r": rep.r,
        "E_r": str(rep.E_r),
        "E_bound": rep.E_bound,
        "exceptional_count": rep.exceptional_count,
        "exceptional_bound": rep.exceptional_bound,
        "delta": rep.delta_param,
        "guarantee_applicable": region.guarantee_applicable,
        "necessary_with_s3": remark["with_s3"],
        "necessary_with_s3_minus_2": remark["with_s3_minus_2"],
        "rows": [
            {
                "b": d.b,
                "N": d.N,
                "main": str(d.main_term),
                "delta": str(d.delta),
                "threshold": d.threshold,
                "exceptional": d.exceptional,
            }
            for d in (rep.per_b[b] for b in sorted(rep.per_b))
        ],
    }
    em.emit(doc, cen.census_csv(rep), [rep.summary()])
    return 0 if rep.ok else 1


def cmd_count(args, cfg: RunConfig, em: _Emitter) -> int:
    inst = cfg.instance()
    delta = cfg.delta_value(inst.field.q)
    region = cen.region_with_r(inst, args.r) if args.r is not None else cen.full_region(inst)
    if args.method == "brute":
        counts = [int(x) for x in cen.count_brute(inst, region, cfg.scan_limit)]
    elif args.method == "charsum":
        counts = [float(x) for x in cen.count_all_via_charsum(inst, region)]
    else:
        counts = [int(x) for x in cen.count_all_b(inst, region, cfg.count_limit)]
    bs = range(inst.field.q) if args.all_b else [inst.b.enc]
    rows = [(b, counts[b]) for b in bs]
    show = lambda v: fmt(v) if isinstance(v, float) else str(v)  # noqa: E731
    csv = "b,N\n" + "".join(f"{b},{show(n)}\n" for b, n in rows)
    doc = {"r": region.r, "method": args.method, "counts": {b: n for b, n in rows}}
    em.emit(doc, csv, [f"r={region.r} total={show(sum(counts))} delta={fmt(delta)}"])
    return 0


def cmd_weil(args, cfg: RunConfig, em: _Emitter) -> int:
    inst = cfg.instance()
    if not 0 <= args.term < inst.m:
        raise UsageError(f"bad term index {args.term}")
    t = inst.terms[args.term]
    mags = cen.weil_scan(t.a, t.g, t.s)
    bound = math.sqrt(inst.field.q)
    violations = int(np.sum(mags[1:] > bound + 1e-9))
    csv = "mu,magnitude,bound\n" + "".join(f"{mu},{fmt(mags[mu])},{fmt(bound)}\n" for mu in range(1, inst.field.q))
    worst = float(mags[1:].max()) if inst.field.q > 1 else 0.0
    doc = {"s": t.s, "max_magnitude": worst, "bound": bound, "violations": violations}
    em.emit(doc, csv, [f"max={fmt(worst)} bound={fmt(bound)} violations={violations}"])
    return 0 if violations == 0 else 1


def cmd_grover(args, cfg: RunConfig, em: _Emitter) -> int:
    t, m = args.t, args.m
    if t < 1 or not 0 <= m <= t:
        raise UsageError(f"need t >= 1 and 0 <= m <= t, got t={t}, m={m}")
    rng = np.random.default_rng(cfg.seed)
    table = np.zeros(t, dtype=bool)
    table[rng.choice(t, size=m, replace=False)] = True
    mode = qmodel.KnownM(m) if args.mode == "known" else qmodel.BBHT
    lines_csv = ["trial,found,queries"]
    queries, found = [], 0
    for i, s in enumerate(qmodel.trial_seeds(cfg.seed, args.trials)):
        run = qmodel.grover_search(table, t, mode, s, fallback=False)
        queries.append(run.oracle_queries)
        hit = run.found is not None
        found += hit
        lines_csv.append(f"{i},{int(hit)},{run.oracle_queries}")
    mean_q = float(np.mean(queries)) if queries else 0.0
    doc = {
        "t": t,
        "m": m,
        "mode": args.mode,
        "trials": args.trials,
        "found": found,
        "mean_queries": mean_q,
        "bbht_reference": 8 * math.sqrt(t / m) if m else None,
    }
    if m:
        k = qmodel.optimal_iterations(t, m)
        doc["k"] = k
        doc["success_prob"] = qmodel.grover_closed_form(t, m, k)
    text = [f"found={found}/{args.trials} mean_queries={fmt(mean_q)}"]
    em.emit(doc, "\n".join(lines_csv) + "\n", text)
    return 0


def cmd_costs(args, cfg: RunConfig, em: _Emitter) -> int:
    inst = cfg.instance()
    delta = cfg.delta_value(inst.field.q)
    source = "census" if inst.field.q <= cfg.count_limit else "main"
    rep = qmodel.cost_report(inst, delta, source, cfg.count_limit)
    doc = rep.as_dict()
    lines = [f"{k}: {fmt(v) if isinstance(v, float) else v}" for k, v in doc.items()]
    em.emit(doc, None, lines)
    return 0


def cmd_scan(args, cfg: RunConfig, em: _Emitter) -> int:
    if args.primes:
        try:
            primes = [int(x) for x in args.primes.split(",")]
        except ValueError:
            raise UsageError(f"bad prime list {args.primes!r}") from None
    elif args.prange:
        lo, sep, hi = args.prange.partition(":")
        try:
            lo_i, hi_i = int(lo), int(hi)
        except ValueError:
            raise UsageError(f"bad range token {args.prange!r}, expected lo:hi") from None
        if args.policy == "worst-case":
            primes = qmodel.worst_case_primes(lo_i, hi_i, args.count, args.m)
        else:
            primes = qmodel.log_spaced_primes(lo_i, hi_i, args.count)
    else:
        raise UsageError("scan needs --primes or --range")
    delta = None if cfg.delta == "sqrt-log" else cfg.delta_value(2)
    res = qmodel.ratio_scan(primes, args.policy, delta, args.m)
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)
    doc = {
        "policy": res.policy,
        "m": res.m,
        "rows": [c.as_dict() for c in res.rows],
        "classical_exp": res.classical_exp,
        "quantum_exp": res.quantum_exp,
        "ratio": res.ratio,
        "warnings": res.warnings,
    }
    em.emit(doc, res.csv(), [res.summary()])
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "census": cmd_census,
    "count": cmd_count,
    "weil": cmd_weil,
    "grover": cmd_grover,
    "costs": cmd_costs,
    "scan": cmd_scan,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return COMMANDS[args.cmd](args, cfg, _Emitter(cfg, args.json))
    except CapacityError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except (UsageError, ParameterError, DomainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
