"""Command-line front end.

Subcommands: protocol run|sweep, query dj, automaton run|build,
bounds mnl|eqk|disj, gen instances.  Reports go to stdout as JSON (default)
or CSV; exit code 0 on success, 2 on a promise violation, 1 on usage or
parameter errors.  Identical invocations (including the seed) produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import automata, bounds, protocols, query
from ._rng import shot_generator
from .bitcore import BitString, Family, Label, PromiseInstance, enumerate_promise
from .errors import (
    DimensionMismatch,
    LimitExceeded,
    ParameterError,
    PromiseViolation,
    ReductionInputError,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 instead of argparse's 2
        raise UsageError(message)


@dataclass
class RunConfig:
    """Parsed invocation; sample mode requires shots >= 1 and a seed."""

    command: str
    problem: str | None = None
    n: int | None = None
    k: int | None = None
    lam: Fraction | None = None
    epsilon: Fraction = Fraction(1, 3)
    sample_size: int | None = None
    x: str | None = None
    y: str | None = None
    word: str | None = None
    l: int | None = None
    mode: str = "exact"
    shots: int = 1
    seed: int | None = None
    fmt: str = "json"
    exhaustive: bool = False
    n_min: int | None = None
    n_max: int | None = None
    n_step: int = 1
    count: int | None = None
    algorithm: str = "quantum"
    strict: bool = False


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational p/q: {text!r}") from exc


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _emit_csv(header, rows) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _default_even_k(n: int) -> int:
    k = (n + 1) // 2
    return k + 1 if k % 2 else k


def _run_protocol(cfg: RunConfig):
    x = BitString(cfg.x)
    y = BitString(cfg.y)
    if cfg.n is not None and cfg.n != len(x):
        raise ParameterError(f"--n {cfg.n} does not match len(x)={len(x)}")
    lam = cfg.lam if cfg.lam is not None else Fraction(1, 4)
    common = dict(mode=cfg.mode, seed=cfg.seed, shots=cfg.shots)
    if cfg.problem == "eqk":
        k = cfg.k if cfg.k is not None else _default_even_k(len(x))
        return protocols.run_eqk_quantum(x, y, k, **common), {"k": k}
    if cfg.problem == "eqk-det":
        if cfg.k is None:
            raise ParameterError("eqk-det needs --k")
        return protocols.run_eqk_deterministic(x, y, cfg.k), {"k": cfg.k}
    if cfg.problem == "disj-once":
        return protocols.run_disj_quantum_once(x, y, **common), {"lambda": str(lam)}
    if cfg.problem == "disj":
        t = protocols.run_disj_quantum(x, y, lam=lam, epsilon=cfg.epsilon, **common)
        return t, {"lambda": str(lam), "epsilon": str(cfg.epsilon)}
    if cfg.problem == "disj-prob":
        t = protocols.run_disj_probabilistic(
            x, y, lam=lam, epsilon=cfg.epsilon, sample_size=cfg.sample_size, **common
        )
        return t, {"lambda": str(lam), "epsilon": str(cfg.epsilon)}
    if cfg.problem == "disjk-det":
        if cfg.k is None:
            raise ParameterError("disjk-det needs --k")
        return protocols.run_disj_prime_deterministic(x, y, cfg.k), {"k": cfg.k}
    raise UsageError(f"unknown problem {cfg.problem!r}")


def _cmd_protocol_run(cfg: RunConfig) -> int:
    transcript, params = _run_protocol(cfg)
    report = {
        "problem": cfg.problem,
        "n": len(cfg.x),
        **params,
        "x": cfg.x,
        "y": cfg.y,
        "mode": cfg.mode,
        **transcript.to_json(),
    }
    if cfg.mode == "sample":
        report["seed"] = cfg.seed
    if cfg.fmt == "csv":
        keys = [k for k in report if k != "messages"]
        _emit_csv(keys, [[report[k] for k in keys]])
    else:
        _emit_json(report)
    return 0


_SWEEP_RUNNERS = {
    "eqk": (Family.EQ_K, "k"),
    "disj": (Family.DISJ_LAMBDA, "lambda"),
    "disj-prob": (Family.DISJ_LAMBDA, "lambda"),
}


def _sweep_instances(cfg: RunConfig, n: int):
    family, _ = _SWEEP_RUNNERS[cfg.problem]
    if family is Family.EQ_K:
        k = cfg.k if cfg.k is not None else _default_even_k(n)
        param = k
    else:
        param = cfg.lam if cfg.lam is not None else Fraction(1, 4)
    return family, param, enumerate_promise(family, n, param)


def _sweep_run(cfg: RunConfig, inst: PromiseInstance):
    if cfg.problem == "eqk":
        return protocols.run_eqk_quantum(inst.x, inst.y, inst.k)
    if cfg.problem == "disj":
        return protocols.run_disj_quantum(inst.x, inst.y, lam=inst.lam, epsilon=cfg.epsilon)
    return protocols.run_disj_probabilistic(
        inst.x, inst.y, lam=inst.lam, epsilon=cfg.epsilon, sample_size=cfg.sample_size
    )


def _param_str(param) -> str:
    if isinstance(param, Fraction):
        return f"{param.numerator}/{param.denominator}"
    return str(param)


def sweep_report(cfg: RunConfig, ns: list[int]) -> tuple[list[str], list[list]]:
    """Aggregate one row per n: instance count, probability envelope, worst costs."""
    header = [
        "n",
        "param",
        "instances",
        "min_yes_prob",
        "max_yes_prob",
        "max_no_prob",
        "qubit_cost",
        "bit_cost",
    ]
    rows = []
    for n in ns:
        _, param, instances = _sweep_instances(cfg, n)
        count = 0
        yes_probs: list[float] = []
        no_probs: list[float] = []
        qubit_cost = bit_cost = 0
        for inst in instances:
            t = _sweep_run(cfg, inst)
            count += 1
            (yes_probs if inst.label is Label.YES else no_probs).append(
                t.output_probability
            )
            qubit_cost = max(qubit_cost, t.qubit_cost)
            bit_cost = max(bit_cost, t.bit_cost)
        rows.append(
            [
                n,
                _param_str(param),
                count,
                min(yes_probs) if yes_probs else "",
                max(yes_probs) if yes_probs else "",
                max(no_probs) if no_probs else "",
                qubit_cost,
                bit_cost,
            ]
        )
    return header, rows


def _cmd_protocol_sweep(cfg: RunConfig) -> int:
    if cfg.problem not in _SWEEP_RUNNERS:
        raise UsageError(f"sweep supports {sorted(_SWEEP_RUNNERS)}, got {cfg.problem!r}")
    if cfg.exhaustive:
        if cfg.n is None:
            raise UsageError("--exhaustive needs --n")
        _, param, instances = _sweep_instances(cfg, cfg.n)
        header = ["n", "param", "x", "y", "label", "output", "probability", "qubit_cost", "bit_cost"]
        rows = []
        for inst in instances:
            t = _sweep_run(cfg, inst)
            rows.append(
                [
                    cfg.n,
                    _param_str(param),
                    str(inst.x),
                    str(inst.y),
                    inst.label.value,
                    t.output,
                    t.output_probability,
                    t.qubit_cost,
                    t.bit_cost,
                ]
            )
    else:
        if cfg.n_min is None or cfg.n_max is None:
            raise UsageError("sweep needs either --exhaustive with --n, or --n-min/--n-max")
        ns = list(range(cfg.n_min, cfg.n_max + 1, cfg.n_step))
        header, rows = sweep_report(cfg, ns)
    if cfg.fmt == "json":
        _emit_json([dict(zip(header, row)) for row in rows])
    else:
        _emit_csv(header, rows)
    return 0


def _cmd_query(cfg: RunConfig) -> int:
    x = BitString(cfg.x)
    if cfg.k is None:
        raise ParameterError("query dj needs --k")
    if cfg.algorithm == "quantum":
        run = query.run_djk_quantum(x, cfg.k)
    else:
        run = query.run_djk_deterministic(x, cfg.k, strict=cfg.strict)
    report = {
        "n": len(x),
        "k": cfg.k,
        "mode": cfg.algorithm,
        "strict": cfg.strict,
        "x": cfg.x,
        **run.to_json(),
    }
    _emit_json(report)
    return 0


def _build_automaton(cfg: RunConfig):
    if cfg.n is None:
        raise ParameterError("automaton commands need --n")
    if cfg.problem == "eqk":
        k = cfg.k if cfg.k is not None else _default_even_k(cfg.n)
        return automata.build_automaton_eqk(cfg.n, k), {"k": k}
    if cfg.problem == "disj":
        return automata.build_automaton_disj(cfg.n), {}
    raise UsageError(f"unknown automaton family {cfg.problem!r}")


def _cmd_automaton_run(cfg: RunConfig) -> int:
    machine, params = _build_automaton(cfg)
    if cfg.word is None:
        raise ParameterError("automaton run needs --input")
    prob = automata.simulate_mo1qcfa(machine, cfg.word)
    _emit_json(
        {
            "family": cfg.problem,
            "n": cfg.n,
            **params,
            "input": cfg.word,
            "acceptance_probability": prob,
            "output": int(prob > 0.5),
        }
    )
    return 0


def _cmd_automaton_build(cfg: RunConfig) -> int:
    machine, params = _build_automaton(cfg)
    _emit_json({"family": cfg.problem, "n": cfg.n, **params, **machine.to_json()})
    return 0


def _cmd_bounds(cfg: RunConfig) -> int:
    if cfg.command == "bounds.mnl":
        if cfg.n is None or cfg.l is None:
            raise ParameterError("bounds mnl needs --n and --l")
        _emit_json(bounds.max_family_avoiding(cfg.n, cfg.l).to_json())
    elif cfg.command == "bounds.eqk":
        if cfg.n is None or cfg.k is None:
            raise ParameterError("bounds eqk needs --n and --k")
        _emit_json(bounds.eqk_rectangle_bound(cfg.n, cfg.k).to_json())
    else:
        if cfg.n is None or cfg.lam is None:
            raise ParameterError("bounds disj needs --n and --lambda")
        _emit_json(bounds.disj_rectangle_bound(cfg.n, cfg.lam).to_json())
    return 0


def _instance_row(inst: PromiseInstance) -> dict:
    row: dict = {"family": inst.family.value, "n": inst.n}
    if inst.k is not None:
        row["k"] = inst.k
    if inst.lam is not None:
        row["lambda"] = _param_str(inst.lam)
    row["x"] = str(inst.x)
    if inst.y is not None:
        row["y"] = str(inst.y)
    return row


def _random_instance(family: Family, n: int, k, lam, rng) -> PromiseInstance:
    def bits_from(positions) -> BitString:
        mask = 0
        for p in positions:
            mask |= 1 << (n - 1 - int(p))
        return BitString.from_int(mask, n)

    if family is Family.DJ_K:
        if rng.random() < 0.5:
            return PromiseInstance(family, BitString.from_int(0, n), k=k)
        return PromiseInstance(family, bits_from(rng.choice(n, size=k, replace=False)), k=k)
    if family is Family.EQ_K:
        x = BitString.from_int(int(rng.integers(0, 1 << n)), n)
        if rng.random() < 0.5:
            return PromiseInstance(family, x, x, k=k)
        flip = bits_from(rng.choice(n, size=k, replace=False))
        return PromiseInstance(family, x, BitString.from_int(x.mask ^ flip.mask, n), k=k)
    # disjointness families: place the intersection, then spread the rest
    if family is Family.DISJ_PRIME_K:
        lo = hi = k
    else:
        lo = math.ceil(lam * n)
        hi = math.floor((1 - lam) * n)
    want_no = lo <= hi and rng.random() < 0.5
    m = int(rng.integers(lo, hi + 1)) if want_no else 0
    perm = rng.permutation(n)
    shared, rest = perm[:m], perm[m:]
    x_mask = y_mask = 0
    for p in shared:
        x_mask |= 1 << (n - 1 - int(p))
        y_mask |= 1 << (n - 1 - int(p))
    for p in rest:
        side = rng.integers(0, 3)  # 0: neither, 1: x only, 2: y only
        if side == 1:
            x_mask |= 1 << (n - 1 - int(p))
        elif side == 2:
            y_mask |= 1 << (n - 1 - int(p))
    kwargs = {"k": k} if family is Family.DISJ_PRIME_K else {"lam": lam}
    return PromiseInstance(
        family, BitString.from_int(x_mask, n), BitString.from_int(y_mask, n), **kwargs
    )


def _cmd_gen(cfg: RunConfig) -> int:
    family = Family(cfg.problem)
    if cfg.n is None:
        raise ParameterError("gen instances needs --n")
    if family is Family.DISJ_LAMBDA:
        param = cfg.lam if cfg.lam is not None else Fraction(1, 4)
    else:
        if cfg.k is None:
            raise ParameterError(f"{family.value} needs --k")
        param = cfg.k
    if cfg.exhaustive:
        for inst in enumerate_promise(family, cfg.n, param):
            sys.stdout.write(json.dumps(_instance_row(inst)) + "\n")
        return 0
    if cfg.count is None or cfg.seed is None:
        raise UsageError("sampled generation needs --count and --seed")
    k = param if family is not Family.DISJ_LAMBDA else None
    lam = param if family is Family.DISJ_LAMBDA else None
    if k is not None and k > cfg.n:
        raise ParameterError(f"need k <= n to generate inputs, got k={k}, n={cfg.n}")
    for j in range(cfg.count):
        inst = _random_instance(family, cfg.n, k, lam, shot_generator(cfg.seed, j))
        sys.stdout.write(json.dumps(_instance_row(inst)) + "\n")
    return 0


_COMMANDS = {
    "protocol.run": _cmd_protocol_run,
    "protocol.sweep": _cmd_protocol_sweep,
    "query.dj": _cmd_query,
    "automaton.run": _cmd_automaton_run,
    "automaton.build": _cmd_automaton_build,
    "bounds.mnl": _cmd_bounds,
    "bounds.eqk": _cmd_bounds,
    "bounds.disj": _cmd_bounds,
    "gen.instances": _cmd_gen,
}


def _add_common(p: _Parser, *names: str) -> None:
    if "n" in names:
        p.add_argument("--n", type=int)
    if "k" in names:
        p.add_argument("--k", type=int)
    if "lambda" in names:
        p.add_argument("--lambda", dest="lam", type=_fraction)
    if "epsilon" in names:
        p.add_argument("--epsilon", type=_fraction, default=Fraction(1, 3))
    if "format" in names:
        p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")


def build_parser() -> _Parser:
    parser = _Parser(prog="promise-cc", description=__doc__)
    top = parser.add_subparsers(dest="group", required=True)

    proto = top.add_parser("protocol").add_subparsers(dest="sub", required=True)
    run = proto.add_parser("run")
    run.add_argument(
        "--problem",
        required=True,
        choices=("eqk", "eqk-det", "disj", "disj-once", "disj-prob", "disjk-det"),
    )
    run.add_argument("--x", required=True)
    run.add_argument("--y", required=True)
    run.add_argument("--mode", choices=("exact", "sample"), default="exact")
    run.add_argument("--shots", type=int, default=1)
    run.add_argument("--seed", type=int)
    run.add_argument("--sample-size", dest="sample_size", type=int)
    _add_common(run, "n", "k", "lambda", "epsilon", "format")

    sweep = proto.add_parser("sweep")
    sweep.add_argument("--problem", required=True, choices=tuple(_SWEEP_RUNNERS))
    sweep.add_argument("--exhaustive", action="store_true")
    sweep.add_argument("--n-min", dest="n_min", type=int)
    sweep.add_argument("--n-max", dest="n_max", type=int)
    sweep.add_argument("--n-step", dest="n_step", type=int, default=1)
    sweep.add_argument("--sample-size", dest="sample_size", type=int)
    _add_common(sweep, "n", "k", "lambda", "epsilon", "format")

    q = top.add_parser("query").add_subparsers(dest="sub", required=True)
    dj = q.add_parser("dj")
    dj.add_argument("--x", required=True)
    dj.add_argument("--algorithm", choices=("quantum", "deterministic"), default="quantum")
    dj.add_argument("--strict", action="store_true")
    _add_common(dj, "k")

    auto = top.add_parser("automaton").add_subparsers(dest="sub", required=True)
    arun = auto.add_parser("run")
    arun.add_argument("--family", dest="problem", required=True, choices=("eqk", "disj"))
    arun.add_argument("--input", dest="word", required=True)
    _add_common(arun, "n", "k")
    abuild = auto.add_parser("build")
    abuild.add_argument("--family", dest="problem", required=True, choices=("eqk", "disj"))
    _add_common(abuild, "n", "k")

    bnd = top.add_parser("bounds").add_subparsers(dest="sub", required=True)
    mnl = bnd.add_parser("mnl")
    mnl.add_argument("--l", type=int, required=True)
    _add_common(mnl, "n")
    beqk = bnd.add_parser("eqk")
    _add_common(beqk, "n", "k")
    bdisj = bnd.add_parser("disj")
    _add_common(bdisj, "n", "lambda")

    gen = top.add_parser("gen").add_subparsers(dest="sub", required=True)
    gi = gen.add_parser("instances")
    gi.add_argument("--family", dest="problem", required=True, choices=[f.value for f in Family])
    gi.add_argument("--exhaustive", action="store_true")
    gi.add_argument("--count", type=int)
    gi.add_argument("--seed", type=int)
    _add_common(gi, "n", "k", "lambda")

    return parser


def dispatch(config: RunConfig) -> int:
    """Route a parsed invocation; returns the process exit code."""
    handler = _COMMANDS.get(config.command)
    if handler is None:
        raise UsageError(f"unknown command {config.command!r}")
    if config.mode == "sample":
        if config.shots < 1:
            raise ParameterError("sample mode needs --shots >= 1")
        if config.seed is None:
            raise ParameterError("sample mode needs --seed")
    return handler(config)


def _config_from(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=f"{ns.group}.{ns.sub}")
    for field_name in vars(ns):
        if field_name in ("group", "sub"):
            continue
        if hasattr(cfg, field_name):
            setattr(cfg, field_name, getattr(ns, field_name))
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        return dispatch(_config_from(ns))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except PromiseViolation as exc:
        print(f"promise violation: {exc}", file=sys.stderr)
        return 2
    except (
        ParameterError,
        DimensionMismatch,
        LimitExceeded,
        ReductionInputError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
