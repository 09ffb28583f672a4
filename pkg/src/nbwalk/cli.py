"""Command-line front end.

Subcommands: ``walk`` (sample a path and report its statistics),
``erase`` (apply backtrack erasure to tokens or a fresh sample),
``chain`` (birth-death analysis), ``contract`` (emit the contracted
multigraph), ``enumerate`` (dump an exact prefix law), ``compare``
(total-variation distances between exact laws), and ``diagnose``
(seeded Monte Carlo report).

Exit codes: 0 on success, 1 on runtime failures such as a walk with no
legal move, 2 on configuration errors.  All randomness flows from an
explicit ``--seed``; rejected configurations never produce output files.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .birthdeath import (
    _period_ratio_product,
    chain_for_biregular,
    chain_for_regular,
    escape_probability,
    is_transient,
)
from .contraction import contract, induced_prefix_distribution
from .erasure import erase_backtracks, erased_prefix_distribution
from .errors import InvalidParameter, NbwalkError
from .graph import ExplicitGraph, decode_key, encode_key, graph_from_spec
from .stats import monte_carlo, replica_seed, return_statistics, total_variation
from .walkers import WalkKind, enumerate_prefix_distribution, sample_path


class _ConfigError(Exception):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """Diagnose configuration; round-trips through JSON with unknown
    fields rejected."""

    subcommand: str
    graph: dict
    walk: str
    start: str
    horizon: int
    replicas: int
    seed: int
    out: str | None = None
    jobs: int = 1

    _FIELDS = ("subcommand", "graph", "walk", "start", "horizon", "replicas", "seed", "out", "jobs")

    def to_json_dict(self) -> dict:
        return {name: getattr(self, name) for name in self._FIELDS}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ExperimentConfig":
        unknown = set(doc) - set(cls._FIELDS)
        if unknown:
            raise InvalidParameter(f"unknown config fields {sorted(unknown)}")
        missing = {f for f in cls._FIELDS if f not in doc and f not in ("out", "jobs")}
        if missing:
            raise InvalidParameter(f"missing config fields {sorted(missing)}")
        return cls(**doc)


def _fmt_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _fmt_rational(x: Fraction) -> str:
    return f"{_fmt_fraction(x)} ({float(x):.12g})"


def _load_graph_spec(text: str) -> dict:
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    spec = json.loads(text)
    if not isinstance(spec, dict):
        raise InvalidParameter("graph spec must be a JSON object")
    return spec


def _config(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (NbwalkError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        raise _ConfigError(str(exc)) from None


def _start_vertex(args, graph):
    if getattr(args, "start", None) is not None:
        return decode_key(args.start)
    return graph.default_start()


def _rng(seed: int):
    return np.random.default_rng(replica_seed(seed, 0))


def _cmd_walk(args) -> int:
    spec = _config(_load_graph_spec, args.graph)
    graph = _config(graph_from_spec, spec)
    kind = _config(WalkKind, args.walk)
    if kind is WalkKind.WRW:
        if not isinstance(graph, ExplicitGraph):
            raise _ConfigError("wrw walks run on the contraction of an explicit graph")
        graph, _ = _config(contract, graph)
    start = _config(_start_vertex, args, graph)
    path = sample_path(kind, graph, start, args.horizon, _rng(args.seed))
    stats = return_statistics(path, start, graph)
    tokens = " ".join(encode_key(v) for v in path)
    if args.out:
        Path(args.out).write_text(tokens + "\n")
    else:
        print(tokens)
    doc = {
        "steps": stats.steps,
        "returns": stats.returns_to_origin,
        "last_return": stats.last_return_time,
        "displacement": stats.end_displacement,
    }
    print(json.dumps(doc, sort_keys=True))
    return 0


def _cmd_erase(args) -> int:
    if args.graph is not None:
        spec = _config(_load_graph_spec, args.graph)
        graph = _config(graph_from_spec, spec)
        start = _config(_start_vertex, args, graph)
        if args.seed is None:
            raise _ConfigError("sampling a walk to erase requires --seed")
        seq = sample_path(WalkKind.SRW, graph, start, args.horizon, _rng(args.seed))
    else:
        text = Path(args.tokens[1:]).read_text() if args.tokens else sys.stdin.read()
        toks = text.split()
        if not toks:
            raise _ConfigError("no input tokens")
        seq = [decode_key(t) for t in toks]
    result = erase_backtracks(seq)
    out = " ".join(encode_key(v) for v in result.output)
    if args.out:
        Path(args.out).write_text(out + "\n" + result.trace.moves + "\n")
    else:
        print(out)
        print(result.trace.moves)
    return 0


def _cmd_chain(args) -> int:
    if args.k is not None:
        if args.k1 is not None or args.k2 is not None:
            raise _ConfigError("give either --k or --k1/--k2, not both")
        spec = _config(chain_for_regular, args.k)
    elif args.k1 is not None and args.k2 is not None:
        spec = _config(chain_for_biregular, args.k1, args.k2)
    else:
        raise _ConfigError("need --k, or both --k1 and --k2")
    transient = is_transient(spec)
    print("verdict: " + ("transient" if transient else "recurrent"))
    print(f"period odds product: {_fmt_rational(_period_ratio_product(spec))}")
    print(f"escape probability: {_fmt_rational(escape_probability(spec))}")
    return 0


def _cmd_contract(args) -> int:
    spec = _config(_load_graph_spec, args.graph)
    graph = _config(graph_from_spec, spec)
    if not isinstance(graph, ExplicitGraph):
        raise _ConfigError("contraction needs an explicit graph spec")
    mg, cmap = contract(graph)
    doc = mg.to_json_dict()
    doc["max_corridor_length"] = cmap.max_length
    json_text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    csv_lines = ["endpoint_a,endpoint_b,length"]
    for c in cmap.corridors:
        csv_lines.append(f"{encode_key(c.a)},{encode_key(c.b)},{c.length}")
    csv_text = "\n".join(csv_lines) + "\n"
    if args.out:
        Path(args.out + ".json").write_text(json_text)
        Path(args.out + ".csv").write_text(csv_text)
        print(f"wrote {args.out}.json and {args.out}.csv")
    else:
        print(json_text, end="")
        print(csv_text, end="")
    return 0


def _cmd_enumerate(args) -> int:
    spec = _config(_load_graph_spec, args.graph)
    graph = _config(graph_from_spec, spec)
    kind = _config(WalkKind, args.walk)
    if kind is WalkKind.WRW:
        if not isinstance(graph, ExplicitGraph):
            raise _ConfigError("wrw laws live on the contraction of an explicit graph")
        graph, _ = _config(contract, graph)
    start = _config(_start_vertex, args, graph)
    dist = enumerate_prefix_distribution(kind, graph, start, args.m)
    doc = {
        "horizon": dist.horizon,
        "short_mass": _fmt_fraction(dist.short_mass),
        "entries": [
            {
                "sequence": [encode_key(v) for v in seq],
                "p": _fmt_fraction(p),
                "decimal": float(p),
            }
            for seq, p in sorted(dist.entries.items())
        ],
    }
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        print(text, end="")
    return 0


def _cmd_compare(args) -> int:
    spec = _config(_load_graph_spec, args.graph)
    graph = _config(graph_from_spec, spec)
    if not isinstance(graph, ExplicitGraph):
        raise _ConfigError("compare needs an explicit graph spec")
    start = _config(_start_vertex, args, graph)
    if args.induced:
        kind = _config(WalkKind, args.walk)
        mg, cmap = contract(graph)
        induced = induced_prefix_distribution(graph, kind, start, args.m, cmap)
        target_kind = WalkKind.WRW if kind is WalkKind.SRW else WalkKind.NBRW
        target = enumerate_prefix_distribution(target_kind, mg, start, args.m)
        tv = total_variation(induced, target)
        print(f"tv(induced {kind.value}, contracted {target_kind.value}): {_fmt_rational(tv)}")
    else:
        if args.N is None:
            raise _ConfigError("erased-law comparison needs --N")
        erased = erased_prefix_distribution(graph, start, args.N, args.m)
        nbrw = enumerate_prefix_distribution(WalkKind.NBRW, graph, start, args.m)
        tv = total_variation(erased, nbrw)
        tv_cond = total_variation(erased.conditioned(), nbrw)
        print(f"tv(erased N={args.N}, nbrw m={args.m}): {_fmt_rational(tv)}")
        print(f"tv conditional on full prefix: {_fmt_rational(tv_cond)}")
        print(f"short mass: {_fmt_rational(erased.short_mass)}")
    return 0


def _cmd_diagnose(args) -> int:
    spec = _config(_load_graph_spec, args.graph)
    graph = _config(graph_from_spec, spec)
    kind = _config(WalkKind, args.walk)
    if kind is WalkKind.WRW:
        if not isinstance(graph, ExplicitGraph):
            raise _ConfigError("wrw diagnostics run on the contraction of an explicit graph")
        graph, _ = _config(contract, graph)
    start = _config(_start_vertex, args, graph)
    cfg = ExperimentConfig(
        subcommand="diagnose",
        graph=spec,
        walk=kind.value,
        start=encode_key(start),
        horizon=args.horizon,
        replicas=args.replicas,
        seed=args.seed,
        out=args.out,
        jobs=args.jobs,
    )
    # the config echo describes the experiment, not the execution vehicle,
    # so reports stay byte-identical across serial and parallel runs
    echo = {k: v for k, v in cfg.to_json_dict().items() if k not in ("out", "jobs")}
    report = monte_carlo(
        kind,
        graph,
        start,
        args.horizon,
        args.replicas,
        args.seed,
        jobs=args.jobs,
        config=echo,
    )
    if args.out:
        Path(args.out + ".json").write_text(report.json_text())
        Path(args.out + ".csv").write_text(report.csv_text())
        print(f"wrote {args.out}.json and {args.out}.csv")
    else:
        print(report.json_text(), end="")
    return 0


def _add_graph_flags(p, start=True):
    p.add_argument("--graph", required=True, help="graph spec as JSON, or @file")
    if start:
        p.add_argument("--start", help="start vertex key (default: family origin)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nbwalk", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("walk", help="sample one path and print it with its statistics")
    _add_graph_flags(p)
    p.add_argument("--walk", required=True, choices=[k.value for k in WalkKind])
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="write the path tokens to this file")
    p.set_defaults(handler=_cmd_walk)

    p = sub.add_parser("erase", help="erase backtracks from tokens or a fresh sample")
    p.add_argument("--tokens", help="@file with whitespace-separated tokens (default: stdin)")
    p.add_argument("--graph", help="sample a uniform walk on this graph spec instead")
    p.add_argument("--start")
    p.add_argument("--horizon", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_erase)

    p = sub.add_parser("chain", help="birth-death transience and escape analysis")
    p.add_argument("--k", type=int)
    p.add_argument("--k1", type=int)
    p.add_argument("--k2", type=int)
    p.set_defaults(handler=_cmd_chain)

    p = sub.add_parser("contract", help="contract degree-2 corridors to a weighted multigraph")
    _add_graph_flags(p, start=False)
    p.add_argument("--out", help="write <out>.json and <out>.csv")
    p.set_defaults(handler=_cmd_contract)

    p = sub.add_parser("enumerate", help="dump an exact prefix distribution")
    _add_graph_flags(p)
    p.add_argument("--walk", required=True, choices=[k.value for k in WalkKind])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("compare", help="total variation between exact laws")
    _add_graph_flags(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--N", type=int, help="walk horizon for the erased law")
    p.add_argument("--induced", action="store_true", help="induced walk vs contracted kernel")
    p.add_argument("--walk", default="srw", choices=["srw", "nbrw"], help="walk for --induced")
    p.set_defaults(handler=_cmd_compare)

    p = sub.add_parser("diagnose", help="seeded Monte Carlo recurrence diagnostics")
    _add_graph_flags(p)
    p.add_argument("--walk", required=True, choices=[k.value for k in WalkKind])
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--replicas", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="write <out>.json and <out>.csv")
    p.set_defaults(handler=_cmd_diagnose)

    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if isinstance(code, int) else (0 if code is None else 2)
    try:
        return args.handler(args)
    except _ConfigError as exc:
        print(f"nbwalk: configuration error: {exc}", file=sys.stderr)
        return 2
    except NbwalkError as exc:
        print(f"nbwalk: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))
