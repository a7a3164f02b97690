"""Command-line entry point.

    relaysel scenario --id 1 --runs 100 --seed 7 --out s1.csv
    relaysel solve-kcard --matrix weights.txt --k 2
    relaysel instance --seed 3 --ns 10 --nr 20

Configuration precedence: scenario preset < ``--config`` JSON < flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from .assignment import KCardInstance, solve_kcard
from .channel import RadioParams
from .sim import ALGORITHMS, DEFAULT_SEED, ConfigError, preset, run_scenario, write_csv
from .topology import generate


class CliError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.replace(",", " ").split()]


def _algo_list(text: str) -> list[str]:
    algos = [a.strip().lower() for a in text.split(",") if a.strip()]
    bad = [a for a in algos if a not in ALGORITHMS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown algorithm(s): {', '.join(bad)}")
    return algos


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="relaysel", description="Relay selection for uplink M2M networks")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sc = sub.add_parser("scenario", help="run one of the five experiment presets")
    sc.add_argument("--id", type=int, required=True, dest="scenario_id")
    sc.add_argument("--config", help="JSON file with ScenarioConfig fields")
    sc.add_argument("--runs", type=int)
    sc.add_argument("--seed", type=int)
    sc.add_argument("--out", help="CSV path (default: standard output)")
    sc.add_argument("--ns-max", type=int, dest="ns_max")
    sc.add_argument("--ns-step", type=int, dest="ns_step")
    sc.add_argument("--relays", type=_int_list, help="fixed relay counts, one curve each")
    sc.add_argument("--channels", type=_int_list)
    sc.add_argument("--alpha", type=_float_list, dest="alphas")
    sc.add_argument("--fading-probability", type=float, dest="fading_probability")
    sc.add_argument("--algos", type=_algo_list, dest="algorithms")
    sc.add_argument(
        "--strict-quota",
        action=argparse.BooleanOptionalAction,
        dest="strict_quota",
        help="count relayed sources against the BS quota in ORSA (default on)",
    )
    sc.add_argument("--jobs", type=int)

    ks = sub.add_parser("solve-kcard", help="k-cardinality assignment on a text matrix")
    ks.add_argument("--matrix", required=True, help="whitespace-separated reals, one row per line")
    ks.add_argument("--k", type=int, required=True)

    inst = sub.add_parser("instance", help="dump a generated network as JSON")
    inst.add_argument("--seed", type=int, default=DEFAULT_SEED)
    inst.add_argument("--ns", type=int, required=True)
    inst.add_argument("--nr", type=int, required=True)
    inst.add_argument("--side", type=float, default=590.0)
    inst.add_argument("--out")
    return parser


_RADIO_KEYS = {"fading_probability"}


def scenario_config(args):
    """Merge preset, optional JSON config and explicit flags."""
    overrides: dict = {}
    radio: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read config {args.config}: {exc}") from exc
        radio.update(doc.pop("radio", {}))
        doc.pop("id", None)
        doc.pop("scenario_id", None)
        overrides.update(doc)

    flags = {k: v for k, v in vars(args).items() if v is not None}
    for key in ("runs", "seed", "relays", "channels", "alphas", "algorithms", "strict_quota", "jobs", "ns_max", "ns_step"):
        if key in flags:
            overrides[key] = flags[key]
    for key in _RADIO_KEYS:
        if key in flags:
            radio[key] = flags[key]
    for key in list(overrides):
        if key in _RADIO_KEYS:
            radio[key] = overrides.pop(key)

    ns_max = overrides.pop("ns_max", None)
    ns_step = overrides.pop("ns_step", None)
    if ns_max is not None or ns_step is not None:
        overrides.setdefault("ns_values", list(range(0, (100 if ns_max is None else ns_max) + 1, ns_step or 1)))
    if "relays" in overrides and overrides["relays"] is not None:
        overrides["total_machines"] = None

    try:
        cfg = preset(args.scenario_id, **overrides)
        if radio:
            cfg = replace(cfg, radio=replace(cfg.radio, **radio))
    except TypeError as exc:
        raise CliError(f"bad config field: {exc}") from exc
    return cfg


def cmd_scenario(args) -> int:
    cfg = scenario_config(args)
    rows = run_scenario(cfg)
    write_csv(rows, args.out or sys.stdout)
    return 0


def read_matrix(path: str) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            rows = [line.split() for line in fh if line.strip()]
    except OSError as exc:
        raise CliError(f"cannot read matrix {path}: {exc.strerror}") from exc
    if not rows:
        return np.zeros((0, 0))
    if len({len(r) for r in rows}) != 1:
        raise CliError(f"{path}: rows have different lengths")
    try:
        return np.array([[float(x) for x in r] for r in rows])
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from exc


def cmd_solve_kcard(args) -> int:
    w = read_matrix(args.matrix)
    try:
        sol = solve_kcard(KCardInstance(w, args.k))
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    for i, j in sol.edges:
        print(f"{i} {j} {w[i, j]:.12g}")
    print(f"total_weight {sol.total_weight:.12g}")
    return 0


def cmd_instance(args) -> int:
    if args.ns < 0 or args.nr < 0:
        raise CliError("--ns and --nr must be non-negative")
    net = generate(args.ns, args.nr, args.seed, side_m=args.side, params=RadioParams())
    text = net.to_json(indent=1)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            raise CliError(f"cannot write {args.out}: {exc.strerror}") from exc
    else:
        print(text)
    return 0


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        handler = {"scenario": cmd_scenario, "solve-kcard": cmd_solve_kcard, "instance": cmd_instance}
        return handler[args.command](args)
    except (CliError, ConfigError, OSError) as exc:
        print(f"relaysel: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
