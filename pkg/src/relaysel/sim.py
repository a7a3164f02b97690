"""Scenario presets, the Monte-Carlo driver and CSV output.

Every run draws one network per (sweep point, run) and hands the same
capacity tables to every algorithm, so algorithm comparisons are paired.
Run ``r`` uses seed ``config.seed + r`` at every sweep point.
"""

from __future__ import annotations

import csv
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from .algorithms import Matching, mrsa, orsa, rrsa, wrsa
from .channel import RadioParams
from .topology import DEFAULT_SIDE_M, build_capacity_tables, generate

ALGORITHMS = ("orsa", "mrsa", "wrsa", "rrsa")
DEFAULT_SEED = 20200601

_WRSA_STREAM = 3
_RRSA_STREAM = 4

CSV_COLUMNS = (
    "scenario",
    "algorithm",
    "N_s",
    "N_r",
    "channels",
    "alpha",
    "mean_capacity",
    "std_capacity",
    "mean_unmatched",
    "mean_capacity_all",
    "std_capacity_all",
    "runs",
)


class ConfigError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    """Experiment parameters.

    Exactly one of ``total_machines`` (relays = N - N_s) and ``relays``
    (one curve per fixed relay count) is set.  ``channels`` and ``alphas``
    each add one curve per value.
    """

    scenario_id: int = 0
    ns_values: list[int] = field(default_factory=lambda: list(range(0, 101)))
    total_machines: int | None = 100
    relays: list[int] | None = None
    channels: list[int] = field(default_factory=lambda: [100])
    alphas: list[float] = field(default_factory=lambda: [1e-4])
    runs: int = 100
    seed: int = DEFAULT_SEED
    algorithms: list[str] = field(default_factory=lambda: list(ALGORITHMS))
    strict_quota: bool = True
    side_m: float = DEFAULT_SIDE_M
    bs_xy: tuple[float, float] | None = None
    radio: RadioParams = field(default_factory=RadioParams)
    jobs: int = 1

    def __post_init__(self):
        if (self.total_machines is None) == (self.relays is None):
            raise ConfigError("set exactly one of total_machines and relays")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ConfigError(f"unknown algorithm(s): {', '.join(sorted(unknown))}")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if any(n < 0 for n in self.ns_values):
            raise ConfigError("N_s values must be non-negative")
        if any(c < 0 for c in self.channels):
            raise ConfigError("channel counts must be non-negative")
        if any(not 0 < a <= 1 for a in self.alphas):
            raise ConfigError("alpha values must lie in (0, 1]")

    def sweep_points(self) -> list[tuple[int, int]]:
        """(N_s, N_r) pairs in output order."""
        if self.relays is not None:
            return [(ns, nr) for nr in self.relays for ns in self.ns_values]
        return [(ns, self.total_machines - ns) for ns in self.ns_values if ns <= self.total_machines]

    def curves(self) -> list[tuple[int, float]]:
        return list(itertools.product(self.channels, self.alphas))


def preset(scenario_id: int, **overrides) -> ScenarioConfig:
    """Parameters of experiment 1-5, with keyword overrides."""
    base = dict(scenario_id=scenario_id, channels=[100], alphas=[1e-4])
    if scenario_id == 1:
        base.update(total_machines=100, relays=None, algorithms=list(ALGORITHMS))
    elif scenario_id == 2:
        base.update(total_machines=None, relays=[75], algorithms=list(ALGORITHMS))
    elif scenario_id == 3:
        base.update(total_machines=None, relays=[25, 50, 75], algorithms=["orsa", "mrsa"])
    elif scenario_id == 4:
        base.update(total_machines=None, relays=[100], channels=[25, 50, 75], algorithms=["orsa", "mrsa"])
    elif scenario_id == 5:
        base.update(
            total_machines=None,
            relays=[100],
            channels=[25, 50, 75],
            alphas=[1e-8, 1e-6, 1e-4],
            algorithms=["orsa", "mrsa"],
        )
    else:
        raise ConfigError(f"unknown scenario {scenario_id!r} (expected 1-5)")
    base.update(overrides)
    return ScenarioConfig(**base)


def run_instance(config: ScenarioConfig, n_sources: int, n_relays: int, run: int):
    """All algorithms on one drawn network, for every (channels, alpha) curve.

    Returns a list of ``((channels, alpha), algorithm, Matching)``.
    """
    seed = config.seed + run
    net = generate(
        n_sources, n_relays, seed, side_m=config.side_m, bs_xy=config.bs_xy, params=config.radio
    )
    out: list[tuple[tuple[int, float], str, Matching]] = []
    for ch, alpha in config.curves():
        params = replace(config.radio, lte_channel_count=ch, fading_factor=alpha)
        tables = build_capacity_tables(net, params, seed)
        for name in config.algorithms:
            if name == "orsa":
                m = orsa(tables, ch, strict=config.strict_quota)
            elif name == "mrsa":
                m = mrsa(tables, ch)
            elif name == "wrsa":
                order = np.random.default_rng([seed, _WRSA_STREAM]).permutation(n_sources)
                m = wrsa(tables, ch, order)
            else:
                m = rrsa(tables, ch, np.random.default_rng([seed, _RRSA_STREAM]))
            out.append(((ch, alpha), name, m))
    return out


@dataclass
class RunMetrics:
    """Aggregate of one (algorithm, curve, sweep point) over all runs.

    ``mean_capacity`` averages each run's mean rate over matched sources;
    ``mean_capacity_all`` averages over all sources with unmatched ones at 0.
    Standard deviations are across runs (population, ddof=0).
    """

    scenario: int
    algorithm: str
    n_sources: int
    n_relays: int
    channels: int
    alpha: float
    mean_capacity: float
    std_capacity: float
    mean_unmatched: float
    mean_capacity_all: float
    std_capacity_all: float
    runs: int

    def row(self) -> list:
        return [getattr(self, f.name) for f in fields(self)]


def _point_metrics(args) -> list[RunMetrics]:
    config, ns, nr = args
    per: dict[tuple, list[tuple[float, float, int]]] = {}
    for run in range(config.runs):
        for curve, name, m in run_instance(config, ns, nr, run):
            obj = m.objective
            matched_mean = obj / m.n_matched if m.n_matched else 0.0
            all_mean = obj / ns if ns else 0.0
            per.setdefault((curve, name), []).append((matched_mean, all_mean, m.n_unmatched))
    out = []
    for ((ch, alpha), name), vals in per.items():
        arr = np.array(vals, dtype=float)
        out.append(
            RunMetrics(
                scenario=config.scenario_id,
                algorithm=name,
                n_sources=ns,
                n_relays=nr,
                channels=ch,
                alpha=alpha,
                mean_capacity=math.fsum(arr[:, 0]) / len(arr),
                std_capacity=float(np.std(arr[:, 0])),
                mean_unmatched=math.fsum(arr[:, 2]) / len(arr),
                mean_capacity_all=math.fsum(arr[:, 1]) / len(arr),
                std_capacity_all=float(np.std(arr[:, 1])),
                runs=len(arr),
            )
        )
    return out


def _sort_key(config: ScenarioConfig):
    algo_rank = {a: k for k, a in enumerate(config.algorithms)}
    return lambda r: (algo_rank[r.algorithm], r.channels, r.alpha, r.n_relays if config.relays else 0, r.n_sources)


def run_scenario(config: ScenarioConfig) -> list[RunMetrics]:
    """Monte-Carlo sweep; rows sorted by algorithm, curve, then N_s ascending."""
    tasks = [(config, ns, nr) for ns, nr in config.sweep_points()]
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            chunks = list(pool.map(_point_metrics, tasks))
    else:
        chunks = [_point_metrics(t) for t in tasks]
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=_sort_key(config))
    return rows


def _write_rows(fh, metrics) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for m in metrics:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in m.row()])


def write_csv(metrics: list[RunMetrics], path) -> None:
    """Write one row per metric record under a fixed header.

    ``path`` may also be an open text stream.
    """
    if hasattr(path, "write"):
        _write_rows(path, metrics)
        return
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            _write_rows(fh, metrics)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc


def config_to_dict(config: ScenarioConfig) -> dict:
    d = asdict(config)
    d["radio"] = asdict(config.radio)
    return d
