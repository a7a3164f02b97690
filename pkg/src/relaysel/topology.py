"""Network instances and the per-run capacity tables built from them."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .channel import RadioParams, path_gain_array

DEFAULT_SIDE_M = 590.0

# independent RNG streams derived from one run seed
_POSITION_STREAM = 0
_SHADOW_STREAM = 1
_FADING_STREAM = 2


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), stream])


@dataclass
class Network:
    """Fixed machine placement plus per-link gains.

    Machines ``0 .. n_sources-1`` are sources, the rest are relays.  The
    base station is node ``n_machines`` in ``shadow_db``.
    """

    positions: np.ndarray  # (N, 2) metres
    n_sources: int
    bs_xy: tuple[float, float]
    side_m: float
    shadow_db: np.ndarray  # (N+1, N+1) symmetric, zero diagonal
    wifi_gain: np.ndarray  # (N, N) machine <-> machine, zero diagonal
    lte_gain: np.ndarray  # (N,) machine <-> BS
    params: RadioParams = field(default_factory=RadioParams)

    def __post_init__(self):
        n = len(self.positions)
        if not 0 <= self.n_sources <= n:
            raise ValueError("n_sources out of range")

    @property
    def n_machines(self) -> int:
        return len(self.positions)

    @property
    def n_relays(self) -> int:
        return self.n_machines - self.n_sources

    @property
    def sources(self) -> range:
        return range(self.n_sources)

    @property
    def relays(self) -> range:
        return range(self.n_sources, self.n_machines)

    def with_sources(self, n_sources: int) -> "Network":
        """Same placement and shadowing with a different role split."""
        return Network(
            positions=self.positions,
            n_sources=n_sources,
            bs_xy=self.bs_xy,
            side_m=self.side_m,
            shadow_db=self.shadow_db,
            wifi_gain=self.wifi_gain,
            lte_gain=self.lte_gain,
            params=self.params,
        )

    def to_dict(self) -> dict:
        return {
            "side_m": self.side_m,
            "bs": list(self.bs_xy),
            "n_sources": self.n_sources,
            "n_relays": self.n_relays,
            "roles": ["source"] * self.n_sources + ["relay"] * self.n_relays,
            "positions": self.positions.tolist(),
            "shadow_db": self.shadow_db.tolist(),
            "wifi_gain": self.wifi_gain.tolist(),
            "lte_gain": self.lte_gain.tolist(),
            "radio": asdict(self.params),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> "Network":
        n = len(doc["positions"])
        return cls(
            positions=np.asarray(doc["positions"], dtype=float).reshape(n, 2),
            n_sources=int(doc["n_sources"]),
            bs_xy=tuple(doc["bs"]),
            side_m=float(doc["side_m"]),
            shadow_db=np.asarray(doc["shadow_db"], dtype=float).reshape(n + 1, n + 1),
            wifi_gain=np.asarray(doc["wifi_gain"], dtype=float).reshape(n, n),
            lte_gain=np.asarray(doc["lte_gain"], dtype=float).reshape(n),
            params=RadioParams(**doc.get("radio", {})),
        )

    @classmethod
    def from_json(cls, text: str) -> "Network":
        return cls.from_dict(json.loads(text))


def compute_gains(positions, bs_xy, shadow_db, params: RadioParams):
    """Return ``(wifi_gain, lte_gain)`` for the given placement and shadowing."""
    positions = np.asarray(positions, dtype=float).reshape(-1, 2)
    n = len(positions)
    wifi = np.zeros((n, n))
    if n > 1:
        diff = positions[:, None, :] - positions[None, :, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        off = ~np.eye(n, dtype=bool)
        wifi[off] = path_gain_array(
            dist[off],
            params.wifi_freq_hz,
            params.machine_height_m,
            params.machine_height_m,
            shadow_db[:n, :n][off],
        )
    if n:
        d_bs = np.hypot(positions[:, 0] - bs_xy[0], positions[:, 1] - bs_xy[1])
        # co-located machine and BS would be degenerate; clamp to 1 cm
        d_bs = np.maximum(d_bs, 1e-2)
        lte = path_gain_array(
            d_bs, params.lte_freq_hz, params.machine_height_m, params.bs_height_m, shadow_db[:n, n]
        )
    else:
        lte = np.zeros(0)
    return wifi, lte


def generate(
    n_sources: int,
    n_relays: int,
    seed: int,
    *,
    side_m: float = DEFAULT_SIDE_M,
    bs_xy: tuple[float, float] | None = None,
    params: RadioParams | None = None,
) -> Network:
    """Drop ``n_sources + n_relays`` machines uniformly in a square cell.

    Deterministic in ``seed``.  Positions are drawn row by row, so the first
    ``k`` machines of a larger network coincide with a smaller network
    generated from the same seed.  Shadowing is drawn once per unordered
    node pair (BS included).
    """
    if n_sources < 0 or n_relays < 0:
        raise ValueError("node counts must be non-negative")
    params = params or RadioParams()
    if bs_xy is None:
        bs_xy = (side_m / 2.0, side_m / 2.0)
    n = n_sources + n_relays
    positions = _rng(seed, _POSITION_STREAM).uniform(0.0, side_m, size=(n, 2))

    draws = _rng(seed, _SHADOW_STREAM).normal(
        params.shadow_mean_db, params.shadow_std_db, size=(n + 1, n + 1)
    )
    upper = np.triu(draws, k=1)
    shadow = upper + upper.T

    wifi, lte = compute_gains(positions, bs_xy, shadow, params)
    return Network(
        positions=positions,
        n_sources=n_sources,
        bs_xy=(float(bs_xy[0]), float(bs_xy[1])),
        side_m=float(side_m),
        shadow_db=shadow,
        wifi_gain=wifi,
        lte_gain=lte,
        params=params,
    )


@dataclass
class CapacityTables:
    """Weighted instance consumed by every relay-selection algorithm.

    Attributes
    ----------
    source_relay : (N_s, N_r) ndarray
        WiFi capacity source -> relay, bit/s.
    source_bs : (N_s,) ndarray
        LTE capacity source -> BS after fading, bit/s.
    relay_bs : (N_r,) ndarray
        LTE capacity relay -> BS, bit/s.
    faded : (N_s,) bool ndarray
        Which direct links were struck by fading.
    """

    source_relay: np.ndarray
    source_bs: np.ndarray
    relay_bs: np.ndarray
    faded: np.ndarray | None = None

    def __post_init__(self):
        self.source_relay = np.asarray(self.source_relay, dtype=float)
        self.source_bs = np.asarray(self.source_bs, dtype=float).reshape(-1)
        self.relay_bs = np.asarray(self.relay_bs, dtype=float).reshape(-1)
        ns, nr = len(self.source_bs), len(self.relay_bs)
        self.source_relay = self.source_relay.reshape(ns, nr)
        if self.faded is None:
            self.faded = np.zeros(ns, dtype=bool)
        if (
            np.any(self.source_relay < 0)
            or np.any(self.source_bs < 0)
            or np.any(self.relay_bs < 0)
        ):
            raise ValueError("capacities must be non-negative")

    @property
    def n_sources(self) -> int:
        return len(self.source_bs)

    @property
    def n_relays(self) -> int:
        return len(self.relay_bs)

    def path_capacity(self) -> np.ndarray:
        """Two-hop decode-and-forward rate for every (source, relay) pair."""
        return np.minimum(self.source_relay, self.relay_bs[None, :])


def build_capacity_tables(net: Network, params: RadioParams | None = None, seed: int = 0) -> CapacityTables:
    """Evaluate every link of ``net`` under ``params``.

    Links whose received power falls below the reception threshold get
    capacity 0.  WiFi SINR counts every source except the transmitter as
    an interferer.  Fading (drawn from ``seed``) only touches the direct
    source -> BS capacities.
    """
    params = params or net.params
    ns, nr = net.n_sources, net.n_relays
    thr = params.rx_threshold_w
    noise = params.noise_power_w

    # source -> relay over WiFi
    p_w = params.p_wifi_machine_w
    g_sr = net.wifi_gain[:ns, ns:]
    rx_all = p_w * net.wifi_gain[:ns, ns:].sum(axis=0)  # every source heard at each relay
    signal = p_w * g_sr
    interference = np.maximum(rx_all[None, :] - signal, 0.0)
    sinr = signal / (noise + interference)
    c_sr = params.wifi_bandwidth_hz * np.log2(1.0 + sinr)
    c_sr[signal < thr] = 0.0

    # LTE hops
    p_l = params.p_lte_machine_w
    b_l = params.lte_bandwidth_hz
    rx_lte = p_l * net.lte_gain
    c_lte = b_l * np.log2(1.0 + rx_lte / noise)
    c_lte[rx_lte < thr] = 0.0
    c_sb = c_lte[:ns].copy()
    c_rb = c_lte[ns:].copy()

    coins = _rng(seed, _FADING_STREAM).random(ns) < params.fading_probability
    c_sb = np.where(coins, params.fading_factor * c_sb, c_sb)
    return CapacityTables(source_relay=c_sr, source_bs=c_sb, relay_bs=c_rb, faded=coins)
