"""Radio link model: path gain, SINR and Shannon capacity.

Machine-to-machine hops use the shared WiFi band, machine-to-base-station
hops use one LTE channel each.  All functions are pure; randomness
(shadowing draws, fading coins) is supplied by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0

# kT at 290 K over 20 MHz
THERMAL_NOISE_20MHZ_W = 1.380649e-23 * 290.0 * 20e6


@dataclass(frozen=True)
class RadioParams:
    """Radio configuration shared by every link in a run.

    Powers, bandwidths, threshold, shadowing and fading defaults are the
    scenario settings.  Carrier frequencies, antenna heights and thermal
    noise are typical values.
    """

    wifi_total_bandwidth_hz: float = 20e6
    wifi_channel_count: int = 1
    lte_total_bandwidth_hz: float = 20e6
    lte_channel_count: int = 100
    p_wifi_machine_w: float = 0.1
    p_wifi_bs_w: float = 0.1
    p_lte_machine_w: float = 0.2
    p_lte_bs_w: float = 10.0
    noise_power_w: float = THERMAL_NOISE_20MHZ_W
    rx_power_threshold_db: float = -121.0
    shadow_mean_db: float = 0.0
    shadow_std_db: float = 4.0
    fading_factor: float = 1e-4
    fading_probability: float = 0.005
    wifi_freq_hz: float = 2.4e9
    lte_freq_hz: float = 2.0e9
    machine_height_m: float = 1.5
    bs_height_m: float = 30.0

    def __post_init__(self):
        positive = (
            "wifi_total_bandwidth_hz",
            "lte_total_bandwidth_hz",
            "p_wifi_machine_w",
            "p_wifi_bs_w",
            "p_lte_machine_w",
            "p_lte_bs_w",
            "noise_power_w",
            "wifi_freq_hz",
            "lte_freq_hz",
            "machine_height_m",
            "bs_height_m",
        )
        for name in positive:
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.wifi_channel_count < 1:
            raise ValueError("wifi_channel_count must be >= 1")
        if self.lte_channel_count < 0:
            raise ValueError("lte_channel_count must be >= 0")
        if not 0.0 <= self.fading_probability <= 1.0:
            raise ValueError("fading_probability must lie in [0, 1]")
        if not 0.0 < self.fading_factor <= 1.0:
            raise ValueError("fading_factor must lie in (0, 1]")

    @property
    def wifi_bandwidth_hz(self) -> float:
        return self.wifi_total_bandwidth_hz / self.wifi_channel_count

    @property
    def lte_bandwidth_hz(self) -> float:
        """Bandwidth of one LTE channel (the total is split evenly)."""
        if self.lte_channel_count == 0:
            return 0.0
        return self.lte_total_bandwidth_hz / self.lte_channel_count

    @property
    def rx_threshold_w(self) -> float:
        return 10.0 ** (self.rx_power_threshold_db / 10.0)


@dataclass(frozen=True)
class LinkGain:
    gain: float
    distance_m: float


def crossover_distance(freq_hz: float, tx_height_m: float, rx_height_m: float) -> float:
    """Distance where the free-space and two-ray gains coincide."""
    wavelength = SPEED_OF_LIGHT / freq_hz
    return 4.0 * math.pi * tx_height_m * rx_height_m / wavelength


def path_gain_array(distance_m, freq_hz, tx_height_m, rx_height_m, shadow_db=0.0):
    """Vectorised :func:`path_gain`; returns a bare ndarray of linear gains."""
    d = np.asarray(distance_m, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    wavelength = SPEED_OF_LIGHT / freq_hz
    d_cross = 4.0 * math.pi * tx_height_m * rx_height_m / wavelength
    free_space = (wavelength / (4.0 * math.pi * d)) ** 2
    two_ray = (tx_height_m * rx_height_m) ** 2 / d**4
    gain = np.where(d < d_cross, free_space, two_ray)
    return gain * 10.0 ** (np.asarray(shadow_db, dtype=float) / 10.0)


def path_gain(
    distance_m: float,
    freq_hz: float,
    tx_height_m: float,
    rx_height_m: float,
    shadow_db: float = 0.0,
) -> LinkGain:
    """Linear power gain of a link.

    Free-space ``(lambda / 4 pi d)^2`` below the crossover distance
    ``4 pi h_t h_r / lambda``, two-ray ``(h_t h_r)^2 / d^4`` at or beyond
    it.  Log-normal shadowing enters as ``10^(shadow_db / 10)``.
    """
    if not distance_m > 0:
        raise ValueError(f"distance must be positive, got {distance_m!r}")
    g = path_gain_array(distance_m, freq_hz, tx_height_m, rx_height_m, shadow_db)
    return LinkGain(gain=float(g), distance_m=float(distance_m))


def sinr_wifi(tx, rx, active_sources, gains, params: RadioParams) -> float:
    """WiFi SINR of ``tx -> rx`` with every other active source interfering.

    ``gains`` is indexable as ``gains[a][b]`` (nested sequence or 2-D array).
    The interference sum runs over all of ``active_sources`` except ``tx``
    regardless of who is actually scheduled (worst-case interference).
    """
    p = params.p_wifi_machine_w
    interference = sum(p * gains[k][rx] for k in active_sources if k != tx)
    return p * gains[tx][rx] / (params.noise_power_w + interference)


def sinr_lte(tx, rx, gains, params: RadioParams) -> float:
    """LTE SINR towards the base station; LTE uplink sees no interference."""
    return params.p_lte_machine_w * gains[tx][rx] / params.noise_power_w


def capacity(bandwidth_hz: float, sinr: float) -> float:
    """Shannon capacity ``B log2(1 + SINR)`` in bit/s."""
    if sinr < 0:
        raise ValueError(f"SINR must be non-negative, got {sinr!r}")
    if bandwidth_hz < 0:
        raise ValueError(f"bandwidth must be non-negative, got {bandwidth_hz!r}")
    return bandwidth_hz * math.log2(1.0 + sinr)


def two_hop_capacity(c_sr: float, c_rd: float) -> float:
    """Decode-and-forward rate of a two-hop path."""
    return min(c_sr, c_rd)


def apply_fading(c_source_bs: float, alpha: float, coin: bool) -> float:
    """Attenuate a direct source-to-BS capacity by ``alpha`` when ``coin`` is set."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"fading factor must lie in (0, 1], got {alpha!r}")
    return alpha * c_source_bs if coin else c_source_bs
