"""Link-level radio model: measured-profile pathloss, flat-top antenna
patterns, Nakagami power fading and the angular blockage-shadowing profile
of a moving cylindrical object."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import wrap_to_pi


def flat_top_peak_gain(beamwidth: float) -> float:
    """Reference gain G0(z) = pi / (21.32 z + pi) for beamwidth z in radians."""
    if not (0.0 < beamwidth < 2.0 * math.pi):
        raise ValueError(f"beamwidth must be in (0, 2*pi) rad, got {beamwidth}")
    return math.pi / (21.32 * beamwidth + math.pi)


# Ratio between main-lobe and reference gain in the tabulated pattern.
MAIN_LOBE_BOOST = 10.0 ** 2.028


@dataclass
class RadioParams:
    """Radio constants of one simulation run.

    Defaults reproduce the standard parameter table of the target scenario:
    28 GHz carrier, 400 MHz bandwidth, 33 dBm BS transmit power, -174 dBm/Hz
    noise PSD, Nakagami m=3 fading, 10 deg Tx / 135 deg Rx flat-top beams
    and 100 dB full blockage attenuation.  Gains left as None are derived
    from the beamwidths via G0; pass explicit values to override.
    """

    carrier_hz: float = 28e9
    bandwidth_hz: float = 400e6
    tx_power_dbm: float = 33.0
    noise_psd_dbm_hz: float = -174.0
    nakagami_m: float = 3.0
    tx_beamwidth: float = math.radians(10.0)
    rx_beamwidth: float = math.radians(135.0)
    g_main_tx: float | None = None
    g_side_tx: float | None = None
    g_main_rx: float | None = None
    g_side_rx: float | None = None
    blockage_attenuation_db: float = 100.0
    min_distance_m: float = 1.0

    def __post_init__(self):
        if not (self.bandwidth_hz > 0):
            raise ValueError(f"bandwidth_hz must be > 0, got {self.bandwidth_hz}")
        if not (self.nakagami_m >= 0.5):
            raise ValueError(f"nakagami_m must be >= 0.5, got {self.nakagami_m}")
        for name in ("tx_beamwidth", "rx_beamwidth"):
            bw = getattr(self, name)
            if not (0.0 < bw < 2.0 * math.pi):
                raise ValueError(f"{name} must be in (0, 2*pi) rad, got {bw}")
        if self.g_side_tx is None:
            self.g_side_tx = flat_top_peak_gain(self.tx_beamwidth)
        if self.g_main_tx is None:
            self.g_main_tx = flat_top_peak_gain(self.tx_beamwidth) * MAIN_LOBE_BOOST
        if self.g_side_rx is None:
            self.g_side_rx = 0.0
        if self.g_main_rx is None:
            self.g_main_rx = 2.0 * flat_top_peak_gain(self.rx_beamwidth) * MAIN_LOBE_BOOST
        for name in ("g_main_tx", "g_side_tx", "g_main_rx", "g_side_rx"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not (self.min_distance_m > 0):
            raise ValueError(f"min_distance_m must be > 0, got {self.min_distance_m}")

    @property
    def tx_power_w(self) -> float:
        return 10.0 ** ((self.tx_power_dbm - 30.0) / 10.0)

    @property
    def noise_power_w(self) -> float:
        """Thermal noise power N0 * B in watts."""
        return 10.0 ** ((self.noise_psd_dbm_hz - 30.0) / 10.0) * self.bandwidth_hz


@dataclass(frozen=True)
class Link:
    """One directed radio link with fixed beam pointing at both ends."""

    tx_pos: tuple
    rx_pos: tuple
    tx_beam_dir: float
    rx_beam_dir: float

    def __post_init__(self):
        tx = np.asarray(self.tx_pos, dtype=float)
        rx = np.asarray(self.rx_pos, dtype=float)
        if not (np.all(np.isfinite(tx)) and np.all(np.isfinite(rx))):
            raise ValueError("link endpoints must be finite")
        if np.array_equal(tx, rx):
            raise ValueError("tx and rx positions must differ")


@dataclass
class BlockerState:
    """Moving cylindrical blocker: position, velocity vector and radius."""

    pos: np.ndarray
    velocity: np.ndarray
    radius: float

    def __post_init__(self):
        self.pos = np.asarray(self.pos, dtype=float).reshape(2)
        self.velocity = np.asarray(self.velocity, dtype=float).reshape(2)
        if not np.all(np.isfinite(self.pos)):
            raise ValueError("blocker position must be finite")
        if not (self.radius > 0):
            raise ValueError(f"blocker radius must be > 0, got {self.radius}")

    @property
    def shadow_spread(self) -> float:
        """Lateral shadow profile spread sigma_B = sqrt(8) * radius, meters."""
        return math.sqrt(8.0) * self.radius


def pathloss_gain(d: float, min_distance: float = 1.0) -> float:
    """Linear pathloss gain for the measured profile 60.1 + 14*log10(d [km]).

    Distances below ``min_distance`` are clamped to it so the gain stays
    bounded for near-coincident nodes.
    """
    d = max(float(d), min_distance)
    loss_db = 60.1 + 14.0 * math.log10(d / 1000.0)
    return 10.0 ** (-loss_db / 10.0)


def antenna_gain(offset: float, beamwidth: float, g_main: float, g_side: float) -> float:
    """Flat-top pattern: main gain within +-beamwidth/2 of boresight, else side."""
    off = wrap_to_pi(offset)
    return g_main if abs(off) <= beamwidth / 2.0 else g_side


def nakagami_power_fading(m: float, rng: np.random.Generator, size=None):
    """Unit-mean power fading of a Nakagami-m envelope: Gamma(m, 1/m) draws."""
    if not (m >= 0.5):
        raise ValueError(f"nakagami m must be >= 0.5, got {m}")
    return rng.gamma(shape=m, scale=1.0 / m, size=size)


def shadow_attenuation_db(offset: float, sigma: float, full_db: float) -> float:
    """Lateral shadowing profile in dB: full_db * exp(-offset^2 / sigma^2).

    ``offset`` is the blocker center's perpendicular distance from the
    link line and ``sigma`` its spread, both in meters; the exponent is
    offset^2 / (8 r_B^2) for sigma = sqrt(8) r_B.
    """
    return full_db * math.exp(-(offset * offset) / (sigma * sigma))


def blocker_shadowing(link: Link, blocker: BlockerState,
                      attenuation_db: float = 100.0) -> float:
    """Shadowing coefficient chi in (0, 1] for one link and one blocker.

    The blocker only obstructs when its center projects onto the tx-rx
    segment; the attenuation then follows a Gaussian profile in the
    perpendicular offset of its center from the link line, with spread
    sigma = sqrt(8) * blocker radius (meters) and peak ``attenuation_db``.
    """
    tx = np.asarray(link.tx_pos, dtype=float)
    rx = np.asarray(link.rx_pos, dtype=float)
    seg = tx - rx
    rel = blocker.pos - rx
    seg_norm2 = float(np.dot(seg, seg))
    t = float(np.dot(rel, seg)) / seg_norm2
    if not (0.0 <= t <= 1.0):
        return 1.0
    offset = abs(rel[0] * seg[1] - rel[1] * seg[0]) / math.sqrt(seg_norm2)
    att_db = shadow_attenuation_db(offset, blocker.shadow_spread, attenuation_db)
    return 10.0 ** (-att_db / 10.0)


def blocker_shadowing_many(rx_xy: np.ndarray, tx_xy: np.ndarray,
                           blocker: BlockerState,
                           attenuation_db: float = 100.0) -> np.ndarray:
    """Vectorized blocker_shadowing over stacked links.

    Args:
        rx_xy: (L, 2) receiver positions.
        tx_xy: (L, 2) transmitter positions.

    Returns:
        (L,) array of shadowing coefficients chi in (0, 1].
    """
    rx_xy = np.asarray(rx_xy, dtype=float)
    tx_xy = np.asarray(tx_xy, dtype=float)
    seg = tx_xy - rx_xy
    rel = blocker.pos[None, :] - rx_xy
    denom = np.einsum("ij,ij->i", seg, seg)
    t = np.einsum("ij,ij->i", rel, seg) / denom
    inside = (t >= 0.0) & (t <= 1.0)
    offset = np.abs(rel[:, 0] * seg[:, 1] - rel[:, 1] * seg[:, 0]) / np.sqrt(denom)
    sigma = blocker.shadow_spread
    att_db = attenuation_db * np.exp(-(offset * offset) / (sigma * sigma))
    chi = np.where(inside, 10.0 ** (-att_db / 10.0), 1.0)
    return chi


def rx_power(link: Link, radio: RadioParams, blocker: BlockerState | None = None,
             rng: np.random.Generator | None = None,
             tx_gain: float | None = None) -> float:
    """Received power in watts for one link.

    P_Rx = chi * zeta * P_Tx * G_Tx * G_H(d) * G_Rx, all in linear units.
    With ``rng`` None the fading factor zeta is fixed to 1.  ``tx_gain``
    replaces the flat-top tx pattern lookup (e.g. a schedule-averaged
    gain).
    """
    tx = np.asarray(link.tx_pos, dtype=float)
    rx = np.asarray(link.rx_pos, dtype=float)
    d = float(np.hypot(*(rx - tx)))
    g_h = pathloss_gain(d, radio.min_distance_m)
    if tx_gain is None:
        tx_offset = math.atan2(rx[1] - tx[1], rx[0] - tx[0]) - link.tx_beam_dir
        g_tx = antenna_gain(tx_offset, radio.tx_beamwidth, radio.g_main_tx, radio.g_side_tx)
    else:
        g_tx = tx_gain
    rx_offset = math.atan2(tx[1] - rx[1], tx[0] - rx[0]) - link.rx_beam_dir
    g_rx = antenna_gain(rx_offset, radio.rx_beamwidth, radio.g_main_rx, radio.g_side_rx)
    zeta = 1.0 if rng is None else float(nakagami_power_fading(radio.nakagami_m, rng))
    chi = 1.0 if blocker is None else blocker_shadowing(link, blocker,
                                                        radio.blockage_attenuation_db)
    return chi * zeta * radio.tx_power_w * g_tx * g_h * g_rx
