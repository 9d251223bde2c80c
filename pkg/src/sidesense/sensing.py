"""Per-UE sector-aggregated interference, S-SINR rows and the rolling
sensing matrix, plus a vectorized engine computing rows for a whole
cooperator set at once."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import (Link, RadioParams, BlockerState, antenna_gain,
                      blocker_shadowing_many, nakagami_power_fading,
                      pathloss_gain, rx_power)
from .deployment import NetworkDeployment
from .geometry import SectorLayout, angle_between, sector_index, wrap_angle


@dataclass(frozen=True)
class InterferenceContribution:
    """One interferer as seen by a receiving UE."""

    source_bs: int
    aoa_local: float
    power: float

    def __post_init__(self):
        if self.power < 0:
            raise ValueError(f"interference power must be >= 0, got {self.power}")


def round_robin_target(dep: NetworkDeployment, bs: int, step: int) -> int:
    """UE index the BS beams at during this step, or -1 when it is silent."""
    sched = dep.bs_schedule[bs]
    if not sched:
        return -1
    return sched[step % len(sched)]


def scheduled_targets(dep: NetworkDeployment, step: int) -> np.ndarray:
    """Round-robin target UE per BS for one step (-1 = silent BS)."""
    return np.array([round_robin_target(dep, b, step) for b in range(dep.num_bs)],
                    dtype=int)


def shared_tx_gain(bs: int, toward, dep: NetworkDeployment, radio: RadioParams) -> float:
    """Schedule-averaged tx gain of a BS toward a point.

    Models a scheduler that time-shares the beam among the BS's UEs much
    faster than the sensing step, so one sensing sample sees the average
    of the per-target flat-top gains.
    """
    sched = dep.bs_schedule[bs]
    if not sched:
        return 0.0
    here = angle_between(dep.bs_xy[bs], toward)
    total = 0.0
    for u in sched:
        off = here - angle_between(dep.bs_xy[bs], dep.ue_xy[u])
        total += antenna_gain(off, radio.tx_beamwidth, radio.g_main_tx, radio.g_side_tx)
    return total / len(sched)


def interference_contributions(ue: int, dep: NetworkDeployment, radio: RadioParams,
                               targets: np.ndarray | None = None,
                               blocker: BlockerState | None = None,
                               rng: np.random.Generator | None = None) -> list:
    """Interference seen by one UE for one sensing step.

    Every active BS except the UE's serving BS contributes one entry; the
    receive pattern is the UE's own (boresight at its serving BS).  With
    explicit per-BS beam ``targets`` the tx beam points at that scheduled
    UE (one scheduling snapshot); with targets None the tx gain is the
    schedule average (fast time-shared scheduler).  Zero-power entries
    (e.g. arrivals outside the rx main lobe when the side gain is 0) are
    retained.
    """
    rx = dep.ue_xy[ue]
    orientation = dep.ue_orientation[ue]
    out = []
    for bs in range(dep.num_bs):
        if bs == dep.serving_bs[ue] or not dep.bs_schedule[bs]:
            continue
        if targets is not None and targets[bs] < 0:
            continue
        if targets is not None:
            tx_dir = angle_between(dep.bs_xy[bs], dep.ue_xy[targets[bs]])
            link = Link(tuple(dep.bs_xy[bs]), tuple(rx), tx_dir, orientation)
            p = rx_power(link, radio, blocker=blocker, rng=rng)
        else:
            g_tx = shared_tx_gain(bs, rx, dep, radio)
            link = Link(tuple(dep.bs_xy[bs]), tuple(rx), 0.0, orientation)
            p = rx_power(link, radio, blocker=blocker, rng=rng, tx_gain=g_tx)
        aoa = wrap_angle(angle_between(rx, dep.bs_xy[bs]) - orientation)
        out.append(InterferenceContribution(source_bs=bs, aoa_local=aoa, power=p))
    return out


def sector_interference(contribs, layout: SectorLayout) -> np.ndarray:
    """Aggregate contribution powers into per-sector sums I_k."""
    sums = np.zeros(layout.sector_count)
    for c in contribs:
        sums[sector_index(layout, c.aoa_local)] += c.power
    return sums


def serving_power(ue: int, dep: NetworkDeployment, radio: RadioParams,
                  blocker: BlockerState | None = None,
                  rng: np.random.Generator | None = None) -> float:
    """Received power on the UE's serving link (beams aligned both ends)."""
    bs = dep.serving_bs[ue]
    link = Link(tuple(dep.bs_xy[bs]), tuple(dep.ue_xy[ue]),
                angle_between(dep.bs_xy[bs], dep.ue_xy[ue]),
                dep.ue_orientation[ue])
    return rx_power(link, radio, blocker=blocker, rng=rng)


def s_sinr_row(ue: int, dep: NetworkDeployment, radio: RadioParams,
               layout: SectorLayout, step: int,
               blocker: BlockerState | None = None,
               rng: np.random.Generator | None = None,
               scheduling: str = "shared") -> np.ndarray:
    """One row of per-sector S-SINR for a UE at one time step.

    gamma_k = P_Rx / (I_k + N0*B) with P_Rx the (possibly shadowed, faded)
    serving-link power and I_k the sector-aggregated interference.  With
    scheduling='shared' (default) interfering BSs radiate their
    schedule-averaged gain; 'round_robin' snapshots each BS beaming at its
    round-robin target of this step.
    """
    p_rx = serving_power(ue, dep, radio, blocker=blocker, rng=rng)
    targets = scheduled_targets(dep, step) if scheduling == "round_robin" else None
    contribs = interference_contributions(ue, dep, radio, targets,
                                          blocker=blocker, rng=rng)
    i_k = sector_interference(contribs, layout)
    return p_rx / (i_k + radio.noise_power_w)


class SensingMatrix:
    """Rolling (tau+1) x (n+1) window of S-SINR rows for one UE.

    Rows are pushed with strictly increasing timestamps; the export is
    newest-first (row 0 = time t, last row = t - tau).
    """

    def __init__(self, capacity: int, sector_count: int, owner_ue: int = 0):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self.sector_count = sector_count
        self.owner_ue = owner_ue
        self._rows = []
        self._times = []

    def __len__(self):
        return len(self._rows)

    @property
    def full(self) -> bool:
        return len(self._rows) == self.capacity

    def push(self, row, timestamp: float):
        row = np.asarray(row, dtype=float).reshape(-1)
        if row.shape[0] != self.sector_count:
            raise ValueError(f"row has {row.shape[0]} sectors, expected {self.sector_count}")
        if not np.all(np.isfinite(row)) or np.any(row <= 0):
            raise ValueError("S-SINR entries must be finite and > 0")
        if self._times and timestamp <= self._times[-1]:
            raise ValueError(
                f"timestamp {timestamp} not after previous {self._times[-1]}")
        self._rows.append(row)
        self._times.append(float(timestamp))
        if len(self._rows) > self.capacity:
            self._rows.pop(0)
            self._times.pop(0)

    def export(self) -> np.ndarray:
        """(rows, sectors) array, newest row first."""
        return np.asarray(self._rows[::-1])

    def timestamps(self) -> np.ndarray:
        """Timestamps matching export() order (newest first)."""
        return np.asarray(self._times[::-1])

    def to_csv(self, path):
        """Dump the window in dB, one line per row (newest first)."""
        mat_db = 10.0 * np.log10(self.export())
        times = self.timestamps()
        with open(path, "w") as fh:
            cols = ",".join(f"s{k}" for k in range(self.sector_count))
            fh.write(f"t,{cols}\n")
            for t, row in zip(times, mat_db):
                fh.write(f"{t:.3f}," + ",".join(f"{v:.6f}" for v in row) + "\n")


def push_row(matrix: SensingMatrix, row, timestamp: float) -> SensingMatrix:
    """Functional form of SensingMatrix.push; returns the matrix."""
    matrix.push(row, timestamp)
    return matrix


class SensingEngine:
    """Precomputed link tables for fast per-step rows of a cooperator set.

    The network is static, so distances, pathlosses, receive gains and
    sector assignments are fixed; only fading draws, blocker shadowing
    and (in round_robin mode) the per-BS beam target change per step.
    Produces the same rows as s_sinr_row for fixed fading (zeta = 1).
    """

    def __init__(self, dep: NetworkDeployment, radio: RadioParams,
                 layout: SectorLayout, ue_indices, scheduling: str = "shared"):
        if scheduling not in ("shared", "round_robin"):
            raise ValueError(f"unknown scheduling mode {scheduling!r}")
        self.scheduling = scheduling
        self.dep = dep
        self.radio = radio
        self.layout = layout
        self.ue_indices = np.asarray(ue_indices, dtype=int)
        rx = dep.ue_xy[self.ue_indices]                      # (C, 2)
        self.rx = rx
        serving = dep.serving_bs[self.ue_indices]
        self.serving_bs_xy = dep.bs_xy[serving]
        orient = dep.ue_orientation[self.ue_indices]

        d_serv = np.hypot(*(rx - self.serving_bs_xy).T)
        gh_serv = np.array([pathloss_gain(d, radio.min_distance_m) for d in d_serv])
        self.serv_const = radio.tx_power_w * radio.g_main_tx * gh_serv * radio.g_main_rx

        diff = dep.bs_xy[None, :, :] - rx[:, None, :]        # (C, M, 2)
        d = np.hypot(diff[:, :, 0], diff[:, :, 1])
        d = np.maximum(d, radio.min_distance_m)
        gh = 10.0 ** (-(60.1 + 14.0 * np.log10(d / 1000.0)) / 10.0)
        aoa_global = np.arctan2(diff[:, :, 1], diff[:, :, 0])
        rx_off = (aoa_global - orient[:, None] + np.pi) % (2.0 * np.pi) - np.pi
        g_rx = np.where(np.abs(rx_off) <= radio.rx_beamwidth / 2.0,
                        radio.g_main_rx, radio.g_side_rx)
        aoa_local = np.mod(aoa_global - orient[:, None], 2.0 * np.pi)
        shifted = np.mod(aoa_local + layout.half_width, 2.0 * np.pi)
        self.sector_of_bs = np.minimum((shifted // layout.sector_width).astype(int),
                                       layout.sector_count - 1)
        self.angle_bs_to_ue = np.mod(aoa_global + np.pi, 2.0 * np.pi)   # (C, M)

        active = np.array([len(s) > 0 for s in dep.bs_schedule])
        self.interferer = active[None, :] & (np.arange(dep.num_bs)[None, :] != serving[:, None])
        self.int_const = radio.tx_power_w * gh * g_rx
        # per-BS angles toward each UE in its schedule, for beam lookups
        self.target_angles = [
            np.array([angle_between(dep.bs_xy[b], dep.ue_xy[u]) for u in sched])
            if sched else np.empty(0)
            for b, sched in enumerate(dep.bs_schedule)
        ]
        self._flat_rows = np.repeat(np.arange(len(self.ue_indices)), dep.num_bs)
        if scheduling == "shared":
            # schedule-averaged tx gain of every BS toward every cooperator
            shared = np.zeros((len(self.ue_indices), dep.num_bs))
            for b, angles in enumerate(self.target_angles):
                if len(angles) == 0:
                    continue
                off = (self.angle_bs_to_ue[:, b:b + 1] - angles[None, :]
                       + np.pi) % (2.0 * np.pi) - np.pi
                g = np.where(np.abs(off) <= radio.tx_beamwidth / 2.0,
                             radio.g_main_tx, radio.g_side_tx)
                shared[:, b] = g.mean(axis=1)
            self._shared_tx = shared

    def _tx_gains(self, step: int) -> np.ndarray:
        if self.scheduling == "shared":
            return self._shared_tx
        tgt = np.array([a[step % len(a)] if len(a) else np.nan
                        for a in self.target_angles])
        off = (self.angle_bs_to_ue - tgt[None, :] + np.pi) % (2.0 * np.pi) - np.pi
        with np.errstate(invalid="ignore"):
            main = np.abs(off) <= self.radio.tx_beamwidth / 2.0
        return np.where(main, self.radio.g_main_tx, self.radio.g_side_tx)

    def rows(self, step: int, blocker: BlockerState | None = None,
             rng: np.random.Generator | None = None) -> np.ndarray:
        """(C, n+1) S-SINR rows for all cooperators at one step.

        Fading draws are ordered serving-links first, then the (C, M)
        interference block, from the supplied generator.
        """
        c = len(self.ue_indices)
        m = self.dep.num_bs
        radio = self.radio
        if rng is None:
            zeta_serv = np.ones(c)
            zeta_int = np.ones((c, m))
        else:
            zeta_serv = nakagami_power_fading(radio.nakagami_m, rng, size=c)
            zeta_int = nakagami_power_fading(radio.nakagami_m, rng, size=(c, m))
        if blocker is None:
            chi_serv = np.ones(c)
            chi_int = np.ones((c, m))
        else:
            chi_serv = blocker_shadowing_many(self.rx, self.serving_bs_xy, blocker,
                                              radio.blockage_attenuation_db)
            rx_rep = np.repeat(self.rx, m, axis=0)
            tx_rep = np.tile(self.dep.bs_xy, (c, 1))
            chi_int = blocker_shadowing_many(rx_rep, tx_rep, blocker,
                                             radio.blockage_attenuation_db).reshape(c, m)
        p_serv = self.serv_const * zeta_serv * chi_serv
        p_int = self.int_const * self._tx_gains(step) * zeta_int * chi_int
        p_int = np.where(self.interferer, p_int, 0.0)
        sums = np.zeros((c, self.layout.sector_count))
        np.add.at(sums, (self._flat_rows, self.sector_of_bs.ravel()), p_int.ravel())
        return p_serv[:, None] / (sums + radio.noise_power_w)
