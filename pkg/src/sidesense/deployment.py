"""Random network generation: PPP base stations and UEs on a disk,
nearest-BS association, UE boresight orientations and cooperator selection."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .geometry import angle_between


@dataclass(frozen=True)
class DeploymentParams:
    """Disk radius, PPP densities and the seed of one network draw."""

    radius: float = 100.0
    bs_density: float = 8e-4
    ue_density: float = 2e-3
    seed: int = 0

    def __post_init__(self):
        if not (self.radius > 0):
            raise ValueError(f"radius must be > 0, got {self.radius}")
        if not (self.bs_density > 0 and self.ue_density > 0):
            raise ValueError("densities must be > 0")


def sample_ppp(density: float, radius: float, rng: np.random.Generator) -> np.ndarray:
    """Homogeneous PPP on a disk: Poisson(density*pi*R^2) points, uniform.

    Returns:
        (n, 2) array of positions; n may be 0.
    """
    if not (density > 0 and radius > 0):
        raise ValueError("density and radius must be > 0")
    n = rng.poisson(density * math.pi * radius * radius)
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, size=n))
    phi = rng.uniform(0.0, 2.0 * math.pi, size=n)
    return np.column_stack([r * np.cos(phi), r * np.sin(phi)])


@dataclass
class NetworkDeployment:
    """One sampled network: positions, associations and orientations.

    UE index 0 is the typical UE u0 at the origin.  Every UE is associated
    with its closest BS and its boresight orientation points at it.
    bs_schedule lists, per BS, the UE indices it serves (ascending).
    """

    bs_xy: np.ndarray
    ue_xy: np.ndarray
    serving_bs: np.ndarray
    ue_orientation: np.ndarray
    bs_schedule: list
    params: DeploymentParams | None = None

    @property
    def num_bs(self) -> int:
        return len(self.bs_xy)

    @property
    def num_ue(self) -> int:
        return len(self.ue_xy)

    @classmethod
    def from_positions(cls, bs_xy, ue_xy,
                       params: DeploymentParams | None = None) -> "NetworkDeployment":
        """Build associations, orientations and schedules from raw positions."""
        bs_xy = np.atleast_2d(np.asarray(bs_xy, dtype=float))
        ue_xy = np.atleast_2d(np.asarray(ue_xy, dtype=float))
        if len(bs_xy) == 0:
            raise ValueError("at least one BS required")
        # argmin ties resolve to the lowest BS index
        d2 = ((ue_xy[:, None, :] - bs_xy[None, :, :]) ** 2).sum(axis=2)
        serving = d2.argmin(axis=1)
        orient = np.array([angle_between(ue_xy[i], bs_xy[serving[i]])
                           for i in range(len(ue_xy))])
        schedule = [[] for _ in range(len(bs_xy))]
        for ue, bs in enumerate(serving):
            schedule[bs].append(ue)
        return cls(bs_xy=bs_xy, ue_xy=ue_xy, serving_bs=serving,
                   ue_orientation=orient, bs_schedule=schedule, params=params)

    def save(self, path):
        """Serialize positions, associations and seed to a JSON text file."""
        payload = {
            "bs_xy": self.bs_xy.tolist(),
            "ue_xy": self.ue_xy.tolist(),
            "serving_bs": self.serving_bs.tolist(),
            "ue_orientation": self.ue_orientation.tolist(),
            "params": None if self.params is None else {
                "radius": self.params.radius,
                "bs_density": self.params.bs_density,
                "ue_density": self.params.ue_density,
                "seed": self.params.seed,
            },
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=1)

    @classmethod
    def load(cls, path) -> "NetworkDeployment":
        with open(path) as fh:
            payload = json.load(fh)
        params = None
        if payload.get("params") is not None:
            params = DeploymentParams(**payload["params"])
        dep = cls.from_positions(payload["bs_xy"], payload["ue_xy"], params=params)
        # sanity: the stored association must match the nearest-BS rule
        if not np.array_equal(dep.serving_bs, np.asarray(payload["serving_bs"])):
            raise ValueError(f"{path}: stored associations are not nearest-BS")
        return dep


def build_deployment(params: DeploymentParams,
                     rng: np.random.Generator | None = None,
                     max_resamples: int = 1000) -> NetworkDeployment:
    """Sample BS and UE point processes and derive associations.

    The typical UE u0 is placed at the origin ahead of the PPP UEs.  Draws
    with zero base stations are resampled; pathological densities that keep
    producing empty BS sets raise after ``max_resamples`` attempts.
    """
    if rng is None:
        rng = np.random.default_rng(params.seed)
    for _ in range(max_resamples):
        bs_xy = sample_ppp(params.bs_density, params.radius, rng)
        ue_xy = sample_ppp(params.ue_density, params.radius, rng)
        if len(bs_xy) == 0:
            continue
        ue_xy = np.vstack([np.zeros((1, 2)), ue_xy])
        return NetworkDeployment.from_positions(bs_xy, ue_xy, params=params)
    raise RuntimeError(
        f"no base station drawn after {max_resamples} resamples "
        f"(bs_density={params.bs_density}, radius={params.radius})")


def select_cooperators(dep: NetworkDeployment, n_neighbors: int,
                       include_typical: bool = True) -> np.ndarray:
    """Indices of u0's cooperation set: the n_neighbors nearest UEs.

    Ties in distance break toward the lower UE index.  With
    ``include_typical`` (default) u0 itself leads the returned array, so
    the set has n_neighbors + 1 entries.
    """
    available = dep.num_ue - 1
    if n_neighbors > available:
        raise ValueError(
            f"requested {n_neighbors} cooperators but only {available} other UEs exist")
    if n_neighbors < 0:
        raise ValueError("n_neighbors must be >= 0")
    d = np.hypot(dep.ue_xy[1:, 0], dep.ue_xy[1:, 1])
    order = 1 + np.argsort(d, kind="stable")[:n_neighbors]
    if include_typical:
        return np.concatenate([[0], order]).astype(int)
    return order.astype(int)
