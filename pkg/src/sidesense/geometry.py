"""Planar geometry shared by the whole simulator: angle wrapping, uniform
angular sectors around a receiver boresight, and mesh-grid cell indexing."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


def wrap_angle(raw: float) -> float:
    """Wrap an angle in radians into [0, 2*pi).

    Args:
        raw: angle in radians, must be finite.

    Returns:
        The congruent angle in [0, 2*pi).
    """
    raw = float(raw)
    if not math.isfinite(raw):
        raise ValueError(f"angle must be finite, got {raw!r}")
    wrapped = raw % TWO_PI
    if wrapped >= TWO_PI:
        # e.g. raw = -1e-20: the modulo rounds up to 2*pi exactly
        wrapped = 0.0
    return wrapped


def wrap_to_pi(raw: float) -> float:
    """Wrap an angle in radians into (-pi, pi]."""
    w = wrap_angle(raw)
    return w - TWO_PI if w > math.pi else w


def angle_between(frm, to) -> float:
    """Angle of the vector from point ``frm`` to point ``to``, in [0, 2*pi)."""
    dx = float(to[0]) - float(frm[0])
    dy = float(to[1]) - float(frm[1])
    return wrap_angle(math.atan2(dy, dx))


@dataclass(frozen=True)
class SectorLayout:
    """Uniform angular sectors tiling [0, 2*pi) around a local boresight.

    Sector k is centered at k * sector_width with sector 0 centered on the
    boresight (local angle 0).  Spans are half-open on the upper edge,
    [center - half_width, center + half_width), so the sectors tile the
    circle with no gaps or overlaps.
    """

    sector_count: int = 36

    def __post_init__(self):
        if int(self.sector_count) != self.sector_count or self.sector_count < 2:
            raise ValueError(f"sector_count must be an integer >= 2, got {self.sector_count}")

    @property
    def sector_width(self) -> float:
        return TWO_PI / self.sector_count

    @property
    def half_width(self) -> float:
        """Sector half-width alpha; sector_count * 2 * alpha == 2*pi."""
        return math.pi / self.sector_count

    def sector_center(self, k: int) -> float:
        if not 0 <= k < self.sector_count:
            raise ValueError(f"sector index {k} outside [0, {self.sector_count})")
        return wrap_angle(k * self.sector_width)

    @classmethod
    def from_width_deg(cls, width_deg: float) -> "SectorLayout":
        """Layout whose full sector width is ``width_deg`` degrees (must divide 360)."""
        count = 360.0 / width_deg
        if abs(count - round(count)) > 1e-9:
            raise ValueError(f"sector width {width_deg} deg does not divide 360")
        return cls(sector_count=int(round(count)))


def sector_index(layout: SectorLayout, local_aoa: float) -> int:
    """Index of the sector containing a local angle of arrival.

    Sector k spans [k*w - w/2, k*w + w/2) with w the sector width; the
    upper edge belongs to the next sector.
    """
    shifted = wrap_angle(local_aoa + layout.half_width)
    k = int(shifted // layout.sector_width)
    return min(k, layout.sector_count - 1)


@dataclass(frozen=True)
class MeshGrid:
    """Regular square mesh over the plane, used for error aggregation."""

    origin_x: float
    origin_y: float
    cell_size: float
    width_cells: int
    height_cells: int

    def __post_init__(self):
        if not (self.cell_size > 0):
            raise ValueError(f"cell_size must be > 0, got {self.cell_size}")
        if self.width_cells < 1 or self.height_cells < 1:
            raise ValueError("grid must have at least one cell per axis")

    @classmethod
    def covering_disk(cls, radius: float, cell_size: float = 3.0) -> "MeshGrid":
        """Grid of square cells covering the disk of the given radius."""
        n = int(math.ceil(2.0 * radius / cell_size))
        return cls(origin_x=-radius, origin_y=-radius, cell_size=cell_size,
                   width_cells=n, height_cells=n)

    def cell_index(self, p) -> tuple[int, int] | None:
        """Cell (i, j) containing point p, or None when p is out of range."""
        i = math.floor((float(p[0]) - self.origin_x) / self.cell_size)
        j = math.floor((float(p[1]) - self.origin_y) / self.cell_size)
        if 0 <= i < self.width_cells and 0 <= j < self.height_cells:
            return (i, j)
        return None

    def cell_center(self, i: int, j: int) -> np.ndarray:
        return np.array([self.origin_x + (i + 0.5) * self.cell_size,
                         self.origin_y + (j + 0.5) * self.cell_size])


def cell_index(grid: MeshGrid, p) -> tuple[int, int] | None:
    """Functional form of MeshGrid.cell_index."""
    return grid.cell_index(p)
