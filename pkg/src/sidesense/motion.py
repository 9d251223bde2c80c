"""Blocker motion models: random waypoint on the disk, boustrophedon raster
scan of a centered square, and explicit waypoint lists."""

from __future__ import annotations

import math

import numpy as np

from .channel import BlockerState


class WaypointList:
    """Piecewise-linear motion through fixed points at constant speed.

    The blocker starts at the first point and stops at the last (a single
    point means it never moves).  With ``loop`` it cycles back to the
    first point instead of stopping.
    """

    def __init__(self, points, speed: float, loop: bool = False):
        self.points = np.atleast_2d(np.asarray(points, dtype=float))
        if len(self.points) < 1:
            raise ValueError("waypoint list must contain at least one point")
        if not (speed > 0):
            raise ValueError(f"speed must be > 0, got {speed}")
        self.speed = float(speed)
        self.loop = loop
        self._next = 1 if len(self.points) > 1 else 0

    def initial_state(self, blocker_radius: float, rng=None) -> BlockerState:
        return BlockerState(pos=self.points[0].copy(), velocity=np.zeros(2),
                            radius=blocker_radius)

    def step(self, state: BlockerState, dt: float, rng=None) -> BlockerState:
        pos = state.pos.copy()
        remaining = self.speed * dt
        while remaining > 0:
            if self._next >= len(self.points):
                return BlockerState(pos=pos, velocity=np.zeros(2), radius=state.radius)
            target = self.points[self._next]
            leg = target - pos
            dist = float(np.hypot(leg[0], leg[1]))
            if dist <= remaining:
                pos = target.copy()
                remaining -= dist
                self._next += 1
                if self.loop and self._next >= len(self.points):
                    self._next = 0
            else:
                pos = pos + leg * (remaining / dist)
                remaining = 0.0
        direction = self.points[self._next] - pos if self._next < len(self.points) else np.zeros(2)
        norm = float(np.hypot(direction[0], direction[1]))
        vel = direction / norm * self.speed if norm > 0 else np.zeros(2)
        return BlockerState(pos=pos, velocity=vel, radius=state.radius)


class RandomWaypoint:
    """Move toward uniformly redrawn waypoints in the disk, at a speed
    redrawn uniformly from ``speed_range`` on each arrival."""

    def __init__(self, speed_range=(0.5, 2.0), disk_radius: float = 100.0):
        lo, hi = float(speed_range[0]), float(speed_range[1])
        if not (0 < lo <= hi):
            raise ValueError(f"invalid speed range {speed_range}")
        self.speed_range = (lo, hi)
        self.disk_radius = float(disk_radius)
        self._target = None
        self._speed = None

    def _draw_point(self, rng) -> np.ndarray:
        r = self.disk_radius * math.sqrt(rng.uniform())
        phi = rng.uniform(0.0, 2.0 * math.pi)
        return np.array([r * math.cos(phi), r * math.sin(phi)])

    def _redraw(self, rng):
        self._target = self._draw_point(rng)
        self._speed = rng.uniform(*self.speed_range)

    def initial_state(self, blocker_radius: float, rng=None) -> BlockerState:
        pos = self._draw_point(rng)
        self._redraw(rng)
        return BlockerState(pos=pos, velocity=np.zeros(2), radius=blocker_radius)

    def step(self, state: BlockerState, dt: float, rng=None) -> BlockerState:
        pos = state.pos.copy()
        remaining = dt
        while remaining > 0:
            leg = self._target - pos
            dist = float(np.hypot(leg[0], leg[1]))
            travel = self._speed * remaining
            if dist <= travel:
                pos = self._target.copy()
                remaining -= dist / self._speed
                self._redraw(rng)
            else:
                pos = pos + leg * (travel / dist)
                remaining = 0.0
        leg = self._target - pos
        norm = float(np.hypot(leg[0], leg[1]))
        vel = leg / norm * self._speed if norm > 0 else np.zeros(2)
        return BlockerState(pos=pos, velocity=vel, radius=state.radius)


def raster_waypoints(square_side: float, lane_spacing: float) -> np.ndarray:
    """Boustrophedon lane corners covering a square centered on the origin.

    Lanes run along x at y = -side/2, -side/2 + spacing, ... alternating
    direction; with spacing equal to the evaluation cell size every cell
    of the square is traversed.
    """
    if not (square_side > 0 and lane_spacing > 0):
        raise ValueError("square side and lane spacing must be > 0")
    half = square_side / 2.0
    n_lanes = int(math.floor(square_side / lane_spacing)) + 1
    pts = []
    for k in range(n_lanes):
        y = -half + k * lane_spacing
        if k % 2 == 0:
            pts.append([-half, y])
            pts.append([half, y])
        else:
            pts.append([half, y])
            pts.append([-half, y])
    return np.array(pts)


class RasterScan(WaypointList):
    """Scan a centered square along boustrophedon lanes at constant speed."""

    def __init__(self, square_side: float, speed: float, lane_spacing: float = 3.0):
        super().__init__(raster_waypoints(square_side, lane_spacing), speed, loop=True)
        self.square_side = float(square_side)
        self.lane_spacing = float(lane_spacing)

    def path_length(self) -> float:
        legs = np.diff(self.points, axis=0)
        return float(np.hypot(legs[:, 0], legs[:, 1]).sum())


def step_motion(model, state: BlockerState, dt: float, rng=None) -> BlockerState:
    """Advance a blocker one time step under the given motion model."""
    if not (dt > 0):
        raise ValueError(f"dt must be > 0, got {dt}")
    return model.step(state, dt, rng)
