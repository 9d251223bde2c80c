"""Cooperative bearing fusion: expected closest points on uncertain bearing
lines and the closed-form least-squares position estimate, with independent
numerical oracles (quadrature objective, grid search, Monte Carlo)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import wrap_angle

ALPHA_MAX = math.pi / 4.0


class FusionSingularError(ValueError):
    """Raised when the fusion normal equations are numerically singular."""


@dataclass(frozen=True)
class BearingEstimate:
    """One cooperator's contribution: position, bearing and sector half-width."""

    x: float
    y: float
    theta: float
    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("bearing anchor must be finite")
        if not (0.0 < self.alpha <= ALPHA_MAX):
            raise ValueError(f"alpha must be in (0, pi/4], got {self.alpha}")
        object.__setattr__(self, "theta", wrap_angle(self.theta))

    @property
    def anchor(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True)
class SectorCoeffs:
    """Closed-form averages of the projection weights over the sector."""

    a0: float
    a1: float
    a2: float


def sector_coeffs(theta: float, alpha: float) -> SectorCoeffs:
    """Coefficients of the expected closest point for a bearing of
    orientation theta and half-width alpha:

        a0 = alpha + cos(2 theta) sin(2 alpha) / 2
        a1 =         sin(2 theta) sin(2 alpha) / 2
        a2 = alpha - cos(2 theta) sin(2 alpha) / 2

    They satisfy a0 + a2 = 2 alpha and a0 a2 - a1^2 = alpha^2 -
    sin^2(2 alpha)/4 > 0 for alpha in (0, pi/4].
    """
    if not (0.0 < alpha <= ALPHA_MAX):
        raise ValueError(f"alpha must be in (0, pi/4], got {alpha}")
    half_sin = 0.5 * math.sin(2.0 * alpha)
    return SectorCoeffs(a0=alpha + math.cos(2.0 * theta) * half_sin,
                        a1=math.sin(2.0 * theta) * half_sin,
                        a2=alpha - math.cos(2.0 * theta) * half_sin)


def closest_point_on_line(anchor, slope_angle: float, target) -> np.ndarray:
    """Point on the line through ``anchor`` with slope tan(slope_angle)
    closest to ``target``, via the tangent closed form.

    Near-vertical lines (|cos| < 1e-12) use the limit form (x_anchor,
    y_target).
    """
    x_i, y_i = float(anchor[0]), float(anchor[1])
    x_t, y_t = float(target[0]), float(target[1])
    if abs(math.cos(slope_angle)) < 1e-12:
        return np.array([x_i, y_t])
    a = math.tan(slope_angle)
    denom = 1.0 + a * a
    x = (x_t + a * y_t - a * y_i + a * a * x_i) / denom
    y = (a * x_t + a * a * y_t + y_i - a * x_i) / denom
    return np.array([x, y])


def expected_closest_point(target, bearing: BearingEstimate) -> np.ndarray:
    """Expectation over the sector of the closest point on the bearing line.

    Averages the projection of ``target`` onto the line through the bearing
    anchor with slope tan(theta + eps), eps uniform on (-alpha, alpha).
    """
    c = sector_coeffs(bearing.theta, bearing.alpha)
    x_t, y_t = float(target[0]), float(target[1])
    s = 1.0 / (2.0 * bearing.alpha)
    ex = s * (c.a0 * x_t + c.a1 * y_t - c.a1 * bearing.y + c.a2 * bearing.x)
    ey = s * (c.a1 * x_t + c.a2 * y_t + c.a0 * bearing.y - c.a1 * bearing.x)
    return np.array([ex, ey])


def fusion_system(bearings) -> tuple[np.ndarray, np.ndarray]:
    """Normal equations of the least-squares fusion.

    Each bearing contributes its coefficient matrix [[a2, -a1], [-a1, a0]]
    and right-hand side (a2 x - a1 y, -a1 x + a0 y), weighted by
    1/(2 alpha): the expected squared distance to the bearing line is the
    sector average of the squared distance, so sensors enter the objective
    with that normalization.  For a common alpha the weight cancels and
    the system is exactly the unweighted coefficient-sum form.  The matrix
    is positive definite for any non-empty set with alpha in (0, pi/4].
    """
    if not bearings:
        raise ValueError("at least one bearing required")
    m = np.zeros((2, 2))
    b = np.zeros(2)
    for br in bearings:
        c = sector_coeffs(br.theta, br.alpha)
        w = 1.0 / (2.0 * br.alpha)
        m += w * np.array([[c.a2, -c.a1], [-c.a1, c.a0]])
        b += w * np.array([c.a2 * br.x - c.a1 * br.y, -c.a1 * br.x + c.a0 * br.y])
    return m, b


def solve_2x2(m: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Closed-form solve of a symmetric 2x2 system with a determinant guard."""
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    scale = max(abs(m[0, 0]), abs(m[0, 1]), abs(m[1, 1]))
    if det <= 1e-15 * scale * scale:
        raise FusionSingularError(f"fusion system singular (det={det:g})")
    x = (m[1, 1] * b[0] - m[0, 1] * b[1]) / det
    y = (m[0, 0] * b[1] - m[1, 0] * b[0]) / det
    return np.array([x, y])


def fuse_bearings(bearings) -> np.ndarray:
    """Fused blocker position from one or more bearing estimates."""
    m, b = fusion_system(bearings)
    return solve_2x2(m, b)


def fusion_objective(point, bearings) -> float:
    """Sum over bearings of the expected squared distance from ``point`` to
    the random bearing line, in closed form."""
    x, y = float(point[0]), float(point[1])
    total = 0.0
    for br in bearings:
        c = sector_coeffs(br.theta, br.alpha)
        u, v = x - br.x, y - br.y
        total += (c.a2 * u * u - 2.0 * c.a1 * u * v + c.a0 * v * v) / (2.0 * br.alpha)
    return total


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


def quadrature_objective(point, bearings) -> float:
    """Same objective as fusion_objective, evaluated by Gauss-Legendre
    quadrature of the raw squared point-line distance over the sector.
    Independent of the closed-form coefficients; used as the oracle."""
    x, y = float(point[0]), float(point[1])
    total = 0.0
    for br in bearings:
        phi = br.theta + br.alpha * _GL_NODES
        u, v = x - br.x, y - br.y
        d2 = (np.sin(phi) * u - np.cos(phi) * v) ** 2
        total += float(np.dot(_GL_WEIGHTS, d2)) / 2.0
    return total


def oracle_fuse(bearings, coarse_points: int = 61,
                halfspan: float | None = None,
                final_step: float = 1e-6) -> np.ndarray:
    """Reference fusion: minimize the quadrature objective numerically.

    Coarse grid search around the bearing anchors followed by a shrinking
    pattern search down to steps below ``final_step`` (well under the
    1e-4 m refinement target).  Slow; meant for verification only.
    """
    if not bearings:
        raise ValueError("at least one bearing required")
    anchors = np.array([[br.x, br.y] for br in bearings])
    center = anchors.mean(axis=0)
    if halfspan is None:
        spread = float(np.max(np.hypot(*(anchors - center).T))) if len(anchors) > 1 else 0.0
        halfspan = max(3.0 * spread, 20.0)
    axis = np.linspace(-halfspan, halfspan, coarse_points)
    gx, gy = np.meshgrid(center[0] + axis, center[1] + axis)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    # vectorized objective over the grid
    vals = np.zeros(len(pts))
    for br in bearings:
        phi = br.theta + br.alpha * _GL_NODES
        u = pts[:, 0:1] - br.x
        v = pts[:, 1:2] - br.y
        d2 = (np.sin(phi)[None, :] * u - np.cos(phi)[None, :] * v) ** 2
        vals += d2 @ _GL_WEIGHTS / 2.0
    best = pts[int(np.argmin(vals))].copy()
    best_val = float(np.min(vals))

    step = axis[1] - axis[0] if coarse_points > 1 else halfspan
    moves = np.array([[1, 0], [-1, 0], [0, 1], [0, -1],
                      [1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=float)
    while step > final_step:
        improved = False
        for mv in moves:
            cand = best + step * mv
            val = quadrature_objective(cand, bearings)
            if val < best_val:
                best, best_val = cand, val
                improved = True
        if not improved:
            step *= 0.5
    return best


def read_bearing_file(path) -> list[BearingEstimate]:
    """Parse a text file of bearing quadruplets ``x y theta_deg alpha_deg``.

    Values may be separated by whitespace or commas; ``#`` starts a
    comment.  Raises ValueError naming the offending line number on any
    malformed content; an empty file is an error.
    """
    bearings = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 4:
                raise ValueError(
                    f"{path}:{lineno}: expected 4 values (x y theta_deg alpha_deg), "
                    f"got {len(parts)}")
            try:
                x, y, theta_deg, alpha_deg = (float(p) for p in parts)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-numeric value in {line!r}") from None
            try:
                bearings.append(BearingEstimate(x=x, y=y,
                                                theta=math.radians(theta_deg),
                                                alpha=math.radians(alpha_deg)))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    if not bearings:
        raise ValueError(f"{path}: no bearings found")
    return bearings
