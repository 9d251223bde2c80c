import math

import numpy as np
import pytest

from sidesense import MeshGrid, SectorLayout, cell_index, sector_index, wrap_angle, wrap_to_pi


def test_wrap_angle_examples():
    assert wrap_angle(0.0) == 0.0
    assert wrap_angle(-math.pi / 2) == pytest.approx(3 * math.pi / 2, abs=1e-15)
    assert wrap_angle(7 * math.pi) == pytest.approx(math.pi, abs=1e-12)


def test_wrap_angle_range_and_idempotence():
    rng = np.random.default_rng(1)
    for raw in rng.uniform(-50.0, 50.0, size=500):
        w = wrap_angle(raw)
        assert 0.0 <= w < 2 * math.pi
        assert wrap_angle(w) == w
        # congruence mod 2*pi
        assert abs(math.remainder(w - raw, 2 * math.pi)) < 1e-9


def test_wrap_angle_rejects_non_finite():
    for bad in (math.inf, -math.inf, math.nan):
        with pytest.raises(ValueError):
            wrap_angle(bad)


def test_wrap_to_pi_halfopen():
    assert wrap_to_pi(math.pi) == pytest.approx(math.pi)
    assert wrap_to_pi(-math.pi) == pytest.approx(math.pi)
    assert wrap_to_pi(3 * math.pi / 2) == pytest.approx(-math.pi / 2)


def test_sector_layout_invariants():
    lay = SectorLayout(36)
    assert lay.sector_count * 2 * lay.half_width == pytest.approx(2 * math.pi, rel=1e-15)
    assert lay.half_width == pytest.approx(math.radians(5))
    with pytest.raises(ValueError):
        SectorLayout(1)
    with pytest.raises(ValueError):
        SectorLayout.from_width_deg(7.0)  # does not divide 360


def test_sector_index_examples(layout36):
    assert sector_index(layout36, 0.0) == 0
    # 10 deg is the upper edge of sector 0's span [-5, 5), hence sector 1
    assert sector_index(layout36, math.radians(10.0)) == 1
    # 355 deg wraps into sector 0's span
    assert sector_index(layout36, math.radians(355.0)) == 0


def test_sector_boundary_halfopen(layout36):
    # upper edge of each sector belongs to the next one
    assert sector_index(layout36, math.radians(5.0)) == 1
    assert sector_index(layout36, math.radians(4.999999)) == 0


@pytest.mark.parametrize("count", [2, 3, 4, 9, 36, 360])
def test_sector_center_round_trip(count):
    lay = SectorLayout(count)
    for k in range(count):
        assert sector_index(lay, lay.sector_center(k)) == k


def test_sectors_tile_circle(layout36):
    rng = np.random.default_rng(2)
    for a in rng.uniform(0.0, 2 * math.pi, size=1000):
        k = sector_index(layout36, a)
        assert 0 <= k < 36
        # the angle lies within the half-open span of its sector
        off = wrap_to_pi(a - layout36.sector_center(k))
        assert -layout36.half_width - 1e-12 <= off < layout36.half_width + 1e-12


def test_cell_index_examples():
    grid = MeshGrid(origin_x=-100, origin_y=-100, cell_size=3.0,
                    width_cells=67, height_cells=67)
    assert cell_index(grid, (-100.0, -100.0)) == (0, 0)
    assert cell_index(grid, (-97.1, -100.0)) == (0, 0)  # 2.9/3 floors to 0
    assert cell_index(grid, (500.0, 0.0)) is None


def test_cell_center_and_covering_disk():
    grid = MeshGrid.covering_disk(100.0, 3.0)
    assert grid.width_cells == 67 and grid.height_cells == 67
    c = grid.cell_center(0, 0)
    assert c[0] == pytest.approx(-98.5) and c[1] == pytest.approx(-98.5)
    # every disk point maps into the grid
    rng = np.random.default_rng(3)
    for _ in range(200):
        r = 100.0 * math.sqrt(rng.uniform())
        phi = rng.uniform(0, 2 * math.pi)
        assert grid.cell_index((r * math.cos(phi), r * math.sin(phi))) is not None


def test_grid_validation():
    with pytest.raises(ValueError):
        MeshGrid(0, 0, cell_size=0.0, width_cells=5, height_cells=5)
    with pytest.raises(ValueError):
        MeshGrid(0, 0, cell_size=1.0, width_cells=0, height_cells=5)
