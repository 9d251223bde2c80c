import pytest

from sidesense import NetworkDeployment, RadioParams, SectorLayout


@pytest.fixture
def layout36():
    return SectorLayout(36)


@pytest.fixture
def radio():
    return RadioParams()


@pytest.fixture
def two_bs_deployment():
    """u0 at the origin served by BS0 at (10,0); BS1 at (20,20) serves a UE
    at (14,14), i.e. it beams straight at u0; a second scripted UE sits at
    (24,24) for beam-direction variants."""
    return NetworkDeployment.from_positions(
        bs_xy=[[10.0, 0.0], [20.0, 20.0]],
        ue_xy=[[0.0, 0.0], [14.0, 14.0], [24.0, 24.0]],
    )
