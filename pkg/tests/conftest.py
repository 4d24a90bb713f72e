"""Shared fixtures: the expensive curve builds and suite runs happen once."""

import pytest

from projhull.curves import PoleSeriesParams, build_curve, unit_circle_curve
from projhull.hullscan import verify_theorem3


@pytest.fixture(scope="session")
def params_std():
    return PoleSeriesParams("example1-standard")


@pytest.fixture(scope="session")
def params_rapid():
    return PoleSeriesParams("example1-rapid")


@pytest.fixture(scope="session")
def params_ex2():
    return PoleSeriesParams("example2")


@pytest.fixture(scope="session")
def curve_std(params_std):
    return build_curve(params_std, 2048)


@pytest.fixture(scope="session")
def circle512():
    return unit_circle_curve(512)


@pytest.fixture(scope="session")
def thm3_std(params_std, curve_std):
    """One full inequality-suite run shared by several acceptance criteria."""
    return verify_theorem3(params_std, 60, m=2048, curve=curve_std)
