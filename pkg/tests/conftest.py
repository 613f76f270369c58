import pytest

from sfc_lab import SeedSpec, TimeGrid, sample_path


@pytest.fixture(scope="session")
def grid256() -> TimeGrid:
    return TimeGrid(256)


@pytest.fixture(scope="session")
def paths256(grid256):
    """Ten fixed paths on the shared grid."""
    return [sample_path(SeedSpec(1234, idx), grid256) for idx in range(10)]
