import pytest

from kramers_slip import solve_series


@pytest.fixture(scope="session")
def series3():
    """Order-3 series shared by the slower integration tests."""
    return solve_series(3)
