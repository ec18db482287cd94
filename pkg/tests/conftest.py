"""Session fixtures: the two reference ground states and one full catalog run."""

import pytest

from nlsdamp import Grid, solve_ground_state
from nlsdamp.scenarios import run_suite


@pytest.fixture(scope="session")
def gs_1d():
    """Ground state on the standard one-dimensional test grid."""
    return solve_ground_state(Grid(1, 512, 20.0), tol=1e-10)


@pytest.fixture(scope="session")
def gs_2d():
    """Ground state on the standard two-dimensional test grid."""
    return solve_ground_state(Grid(2, 256, 15.0), tol=1e-10)


@pytest.fixture(scope="session")
def catalog_results(tmp_path_factory):
    """One full run of the bundled catalog, shared by every test that reads it."""
    out = tmp_path_factory.mktemp("catalog")
    results, status = run_suite(outputs=str(out))
    return {
        "results": results,
        "status": status,
        "by_id": {r.config.scenario_id: r for r in results},
        "root": out,
    }
