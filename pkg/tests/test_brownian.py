import numpy as np
import numpy.testing as npt
import pytest

from sfc_lab import (
    BrownianPath,
    SeedSpec,
    TimeGrid,
    eval_basis,
    path_from_xi,
    sample_path,
    substream,
    wiener_integral,
)


def test_seedspec_validation():
    SeedSpec(0, 0)
    SeedSpec(2**64 - 1, 2**64 - 1)
    with pytest.raises(ValueError):
        SeedSpec(-1, 0)
    with pytest.raises(ValueError):
        SeedSpec(0, 2**64)


def test_path_shapes_and_anchoring():
    grid = TimeGrid(32)
    path = sample_path(SeedSpec(9, 4), grid)
    assert path.values.shape == (33,)
    assert path.increments.shape == (32,)
    assert path.xi.shape == (32,)
    assert path.values[0] == 0.0
    npt.assert_allclose(path.increments, path.xi / np.sqrt(32), atol=0)
    npt.assert_allclose(np.diff(path.values), path.increments, atol=1e-15)
    assert path.terminal == pytest.approx(path.increments.sum())


def test_same_seed_reproduces_bitwise():
    grid = TimeGrid(64)
    a = sample_path(SeedSpec(42, 7), grid)
    b = sample_path(SeedSpec(42, 7), grid)
    assert np.array_equal(a.xi, b.xi)
    assert np.array_equal(a.values, b.values)


def test_distinct_indices_decorrelate():
    grid = TimeGrid(64)
    a = sample_path(SeedSpec(42, 0), grid)
    b = sample_path(SeedSpec(42, 1), grid)
    c = sample_path(SeedSpec(43, 0), grid)
    assert not np.array_equal(a.xi, b.xi)
    assert not np.array_equal(a.xi, c.xi)


def test_substream_is_schedule_free():
    # drawing the same substream twice gives the same stream regardless of
    # what other substreams were consumed in between
    first = substream(SeedSpec(5, 3)).standard_normal(16)
    substream(SeedSpec(5, 999)).standard_normal(1000)
    second = substream(SeedSpec(5, 3)).standard_normal(16)
    assert np.array_equal(first, second)


def test_path_from_xi_round_trip():
    grid = TimeGrid(16)
    path = sample_path(SeedSpec(11, 2), grid)
    rebuilt = path_from_xi(path.xi, grid)
    assert np.array_equal(rebuilt.values, path.values)
    with pytest.raises(ValueError):
        path_from_xi(path.xi[:-1], grid)


def test_path_validation():
    grid = TimeGrid(4)
    xi = np.zeros(4)
    with pytest.raises(ValueError):
        BrownianPath(grid=grid, values=np.ones(5), increments=xi / 2, xi=xi)  # W_0 != 0


def test_wiener_integral_left_tagging():
    grid = TimeGrid(32)
    path = sample_path(SeedSpec(3, 0), grid)
    # integrating 1 recovers the terminal value exactly
    assert wiener_integral(path, np.ones(32)) == pytest.approx(path.terminal, abs=1e-15)
    # node-valued integrands (length m + 1) are a tagging bug, not a convention
    with pytest.raises(ValueError):
        wiener_integral(path, np.ones(33))


def test_terminal_distribution_moments():
    grid = TimeGrid(128)
    terms = np.array([sample_path(SeedSpec(777, i), grid).terminal for i in range(600)])
    assert abs(terms.mean()) < 0.13  # 3 sigma at P = 600
    assert abs(terms.var(ddof=1) - 1.0) < 0.18


def test_basis_integral_isometry():
    # E |sum conj(e_1) dW|^2 = 1 exactly in expectation on the grid
    grid = TimeGrid(128)
    e = eval_basis(-1, grid.left_nodes)
    vals = np.array(
        [abs(wiener_integral(sample_path(SeedSpec(778, i), grid), e)) ** 2 for i in range(600)]
    )
    assert abs(vals.mean() - 1.0) < 0.17
