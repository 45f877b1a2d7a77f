import numpy as np
import pytest

from bornrate.errors import QuadratureError
from bornrate.quadrature import adaptive_simpson, cell_integrals


def test_polynomial_exact():
    # Simpson with one Richardson correction is exact through degree 4
    val = adaptive_simpson(lambda x: 3 * x**2, 0.0, 2.0, tol=1e-12)
    assert val == pytest.approx(8.0, abs=1e-13)


def test_oscillatory_integral():
    val = adaptive_simpson(np.sin, 0.0, np.pi, tol=1e-12)
    assert val == pytest.approx(2.0, abs=1e-11)


def test_reversed_limits():
    assert adaptive_simpson(np.sin, np.pi, 0.0) == pytest.approx(-2.0, abs=1e-10)
    assert adaptive_simpson(np.sin, 1.0, 1.0) == 0.0


def test_cell_integrals_sum_matches_total():
    nodes = np.linspace(-3.0, 3.0, 41)
    cells = cell_integrals(lambda x: np.exp(-0.5 * x**2), nodes, tol=1e-12)
    total = np.sum(cells)
    exact = np.sqrt(2 * np.pi) * 0.9973002039367398  # erf(3/sqrt(2)) mass
    assert total == pytest.approx(exact, abs=1e-10)


def test_cell_integrals_refines_sharp_feature():
    # narrow spike inside one coarse cell: only adaptivity can see it
    nodes = np.array([-1.0, 0.9, 1.1, 3.0])
    cells = cell_integrals(lambda x: np.exp(-((x - 1.0) ** 2) / 2e-4), nodes, tol=1e-12)
    total = np.sum(cells)
    assert total == pytest.approx(np.sqrt(np.pi * 2e-4), rel=1e-8)


def test_bad_partition_rejected():
    with pytest.raises(QuadratureError):
        cell_integrals(np.sin, np.array([0.0, 0.0, 1.0]))
    with pytest.raises(QuadratureError):
        cell_integrals(np.sin, np.array([1.0]))
