import numpy as np
import pytest

from splitlab.model import ModelParams, Outcome, classify
from splitlab.scan import (
    CriticalLine,
    ScanError,
    fit_power_law,
    find_critical_m,
    scan_k,
    scan_line,
)


def test_critical_point_near_fig3_anchor():
    cp = find_critical_m(100, 3)
    assert cp.upper - cp.lower <= 1.0
    assert 370 < cp.m_c < 410
    assert classify(cp.lower, 100, 3).outcome is not Outcome.HARD
    assert classify(cp.upper, 100, 3).outcome is Outcome.HARD


def test_fig2_start_is_below_its_line():
    assert find_critical_m(60, 4).m_c > 100


def test_resolution_respected():
    cp = find_critical_m(80, 3, resolution=0.01)
    assert cp.upper - cp.lower <= 0.01
    assert cp.lower <= cp.m_c <= cp.upper


def test_tiny_instance():
    cp = find_critical_m(3, 3)
    assert cp.m_c > 0


@pytest.mark.parametrize("n, k, res", [(10, 1.5, 1.0), (5, 6, 1.0), (10, 3, 0.0)])
def test_invalid_arguments(n, k, res):
    with pytest.raises(ValueError):
        find_critical_m(n, k, resolution=res)


def test_line_matches_single_points_and_rises():
    ns = [40, 80, 120]
    line = scan_line(3, ns)
    assert [p.n for p in line.points] == ns
    for p in line.points:
        assert p.m_c == find_critical_m(p.n, 3).m_c
    mcs = [p.m_c for p in line.points]
    assert mcs == sorted(mcs)


def test_line_ordering_checks():
    with pytest.raises(ValueError):
        scan_line(3, [])
    with pytest.raises(ValueError):
        scan_line(3, [50, 40])


def test_failed_point_is_reported_not_fatal():
    line = scan_line(4, [3, 50])
    assert len(line.failures) == 1 and line.failures[0].n == 3
    assert line.failures[0].status.startswith("failed")
    assert [p.n for p in line.points] == [50]


def test_all_failed_raises():
    with pytest.raises(ScanError):
        scan_line(5, [3, 4])


def test_parallel_matches_serial():
    ns = [30, 60, 90]
    assert scan_line(3, ns, jobs=2).entries == scan_line(3, ns, jobs=1).entries


def test_k_scan_increases():
    entries = scan_k(150, [3, 4, 5])
    mcs = [e.point.m_c for e in entries]
    assert all(a < b for a, b in zip(mcs, mcs[1:]))


def test_redundancy_shifts_line():
    plain = find_critical_m(100, 3).m_c
    assert find_critical_m(100, 3, ModelParams(alpha=0.1)).m_c > plain
    assert find_critical_m(100, 3, ModelParams(alpha=0.011, lam=1.5)).m_c < plain


class TestFit:
    def test_exact_power(self):
        ns = np.arange(50, 401, 50)
        fit = fit_power_law([(n, 2 * n**2) for n in ns])
        assert fit.exponent == pytest.approx(2.0, abs=1e-12)
        assert fit.prefactor == pytest.approx(2.0, rel=1e-10)
        assert fit.residual < 1e-12

    def test_noisy_synthetic(self):
        rng = np.random.default_rng(12345)
        ns = np.arange(50, 401, 50)
        mcs = 3 * ns**1.95 * (1 + 0.01 * rng.standard_normal(len(ns)))
        fit = fit_power_law(list(zip(ns, mcs)))
        assert abs(fit.exponent - 1.95) < 0.05
        assert fit.n_points == 8

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            fit_power_law([(1, 1), (2, 4)])

    def test_nonpositive(self):
        with pytest.raises(ValueError):
            fit_power_law([(1, 1), (2, 0), (3, 9)])

    def test_accepts_line(self):
        line = scan_line(3, [50, 100, 150])
        assert isinstance(line, CriticalLine)
        fit = fit_power_law(line)
        assert 1.5 < fit.exponent < 2.5
        assert fit.as_dict()["n_points"] == 3
