import numpy as np
import pytest

from src.cross_check import (TOLERANCES, CrossCheckReport, IdentityCheck, cross_check_graph,
                             cross_check_voltage, sample_coins)
from src.generators import complete_graph, path_graph

GRAPH_IDENTITIES = {
    "bass-vs-euler-series", "konno-sato-vs-direct", "konno-sato-degree-form",
    "charpoly-direct-vs-reduced", "reduced-determinant-identity", "spectrum-direct-vs-mapped",
    "grover-vs-evolution", "unitarity", "exp-trace-series",
}

VOLTAGE_IDENTITIES = {
    "sampling-identity", "quadrature-self-convergence", "periodic-qw-direct-vs-reduced",
    "fiber-homogeneity", "lm-factorization", "konno-sato-fiber", "fiber-multiplicativity",
}


class TestIdentityCheck:
    def test_keeps_worst(self):
        check = IdentityCheck(name="unitarity", tolerance=1e-12)
        check.record(1e-15, a=1)
        check.record(1e-13, a=2)
        check.record(1e-14, a=3)
        assert check.max_residual == 1e-13
        assert check.worst == {"a": 2}
        assert check.passed

    def test_nan_fails(self):
        check = IdentityCheck(name="unitarity", tolerance=1e-12)
        check.record(float("nan"))
        assert not check.passed
        assert check.to_dict()["max_residual"] == float("inf")

    def test_report(self):
        report = CrossCheckReport(subject="x")
        report.check("unitarity").record(1.0)
        assert not report.passed
        assert [c.name for c in report.failures] == ["unitarity"]
        assert report.to_dict()["identities"][0]["tolerance"] == TOLERANCES["unitarity"]


class TestSampleCoins:
    def test_mix(self):
        coins = sample_coins(np.random.default_rng(0))
        assert len(coins) == 8
        assert sum(p.unitary_flag for p in coins) == 6


class TestCrossCheckGraph:
    def test_petersen_passes(self, petersen):
        report = cross_check_graph(petersen, subject="petersen", seed=2024)
        assert set(report.checks) == GRAPH_IDENTITIES
        assert report.passed, [c.to_dict() for c in report.failures]

    @pytest.mark.parametrize("g", [complete_graph(4), path_graph(5)])
    def test_small_graphs_pass(self, g):
        assert cross_check_graph(g, seed=1, u_count=5).passed

    def test_corrupted_prefactor_fails(self, k4):
        report = cross_check_graph(k4, seed=2024, u_count=5, corrupt_prefactor=True)
        assert not report.passed
        assert [c.name for c in report.failures] == ["reduced-determinant-identity"]
        assert "u" in report.checks["reduced-determinant-identity"].worst

    def test_deterministic(self, triangle):
        first = cross_check_graph(triangle, seed=3, u_count=3).to_dict()
        second = cross_check_graph(triangle, seed=3, u_count=3).to_dict()
        assert first == second


class TestCrossCheckVoltage:
    def test_line(self, line):
        report = cross_check_voltage(line, subject="line", covers=(3, 4, 5), grid=32, samples=4)
        assert set(report.checks) == VOLTAGE_IDENTITIES
        assert report.passed, [c.to_dict() for c in report.failures]

    def test_honeycomb(self, honeycomb):
        report = cross_check_voltage(honeycomb, covers=(3,), grid=32, samples=3)
        assert report.passed, [c.to_dict() for c in report.failures]
