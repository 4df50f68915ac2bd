"""
Cross-check ladder: evaluates each determinant identity both ways on a
graph or voltage graph and reports the worst residual against its tolerance.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from src.errors import VoltageError
from src.numerics import spectra_match
from src.operators import CoinParams, build_operators, evolution_matrix, grover_matrix
from src.zeta_finite import (bass_log_series, ihara_log_series, konno_sato_charpoly,
                             konno_sato_degree_form, qw_charpoly, qw_log_series,
                             qw_log_series_from_determinant, qw_reciprocal, qw_spectrum)
from src.zeta_periodic import (det_gamma_operator, det_tau, konno_sato_fiber_residual,
                               lm_factorization_residuals, periodic_qw_zeta,
                               qw_interior_fibers, sampling_identity_residual,
                               self_convergence)
from src.voltage import bloch_adjacency, bloch_normalized_adjacency

logger = logging.getLogger(__name__)

SERIES_DEGREE = 12
CORRUPTION = 1e-6

TOLERANCES = {
    "bass-vs-euler-series": 1e-9,
    "konno-sato-vs-direct": 1e-10,
    "konno-sato-degree-form": 1e-10,
    "charpoly-direct-vs-reduced": 1e-10,
    "reduced-determinant-identity": 1e-10,
    "spectrum-direct-vs-mapped": 1e-8,
    "grover-vs-evolution": 1e-15,
    "unitarity": 1e-12,
    "exp-trace-series": 1e-9,
    "sampling-identity": 1e-10,
    "quadrature-self-convergence": 1e-10,
    "fiber-homogeneity": 1e-10,
    "fiber-multiplicativity": 1e-10,
    "lm-factorization": 1e-10,
    "konno-sato-fiber": 1e-10,
    "periodic-qw-direct-vs-reduced": 1e-10,
}


@dataclass
class IdentityCheck:
    name: str
    tolerance: float
    max_residual: float = 0.0
    worst: dict = field(default_factory=dict)

    @property
    def passed(self):
        return bool(self.max_residual <= self.tolerance)

    def record(self, residual, **params):
        residual = float(residual)
        if not np.isfinite(residual) or residual > self.max_residual:
            self.max_residual = residual if np.isfinite(residual) else float("inf")
            self.worst = params

    def to_dict(self):
        return {
            "name": self.name,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "worst": self.worst,
        }


@dataclass
class CrossCheckReport:
    subject: str
    checks: dict = field(default_factory=dict)

    def check(self, name):
        if name not in self.checks:
            self.checks[name] = IdentityCheck(name=name, tolerance=TOLERANCES[name])
        return self.checks[name]

    @property
    def passed(self):
        return all(c.passed for c in self.checks.values())

    @property
    def failures(self):
        return [c for c in self.checks.values() if not c.passed]

    def to_dict(self):
        return {
            "subject": self.subject,
            "passed": self.passed,
            "identities": [c.to_dict() for c in self.checks.values()],
        }


def _coin_label(p):
    return {"a": [p.a.real, p.a.imag], "b": [p.b.real, p.b.imag]}


def sample_coins(rng, unimodular=5, non_unimodular=True):
    coins = [CoinParams.grover()]
    for _ in range(unimodular):
        alpha, beta = rng.uniform(0.0, 2.0 * np.pi, size=2)
        coins.append(CoinParams(np.exp(1j * alpha), np.exp(1j * beta)))
    if non_unimodular:
        coins.append(CoinParams(0.8 + 0.1j, -1.2))
        coins.append(CoinParams(1.5, 0.5j))
    return coins


def sample_u(rng, count, radius=0.3):
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, size=count))
    phi = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return r * np.exp(1j * phi)


def cross_check_graph(g, subject="graph", seed=2024, u_count=20, corrupt_prefactor=False):
    """Identity ladder for a finite graph"""
    rng = np.random.default_rng(seed)
    report = CrossCheckReport(subject=subject)
    coins = sample_coins(rng)
    unimodular = [p for p in coins if p.unitary_flag]

    logger.info("Cross-checking %s (%r)", subject, g)

    euler = ihara_log_series(g, SERIES_DEGREE)
    bass = bass_log_series(g, SERIES_DEGREE)
    report.check("bass-vs-euler-series").record(np.abs(euler - bass).max(), degree=SERIES_DEGREE)

    grover = CoinParams.grover()
    direct = qw_charpoly(g, grover, "direct")
    ks = konno_sato_charpoly(g)
    scale = 1.0 + np.abs(direct.coefficients).max()
    report.check("konno-sato-vs-direct").record(ks.max_gap(direct) / scale)
    report.check("konno-sato-degree-form").record(konno_sato_degree_form(g).max_gap(ks) / scale)

    evolution = evolution_matrix(g, grover)
    report.check("grover-vs-evolution").record(np.abs(evolution - grover_matrix(g)).max())

    for p in coins:
        label = _coin_label(p)
        direct = qw_charpoly(g, p, "direct")
        reduced = qw_charpoly(g, p, "reduced")
        scale = 1.0 + np.abs(direct.coefficients).max()
        report.check("charpoly-direct-vs-reduced").record(direct.max_gap(reduced) / scale, **label)

        for u in sample_u(rng, u_count):
            lhs = qw_reciprocal(g, p, u, "direct")
            rhs = qw_reciprocal(g, p, u, "reduced")
            if corrupt_prefactor:
                rhs *= 1.0 + CORRUPTION
            report.check("reduced-determinant-identity").record(
                abs(lhs - rhs) / (1.0 + abs(lhs)), u=[u.real, u.imag], **label)

    for p in unimodular:
        label = _coin_label(p)
        U = build_operators(g, p).U
        report.check("unitarity").record(np.abs(U @ U.conj().T - np.eye(g.arc_count)).max(), **label)
        gap = spectra_match(qw_spectrum(g, p, "direct").eigenvalues,
                            qw_spectrum(g, p, "mapped").eigenvalues)
        report.check("spectrum-direct-vs-mapped").record(gap, **label)
        series_gap = np.abs(qw_log_series(g, p, SERIES_DEGREE)
                            - qw_log_series_from_determinant(g, p, SERIES_DEGREE)).max()
        report.check("exp-trace-series").record(series_gap, **label)

    _log_report(report)
    return report


def cross_check_voltage(vg, subject="voltage", seed=2024, covers=(3, 4, 5), grid=64,
                        t=0.2, u=0.2, samples=10):
    """Identity ladder for a periodic graph given by its voltage quotient"""
    rng = np.random.default_rng(seed)
    report = CrossCheckReport(subject=subject)
    grover = CoinParams.grover()
    coin = sample_coins(rng, unimodular=1, non_unimodular=False)[-1]

    logger.info("Cross-checking %s (%r)", subject, vg)

    for L in covers:
        try:
            report.check("sampling-identity").record(
                sampling_identity_residual(vg, L, "ihara", t=t), L=L, kind="ihara")
            for p in (grover, coin):
                report.check("sampling-identity").record(
                    sampling_identity_residual(vg, L, "qw", u=u, coin=p),
                    L=L, kind="qw", **_coin_label(p))
        except VoltageError as e:
            logger.info("Skipping L=%d: %s", L, e)

    report.check("quadrature-self-convergence").record(
        self_convergence(vg, "ihara", grid, t=t), N=grid, kind="ihara")
    report.check("quadrature-self-convergence").record(
        self_convergence(vg, "qw", grid, u=u, coin=grover), N=grid, kind="qw")

    zeta_direct = periodic_qw_zeta(vg, coin, u, N=grid, method="direct")
    zeta_reduced = periodic_qw_zeta(vg, coin, u, N=grid, method="reduced")
    report.check("periodic-qw-direct-vs-reduced").record(
        abs(zeta_direct - zeta_reduced) / (1.0 + abs(zeta_direct)), N=grid, **_coin_label(coin))

    dmax = float(max(vg.degrees))
    for _ in range(samples):
        theta = rng.uniform(0.0, 2.0 * np.pi, size=vg.dim)
        u_k = complex(sample_u(rng, 1)[0])
        where = {"theta": theta.tolist(), "u": [u_k.real, u_k.imag]}

        F = qw_interior_fibers(vg, coin, u_k)(theta[None, :])[0]
        z = 1.0 + 0.05 * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
        lhs = det_tau(z * F)
        rhs = z ** vg.n * det_tau(F)
        report.check("fiber-homogeneity").record(abs(lhs - rhs) / (1.0 + abs(lhs)), **where)

        residuals = lm_factorization_residuals(vg, coin, theta, u_k)
        report.check("lm-factorization").record(max(residuals.values()), **where)
        report.check("konno-sato-fiber").record(konno_sato_fiber_residual(vg, theta, u_k), **where)

    # det_Gamma((I + uA')(I + uB')) = det_Gamma(I + uA') det_Gamma(I + uB')
    small = 0.1
    eye = np.eye(vg.n)

    def first(thetas):
        return eye + small * bloch_normalized_adjacency(vg, thetas)

    def second(thetas):
        return eye + small * 1j * bloch_adjacency(vg, thetas) / dmax

    product = det_gamma_operator(vg, lambda th: first(th) @ second(th), grid, threads=1).value
    separate = (det_gamma_operator(vg, first, grid, threads=1).value
                * det_gamma_operator(vg, second, grid, threads=1).value)
    report.check("fiber-multiplicativity").record(
        abs(product - separate) / (1.0 + abs(product)), N=grid, u=small)

    _log_report(report)
    return report


def _log_report(report):
    for check in report.checks.values():
        mark = "✓" if check.passed else "✗"
        logger.info("%s %s max residual %.2e (tol %.0e)", mark, check.name,
                    check.max_residual, check.tolerance)
