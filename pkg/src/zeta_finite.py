"""
Zeta functions and characteristic polynomials of finite graphs:
the Ihara zeta via Bass' determinant, the Grover walk via Konno-Sato, and
the general coined walk zeta det(I - uU)^-1 with its reduced n x n form.
"""

import logging
from dataclasses import dataclass

import numpy as np

from src.errors import PoleError, ValidationError
from src.graph import (adjacency_matrix, betti_number, degree_matrix,
                       reduced_cycle_counts, transition_matrix)
from src.numerics import canonical_sort, complex_pair
from src.operators import build_operators
from src.polynomial import (ComplexPolynomial, interpolate_on_circle,
                            log_one_minus_power_series, series_log)

logger = logging.getLogger(__name__)

POLE_TOL = 1e-12
MU_SNAP = 1e-10
METHODS = ("direct", "reduced")
SPECTRUM_METHODS = ("direct", "mapped")


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    eigenvalues: np.ndarray
    multiplicity_of_plus_b: int
    multiplicity_of_minus_b: int

    def to_dict(self):
        return {
            "eigenvalues": [complex_pair(z) for z in self.eigenvalues],
            "multiplicity_of_plus_b": self.multiplicity_of_plus_b,
            "multiplicity_of_minus_b": self.multiplicity_of_minus_b,
        }


def _check_method(method, allowed):
    if method not in allowed:
        raise ValidationError(f"Unknown method {method!r}; expected one of {', '.join(allowed)}",
                              reason="method", details={"method": method})


def _interpolation_radius(p):
    return 1.25 * max(abs(p.a), abs(p.b), 1.0)


# --- Ihara zeta (Bass) ------------------------------------------------------

def bass_matrix(g, t):
    """I - tA + t^2 (D - I)"""
    eye = np.eye(g.n)
    return eye - t * adjacency_matrix(g) + t * t * (degree_matrix(g) - eye)


def bass_reciprocal_polynomial(g):
    """det(I - tA + t^2(D - I)) as a polynomial in t (degree <= 2n)"""
    return interpolate_on_circle(lambda t: np.linalg.det(bass_matrix(g, t)), 2 * g.n)


def ihara_zeta_reciprocal(g, t):
    t = complex(t)
    r = betti_number(g)
    base = 1.0 - t * t
    if r - 1 < 0 and abs(base) < POLE_TOL:
        # Trees: the (1 - t^2) factor cancels exactly inside the determinant
        quotient = bass_reciprocal_polynomial(g).divide_exact(
            ComplexPolynomial([1.0, 0.0, -1.0]) ** (1 - r))
        return complex(quotient(t))
    return complex(base ** (r - 1) * np.linalg.det(bass_matrix(g, t)))


def ihara_zeta_bass(g, t):
    """Z(G, t) = [(1 - t^2)^(r-1) det(I - tA + t^2(D - I))]^-1"""
    t = complex(t)
    r = betti_number(g)
    if r - 1 > 0 and abs(1.0 - t * t) < POLE_TOL:
        raise PoleError(f"Ihara zeta has a pole at t={t}: (1 - t^2)^{r - 1} vanishes",
                        details={"factor": "(1-t^2)^(r-1)", "t": complex_pair(t)})
    reciprocal = ihara_zeta_reciprocal(g, t)
    if abs(reciprocal) < POLE_TOL:
        raise PoleError(f"Ihara zeta has a pole at t={t}: det(I - tA + t^2(D - I)) vanishes",
                        details={"factor": "det(I-tA+t^2(D-I))", "t": complex_pair(t)})
    return 1.0 / reciprocal


def ihara_log_series(g, L):
    """log Z = sum_m N_m t^m / m from exact reduced cycle counts"""
    counts = reduced_cycle_counts(g, L)
    return np.array([counts[m] / m for m in range(1, L + 1)], dtype=np.complex128)


def bass_log_series(g, L):
    """
    Taylor coefficients 1..L of log Z taken from the Bass determinant.

    log det(I - X(t)) = -sum_k tr(X(t)^k) / k with X(t) = tA - t^2(D - I),
    expanded with integer-valued matrix coefficients truncated at degree L.
    """
    r = betti_number(g)
    A = adjacency_matrix(g)
    Q = degree_matrix(g) - np.eye(g.n)

    power = np.zeros((L + 1, g.n, g.n))
    power[0] = np.eye(g.n)
    det_series = np.zeros(L + 1, dtype=np.complex128)
    for k in range(1, L + 1):
        shifted = np.zeros_like(power)
        shifted[1:] += power[:-1] @ A
        shifted[2:] -= power[:-2] @ Q
        power = shifted
        det_series -= np.trace(power, axis1=1, axis2=2) / k
    return -((r - 1) * log_one_minus_power_series(2, L) + det_series[1:])


# --- General coined quantum walk ---------------------------------------------

def qw_reciprocal(g, p, u, method="direct"):
    """det(I - uU), either directly or through the reduced n x n determinant"""
    _check_method(method, METHODS)
    u = complex(u)
    ops = build_operators(g, p)
    if method == "direct":
        return complex(np.linalg.det(np.eye(g.arc_count) - u * ops.U))

    base = 1.0 - p.b * p.b * u * u
    exponent = g.m - g.n
    if exponent < 0 and abs(base) < POLE_TOL:
        logger.debug("Reduced prefactor singular at u=%s; falling back to direct", u)
        return qw_reciprocal(g, p, u, method="direct")
    interior = (1.0 - p.a * p.b * u * u) * np.eye(g.n) - p.c * u * ops.dSd
    return complex(base ** exponent * np.linalg.det(interior))


def qw_zeta(g, p, u, method="direct"):
    """zeta(G, u) = det(I - uU)^-1"""
    reciprocal = qw_reciprocal(g, p, u, method)
    if abs(reciprocal) < POLE_TOL:
        raise PoleError(f"Quantum walk zeta has a pole at u={complex(u)}: det(I - uU) vanishes",
                        details={"factor": "det(I-uU)", "u": complex_pair(u), "method": method})
    return 1.0 / reciprocal


def reduced_identity_residual(g, p, u):
    """|det(I - uU) - reduced form| / (1 + |det(I - uU)|)"""
    direct = qw_reciprocal(g, p, u, "direct")
    reduced = qw_reciprocal(g, p, u, "reduced")
    return abs(direct - reduced) / (1.0 + abs(direct))


def _apply_prefactor(poly, constant, exponent):
    """poly * (x^2 + constant)^exponent, dividing when exponent < 0"""
    factor = ComplexPolynomial.monomial_binomial(constant, abs(exponent))
    if exponent >= 0:
        return poly * factor
    return poly.divide_exact(factor)


def qw_charpoly(g, p, method="direct"):
    """det(lambda I - U) = (lambda^2 - b^2)^(m-n) det((lambda^2 - ab) I - c lambda dSd*)"""
    _check_method(method, METHODS)
    ops = build_operators(g, p)
    if method == "direct":
        return ComplexPolynomial.from_roots(np.linalg.eigvals(ops.U))

    eye = np.eye(g.n)
    interior = interpolate_on_circle(
        lambda lam: np.linalg.det((lam * lam - p.a * p.b) * eye - p.c * lam * ops.dSd),
        2 * g.n, radius=_interpolation_radius(p))
    return _apply_prefactor(interior, -p.b * p.b, g.m - g.n)


def konno_sato_charpoly(g):
    """(lambda^2 - 1)^(m-n) det((lambda^2 + 1) I - 2 lambda T)"""
    T = transition_matrix(g)
    eye = np.eye(g.n)
    interior = interpolate_on_circle(
        lambda lam: np.linalg.det((lam * lam + 1.0) * eye - 2.0 * lam * T),
        2 * g.n, radius=1.25)
    return _apply_prefactor(interior, -1.0, g.m - g.n)


def konno_sato_degree_form(g):
    """(lambda^2 - 1)^(m-n) det((lambda^2 + 1) D - 2 lambda A) / (d_1 ... d_n)"""
    A = adjacency_matrix(g)
    D = degree_matrix(g)
    degree_product = float(np.prod(np.asarray(g.degrees, dtype=np.float64)))
    interior = interpolate_on_circle(
        lambda lam: np.linalg.det((lam * lam + 1.0) * D - 2.0 * lam * A) / degree_product,
        2 * g.n, radius=1.25)
    return _apply_prefactor(interior, -1.0, g.m - g.n)


def mapped_root_pairs(g, p):
    """
    For each eigenvalue mu of dSd*, the two roots of
    lambda^2 - c mu lambda - ab = 0. Returns (mu, lambda_plus, lambda_minus).
    """
    ops = build_operators(g, p)
    mu = np.linalg.eigvalsh(ops.dSd.real)
    # |mu| <= 1 with equality only at the spectrum ends; snap so double roots stay double
    edge = np.abs(np.abs(mu) - 1.0) < MU_SNAP
    mu[edge] = np.sign(mu[edge])
    mu = mu.astype(np.complex128)
    root = np.sqrt(p.c * p.c * mu * mu + 4.0 * p.a * p.b)
    return mu, (p.c * mu + root) / 2.0, (p.c * mu - root) / 2.0


def _remove_nearest(values, target, count):
    values = list(values)
    for _ in range(count):
        k = int(np.argmin(np.abs(np.asarray(values) - target)))
        values.pop(k)
    return values


def qw_spectrum(g, p, method="direct"):
    """Spectrum of U directly, or mapped from the spectrum of dSd*"""
    _check_method(method, SPECTRUM_METHODS)
    excess = g.m - g.n
    if method == "direct":
        eigenvalues = np.linalg.eigvals(build_operators(g, p).U)
    else:
        _, plus, minus = mapped_root_pairs(g, p)
        values = list(np.concatenate([plus, minus]))
        if excess >= 0:
            values += [p.b] * excess + [-p.b] * excess
        else:
            values = _remove_nearest(values, p.b, -excess)
            values = _remove_nearest(values, -p.b, -excess)
        eigenvalues = np.asarray(values, dtype=np.complex128)

    if p.unitary_flag:
        drift = float(np.max(np.abs(np.abs(eigenvalues) - 1.0)))
        if drift > 1e-9:
            logger.warning("Unimodular coin but eigenvalue modulus drifts by %.2e", drift)
    return SpectrumResult(eigenvalues=canonical_sort(eigenvalues),
                          multiplicity_of_plus_b=excess,
                          multiplicity_of_minus_b=excess)


def qw_log_series(g, p, L):
    """trace(U^m) / m for m = 1..L: the Taylor coefficients of log zeta"""
    U = build_operators(g, p).U
    out = np.zeros(L, dtype=np.complex128)
    power = np.eye(g.arc_count, dtype=np.complex128)
    for m in range(1, L + 1):
        power = power @ U
        out[m - 1] = np.trace(power) / m
    return out


def qw_log_series_from_determinant(g, p, L, method="reduced"):
    """Series of -log det(I - uU), read off the reversed characteristic polynomial"""
    charpoly = qw_charpoly(g, p, method)
    size = g.arc_count + 1
    coeffs = np.zeros(size, dtype=np.complex128)
    coeffs[: len(charpoly.coefficients)] = charpoly.coefficients
    return -series_log(coeffs[::-1], L)
