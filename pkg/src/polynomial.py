"""
ComplexPolynomial: ascending-degree coefficient arrays over complex scalars,
plus the power-series helpers used by the log-series oracles.
"""

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from src.errors import ValidationError


@dataclass(frozen=True, eq=False)
class ComplexPolynomial:
    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.atleast_1d(np.asarray(self.coefficients, dtype=np.complex128))
        nonzero = np.flatnonzero(coeffs)
        coeffs = coeffs[: nonzero[-1] + 1] if nonzero.size else coeffs[:1]
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def __call__(self, x):
        return P.polyval(x, self.coefficients)

    def __mul__(self, other):
        return ComplexPolynomial(P.polymul(self.coefficients, other.coefficients))

    def __pow__(self, k):
        if k < 0:
            raise ValidationError("Polynomial powers must be non-negative", reason="power")
        return ComplexPolynomial(P.polypow(self.coefficients, k))

    def divide_exact(self, other, tol=1e-9):
        """Quotient by other; the remainder must vanish relative to tol"""
        quotient, remainder = P.polydiv(self.coefficients, other.coefficients)
        scale = 1.0 + np.abs(self.coefficients).max()
        if np.abs(remainder).max() > tol * scale:
            raise ValidationError("Polynomial division leaves a remainder",
                                  reason="inexact-division",
                                  details={"remainder": float(np.abs(remainder).max())})
        return ComplexPolynomial(quotient)

    def trimmed(self, tol):
        """Drop trailing coefficients with modulus <= tol"""
        coeffs = self.coefficients
        keep = np.flatnonzero(np.abs(coeffs) > tol)
        return ComplexPolynomial(coeffs[: keep[-1] + 1] if keep.size else coeffs[:1])

    def max_gap(self, other):
        """Largest coefficientwise difference (shorter one zero-padded)"""
        size = max(len(self.coefficients), len(other.coefficients))
        x = np.zeros(size, dtype=np.complex128)
        y = np.zeros(size, dtype=np.complex128)
        x[: len(self.coefficients)] = self.coefficients
        y[: len(other.coefficients)] = other.coefficients
        return float(np.abs(x - y).max())

    def to_pairs(self):
        return [[float(z.real), float(z.imag)] for z in self.coefficients]

    @classmethod
    def from_roots(cls, roots):
        return cls(P.polyfromroots(np.asarray(roots, dtype=np.complex128)))

    @classmethod
    def monomial_binomial(cls, constant, power):
        """(x^2 + constant)^power"""
        return cls([constant, 0.0, 1.0]) ** power

    def __repr__(self):
        return f"ComplexPolynomial(degree={self.degree})"


def interpolate_on_circle(fn, degree, radius=1.0):
    """
    Coefficients of a polynomial of the given degree from its values at
    degree + 1 equispaced points on |x| = radius (inverse DFT).
    """
    count = degree + 1
    nodes = radius * np.exp(2j * np.pi * np.arange(count) / count)
    values = np.array([fn(x) for x in nodes], dtype=np.complex128)
    coeffs = np.fft.fft(values) / count
    coeffs = coeffs / radius ** np.arange(count)
    return ComplexPolynomial(coeffs)


def series_log(coefficients, L):
    """
    Taylor coefficients 1..L of log f for a power series f with f(0) != 0.
    Returned array index k - 1 holds the coefficient of x^k.
    """
    a = np.zeros(L + 1, dtype=np.complex128)
    given = np.asarray(coefficients, dtype=np.complex128)[: L + 1]
    a[: len(given)] = given
    if a[0] == 0:
        raise ValidationError("log series needs a nonzero constant term", reason="series")
    a = a / a[0]

    g = np.zeros(L + 1, dtype=np.complex128)
    for k in range(1, L + 1):
        acc = k * a[k]
        for j in range(1, k):
            acc -= j * g[j] * a[k - j]
        g[k] = acc / k
    return g[1:]


def log_one_minus_power_series(power, L):
    """Coefficients 1..L of log(1 - x^power)"""
    out = np.zeros(L, dtype=np.complex128)
    for j in range(1, L // power + 1):
        out[j * power - 1] = -1.0 / j
    return out
