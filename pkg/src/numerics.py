"""
Small numerical helpers: complex parsing/formatting, principal-branch
log-determinants and multiset comparison of spectra.
"""

import numpy as np
from scipy.optimize import linear_sum_assignment

from src.errors import ValidationError

SORT_GRID = 1e-8


def parse_complex(text):
    """'re,im' (or a bare real) -> complex"""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    parts = [p.strip() for p in str(text).split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ValidationError(f"Expected a complex value as 're,im', got {text!r}",
                          reason="complex-format", details={"value": str(text)})


def complex_pair(z):
    z = complex(z)
    return [float(z.real), float(z.imag)]


def principal_logdet(M):
    """Sum of principal logs of the eigenvalues of M (batched over leading axes)"""
    eigenvalues = np.linalg.eigvals(M)
    return np.log(eigenvalues).sum(axis=-1)


def canonical_sort(values):
    """Sort complex values by (real, imag) after rounding to the 1e-8 grid"""
    values = np.asarray(values, dtype=np.complex128)
    re = np.round(values.real / SORT_GRID) * SORT_GRID
    im = np.round(values.imag / SORT_GRID) * SORT_GRID
    order = np.lexsort((im, re))
    return values[order]


def spectra_match(x, y):
    """
    Largest distance in an optimal one-to-one matching of two multisets.
    Infinite when the sizes differ.
    """
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    if x.shape != y.shape:
        return float("inf")
    if x.size == 0:
        return 0.0
    cost = np.abs(x[:, None] - y[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
