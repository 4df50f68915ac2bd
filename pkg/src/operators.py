"""
Operators of a general coined quantum walk on a finite graph.

All matrices are dense numpy arrays, indexed by vertices (n) or arcs (2m)
in the Graph's canonical order.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from src.errors import ValidationError
from src.graph import adjacency_matrix

logger = logging.getLogger(__name__)

UNITARY_TOL = 1e-12


@dataclass(frozen=True)
class CoinParams:
    """Coin C = a d*d + b (I - d*d) with c = a - b"""

    a: complex
    b: complex
    c: complex = field(init=False)
    unitary_flag: bool = field(init=False)

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", a - b)
        unitary = abs(abs(a) - 1.0) <= UNITARY_TOL and abs(abs(b) - 1.0) <= UNITARY_TOL
        object.__setattr__(self, "unitary_flag", unitary)
        if not unitary:
            logger.warning("Coin (a=%s, b=%s) is not unimodular; U is not unitary", a, b)

    @classmethod
    def grover(cls):
        return cls(1.0, -1.0)

    def to_dict(self):
        return {
            "a": [self.a.real, self.a.imag],
            "b": [self.b.real, self.b.imag],
            "c": [self.c.real, self.c.imag],
            "unitary": self.unitary_flag,
        }


@dataclass(frozen=True)
class OperatorBundle:
    S: np.ndarray
    d: np.ndarray
    C: np.ndarray
    U: np.ndarray
    dSd: np.ndarray
    q: int


def shift_matrix(g):
    """(S w)(e) = w(e^-1): swaps each arc with its inverse"""
    idx = np.arange(g.arc_count)
    S = np.zeros((g.arc_count, g.arc_count), dtype=np.float64)
    S[idx, idx ^ 1] = 1.0
    return S


def boundary_map(g):
    """d(v, e) = [v = t(e)] / sqrt(deg t(e)); rows are orthonormal"""
    deg = np.asarray(g.degrees, dtype=np.float64)
    d = np.zeros((g.n, g.arc_count), dtype=np.complex128)
    d[g.terminals, np.arange(g.arc_count)] = 1.0 / np.sqrt(deg[g.terminals])
    return d


def coin_matrix(g, p):
    d = boundary_map(g)
    P = d.conj().T @ d
    return p.a * P + p.b * (np.eye(g.arc_count) - P)


def evolution_matrix(g, p):
    return shift_matrix(g) @ coin_matrix(g, p)


def grover_matrix(g):
    """
    Grover matrix from its entry table:
    2/deg t(f) if t(f) = o(e) and f != e^-1, 2/deg t(f) - 1 if f = e^-1, else 0.
    """
    deg = np.asarray(g.degrees, dtype=np.float64)
    meets = g.terminals[None, :] == g.origins[:, None]
    U = np.where(meets, 2.0 / deg[g.terminals][None, :], 0.0)
    idx = np.arange(g.arc_count)
    U[idx, idx ^ 1] -= 1.0
    return U


def positive_support(F):
    F = np.asarray(F)
    if np.iscomplexobj(F):
        if np.any(F.imag != 0):
            raise ValidationError("Positive support needs a real matrix",
                                  reason="complex-input")
        F = F.real
    return (F > 0).astype(np.int64)


def transition_similarity(g):
    """D^-1/2 A D^-1/2, the symmetric form of the random-walk transition matrix"""
    scale = 1.0 / np.sqrt(np.asarray(g.degrees, dtype=np.float64))
    return adjacency_matrix(g) * scale[:, None] * scale[None, :]


def build_operators(g, p):
    S = shift_matrix(g)
    d = boundary_map(g)
    C = coin_matrix(g, p)
    return OperatorBundle(S=S, d=d, C=C, U=S @ C, dSd=d @ S @ d.conj().T, q=g.n)
