"""Dense complex matrix primitives: log-determinants and small exact
determinants with a conditioning report."""

from typing import NamedTuple

import numpy as np

__all__ = ["logdet", "logdet_batch", "det_small", "det_cofactor", "SmallDet"]

_DET_SMALL_MAX = 8


class SmallDet(NamedTuple):
    value: complex
    cond: float


def logdet(a: np.ndarray) -> tuple[float, float]:
    """(log|det A|, arg det A) with the phase in (-pi, pi].

    Singular matrices report log-modulus -inf and phase 0. Backed by LU with
    partial pivoting (LAPACK via numpy.linalg.slogdet).
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"logdet expects a square matrix, got shape {a.shape}")
    sign, logmod = np.linalg.slogdet(a.astype(np.complex128, copy=False))
    if logmod == -np.inf or sign == 0:
        return -np.inf, 0.0
    phase = float(np.angle(sign))
    if phase <= -np.pi:
        phase = np.pi
    return float(logmod), phase


def logdet_batch(a: np.ndarray) -> np.ndarray:
    """log|det| over a stack of square matrices (shape (..., n, n)).

    -inf entries mark singular members; used by the Monte Carlo estimators.
    """
    a = np.asarray(a, dtype=np.complex128)
    sign, logmod = np.linalg.slogdet(a)
    return np.where(sign == 0, -np.inf, logmod)


def det_small(a: np.ndarray) -> SmallDet:
    """Determinant of an n x n matrix with n <= 8, plus a condition estimate.

    Incomplete-moment matrices turn ill-conditioned quickly as their order
    grows, so the 2-norm condition number is reported alongside the value.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"det_small expects a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > _DET_SMALL_MAX:
        raise ValueError(f"det_small supports n <= {_DET_SMALL_MAX}, got n = {n}")
    value = complex(np.linalg.det(a))
    try:
        cond = float(np.linalg.cond(a))
    except np.linalg.LinAlgError:
        cond = np.inf
    return SmallDet(value, cond)


def det_cofactor(a: np.ndarray) -> complex:
    """Brute-force determinant by first-row cofactor expansion (oracle)."""
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    if n == 1:
        return complex(a[0, 0])
    total = 0.0 + 0.0j
    cols = np.arange(n)
    for j in range(n):
        minor = a[1:][:, cols != j]
        total += (-1) ** j * a[0, j] * det_cofactor(minor)
    return complex(total)
