"""Dense complex linear algebra for small Fourier-continuation systems.

Everything here operates on matrices no larger than a few tens of rows, so
plain LAPACK through numpy is accurate, fast, and repeatable. The module
exists to pin down the exact contracts the rest of the pipeline relies on
(descending singular values, orthonormal factors, determinism for identical
input) rather than to reinvent linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InvalidInputError


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD ``a = u @ diag(sigma) @ v.conj().T``.

    ``u`` is (rows, r), ``v`` is (cols, r), ``sigma`` is (r,) sorted
    descending with r = min(rows, cols). Columns of ``u`` and ``v`` are
    orthonormal to roundoff.
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    @property
    def rank(self) -> int:
        return self.sigma.size


def svd(a: np.ndarray) -> SvdFactors:
    """Factor a complex matrix, singular values in descending order.

    Deterministic for identical input: the same bits in give the same bits
    out on a given build. Non-finite entries are rejected.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidInputError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix contains non-finite entries")
    u, sigma, vh = np.linalg.svd(a, full_matrices=False)
    return SvdFactors(u=u, sigma=sigma, v=vh.conj().T)


def matvec_adjoint(a: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Adjoint product ``a.conj().T @ x`` with an explicit dimension check."""
    a = np.asarray(a)
    x = np.asarray(x)
    if a.ndim != 2 or x.shape != (a.shape[0],):
        raise DimensionMismatchError(
            f"adjoint product needs x of length {a.shape[0]}, got shape {x.shape}"
        )
    return a.conj().T @ x


def norm2(x: np.ndarray) -> float:
    """Euclidean norm of a (possibly complex) vector."""
    return float(np.linalg.norm(np.asarray(x)))
