"""Reference-window Fourier continuation: matrix, factorization, weights.

Every physical window of a uniform grid maps affinely onto the same reference
interval ``[0, 2*pi/T]`` with ``T > 1``, i.e. onto the leading ``1/T`` slice
of a full period. One complex node matrix therefore serves all windows, and
its SVD is computed once and reused. Solving the (severely ill-conditioned)
least-squares system with a truncated SVD gives coefficients whose integrals
are available in closed form, which is what makes the quadrature accurate.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigError, DimensionMismatchError, InvalidInputError
from .linalg import SvdFactors, matvec_adjoint, svd

_CACHE_MAGIC = b"LFEQREF1"


@dataclass(frozen=True)
class WindowConfig:
    """Fixed parameters of the reference fit.

    n        mode half-count; modes run over -n..n (2n+1 columns)
    m        samples per window (defaults to 2n+1, one sample per column)
    T        extension ratio; the data occupies [0, 2*pi/T] of a 2*pi period
    epsilon  truncation threshold for the SVD solve, measured against the
             singular values of the unnormalized node system (see
             solve_coefficients)
    """

    n: int = 10
    m: int = 21
    T: float = 6.0
    epsilon: float = 1e-15

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"mode half-count must be >= 1, got {self.n}")
        if self.m < 2 * self.n + 1:
            raise ConfigError(f"m={self.m} underdetermines 2n+1={2 * self.n + 1} modes")
        if not self.T > 1:
            raise ConfigError(f"extension ratio must exceed 1, got {self.T}")
        if not self.epsilon > 0:
            raise ConfigError(f"truncation threshold must be positive, got {self.epsilon}")

    @property
    def lam(self) -> float:
        """Length of the sampled reference interval, 2*pi/T."""
        return 2.0 * np.pi / self.T

    @property
    def L(self) -> float:
        """Normalization constant T*(m-1); matrix entries carry 1/sqrt(L)."""
        return self.T * (self.m - 1)

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.n, self.n + 1)


@dataclass(frozen=True)
class ReferenceFactors:
    """Node matrix on the reference interval together with its SVD."""

    config: WindowConfig
    matrix: np.ndarray  # (m, 2n+1), entry (i, l) = exp(1j*l*t_i)/sqrt(L)
    svd: SvdFactors
    L: float

    @property
    def nodes(self) -> np.ndarray:
        c = self.config
        return np.arange(c.m) * (c.lam / (c.m - 1))


@lru_cache(maxsize=32)
def _build(n: int, m: int, T: float) -> tuple[np.ndarray, SvdFactors]:
    lam = 2.0 * np.pi / T
    L = T * (m - 1)
    t = np.arange(m) * (lam / (m - 1))
    ell = np.arange(-n, n + 1)
    matrix = np.exp(1j * np.outer(t, ell)) / np.sqrt(L)
    return matrix, svd(matrix)


def build_reference(config: WindowConfig) -> ReferenceFactors:
    """Build (or fetch from cache) the reference matrix and its SVD.

    The factors depend only on (n, m, T); epsilon stays a solve-time
    parameter so one factorization serves every truncation level.
    Rebuilding with an equal config returns bitwise-identical factors.
    """
    matrix, factors = _build(config.n, config.m, float(config.T))
    return ReferenceFactors(config=config, matrix=matrix, svd=factors, L=config.L)


@dataclass(frozen=True)
class ModeWeights:
    """Closed-form integrals of the Fourier modes over [t_lo, t_hi].

    weights[l+n] = integral of exp(1j*l*t) over [t_lo, t_hi], so
    weights[-l] = conj(weights[l]) for real limits.
    """

    weights: np.ndarray
    t_lo: float
    t_hi: float


def mode_weights(config: WindowConfig, t_lo: float, t_hi: float | None = None) -> ModeWeights:
    """Analytic mode integrals over ``[t_lo, t_hi]`` (default upper limit 2*pi/T).

    The l = 0 weight is the interval length; for l != 0 the antiderivative
    exp(1j*l*t)/(1j*l) is evaluated at the limits. No quadrature is involved.
    """
    lam = config.lam
    if t_hi is None:
        if not 0.0 <= t_lo < lam:
            raise InvalidInputError(f"t_lo={t_lo} outside [0, {lam})")
        t_hi = lam
    else:
        slack = 1e-12 * lam
        if not (-slack <= t_lo <= t_hi <= lam + slack):
            raise InvalidInputError(f"bad weight range [{t_lo}, {t_hi}] for lam={lam}")
    ell = config.modes
    w = np.empty(ell.size, dtype=complex)
    nz = ell != 0
    w[~nz] = t_hi - t_lo
    lnz = ell[nz]
    w[nz] = (np.exp(1j * lnz * t_hi) - np.exp(1j * lnz * t_lo)) / (1j * lnz)
    return ModeWeights(weights=w, t_lo=float(t_lo), t_hi=float(t_hi))


def solve_coefficients(
    factors: ReferenceFactors, samples: np.ndarray, epsilon: float | None = None
) -> np.ndarray:
    """Truncated-SVD solve for the window coefficients.

    The three stages run separately, in this order: project the data onto the
    left singular basis, rescale the retained directions, synthesize with the
    right singular basis. The merged pseudoinverse matrix is never formed;
    fusing the factors amplifies roundoff through the tiny singular values.

    A direction j is retained when ``sigma_j * sqrt(L) > epsilon``: the
    threshold is calibrated to the unnormalized node system exp(1j*l*t_i).
    The 1/sqrt(L) matrix scaling keeps the factorization well-scaled but must
    not move the truncation point, otherwise directions that carry real
    signal at the default epsilon are discarded and the quadrature loses two
    to three digits on marginally resolved oscillatory data.
    """
    if epsilon is None:
        epsilon = factors.config.epsilon
    if not epsilon > 0:
        raise InvalidInputError(f"epsilon must be positive, got {epsilon}")
    g = np.asarray(samples, dtype=complex)
    if g.shape != (factors.config.m,):
        raise DimensionMismatchError(
            f"expected {factors.config.m} samples, got shape {g.shape}"
        )
    if not np.all(np.isfinite(g)):
        raise InvalidInputError("samples contain non-finite values")
    f = factors.svd
    y = matvec_adjoint(f.u, g)
    keep = f.sigma * np.sqrt(factors.L) > epsilon
    z = np.zeros_like(y)
    z[keep] = y[keep] / f.sigma[keep]
    return f.v @ z


@dataclass(frozen=True)
class LocalExpansion:
    """A solved window fit in physical coordinates.

    Reconstruction at physical x:
        (1/sqrt(L)) * sum_l c_l * exp(1j*l*(x - origin)/scale)
    where ``scale`` maps the physical window onto the reference interval and
    ``origin`` is the window's left endpoint.
    """

    coefficients: np.ndarray
    scale: float
    origin: float
    L: float


def evaluate_expansion(expansion: LocalExpansion, x) -> complex | np.ndarray:
    """Evaluate the expansion at physical x (scalar or array).

    Points slightly outside the window are fine; the continuation is defined
    on the whole extended period.
    """
    c = expansion.coefficients
    n = (c.size - 1) // 2
    ell = np.arange(-n, n + 1)
    t = (np.asarray(x, dtype=float) - expansion.origin) / expansion.scale
    vals = np.exp(1j * np.multiply.outer(t, ell)) @ c / np.sqrt(expansion.L)
    if np.ndim(x) == 0:
        return complex(vals)
    return vals


def integrate_expansion(expansion: LocalExpansion, weights: ModeWeights) -> complex:
    """Integral of the expansion over the weights' reference range.

    Plain weighted sum scale * (1/sqrt(L)) * sum_l w_l c_l; the weights
    multiply the coefficients directly (no conjugation) and 1/sqrt(L)
    compensates the matrix normalization.
    """
    c = expansion.coefficients
    if weights.weights.shape != c.shape:
        raise DimensionMismatchError(
            f"weights length {weights.weights.size} != coefficients length {c.size}"
        )
    return complex(expansion.scale * (weights.weights @ c) / np.sqrt(expansion.L))


def save_factors(factors: ReferenceFactors, path) -> None:
    """Serialize factors to a small versioned binary cache keyed by (n, m, T)."""
    c = factors.config
    f = factors.svd
    with open(path, "wb") as fh:
        fh.write(_CACHE_MAGIC)
        fh.write(struct.pack("<qqd", c.n, c.m, float(c.T)))
        for arr in (f.u, f.sigma.astype(complex), f.v):
            fh.write(np.ascontiguousarray(arr, dtype=np.complex128).tobytes())


def load_factors(path, epsilon: float = 1e-15) -> ReferenceFactors:
    """Read a cache written by save_factors; rebuilds the node matrix from (n, m, T)."""
    with open(path, "rb") as fh:
        magic = fh.read(len(_CACHE_MAGIC))
        if magic != _CACHE_MAGIC:
            raise InvalidInputError(f"not a factors cache: bad magic {magic!r}")
        n, m, T = struct.unpack("<qqd", fh.read(24))
        config = WindowConfig(n=n, m=m, T=T, epsilon=epsilon)
        r = min(m, 2 * n + 1)
        u = np.frombuffer(fh.read(16 * m * r), dtype=np.complex128).reshape(m, r)
        sigma = np.frombuffer(fh.read(16 * r), dtype=np.complex128).real.copy()
        v = np.frombuffer(fh.read(16 * (2 * n + 1) * r), dtype=np.complex128).reshape(2 * n + 1, r)
        lam = config.lam
        t = np.arange(m) * (lam / (m - 1))
        matrix = np.exp(1j * np.outer(t, config.modes)) / np.sqrt(config.L)
    return ReferenceFactors(
        config=config, matrix=matrix, svd=SvdFactors(u=u, sigma=sigma, v=v), L=config.L
    )
