"""Sliding-window quadrature on a uniform grid.

The grid is partitioned into overlapping windows of m nodes (adjacent windows
share one node, so the shift is m-1 cells). Each window is fitted with the
precomputed reference factors and contributes the analytic integral of its
fit over the block of cells it covers. Three grid regimes exist:

* more nodes than a window: full windows every m-1 cells, plus, when M is not
  divisible by m-1, one tail window that reuses the last m nodes (borrowing
  already-covered nodes on the left) and integrates only the leftover cells
  through a truncated weight range;
* exactly one window's worth of nodes: a single full window;
* fewer nodes than a window: a single bespoke fit using all available nodes
  with a correspondingly reduced mode count.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, GridError, InvalidInputError
from .linalg import norm2
from .reference import (
    ReferenceFactors,
    WindowConfig,
    build_reference,
    integrate_expansion,
    LocalExpansion,
    mode_weights,
    solve_coefficients,
)


@dataclass(frozen=True)
class UniformGrid:
    """Equidistant nodes a + j*h, j = 0..M, with h = (b-a)/M."""

    a: float
    b: float
    M: int

    def __post_init__(self):
        if not self.b > self.a:
            raise InvalidInputError(f"need b > a, got [{self.a}, {self.b}]")
        if self.M < 1:
            raise InvalidInputError(f"need at least one cell, got M={self.M}")

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.M

    def node(self, j: int) -> float:
        return self.a + j * self.h

    def nodes(self) -> np.ndarray:
        return self.a + np.arange(self.M + 1) * self.h


@dataclass(frozen=True)
class SampledFunction:
    grid: UniformGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.M + 1,):
            raise InvalidInputError(
                f"expected {self.grid.M + 1} values for M={self.grid.M}, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise InvalidInputError("sample values contain non-finite entries")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, f, a: float, b: float, M: int) -> "SampledFunction":
        grid = UniformGrid(a, b, M)
        return cls(grid=grid, values=np.asarray(f(grid.nodes()), dtype=float))


@dataclass(frozen=True)
class WindowSpan:
    """One planned window: node range, weight range, and covered cells.

    ``block`` is a pair of node indices; the window's contribution is the
    integral over [node(block[0]), node(block[1])]. For full windows that is
    the whole window span and t_lo = 0; a tail window covers only the
    leftover cells, mapped to [t_lo, 2*pi/T] in reference coordinates.
    """

    start: int
    kind: str  # "full" | "tail" | "small"
    t_lo: float
    block: tuple[int, int]


@dataclass(frozen=True)
class WindowPlan:
    grid: UniformGrid
    config: WindowConfig
    windows: tuple[WindowSpan, ...]


@dataclass(frozen=True)
class WindowResult:
    window: WindowSpan
    coefficients: np.ndarray
    eta: float  # coefficient energy ||c||_2
    contribution: float


@dataclass(frozen=True)
class QuadratureReport:
    """Total value plus per-window diagnostics.

    ``value`` already includes any corrections; ``window_results`` keeps the
    original (uncorrected) per-window contributions and coefficient energies,
    which is what makes re-running the corrector a no-op.
    """

    value: float
    window_results: tuple[WindowResult, ...]
    corrections: tuple = ()
    config_used: WindowConfig = WindowConfig()
    imag_residue: float = 0.0
    warnings: tuple[str, ...] = ()

    def with_corrections(self, corrections, value, warnings=()) -> "QuadratureReport":
        return replace(
            self,
            value=value,
            corrections=tuple(corrections),
            warnings=self.warnings + tuple(warnings),
        )


def plan_windows(grid: UniformGrid, config: WindowConfig) -> WindowPlan:
    """Decompose the grid into windows whose covered blocks tile [a, b] exactly.

    Block bookkeeping is integer node counting, so the tiling has no float
    drift by construction.
    """
    m = config.m
    M = grid.M
    shift = m - 1
    windows: list[WindowSpan] = []
    if M + 1 < m:
        windows.append(WindowSpan(start=0, kind="small", t_lo=0.0, block=(0, M)))
    else:
        nfull = M // shift
        for k in range(nfull):
            s = k * shift
            windows.append(WindowSpan(start=s, kind="full", t_lo=0.0, block=(s, s + shift)))
        r = M % shift
        if r > 0:
            t_lo = config.lam * (shift - r) / shift
            windows.append(
                WindowSpan(start=M - shift, kind="tail", t_lo=t_lo, block=(M - r, M))
            )
    return WindowPlan(grid=grid, config=config, windows=tuple(windows))


def integrate_small(samples: SampledFunction, config: WindowConfig) -> QuadratureReport:
    """Single-window fit for grids with fewer nodes than a standard window.

    Builds an (M+1) x (2n'+1) system with n' = floor(M/2) over the same
    reference interval and integrates it in one shot. Needs at least three
    nodes.
    """
    grid = samples.grid
    if grid.M + 1 >= config.m:
        raise GridError(f"grid with {grid.M + 1} nodes is not a small-grid case for m={config.m}")
    if grid.M + 1 < 3:
        raise GridError(f"need at least 3 nodes, got {grid.M + 1}")
    sub = WindowConfig(n=grid.M // 2, m=grid.M + 1, T=config.T, epsilon=config.epsilon)
    factors = build_reference(sub)
    c = solve_coefficients(factors, samples.values.astype(complex))
    scale = (sub.T / (2.0 * np.pi)) * (grid.b - grid.a)
    expansion = LocalExpansion(coefficients=c, scale=scale, origin=grid.a, L=sub.L)
    q = integrate_expansion(expansion, mode_weights(sub, 0.0))
    result = WindowResult(
        window=WindowSpan(start=0, kind="small", t_lo=0.0, block=(0, grid.M)),
        coefficients=c,
        eta=norm2(c),
        contribution=q.real,
    )
    return QuadratureReport(
        value=q.real,
        window_results=(result,),
        config_used=config,
        imag_residue=abs(q.imag),
    )


def integrate(
    samples: SampledFunction,
    config: WindowConfig | None = None,
    factors: ReferenceFactors | None = None,
) -> QuadratureReport:
    """Windowed quadrature of uniformly sampled data.

    Parameters
    ----------
    samples : SampledFunction
        Values on a uniform grid.
    config : WindowConfig, optional
        Fit parameters; defaults to the standard configuration.
    factors : ReferenceFactors, optional
        Precomputed reference factors. Must agree with ``config`` on
        (n, m, T); built (and cached) on demand when omitted.

    Returns
    -------
    QuadratureReport
        Real total, per-window coefficients/energies/contributions, and the
        imaginary residue of the complex accumulation as a diagnostic.
    """
    if config is None:
        config = factors.config if factors is not None else WindowConfig()
    if samples.grid.M + 1 < config.m:
        return integrate_small(samples, config)
    if factors is None:
        factors = build_reference(config)
    fc = factors.config
    if (fc.n, fc.m, fc.T) != (config.n, config.m, config.T):
        raise ConfigError(
            f"factors built for (n={fc.n}, m={fc.m}, T={fc.T}) do not match "
            f"(n={config.n}, m={config.m}, T={config.T})"
        )
    grid = samples.grid
    plan = plan_windows(grid, config)
    scale = (config.T / (2.0 * np.pi)) * (config.m - 1) * grid.h
    w_full = mode_weights(config, 0.0)
    results = []
    total = 0.0 + 0.0j
    for span in plan.windows:
        # windows copy their slice: solves are independent and parallelizable
        g = samples.values[span.start : span.start + config.m].astype(complex)
        c = solve_coefficients(factors, g, config.epsilon)
        w = w_full if span.kind == "full" else mode_weights(config, span.t_lo)
        expansion = LocalExpansion(
            coefficients=c, scale=scale, origin=grid.node(span.start), L=factors.L
        )
        q = integrate_expansion(expansion, w)
        results.append(
            WindowResult(window=span, coefficients=c, eta=norm2(c), contribution=q.real)
        )
        total += q
    return QuadratureReport(
        value=total.real,
        window_results=tuple(results),
        config_used=config,
        imag_residue=abs(total.imag),
    )
