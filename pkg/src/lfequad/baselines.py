"""Baseline quadrature rules used for comparison runs.

Composite Simpson consumes the same uniform samples as the windowed method;
Clenshaw-Curtis gets a function evaluator because its nodes are nonuniform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import SampledFunction
from .errors import InvalidGridError


def simpson(samples: SampledFunction) -> float:
    """Composite Simpson rule; requires an even number of subintervals."""
    M = samples.grid.M
    if M % 2 != 0:
        raise InvalidGridError(f"composite Simpson needs even M, got {M}")
    v = samples.values
    h = samples.grid.h
    return float(h / 3.0 * (v[0] + v[-1] + 4.0 * v[1:-1:2].sum() + 2.0 * v[2:-2:2].sum()))


@dataclass(frozen=True)
class CCRule:
    """Clenshaw-Curtis rule with M+1 nodes cos(j*pi/M) mapped onto [a, b]."""

    a: float
    b: float
    M: int
    nodes: np.ndarray
    weights: np.ndarray


def clenshaw_curtis_rule(a: float, b: float, M: int) -> CCRule:
    """Nodes and weights via the explicit cosine sums.

    The O(M^2) weight evaluation is deliberate: at the grid sizes used here
    (M <= a few thousand) it is negligible and avoids transform machinery.
    Weights are positive and sum to b - a.
    """
    if M < 2 or M % 2 != 0:
        raise InvalidGridError(f"Clenshaw-Curtis rule needs even M >= 2, got {M}")
    theta = np.pi * np.arange(M + 1) / M
    w = np.zeros(M + 1)
    interior = np.ones(M - 1)
    for k in range(1, M // 2):
        interior -= 2.0 * np.cos(2.0 * k * theta[1:-1]) / (4.0 * k * k - 1.0)
    interior -= np.cos(M * theta[1:-1]) / (M * M - 1.0)
    w[1:-1] = 2.0 * interior / M
    w[0] = w[-1] = 1.0 / (M * M - 1.0)
    nodes = 0.5 * (b - a) * (np.cos(theta) + 1.0) + a
    return CCRule(a=a, b=b, M=M, nodes=nodes, weights=0.5 * (b - a) * w)


def clenshaw_curtis(f, a: float, b: float, M: int) -> float:
    """Clenshaw-Curtis value of a function evaluator on [a, b] with M+1 nodes."""
    rule = clenshaw_curtis_rule(a, b, M)
    return float(rule.weights @ np.asarray(f(rule.nodes), dtype=float))
