"""Shared numerical helpers: Gauss nodes, sequence acceleration, extrapolation."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1], cached."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def gauss_panel(f, a: float, b: float, n: int):
    """Integrate a vectorized callable over [a, b] with n-point Gauss-Legendre."""
    x, w = gauss_legendre(n)
    half = 0.5 * (b - a)
    nodes = half * x + 0.5 * (a + b)
    return half * np.sum(w * f(nodes))


def wynn_epsilon(partial_sums) -> float:
    """Accelerated limit of a sequence of partial sums (Wynn's epsilon algorithm).

    Returns the deepest finite even-column entry; falls back to the last
    partial sum if the table degenerates early.
    """
    s = np.asarray(partial_sums, dtype=float)
    n = len(s)
    if n == 1:
        return float(s[0])
    prev = np.zeros(n)  # epsilon_{-1}
    cur = s.copy()      # epsilon_0
    best = float(s[-1])
    for k in range(1, n):
        d = np.diff(cur)
        if not np.all(np.isfinite(d)):
            break
        tiny = np.abs(d) < 1e-300
        if tiny.any():
            # two entries coincide: the sequence has converged there
            return float(cur[1:][tiny][0])
        nxt = prev[1 : len(cur)] + 1.0 / d
        prev, cur = cur, nxt
        if k % 2 == 0 and np.isfinite(cur[-1]):
            best = float(cur[-1])
        if len(cur) < 2:
            break
    return best


def extrapolate_to_zero(xs, ys) -> float:
    """Polynomial (Lagrange) extrapolation of samples (x_k, y_k) to x = 0."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    total = 0.0
    for k in range(len(xs)):
        weight = 1.0
        for j in range(len(xs)):
            if j != k:
                weight *= xs[j] / (xs[j] - xs[k])
        total += weight * ys[k]
    return float(total)


# Central finite-difference stencils on offsets -3..3, second-order accurate.
_STENCILS = {
    1: {-1: -0.5, 1: 0.5},
    2: {-1: 1.0, 0: -2.0, 1: 1.0},
    3: {-2: -0.5, -1: 1.0, 1: -1.0, 2: 0.5},
    4: {-2: 1.0, -1: -4.0, 0: 6.0, 1: -4.0, 2: 1.0},
    5: {-3: -0.5, -2: 2.0, -1: -2.5, 1: 2.5, 2: -2.0, 3: 0.5},
    6: {-3: 1.0, -2: -6.0, -1: 15.0, 0: -20.0, 1: 15.0, 2: -6.0, 3: 1.0},
}


def central_derivative(f, t: float, order: int, h: float, richardson: bool = True) -> float:
    """Derivative of callable f at t by central differences.

    With richardson=True the h and h/2 estimates are combined, promoting the
    second-order stencils to fourth order.
    """
    if order == 0:
        return f(t)
    stencil = _STENCILS[order]

    def estimate(step: float) -> float:
        acc = 0.0
        for off, coeff in stencil.items():
            if coeff == 0.0:
                continue
            acc += coeff * f(t + off * step)
        return acc / step**order

    d1 = estimate(h)
    if not richardson:
        return d1
    d2 = estimate(h / 2.0)
    return (4.0 * d2 - d1) / 3.0
