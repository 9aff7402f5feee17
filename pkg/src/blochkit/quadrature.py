"""Gauss-Legendre quadrature with endpoint square-root substitutions.

Integrals here fall into two families: smooth complex integrands along
parameterized contour legs, and real integrands on [a, b] whose endpoint
behavior is (t-a)^(-1/2) or (t-a)^(+1/2) (same at b).  The singular/stiff
endpoints are regularized by the substitution t = a + u^2 (or t = b - u^2),
after which plain node-doubling Gauss handles everything: results are accepted
only when doubling the node count moves the value by less than the tolerance.

Integrands must accept numpy arrays.  Gauss nodes are strictly interior, so
integrands are never evaluated at the endpoints themselves.
"""

from __future__ import annotations

import functools

import numpy as np

from .errors import ConvergenceError, DomainError

MAX_NODES = 2048


@functools.lru_cache(maxsize=64)
def gauss_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Legendre nodes and weights on [-1, 1] (cached, read-only)."""
    if n < 1:
        raise DomainError("node count must be positive")
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def integrate_fixed(f, a: float, b: float, n: int):
    """Gauss quadrature of f over [a, b] with exactly n nodes."""
    x, w = gauss_nodes(n)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * np.dot(w, f(mid + half * x))


def integrate_adaptive(f, a: float, b: float, tol: float = 1e-12,
                       n0: int = 16) -> tuple[complex, int]:
    """Node-doubling Gauss: accept I(2N) once |I(2N) - I(N)| is below
    tol * max(1, |I(2N)|).  Returns (value, accepted node count)."""
    n = max(int(n0), 2)
    prev = integrate_fixed(f, a, b, n)
    delta = float("inf")
    # the absolute node cap matters: Legendre node generation is superlinear
    # in n, so an unattainable tolerance must fail fast instead of climbing
    # into minute-long eigenvalue solves
    while 2 * n <= MAX_NODES:
        n *= 2
        cur = integrate_fixed(f, a, b, n)
        delta = abs(cur - prev)
        if delta <= tol * max(1.0, abs(cur)):
            return cur, n
        prev = cur
    raise ConvergenceError(
        f"quadrature did not converge by {n} nodes (last delta {delta:.3e})"
    )


def _substitute(f, a: float, b: float, left: str, right: str):
    """Rewrite the integral over [a, b] as smooth pieces; returns a list of
    (integrand, lo, hi) in the substituted variable."""
    for side in (left, right):
        if side not in ("none", "inv", "pos"):
            raise DomainError(f"unknown endpoint mode {side!r}")
    if left != "none" and right != "none":
        m = 0.5 * (a + b)
        return (_substitute(f, a, m, left, "none")
                + _substitute(f, m, b, "none", right))
    if left != "none":
        return [(lambda u: f(a + u * u) * 2.0 * u, 0.0, np.sqrt(b - a))]
    if right != "none":
        return [(lambda u: f(b - u * u) * 2.0 * u, 0.0, np.sqrt(b - a))]
    return [(f, a, b)]


def integrate_endpoint_sqrt(f, a: float, b: float, left: str = "none",
                            right: str = "none", tol: float = 1e-12,
                            n0: int = 16) -> tuple[complex, int]:
    """Adaptive integral of f over [a, b] with square-root endpoint handling.

    left/right: "inv" for an inverse-square-root factor at that endpoint,
    "pos" for a (t-endpoint)^(1/2) factor (singular derivative), "none" for a
    smooth endpoint.  Returns (value, total node count)."""
    if not b > a:
        raise DomainError("integration interval must satisfy b > a")
    total = 0.0 + 0.0j
    nodes = 0
    for g, lo, hi in _substitute(f, a, b, left, right):
        val, used = integrate_adaptive(g, lo, hi, tol=tol, n0=n0)
        total += val
        nodes += used
    return total, nodes


def integrate_endpoint_sqrt_fixed(f, a: float, b: float, left: str = "none",
                                  right: str = "none", n: int = 64):
    """Fixed-node variant of integrate_endpoint_sqrt (n nodes per piece)."""
    if not b > a:
        raise DomainError("integration interval must satisfy b > a")
    total = 0.0 + 0.0j
    for g, lo, hi in _substitute(f, a, b, left, right):
        total += integrate_fixed(g, lo, hi, n)
    return total
