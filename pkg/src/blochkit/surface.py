"""Conformal radius of the two-sheeted surface via a half-plane mapping.

The surface is uniformized from the closed upper half-plane by w = e^(f(z))
where

    f(z) = -2 * integral from -1 to z of
           sqrt(t-d) / (sqrt(t-c) sqrt(t-1) sqrt(t+1)) dt,

with real parameters 1 < c < d fixed by two side-length conditions on the
image polygon (a half-strip of width 2*pi glued to a rectangle of height 3*pi
and width -log a):

    I1(c, d) = integral_{-1}^{1} sqrt(d-t)/sqrt((c-t)(1-t^2)) dt = 3*pi/2,
    I2(c, d) = integral_{1}^{c} sqrt(d-t)/sqrt((c-t)(t^2-1)) dt = -log(a)/2.

All square roots are numpy principal branches: each factor t - x0 has
nonnegative imaginary part on the closed upper half-plane, so every factor is
analytic there and the product agrees with the branch that is positive for
real t > d.  Contours are polylines (up from -1, across at a safe height, down
to z); the leg leaving -1 is regularized by t = -1 + i u^2.

The conformal radius at z with Im z > 0 is

    r(z) = 4 Im z |e^(f(z))| sqrt|z-d| / sqrt(|z-c| |z^2-1|),

maximized over the half-plane by deterministic multistart Nelder-Mead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    ConvergenceError,
    DomainError,
    PathError,
    SingularityError,
)
from .quadrature import integrate_adaptive, integrate_fixed

TARGET_HEIGHT = 1.5 * math.pi     # I1 condition (rectangle height 3*pi over 2)
PATH_CLEARANCE = 1e-3
BRANCH_TOL = 1e-12

#: upper-half-plane point where the radius is near-maximal for the default
#: parameter set; used as the primary optimizer seed and the constants-table
#: checkpoint
RADIUS_PROBE = -0.0205 + 0.3659j


@dataclass(frozen=True)
class SurfaceSolution:
    a: float
    c: float
    d: float
    r0: float
    argmax_z: complex
    quadrature_nodes: int

    def __post_init__(self) -> None:
        if not (1.0 < self.c < self.d):
            raise DomainError("parameters must satisfy 1 < c < d")
        if not (0.0 < self.a < 1.0):
            raise DomainError("slit parameter must satisfy 0 < a < 1")

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "c": self.c,
            "d": self.d,
            "r0": self.r0,
            "argmax_z": [self.argmax_z.real, self.argmax_z.imag],
            "quadrature_nodes": self.quadrature_nodes,
        }


# ----------------------------------------------------------------------------
# parameter problem
# ----------------------------------------------------------------------------

def _check_params(c: float, d: float) -> None:
    if not (1.0 < c < d) or not (math.isfinite(c) and math.isfinite(d)):
        raise DomainError("parameters must satisfy 1 < c < d")


def _inner_pieces(c: float, d: float):
    """Both halves of the [-1, 1] integral after t = -1 + u^2 / t = 1 - u^2.

    The substitutions are carried out algebraically so the offset from the
    singular endpoint is exactly u^2 (no cancellation near the endpoints)."""
    return (
        (lambda u: 2.0 * np.sqrt(d + 1.0 - u * u)
         / np.sqrt((c + 1.0 - u * u) * (2.0 - u * u)), 0.0, 1.0),
        (lambda u: 2.0 * np.sqrt(d - 1.0 + u * u)
         / np.sqrt((c - 1.0 + u * u) * (2.0 - u * u)), 0.0, 1.0),
    )


def _middle_pieces(c: float, d: float):
    """[1, c] integral split at the midpoint, substituted at both ends."""
    half = math.sqrt(0.5 * (c - 1.0))
    return (
        (lambda u: 2.0 * np.sqrt(d - 1.0 - u * u)
         / np.sqrt((c - 1.0 - u * u) * (2.0 + u * u)), 0.0, half),
        (lambda u: 2.0 * np.sqrt(d - c + u * u)
         / np.sqrt((c - 1.0 - u * u) * (c + 1.0 - u * u)), 0.0, half),
    )


def _outer_pieces(c: float, d: float):
    """[c, d] integral: inverse-sqrt endpoint at c, sqrt endpoint at d."""
    half = math.sqrt(0.5 * (d - c))
    return (
        (lambda u: 2.0 * np.sqrt(d - c - u * u)
         / np.sqrt((c - 1.0 + u * u) * (c + 1.0 + u * u)), 0.0, half),
        (lambda u: 2.0 * u * u
         / np.sqrt((d - c - u * u) * (d - 1.0 - u * u) * (d + 1.0 - u * u)),
         0.0, half),
    )


def _sum_pieces(pieces, adaptive: bool, n: int) -> float:
    total = 0.0
    for g, lo, hi in pieces:
        if adaptive:
            val, _ = integrate_adaptive(g, lo, hi, tol=1e-13, n0=n)
        else:
            val = integrate_fixed(g, lo, hi, n)
        total += float(np.real(val))
    return total


def parameter_integrals(c: float, d: float, nodes: int = 256) -> tuple[float, float]:
    """(I1, I2) by node-doubling Gauss on the substituted smooth integrands."""
    _check_params(c, d)
    if nodes < 16:
        raise DomainError("node count must be at least 16")
    n0 = max(16, nodes // 4)
    return (_sum_pieces(_inner_pieces(c, d), True, n0),
            _sum_pieces(_middle_pieces(c, d), True, n0))


def parameter_integrals_fixed(c: float, d: float, n: int) -> tuple[float, float]:
    """(I1, I2) at exactly n nodes per substituted piece (convergence tables)."""
    _check_params(c, d)
    return (_sum_pieces(_inner_pieces(c, d), False, n),
            _sum_pieces(_middle_pieces(c, d), False, n))


def _residual(c: float, d: float, a: float, nodes: int) -> np.ndarray:
    i1, i2 = parameter_integrals(c, d, nodes)
    return np.array([i1 - TARGET_HEIGHT, i2 + 0.5 * math.log(a)])


def parameter_jacobian(c: float, d: float, a: float, nodes: int = 256,
                       step: float = 1e-6) -> np.ndarray:
    """Forward-difference Jacobian of the two residuals w.r.t. (c, d)."""
    base = _residual(c, d, a, nodes)
    jc = (_residual(c + step, d, a, nodes) - base) / step
    jd = (_residual(c, d + step, a, nodes) - base) / step
    return np.column_stack([jc, jd])


def solve_parameters(a: float, nodes: int = 256) -> tuple[float, float]:
    """Damped Newton for the side-length conditions; residuals below 1e-9.

    Starts at (1.1, 1.8); a second deterministic start (1.5, 3.0) guards
    against basin escape.  Steps are halved until they stay in {1 < c < d} and
    reduce the residual norm."""
    if not (0.0 < a < 1.0):
        raise DomainError("slit parameter must satisfy 0 < a < 1")
    last = None
    for start in ((1.1, 1.8), (1.5, 3.0)):
        result = _newton_from(start, a, nodes)
        if result is not None:
            return result
        last = start
    raise ConvergenceError(
        f"parameter solve failed from starts (1.1, 1.8) and {last}; "
        f"last residuals {_residual(*last, a, nodes)}"
    )


def _newton_from(start: tuple[float, float], a: float, nodes: int):
    c, d = start
    r = _residual(c, d, a, nodes)
    for _ in range(100):
        norm = np.max(np.abs(r))
        if norm < 1e-12:
            break
        jac = parameter_jacobian(c, d, a, nodes)
        try:
            delta = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            return None
        alpha = 1.0
        while alpha > 1e-8:
            cn, dn = c + alpha * delta[0], d + alpha * delta[1]
            if 1.0 + 1e-9 < cn < dn - 1e-9:
                rn = _residual(cn, dn, a, nodes)
                if np.max(np.abs(rn)) < norm * (1.0 - 1e-4 * alpha) + 1e-15:
                    c, d, r = cn, dn, rn
                    break
            alpha *= 0.5
        else:
            break
    if np.max(np.abs(r)) < 1e-9:
        return float(c), float(d)
    return None


# ----------------------------------------------------------------------------
# the mapping
# ----------------------------------------------------------------------------

def _F(t, c: float, d: float):
    """Integrand of f with principal square roots (valid on the closed UHP)."""
    t = np.asarray(t, dtype=np.complex128)
    return np.sqrt(t - d) / (np.sqrt(t - c) * np.sqrt(t - 1.0) * np.sqrt(t + 1.0))


def _seg_min_dist(p0: complex, p1: complex, points) -> float:
    d = p1 - p0
    L = abs(d)
    best = math.inf
    for q in points:
        if L == 0.0:
            best = min(best, abs(q - p0))
            continue
        s = ((q - p0) / d).real * L
        s = min(max(s, 0.0), L)
        best = min(best, abs(q - (p0 + (s / L) * d)))
    return best


def _map_f_engine(z: complex, c: float, d: float, contour: str,
                  tol: float | None, n_fixed: int | None) -> complex:
    branch = (-1.0, 1.0, c, d)
    if abs(z - (-1.0)) <= BRANCH_TOL:
        return 0.0 + 0.0j
    for b in branch:
        if abs(z - b) <= BRANCH_TOL:
            raise SingularityError(f"evaluation point coincides with branch point {b}")
    x, y = z.real, z.imag
    if y < 0.0:
        raise DomainError("the mapping is defined on the closed upper half-plane")

    if contour == "default":
        height = max(1.0, y)
        lateral = 0.0
    elif contour == "offset":
        height = max(0.5, y)
        lateral = 0.3
    else:
        raise DomainError(f"unknown contour {contour!r}")

    def leg(fun, lo, hi):
        if tol is not None:
            val, _ = integrate_adaptive(fun, lo, hi, tol=tol, n0=32)
            return val
        return integrate_fixed(fun, lo, hi, n_fixed)

    total = 0.0 + 0.0j
    # up from -1 with t = -1 + i u^2 (kills the inverse-sqrt endpoint)
    total += leg(lambda u: _F(-1.0 + 1j * u * u, c, d) * 2j * u,
                 0.0, math.sqrt(height))
    # across at the safe height
    xs = x + lateral
    if _seg_min_dist(-1.0 + 1j * height, xs + 1j * height, branch) < PATH_CLEARANCE:
        raise PathError("horizontal leg violates the branch-point clearance")
    if xs != -1.0:
        total += leg(lambda s: _F(-1.0 + s * (xs + 1.0) + 1j * height, c, d)
                     * (xs + 1.0), 0.0, 1.0)
    # down to the target height
    if height != y:
        if _seg_min_dist(xs + 1j * height, xs + 1j * y, branch) < PATH_CLEARANCE:
            raise PathError("vertical leg violates the branch-point clearance")
        total += leg(lambda s: _F(xs + 1j * (height + s * (y - height)), c, d)
                     * 1j * (y - height), 0.0, 1.0)
    # lateral return (offset contour only)
    if lateral != 0.0:
        if _seg_min_dist(xs + 1j * y, z, branch) < PATH_CLEARANCE:
            raise PathError("return leg violates the branch-point clearance")
        total += leg(lambda s: _F(xs + s * (x - xs) + 1j * y, c, d) * (x - xs),
                     0.0, 1.0)
    return -2.0 * total


def map_f(z: complex, sol: SurfaceSolution, contour: str = "default",
          tol: float = 1e-12) -> complex:
    """f(z) along an admissible polyline contour from -1 (adaptive nodes)."""
    return _map_f_engine(complex(z), sol.c, sol.d, contour, tol, None)


def conformal_radius_at(z: complex, sol: SurfaceSolution) -> float:
    """r(z) = 4 Im z |e^(f(z))| sqrt|z-d| / sqrt(|z-c| |z^2-1|), Im z > 0."""
    z = complex(z)
    if not z.imag > 0.0:
        raise DomainError("the radius is defined for Im z > 0")
    fz = map_f(z, sol)
    pref = math.sqrt(abs(z - sol.d)) / math.sqrt(abs(z - sol.c) * abs(z * z - 1.0))
    return 4.0 * z.imag * abs(np.exp(fz)) * pref


def _radius_fast(x: float, y: float, c: float, d: float, n_fixed: int) -> float:
    if y <= 1e-6:
        return -1.0
    z = complex(x, y)
    if min(abs(z + 1.0), abs(z - 1.0), abs(z - c), abs(z - d)) < 2e-3:
        return -1.0
    fz = _map_f_engine(z, c, d, "default", None, n_fixed)
    pref = math.sqrt(abs(z - d)) / math.sqrt(abs(z - c) * abs(z * z - 1.0))
    return 4.0 * y * abs(np.exp(fz)) * pref


def _nm_max(fun, x0: float, y0: float, h: float, ftol: float, max_iter: int):
    pts = [(x0, y0), (x0 + h, y0), (x0, y0 + h)]
    vals = [fun(*p) for p in pts]
    for _ in range(max_iter):
        order = sorted(range(3), key=lambda i: -vals[i])
        pts = [pts[i] for i in order]
        vals = [vals[i] for i in order]
        if vals[0] - vals[2] <= ftol:
            break
        cx = 0.5 * (pts[0][0] + pts[1][0])
        cy = 0.5 * (pts[0][1] + pts[1][1])
        rx, ry = 2.0 * cx - pts[2][0], 2.0 * cy - pts[2][1]
        fr = fun(rx, ry)
        if fr > vals[0]:
            ex, ey = cx + 2.0 * (rx - cx), cy + 2.0 * (ry - cy)
            fe = fun(ex, ey)
            if fe > fr:
                pts[2], vals[2] = (ex, ey), fe
            else:
                pts[2], vals[2] = (rx, ry), fr
        elif fr > vals[1]:
            pts[2], vals[2] = (rx, ry), fr
        else:
            if fr > vals[2]:
                qx, qy = cx + 0.5 * (rx - cx), cy + 0.5 * (ry - cy)
            else:
                qx, qy = cx + 0.5 * (pts[2][0] - cx), cy + 0.5 * (pts[2][1] - cy)
            fq = fun(qx, qy)
            if fq > min(fr, vals[2]):
                pts[2], vals[2] = (qx, qy), fq
            else:
                for k in (1, 2):
                    pts[k] = (0.5 * (pts[k][0] + pts[0][0]),
                              0.5 * (pts[k][1] + pts[0][1]))
                    vals[k] = fun(*pts[k])
    order = sorted(range(3), key=lambda i: -vals[i])
    return vals[order[0]], pts[order[0]]


def _default_starts(count: int) -> list[complex]:
    starts = [RADIUS_PROBE]
    for xx in np.linspace(-1.2, 1.2, 7):
        for yy in (0.15, 0.36, 0.7, 1.2):
            starts.append(complex(xx, yy))
    k = 1
    while len(starts) < count:
        # base-2 radical inverse fills extra starts deterministically
        x, f, n = 0.0, 0.5, k
        while n:
            if n & 1:
                x += f
            f *= 0.5
            n >>= 1
        starts.append(complex(2.4 * (x - 0.5), 0.1 + 1.3 * x))
        k += 1
    return starts[:max(count, 1)]


def maximize_radius(sol: SurfaceSolution, starts: int = 29,
                    fast_nodes: int = 64) -> tuple[complex, float]:
    """Deterministic multistart maximization of the radius over the half-plane.

    The search runs on fixed-node quadrature for speed; the final value is
    recomputed adaptively at the argmax, so it is a certified lower bound.
    Ties break toward the lexicographically smallest (Re, Im) argmax."""
    best_val, best_pt = -math.inf, None
    for s in _default_starts(starts):
        val, (px, py) = _nm_max(
            lambda xx, yy: _radius_fast(xx, yy, sol.c, sol.d, fast_nodes),
            s.real, s.imag, 0.1, 1e-11, 300,
        )
        key = (-val, px, py)
        if best_pt is None or key < best_key:
            best_val, best_pt, best_key = val, complex(px, py), key
    value = conformal_radius_at(best_pt, sol)
    return best_pt, value


def edge_integrals(sol: SurfaceSolution, ray: float = 50.0) -> dict:
    """Side lengths of the image polygon, straight from the real axis.

    Returns the rectangle height (2*I1 = 3*pi), the rectangle width
    (2*I2 = -log a), the drop between the two horizontal edges (the integral
    over [c, d], equal to pi), and the half-strip width measured as
    |Im f(-ray) - Im f(ray)| (equal to 2*pi)."""
    c, d = sol.c, sol.d
    i1 = _sum_pieces(_inner_pieces(c, d), True, 32)
    i2 = _sum_pieces(_middle_pieces(c, d), True, 32)
    i3 = _sum_pieces(_outer_pieces(c, d), True, 32)
    width = abs(map_f(complex(-ray, 0.0), sol).imag
                - map_f(complex(ray, 0.0), sol).imag)
    return {
        "rectangle_height": 2.0 * i1,
        "rectangle_width": 2.0 * i2,
        "edge_drop": 2.0 * i3,
        "strip_width": float(width),
    }


def solve_surface(a: float | None = None, nodes: int = 256,
                  starts: int = 29) -> SurfaceSolution:
    """Full pipeline: parameters, then radius maximization."""
    if a is None:
        from .slitdisk import default_threshold

        a = default_threshold()
    c, d = solve_parameters(a, nodes)
    provisional = SurfaceSolution(a, c, d, 1.0, RADIUS_PROBE, nodes)
    argmax, r0 = maximize_radius(provisional, starts=starts)
    return replace(provisional, r0=r0, argmax_z=argmax)
