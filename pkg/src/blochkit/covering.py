"""Branched-covering structure of a finite Blaschke product.

A degree-n product covers the disk n-to-1 with exactly n-1 critical points
inside the open disk (counted with multiplicity); their images are the branch
points.  This module finds the critical points (roots of the numerator of B'),
classifies the configuration against a radius threshold ``a`` (is some branch
point outside the small disk |w| < a, or do all of them crowd inside it?), and
computes the monodromy permutations by tracking the full fiber over a base
point around each distinct critical value.   For a generic configuration every
permutation is a transposition and the sheet graph they span is a tree on n
vertices.

Root finding uses Ehrlich-Aberth simultaneous iteration; fiber tracking uses an
Euler predictor with a Newton corrector and adaptive step control.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CollisionError,
    ContinuationError,
    DegenerateError,
    DomainError,
    RootCountError,
    StructureError,
)
from .products import BlaschkeProduct

SLIT_DISK = "SLIT_DISK"
SURFACE_CASE = "SURFACE_CASE"
DEGENERATE = "DEGENERATE"

#: moduli within this of the threshold, or critical values within this angle of
#: a common radius, make the configuration DEGENERATE
GENERICITY_TOL = 1e-9
#: two tracked fiber paths closer than this abort the continuation
COLLISION_TOL = 1e-10

_RESIDUAL_TOL = 1e-10
_VALUE_CLUSTER_TOL = 1e-9


# ----------------------------------------------------------------------------
# polynomial machinery (descending coefficients, np.polyval convention)
# ----------------------------------------------------------------------------

def _numerator_denominator(B: BlaschkeProduct) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients of N, D with B = rotation * N / D."""
    num = np.array([1.0 + 0.0j])
    den = np.array([1.0 + 0.0j])
    for zj in B.zeros:
        num = np.convolve(num, np.array([1.0, -zj]))
        den = np.convolve(den, np.array([-zj.conjugate(), 1.0]))
    return num, den


def _poly_derivative(c: np.ndarray) -> np.ndarray:
    m = c.size - 1
    if m == 0:
        return np.zeros(1, dtype=np.complex128)
    return c[:-1] * np.arange(m, 0, -1)


def derivative_numerator(B: BlaschkeProduct) -> np.ndarray:
    """Coefficients of N'D - ND' (the zeros of B' in the plane), leading zeros
    stripped; roots lost to the stripping live at infinity (reflections)."""
    num, den = _numerator_denominator(B)
    p = np.convolve(_poly_derivative(num), den) - np.convolve(num, _poly_derivative(den))
    scale = np.abs(p).max()
    if scale == 0.0:
        raise RootCountError("derivative numerator vanished identically")
    keep = np.nonzero(np.abs(p) > 1e-12 * scale)[0]
    return p[keep[0]:]


def aberth_roots(coeffs, seed: int = 0, max_iter: int = 200,
                 step_tol: float = 1e-13) -> np.ndarray:
    """All roots of a complex polynomial by Ehrlich-Aberth iteration.

    Deterministic: the initial guesses sit on a ring of radius 1.2 with a
    seed-derived phase offset.  Multiple roots converge linearly but the
    200-iteration budget is ample for the degrees this package meets.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.size < 2:
        return np.empty(0, dtype=np.complex128)
    c = c / np.abs(c).max()
    # exact zero trailing coefficients are exact roots at the origin; deflating
    # them keeps the backward-error denominator bounded below for the rest
    at_origin = 0
    while c.size > 1 and c[-1] == 0.0:
        c = c[:-1]
        at_origin += 1
    if c.size < 2:
        return np.zeros(at_origin, dtype=np.complex128)
    m = c.size - 1
    dc = _poly_derivative(c)
    rng = np.random.default_rng(seed)
    phase = 2.0 * math.pi * rng.random()
    z = 1.2 * np.exp(1j * (2.0 * math.pi * np.arange(m) / m + phase))
    for _ in range(max_iter):
        p = np.polyval(c, z)
        dp = np.polyval(dc, z)
        dp = np.where(np.abs(dp) < 1e-300, 1e-300, dp)
        w = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = (1.0 / diff).sum(axis=1)
        step = w / (1.0 - w * s)
        z = z - step
        if np.max(np.abs(step) / (1.0 + np.abs(z))) < step_tol:
            break
    if at_origin:
        z = np.concatenate([z, np.zeros(at_origin, dtype=np.complex128)])
    return z


def _backward_error(coeffs: np.ndarray, roots: np.ndarray) -> np.ndarray:
    """|P(r)| relative to the coefficient scale sum |c_k| |r|^k at each root."""
    c = np.asarray(coeffs, dtype=np.complex128)
    vals = np.abs(np.polyval(c, roots))
    mags = np.abs(c)
    scale = np.zeros(roots.shape)
    for ck in mags:
        scale = scale * np.abs(roots) + ck
    return vals / np.maximum(scale, 1e-300)


def _lex_sort(points: np.ndarray) -> np.ndarray:
    order = np.lexsort((points.imag, points.real))
    return points[order]


def critical_points(B: BlaschkeProduct) -> tuple[complex, ...]:
    """The n-1 zeros of B' in the open disk, lexicographically sorted.

    Raises RootCountError when the in-disk count is off or a residual check
    fails; both signal a numerically hostile configuration, not a math fact.
    """
    if B.degree < 2:
        raise DomainError("critical points need degree >= 2")
    p = derivative_numerator(B)
    roots = aberth_roots(p)
    bad = _backward_error(p, roots) > _RESIDUAL_TOL
    if bad.any():
        raise RootCountError(
            f"{int(bad.sum())} root(s) of the derivative numerator failed the "
            f"residual check"
        )
    inside = roots[np.abs(roots) < 1.0]
    if inside.size != B.degree - 1:
        raise RootCountError(
            f"expected {B.degree - 1} critical points in the disk, found {inside.size}"
        )
    return tuple(map(complex, _lex_sort(inside)))


# ----------------------------------------------------------------------------
# raw evaluation (no domain checks; tracking may poke just outside the disk)
# ----------------------------------------------------------------------------

def _eval_raw(zeros: np.ndarray, lam: complex, z: np.ndarray) -> np.ndarray:
    out = np.full(z.shape, lam, dtype=np.complex128)
    for zj in zeros:
        out = out * ((z - zj) / (1.0 - zj.conjugate() * z))
    return out


def _der_raw(zeros: np.ndarray, lam: complex, z: np.ndarray) -> np.ndarray:
    diff = z[:, None] - zeros[None, :]
    dist2 = diff.real**2 + diff.imag**2
    with np.errstate(divide="ignore", invalid="ignore"):
        lsum = ((1.0 - np.abs(zeros) ** 2)[None, :]
                / (diff * (1.0 - np.conjugate(zeros)[None, :] * z[:, None]))).sum(axis=1)
        out = _eval_raw(zeros, lam, z) * lsum
    near = dist2.min(axis=1) <= 1e-16
    for i in np.nonzero(near)[0]:
        zi = z[i]
        total = 0.0 + 0.0j
        for j, zj in enumerate(zeros):
            den = 1.0 - zj.conjugate() * zi
            term = (1.0 - abs(zj) ** 2) / (den * den)
            for k, zk in enumerate(zeros):
                if k != j:
                    term *= (zi - zk) / (1.0 - zk.conjugate() * zi)
            total += term
        out[i] = lam * total
    return out


# ----------------------------------------------------------------------------
# fibers
# ----------------------------------------------------------------------------

def fiber_solve(B: BlaschkeProduct, w: complex) -> np.ndarray:
    """All n solutions of B(z) = w for |w| < 1; they all lie in the open disk."""
    if abs(w) >= 1.0:
        raise DomainError("fiber points exist in the disk only for |w| < 1")
    num, den = _numerator_denominator(B)
    poly = B.rotation * num - w * den
    roots = aberth_roots(poly)
    bad = _backward_error(poly, roots) > _RESIDUAL_TOL
    if bad.any():
        raise RootCountError("fiber polynomial solve failed the residual check")
    if roots.size != B.degree or np.any(np.abs(roots) >= 1.0):
        raise RootCountError(
            f"expected {B.degree} fiber points in the disk over w={w!r}"
        )
    return _lex_sort(roots)


def _newton_correct(zeros, lam, z, w, tol=1e-12, cap=8):
    """Vectorized Newton on B(z) - w for the whole fiber; returns (z, iters, ok)."""
    for it in range(1, cap + 1):
        r = _eval_raw(zeros, lam, z) - w
        if np.max(np.abs(r)) <= tol:
            return z, it - 1, True
        dp = _der_raw(zeros, lam, z)
        if np.any(np.abs(dp) < 1e-300) or np.any(~np.isfinite(dp)):
            return z, it, False
        z = z - r / dp
        if np.any(np.abs(z) > 1.2) or np.any(~np.isfinite(z)):
            return z, it, False
    r = _eval_raw(zeros, lam, z) - w
    return z, cap, bool(np.max(np.abs(r)) <= tol)


def _track_piece(B: BlaschkeProduct, fiber: np.ndarray, w_of_t) -> np.ndarray:
    """Continue the fiber along w(t), t in [0,1], adaptively.

    Euler predictor dz = dw / B'(z), Newton corrector; the step halves whenever
    the corrector needs more than 4 iterations and grows again after easy steps.
    """
    zeros = B.zeros_array
    lam = complex(B.rotation)
    z = fiber.astype(np.complex128).copy()
    t = 0.0
    h = 1.0 / 16.0
    w_prev = w_of_t(0.0)
    while t < 1.0 - 1e-15:
        h = min(h, 1.0 - t)
        t_new = t + h
        w_new = w_of_t(t_new)
        dp = _der_raw(zeros, lam, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            pred = z + (w_new - w_prev) / dp
        pred = np.where(np.isfinite(pred), pred, z)
        z_new, iters, ok = _newton_correct(zeros, lam, pred, w_new)
        if not ok or iters > 4:
            h *= 0.5
            if h < 1e-8:
                raise ContinuationError("fiber tracking step size underflow")
            continue
        if z.size > 1:
            # a sheet may only move a fraction of the fiber's minimal
            # separation per step, otherwise Newton can silently converge to a
            # neighbouring sheet near a critical fiber and scramble the
            # permutation without tripping the collision check
            sep = np.abs(z[:, None] - z[None, :])
            np.fill_diagonal(sep, np.inf)
            if np.max(np.abs(z_new - z)) > 0.4 * sep.min():
                h *= 0.5
                if h < 1e-8:
                    raise ContinuationError("fiber tracking step size underflow")
                continue
        diff = np.abs(z_new[:, None] - z_new[None, :])
        np.fill_diagonal(diff, np.inf)
        if diff.min() < COLLISION_TOL:
            raise CollisionError("two fiber paths collided during tracking")
        z, w_prev, t = z_new, w_new, t_new
        if iters <= 2:
            h = min(2.0 * h, 0.125)
    return z


def _segment_waypoints(w0: complex, w1: complex,
                       obstacles: list[tuple[complex, float]]) -> list[complex]:
    """Waypoints for w0 -> w1 detouring around (center, clearance) obstacles.

    Each detour point sits on the ray from the obstacle center through the
    closest point of the chord, i.e. on the same side of the obstacle as the
    straight segment.  That keeps the homotopy class of the route, gives the
    replacement legs real clearance, and produces the identical polyline for
    both traversal directions (an asymmetric in/out route would silently
    multiply the loop permutation by another branch point's monodromy).
    """
    d = w1 - w0
    L = abs(d)
    if L == 0.0:
        return [w0, w1]
    u = d / L
    detours = []
    for center, clear in obstacles:
        s = ((center - w0) / u).real
        if 0.0 < s < L:
            foot = w0 + s * u
            gap = abs(center - foot)
            if gap < clear:
                if gap < 1e-14 * max(1.0, L):
                    # chord through the center: either side works, pick one
                    # independently of the traversal direction
                    canon = u if (u.real, u.imag) > (-u.real, -u.imag) else -u
                    out_dir = 1j * canon
                else:
                    out_dir = (foot - center) / gap
                detours.append((s, center + 1.5 * clear * out_dir))
    detours.sort(key=lambda item: item[0])
    return [w0, *[pick for _, pick in detours], w1]


def _cluster_values(values: np.ndarray) -> list[np.ndarray]:
    """Group near-equal critical values (single-link within 1e-9)."""
    idx = list(range(values.size))
    groups: list[list[int]] = []
    for i in idx:
        placed = False
        for g in groups:
            if any(abs(values[i] - values[j]) <= _VALUE_CLUSTER_TOL for j in g):
                g.append(i)
                placed = True
                break
        if not placed:
            groups.append([i])
    return [values[np.array(g)] for g in groups]


def monodromy(B: BlaschkeProduct, base_point: complex | None = None,
              loop_radius_factor: float = 0.25):
    """Loop permutations of the base fiber around each distinct critical value.

    Returns a list of (critical value, permutation) pairs, permutation[i] being
    the index of the base fiber point that the path starting at base index i
    lands on after the loop.  Deterministic: clusters are visited in
    lexicographic order and the base fiber is lexicographically indexed.
    """
    if not (0.0 < loop_radius_factor <= 0.5):
        raise DomainError("loop_radius_factor must lie in (0, 0.5]")
    pts = critical_points(B)
    values = _values_of(B, pts)
    clusters = _cluster_values(values)
    centers = np.array([g.mean() for g in clusters])
    order = np.lexsort((centers.imag, centers.real))
    clusters = [clusters[i] for i in order]
    centers = centers[order]

    w_star = _default_base_point(centers) if base_point is None else complex(base_point)
    if abs(w_star) >= 1.0:
        raise DomainError("base point must lie in the open disk")
    if np.min(np.abs(centers - w_star)) < 1e-6:
        raise DomainError("base point coincides with a critical value")

    base = fiber_solve(B, w_star)
    sep = np.abs(base[:, None] - base[None, :])
    np.fill_diagonal(sep, np.inf)
    match_tol = 0.45 * sep.min()

    radii = np.empty(centers.size)
    for i, v in enumerate(centers):
        others = np.delete(np.abs(centers - v), i)
        gap = others.min() if others.size else np.inf
        radii[i] = loop_radius_factor * min(gap, 1.0 - abs(v))

    out = []
    for i, v in enumerate(centers):
        rho = radii[i]
        direction = (w_star - v) / abs(w_star - v)
        q = v + rho * direction
        obstacles = [(complex(centers[j]), 0.5 * radii[j])
                     for j in range(centers.size) if j != i]
        fiber = base.copy()
        for w0, w1 in _pairs(_segment_waypoints(w_star, q, obstacles)):
            fiber = _track_piece(B, fiber, _seg_path(w0, w1))
        theta0 = math.atan2(direction.imag, direction.real)
        fiber = _track_piece(B, fiber, _circle_path(v, rho, theta0))
        for w0, w1 in _pairs(_segment_waypoints(q, w_star, obstacles)):
            fiber = _track_piece(B, fiber, _seg_path(w0, w1))
        perm = _match_permutation(base, fiber, match_tol)
        out.append((complex(v), perm))
    return out


def _values_of(B, pts):
    from .products import evaluate

    vals = np.asarray([evaluate(B, z) for z in pts], dtype=np.complex128)
    if np.any(np.abs(vals) >= 1.0 + 1e-12):
        raise StructureError("a critical value left the closed disk")
    return vals


def _default_base_point(centers: np.ndarray) -> complex:
    if np.all(np.abs(centers) > 1e-12):
        return 0.0 + 0.0j
    from .slitdisk import default_threshold

    base_mod = 0.5 * default_threshold()
    for extra in (0.0, 0.37, 0.74, 1.11, 1.48, 1.85):
        cand = base_mod * complex(math.cos(extra), math.sin(extra))
        on_slit = False
        for v in centers:
            if abs(v) <= 1e-12:
                continue
            dphi = abs(math.remainder(math.atan2(cand.imag, cand.real)
                                      - math.atan2(v.imag, v.real), 2.0 * math.pi))
            if dphi < 1e-6 and abs(cand) >= abs(v):
                on_slit = True
                break
        if not on_slit:
            return cand
    raise DegenerateError("no admissible base point found off the critical radii")


def _pairs(seq):
    return list(zip(seq[:-1], seq[1:]))


def _seg_path(w0: complex, w1: complex):
    return lambda t: w0 + t * (w1 - w0)


def _circle_path(center: complex, rho: float, theta0: float):
    return lambda t: center + rho * complex(math.cos(theta0 + 2.0 * math.pi * t),
                                            math.sin(theta0 + 2.0 * math.pi * t))


def _match_permutation(base: np.ndarray, final: np.ndarray, tol: float) -> tuple[int, ...]:
    n = base.size
    perm = [-1] * n
    used = set()
    for i in range(n):
        d = np.abs(base - final[i])
        j = int(np.argmin(d))
        if d[j] > tol or j in used:
            raise ContinuationError("fiber endpoints did not match the base fiber")
        used.add(j)
        perm[i] = j
    return tuple(perm)


# ----------------------------------------------------------------------------
# classification and the sheet graph
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class CoveringReport:
    critical_points: tuple[complex, ...]
    critical_values: tuple[complex, ...]
    max_critical_modulus: float
    case_label: str
    monodromy: tuple = ()
    sheet_edges: tuple = ()
    distinguished_sheet: int | None = None

    def to_json(self) -> dict:
        return {
            "critical_points": [[z.real, z.imag] for z in self.critical_points],
            "critical_values": [[v.real, v.imag] for v in self.critical_values],
            "max_critical_modulus": self.max_critical_modulus,
            "case_label": self.case_label,
            "monodromy": [
                {"critical_value": [v.real, v.imag], "permutation": cycle_string(p)}
                for v, p in self.monodromy
            ],
            "sheet_edges": [[i + 1, j + 1, k] for i, j, k in self.sheet_edges],
            "distinguished_sheet": (
                None if self.distinguished_sheet is None else self.distinguished_sheet + 1
            ),
        }


def cycle_string(perm: tuple[int, ...]) -> str:
    """One-line cycle notation on 1-based sheet labels; identity is '()'."""
    seen = [False] * len(perm)
    parts = []
    for i in range(len(perm)):
        if seen[i] or perm[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = perm[j]
        parts.append("(" + " ".join(str(k + 1) for k in cyc) + ")")
    return "".join(parts) if parts else "()"


def classify(B: BlaschkeProduct, a: float) -> CoveringReport:
    """Label the configuration against the radius threshold a (no monodromy).

    SLIT_DISK when some critical value has modulus > a, SURFACE_CASE when all
    stay below, DEGENERATE when a modulus sits within 1e-9 of a or two nonzero
    critical values share a radius within 1e-9 of angle.  Zero critical values
    lie on every radius and are exempt from the angular test (z^n stays
    SURFACE_CASE for every n).
    """
    if not (0.0 < a < 1.0):
        raise DomainError("threshold must satisfy 0 < a < 1")
    if B.degree < 2:
        return CoveringReport((), (), 0.0, SURFACE_CASE)
    pts = critical_points(B)
    vals = _values_of(B, pts)
    mods = np.abs(vals)
    label = SLIT_DISK if mods.max() > a else SURFACE_CASE
    if np.any(np.abs(mods - a) <= GENERICITY_TOL):
        label = DEGENERATE
    else:
        nz = vals[mods > 1e-12]
        args = np.angle(nz)
        for i in range(nz.size):
            for j in range(i + 1, nz.size):
                if abs(math.remainder(args[i] - args[j], 2.0 * math.pi)) <= GENERICITY_TOL:
                    label = DEGENERATE
    return CoveringReport(pts, tuple(map(complex, vals)), float(mods.max()), label)


def sheet_tree(report: CoveringReport) -> tuple[tuple[int, int, int], ...]:
    """Edges (i, j, value_index) of the sheet graph; requires transpositions.

    For a generic configuration the n-1 transpositions span a tree on the n
    sheets; a cycle or a disconnected graph raises StructureError.
    """
    if not report.monodromy:
        raise StructureError("report carries no monodromy data")
    n = len(report.monodromy[0][1])
    edges = []
    for k, (_v, perm) in enumerate(report.monodromy):
        moved = [i for i in range(n) if perm[i] != i]
        if len(moved) != 2 or perm[moved[0]] != moved[1] or perm[moved[1]] != moved[0]:
            raise StructureError(
                "monodromy permutation is not a transposition; configuration "
                "is not generic"
            )
        edges.append((min(moved), max(moved), k))
    if len(edges) != n - 1:
        raise StructureError(f"expected {n - 1} edges, got {len(edges)}")
    adj = {i: [] for i in range(n)}
    for i, j, _k in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) != n:
        raise StructureError("sheet graph is not connected")
    return tuple(edges)


def distinguished_sheet(edges, n: int) -> int:
    """Second vertex of a maximal path of the tree (double-BFS diameter)."""
    adj = {i: [] for i in range(n)}
    for i, j, _k in edges:
        adj[i].append(j)
        adj[j].append(i)

    def farthest(src):
        dist = {src: 0}
        parent = {src: None}
        queue = [src]
        for u in queue:
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
        far = max(dist, key=lambda v: (dist[v], v))
        return far, parent

    u, _ = farthest(0)
    v, parent = farthest(u)
    path = [v]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    path.reverse()  # runs from u to v
    return path[1] if len(path) > 1 else path[0]


def _transitive(perms, n: int) -> bool:
    seen = {0}
    queue = [0]
    while queue:
        u = queue.pop()
        for p in perms:
            v = p[u]
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == n


def analyze(B: BlaschkeProduct, a: float | None = None,
            base_point: complex | None = None, loop_radius_factor: float = 0.25,
            perturb: bool = False, seed: int = 0) -> CoveringReport:
    """Full covering report: classification, monodromy, sheet tree.

    ``perturb`` rotates every zero by an independent angle of magnitude at most
    1e-7 (seeded) before analyzing; this is the documented escape hatch for
    DEGENERATE configurations.  Monodromy is skipped for DEGENERATE inputs and
    for degree 1; the sheet tree is filled only when every permutation is a
    transposition (the z^n family yields a single n-cycle instead).
    """
    if a is None:
        from .slitdisk import default_threshold

        a = default_threshold()
    if perturb:
        rng = np.random.default_rng(seed)
        angles = rng.uniform(-1e-7, 1e-7, B.degree)
        zeros = tuple(z * complex(math.cos(t), math.sin(t))
                      for z, t in zip(B.zeros, angles))
        B = BlaschkeProduct(zeros, B.rotation, margin=0.0)
    report = classify(B, a)
    if report.case_label == DEGENERATE or B.degree < 2:
        return report
    loops = tuple(monodromy(B, base_point, loop_radius_factor))
    if not _transitive([p for _v, p in loops], B.degree):
        raise StructureError("monodromy group does not act transitively")
    edges: tuple = ()
    sheet = None
    if all(_is_transposition(p) for _v, p in loops):
        tmp = CoveringReport(report.critical_points, report.critical_values,
                             report.max_critical_modulus, report.case_label, loops)
        edges = sheet_tree(tmp)
        sheet = distinguished_sheet(edges, B.degree)
    return CoveringReport(report.critical_points, report.critical_values,
                          report.max_critical_modulus, report.case_label,
                          loops, edges, sheet)


def _is_transposition(perm) -> bool:
    moved = [i for i in range(len(perm)) if perm[i] != i]
    return (len(moved) == 2 and perm[moved[0]] == moved[1]
            and perm[moved[1]] == moved[0])
