"""Slit-disk conformal radius: cubic solve, profile and the slit map."""

from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest

from blochkit.errors import DomainError, NoSolutionError, StructureError
from blochkit.slitdisk import (
    SlitDiskSolution,
    a_of_s,
    cubic_psi,
    default_threshold,
    g_profile,
    intro_lhs,
    max_conformal_radius,
    slit_disk_map,
    solve_a_by_radius_bisection,
    solve_a_for_target,
    solve_cubic,
)

_A_GRID = np.linspace(0.0, 0.99, 34)


def test_cubic_at_zero_slit_is_one_plus_sqrt2():
    assert abs(solve_cubic(0.0) - (1.0 + math.sqrt(2.0))) < 1e-12


def test_cubic_residual_and_bracket():
    for a in _A_GRID:
        s = solve_cubic(float(a))
        assert abs(cubic_psi(s, float(a))) < 1e-12
        assert cubic_psi(1.0, float(a)) < 0.0
        assert cubic_psi(1.0 + math.sqrt(2.0) + 1e-9, float(a)) >= 0.0
        assert 1.0 < s <= 1.0 + math.sqrt(2.0) + 1e-12


def test_a_of_s_inverts_the_cubic():
    for a in _A_GRID[1:]:
        s = solve_cubic(float(a))
        assert abs(a_of_s(s) - a) < 1e-10


def test_solution_fields_are_consistent():
    sol = max_conformal_radius(0.3)
    assert abs(sol.x0 - (sol.s0 - 1.0) / (2.0 * math.sqrt(sol.s0))) < 1e-12
    peak = float(g_profile(sol.x0, sol.a))
    assert abs(peak - sol.max_radius) < 1e-12
    for eps in (1e-4, 1e-3, 1e-2):
        assert float(g_profile(sol.x0 + eps, sol.a)) < peak
        assert float(g_profile(sol.x0 - eps, sol.a)) < peak


def test_profile_grid_max_matches_closed_form():
    for a in np.linspace(0.01, 0.95, 20):
        sol = max_conformal_radius(float(a))
        xs = np.linspace(1e-6, 5.0, 20_001)
        vals = g_profile(xs, float(a))
        k = int(np.argmax(vals))
        lo, hi = xs[max(k - 1, 0)], xs[min(k + 1, xs.size - 1)]
        phi = (math.sqrt(5.0) - 1.0) / 2.0
        while hi - lo > 1e-12:
            m1 = hi - phi * (hi - lo)
            m2 = lo + phi * (hi - lo)
            if g_profile(m1, float(a)) < g_profile(m2, float(a)):
                lo = m1
            else:
                hi = m2
        refined = float(g_profile(0.5 * (lo + hi), float(a)))
        assert abs(refined - sol.max_radius) < 1e-8


def test_dual_route_agreement():
    fixed_point = solve_a_for_target(0.175)
    bisected = solve_a_by_radius_bisection(0.7)
    assert abs(fixed_point - bisected) < 1e-8


def test_default_threshold_yields_radius_07():
    sol = max_conformal_radius(default_threshold())
    assert abs(sol.max_radius - 0.7) < 1e-12


def test_max_radius_increasing_in_slit_parameter():
    radii = [max_conformal_radius(float(a)).max_radius for a in np.linspace(0.0, 0.98, 50)]
    assert all(r2 > r1 for r1, r2 in zip(radii, radii[1:]))
    assert abs(radii[0] - 0.686291) < 1e-6


def test_intro_profile_decreasing_with_known_endpoints():
    s_grid = np.linspace(1.0 + 1e-6, 1.0 + math.sqrt(2.0), 50)
    vals = [intro_lhs(float(s)) for s in s_grid]
    assert all(v2 < v1 for v1, v2 in zip(vals, vals[1:]))
    assert abs(vals[0] - 0.25) < 1e-5
    assert abs(vals[-1] - 0.17157287525381) < 1e-9


def test_target_outside_attainable_band():
    with pytest.raises(NoSolutionError):
        solve_a_for_target(0.3)
    with pytest.raises(NoSolutionError):
        solve_a_for_target(0.16)
    with pytest.raises(DomainError):
        solve_a_for_target(1.2)


def test_slit_map_lands_in_disk_off_the_slit():
    rng = np.random.default_rng(6)
    a = default_threshold()
    for _ in range(500):
        w = complex(rng.uniform(-1.0, 1.0), -rng.uniform(1e-3, 1.0))
        w /= max(1.0, abs(w) / 0.97)
        image = slit_disk_map(w, a)
        assert abs(image) < 1.0 + 1e-12
        on_slit = abs(image.imag) < 1e-12 and a - 1e-12 <= image.real <= 1.0
        assert not on_slit


def test_slit_map_rejects_upper_half_plane():
    with pytest.raises(DomainError):
        slit_disk_map(0.2 + 0.3j, 0.1)


def test_slit_map_derivative_reproduces_profile():
    # the radius profile equals 2x |h'(-ix)| for the mapping h at height x
    a = 0.2
    h = 1e-7
    for x in (0.2, 0.5, 1.0, 2.0):
        w = -1j * x
        dh = (slit_disk_map(w + h, a) - slit_disk_map(w - h, a)) / (2.0 * h)
        assert abs(2.0 * x * abs(dh) - float(g_profile(x, a))) < 1e-5


def test_solution_validation_catches_corruption():
    sol = max_conformal_radius(0.4)
    with pytest.raises(StructureError):
        dataclasses.replace(sol, x0=sol.x0 + 1e-3)
    with pytest.raises(StructureError):
        dataclasses.replace(sol, max_radius=sol.max_radius + 1e-3)
