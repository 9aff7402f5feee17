"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import pytest

from blochkit.products import BlaschkeProduct, random_product


def power_product(n: int) -> BlaschkeProduct:
    """The n-fold product z^n (all zeros at the origin)."""
    return BlaschkeProduct((0j,) * n)


def mixed_products(count: int, max_degree: int, base_seed: int):
    """Deterministic list of products alternating both radial laws."""
    out = []
    for i in range(count):
        degree = 1 + i % max_degree
        law = "uniform_disk" if i % 2 == 0 else "boundary_concentrated"
        out.append(random_product(degree, seed=base_seed + i, law=law))
    return out


@pytest.fixture(scope="session")
def random_products():
    return mixed_products(30, 8, base_seed=9000)
