"""Shared fixtures: the worked-example rings, ideals, and matrices."""

import random

import pytest

from polyminors import GF, QQ, Ideal, PolyMatrix, PolyRing

SEC51_GENERATORS = [
    "x5*x6-x4*x7",
    "x1*x6-x2*x7",
    "x5^2-x1*x7",
    "x4*x5-x2*x7",
    "x4^2-x2*x6",
    "x1*x4-x2*x5",
    "x2*x3^3*x5+3*x2*x3^2*x7+8*x2^2*x5+3*x3*x4*x7-8*x4*x7+x6*x7",
    "x1*x3^3*x5+3*x1*x3^2*x7+8*x1*x2*x5+3*x3*x5*x7-8*x5*x7+x7^2",
    "x2*x3^3*x4+3*x2*x3^2*x6+8*x2^2*x4+3*x3*x4*x6-8*x4*x6+x6^2",
    "x2^2*x3^3+3*x2*x3^2*x4+8*x2^3+3*x2*x3*x6-8*x2*x6+x4*x6",
    "x1*x2*x3^3+3*x2*x3^2*x5+8*x1*x2^2+3*x2*x3*x7-8*x2*x7+x4*x7",
    "x1^2*x3^3+3*x1*x3^2*x5+8*x1^2*x2+3*x1*x3*x7-8*x1*x7+x5*x7",
]


@pytest.fixture(scope="session")
def curve_ring():
    """GF(101)[x1..x7], the ambient ring of the twisted-cubic-cone example."""
    return PolyRing(GF(101), [f"x{i}" for i in range(1, 8)])


@pytest.fixture(scope="session")
def curve_ideal(curve_ring):
    return Ideal([curve_ring.parse(g) for g in SEC51_GENERATORS], curve_ring)


@pytest.fixture(scope="session")
def monomial_matrix():
    """The 3x3 monomial matrix from the greedy-selection worked example."""
    ring = PolyRing(QQ, ["x", "y"])
    x, y = ring.gens()
    return PolyMatrix(
        ring,
        [
            [x, x * y, ring.zero()],
            [x * y**2, x**6, ring.zero()],
            [ring.zero(), x**2 * y**3, x * y**4],
        ],
    )


@pytest.fixture(scope="session")
def points_example():
    """The GF(5) matrix and curve ideal from the Points worked example."""
    ring = PolyRing(GF(5), ["x", "y", "z"])
    x, y, z = ring.gens()
    M = PolyMatrix(
        ring,
        [
            [x**2, x * y, 3 * y**2],
            [x**3 + y**3, x**2 + z**2, y**2 + z**2],
            [x**2 * z, z**2 * y, y**2 * x],
        ],
    )
    curve = Ideal([z**2 * y - x * (x - z) * (x + z)], ring)
    return M, curve


@pytest.fixture(scope="session")
def rational_cubed_matrix():
    """The 3x4 rational-coefficient matrix of x^2 entries from the engine demo."""
    ring = PolyRing(QQ, ["x"])
    coeffs = [
        ["1", "3", "5/8", "7/10"],
        ["3/4", "2", "7/4", "9"],
        ["1", "2/9", "1/2", "4/3"],
    ]
    rows = [[ring.parse(f"({c})*x^2") for c in row] for row in coeffs]
    return PolyMatrix(ring, rows)


@pytest.fixture
def rng():
    return random.Random(20260825)
