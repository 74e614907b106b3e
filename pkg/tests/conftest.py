"""Shared fixture builders: standard fans and stack data used across tests."""

from __future__ import annotations

import random

import pytest

from toricdm import IntegerMatrix, SimplicialFan, StackyData, close_under_faces


def make_fan(rank, rays, max_cones):
    return SimplicialFan(rank, tuple(tuple(r) for r in rays), close_under_faces(max_cones))


def projective_line_fan():
    return make_fan(1, [(-1,), (1,)], [[0], [1]])


def projective_plane_fan():
    return make_fan(2, [(1, 0), (0, 1), (-1, -1)], [[0, 1], [1, 2], [0, 2]])


def projective_fan(d):
    """The fan of d-dimensional projective space."""
    rays = [tuple(1 if i == k else 0 for i in range(d)) for k in range(d)]
    rays.append(tuple(-1 for _ in range(d)))
    cones = [[i for i in range(d + 1) if i != skip] for skip in range(d + 1)]
    return make_fan(d, rays, cones)


def affine_fan(d):
    """A single full-dimensional simplicial cone with all its faces."""
    rays = [tuple(1 if i == k else 0 for i in range(d)) for k in range(d)]
    return make_fan(d, rays, [list(range(d))])


def product_fan(fan_a, fan_b):
    da, db = fan_a.lattice_rank, fan_b.lattice_rank
    rays = [ray + (0,) * db for ray in fan_a.rays]
    rays += [(0,) * da + ray for ray in fan_b.rays]
    shift = len(fan_a.rays)
    cones = []
    from toricdm import maximal_cones
    for ca in maximal_cones(fan_a):
        for cb in maximal_cones(fan_b):
            cones.append(sorted(ca) + [shift + i for i in sorted(cb)])
    return make_fan(da + db, rays, cones)


def line_fan(a_neg, a_pos):
    """Complete rank-1 fan with chosen ray points on each side."""
    return make_fan(1, [(-abs(a_neg),), (abs(a_pos),)], [[0], [1]])


def affine_quotient_data(a):
    """One ray in Z with ray point a: the basic cyclic-quotient fixture."""
    return StackyData(make_fan(1, [(a,)], [[0]]))


def weighted_line_root_data():
    """Rays -3 and 2 on the line, one square root with twists (0, 1)."""
    return StackyData(line_fan(3, 2), r=(2,), b=IntegerMatrix.from_rows([[0, 1]]))


def p1_root_data(k, r=2):
    """The projective line with one root of order r and twists (0, k)."""
    return StackyData(projective_line_fan(), r=(r,),
                      b=IntegerMatrix.from_rows([[0, k]]))


def random_spanning_data(rng: random.Random) -> StackyData:
    """Random valid data whose rays span, with at least one top cone.

    Either a single full-dimensional simplicial cone or a complete fan with
    d+1 rays (positive axis points plus one ray in the negative orthant).
    """
    d = rng.randint(1, 3)
    if rng.random() < 0.5:
        while True:
            rays = [tuple(rng.randint(-5, 5) for _ in range(d)) for _ in range(d)]
            from toricdm import matrix_rank
            if matrix_rank(IntegerMatrix.column_stack(rays, d)) == d:
                break
        prims = set()
        ok = True
        from math import gcd
        for ray in rays:
            g = 0
            for x in ray:
                g = gcd(g, abs(x))
            prim = tuple(x // g for x in ray)
            if prim in prims:
                ok = False
            prims.add(prim)
        if not ok:
            return random_spanning_data(rng)
        fan = make_fan(d, rays, [list(range(d))])
    else:
        scale = [rng.randint(1, 5) for _ in range(d)]
        rays = [tuple(scale[k] if i == k else 0 for i in range(d)) for k in range(d)]
        rays.append(tuple(-rng.randint(1, 5) for _ in range(d)))
        cones = [[i for i in range(d + 1) if i != skip] for skip in range(d + 1)]
        fan = make_fan(d, rays, cones)
    big_r = rng.randint(0, 2)
    r = tuple(rng.randint(1, 4) for _ in range(big_r))
    b = IntegerMatrix.from_rows(
        [[rng.randint(-4, 4) for _ in range(len(fan.rays))] for _ in range(big_r)],
        len(fan.rays))
    return StackyData(fan, r=r, b=b)


@pytest.fixture
def rng():
    return random.Random(20260809)
