"""Simplicial fan combinatorics over the rationals, exactly.

A fan is given by its ray vectors and an explicit list of cones (as sets of
ray indices) that must already contain every face.  Validation covers
simpliciality, face closure, duplicate ray directions and the pairwise
intersection condition; the latter is decided by exact integer
Fourier-Motzkin elimination.  Completeness uses the facet-pairing criterion,
which is what completeness means for the simplicial fans handled here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import ValidationReport, Violation
from .lattice import IntegerMatrix, _snf_full

ZeroPattern = frozenset  # subset of ray indices whose coordinates vanish


@dataclass(frozen=True)
class SimplicialFan:
    """A simplicial fan: ray vectors in Z^d plus a face-closed cone list.

    Cones are sets of ray indices; the empty set is the zero cone and must be
    listed.  Construction only normalizes the container types; run
    :func:`validate_fan` to check the geometric invariants.
    """

    lattice_rank: int
    rays: tuple[tuple[int, ...], ...]
    cones: frozenset[frozenset[int]]

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in ray) for ray in self.rays)
        cones = frozenset(frozenset(int(i) for i in cone) for cone in self.cones)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "cones", cones)

    @property
    def ray_count(self) -> int:
        return len(self.rays)

    def sorted_cones(self) -> list[frozenset[int]]:
        return sorted(self.cones, key=lambda c: (len(c), sorted(c)))

    def ray_matrix(self) -> IntegerMatrix:
        """The d x n matrix whose columns are the ray vectors."""
        return IntegerMatrix.column_stack(self.rays, self.lattice_rank)


def close_under_faces(cones: Iterable[Iterable[int]]) -> frozenset[frozenset[int]]:
    """All subsets of the given cones, including the empty cone."""
    closed = {frozenset()}
    for cone in cones:
        cone = tuple(sorted(set(cone)))
        for mask in range(1 << len(cone)):
            closed.add(frozenset(cone[i] for i in range(len(cone)) if mask >> i & 1))
    return frozenset(closed)


def _primitive(vector: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in vector:
        g = gcd(g, abs(x))
    return tuple(x // g for x in vector) if g else tuple(vector)


def _rank_rational(vectors: Sequence[Sequence[int]]) -> int:
    """Rank over Q by Gaussian elimination with exact fractions."""
    grid = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    width = len(grid[0]) if grid else 0
    for col in range(width):
        pivot_row = next((i for i in range(rank, len(grid)) if grid[i][col]), None)
        if pivot_row is None:
            continue
        grid[rank], grid[pivot_row] = grid[pivot_row], grid[rank]
        inv = 1 / grid[rank][col]
        for i in range(len(grid)):
            if i != rank and grid[i][col]:
                factor = grid[i][col] * inv
                for k in range(col, width):
                    grid[i][k] -= factor * grid[rank][k]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# Fourier-Motzkin elimination
# ---------------------------------------------------------------------------

def _normalize_row(coeffs: tuple[int, ...], rhs: int):
    g = abs(rhs)
    for c in coeffs:
        g = gcd(g, abs(c))
    if g > 1:
        coeffs = tuple(c // g for c in coeffs)
        rhs //= g
    return coeffs, rhs


def fourier_motzkin_feasible(rows: Sequence[tuple[Sequence[int], int]], nvars: int) -> bool:
    """Rational feasibility of a system of inequalities sum(c*x) <= rhs.

    Eliminates the variables one at a time by combining each positive row with
    each negative row, deduplicating normalized rows to limit growth.  All
    arithmetic stays in the integers.
    """
    system = {_normalize_row(tuple(int(c) for c in coeffs), int(rhs)) for coeffs, rhs in rows}
    for var in range(nvars):
        positive, negative, rest = [], [], []
        for coeffs, rhs in system:
            c = coeffs[var]
            if c > 0:
                positive.append((coeffs, rhs))
            elif c < 0:
                negative.append((coeffs, rhs))
            else:
                rest.append((coeffs, rhs))
        new_system = set(rest)
        for pc, pr in positive:
            for nc, nr in negative:
                mp, mn = -nc[var], pc[var]
                combined = tuple(mp * a + mn * b for a, b in zip(pc, nc))
                new_system.add(_normalize_row(combined, mp * pr + mn * nr))
        system = new_system
        for coeffs, rhs in system:
            if not any(coeffs) and rhs < 0:
                return False
    return all(rhs >= 0 for _, rhs in system)


def _cone_pair_violation(fan: SimplicialFan, cone_a: frozenset[int], cone_b: frozenset[int]):
    """A ray index witnessing cone(a) and cone(b) meeting outside their common
    face, or None when the pair is compatible.

    Feasibility of {sum a-side = sum b-side, all coefficients >= 0, probe
    coefficient >= 1} for a probe ray outside the shared face means the
    intersection contains a point that cannot lie in the common face.
    """
    a_list = sorted(cone_a)
    b_list = sorted(cone_b)
    shared = cone_a & cone_b
    nvars = len(a_list) + len(b_list)
    d = fan.lattice_rank

    base_rows: list[tuple[tuple[int, ...], int]] = []
    for l in range(d):
        coeffs = tuple([fan.rays[i][l] for i in a_list] + [-fan.rays[j][l] for j in b_list])
        base_rows.append((coeffs, 0))
        base_rows.append((tuple(-c for c in coeffs), 0))
    for k in range(nvars):
        base_rows.append((tuple(-1 if i == k else 0 for i in range(nvars)), 0))

    probes = [(k, a_list[k]) for k in range(len(a_list)) if a_list[k] not in shared]
    probes += [(len(a_list) + k, b_list[k]) for k in range(len(b_list)) if b_list[k] not in shared]
    for var, ray_index in probes:
        probe_row = (tuple(-1 if i == var else 0 for i in range(nvars)), -1)
        if fourier_motzkin_feasible(base_rows + [probe_row], nvars):
            return ray_index
    return None


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_fan(fan: SimplicialFan) -> ValidationReport:
    """Check every fan invariant, reporting the first violation with a witness.

    The checks run in dependency order: ray sanity, duplicate directions, cone
    index ranges, simpliciality, face closure, and finally pairwise
    intersection compatibility of the maximal cones (which implies it for all
    faces once closure and simpliciality hold).
    """
    d = fan.lattice_rank
    if d < 0:
        return ValidationReport((Violation("bad_rank", "lattice rank is negative", d),))
    for idx, ray in enumerate(fan.rays):
        if len(ray) != d:
            return ValidationReport((Violation(
                "bad_ray_length", f"ray {idx} has {len(ray)} coordinates, expected {d}", idx),))
        if not any(ray):
            return ValidationReport((Violation("zero_ray", f"ray {idx} is the zero vector", idx),))

    directions: dict[tuple[int, ...], int] = {}
    for idx, ray in enumerate(fan.rays):
        prim = _primitive(ray)
        if prim in directions:
            return ValidationReport((Violation(
                "duplicate_ray_direction",
                f"rays {directions[prim]} and {idx} span the same ray",
                (directions[prim], idx)),))
        directions[prim] = idx

    if frozenset() not in fan.cones:
        return ValidationReport((Violation("missing_zero_cone", "the empty cone is not listed", None),))

    for cone in fan.sorted_cones():
        for i in cone:
            if not 0 <= i < fan.ray_count:
                return ValidationReport((Violation(
                    "cone_index_out_of_range", f"cone {sorted(cone)} uses unknown ray {i}",
                    sorted(cone)),))

    for cone in fan.sorted_cones():
        if cone and _rank_rational([fan.rays[i] for i in sorted(cone)]) != len(cone):
            return ValidationReport((Violation(
                "dependent_cone", f"rays of cone {sorted(cone)} are linearly dependent",
                sorted(cone)),))

    for cone in fan.sorted_cones():
        for i in cone:
            if cone - {i} not in fan.cones:
                return ValidationReport((Violation(
                    "not_face_closed",
                    f"face {sorted(cone - {i})} of cone {sorted(cone)} is missing",
                    (sorted(cone), sorted(cone - {i}))),))

    maximal = maximal_cones(fan)
    for a in range(len(maximal)):
        for b in range(a + 1, len(maximal)):
            witness = _cone_pair_violation(fan, maximal[a], maximal[b])
            if witness is not None:
                return ValidationReport((Violation(
                    "bad_intersection",
                    f"cones {sorted(maximal[a])} and {sorted(maximal[b])} meet outside "
                    f"their common face (ray {witness} is involved)",
                    (sorted(maximal[a]), sorted(maximal[b]), witness)),))

    return ValidationReport()


def maximal_cones(fan: SimplicialFan) -> list[frozenset[int]]:
    """Cones not strictly contained in another listed cone, in sorted order."""
    return [c for c in fan.sorted_cones()
            if not any(c < other for other in fan.cones)]


def is_complete(fan: SimplicialFan) -> bool:
    """Does the fan's support cover the whole rational vector space?

    Decided by the facet-pairing criterion: the fan is pure of top dimension,
    every facet of a maximal cone lies in exactly two maximal cones, and the
    maximal cones are connected through shared facets.
    """
    d = fan.lattice_rank
    maximal = maximal_cones(fan)
    if any(len(c) != d for c in maximal):
        return False
    if d == 0:
        return True

    facet_members: dict[frozenset[int], list[int]] = {}
    for idx, cone in enumerate(maximal):
        for i in cone:
            facet_members.setdefault(cone - {i}, []).append(idx)
    if any(len(owners) != 2 for owners in facet_members.values()):
        return False

    seen = {0}
    frontier = [0]
    while frontier:
        current = frontier.pop()
        for owners in facet_members.values():
            if current in owners:
                other = owners[0] if owners[1] == current else owners[1]
                if other not in seen:
                    seen.add(other)
                    frontier.append(other)
    return len(seen) == len(maximal)


def rays_span(fan: SimplicialFan) -> tuple[bool, tuple[tuple[int, ...], ...]]:
    """Whether the rays span the whole lattice rationally, plus a basis of the
    saturated sublattice they do span.

    The basis consists of the first ``rank`` columns of the left Smith
    transform of the ray matrix.
    """
    full = _snf_full(fan.ray_matrix())
    rank = sum(1 for x in full.d.diagonal_entries() if x != 0)
    basis = tuple(full.u.column(j) for j in range(rank))
    return rank == fan.lattice_rank, basis


def is_admissible_zero_pattern(fan: SimplicialFan, pattern: Iterable[int]) -> bool:
    """May the coordinates indexed by ``pattern`` vanish simultaneously?

    True exactly when some maximal cone contains every ray in the pattern;
    such patterns are the ones realized on the quotient-construction locus.
    """
    pattern = frozenset(int(i) for i in pattern)
    for i in pattern:
        if not 0 <= i < fan.ray_count:
            raise ValueError(f"ray index {i} out of range")
    return any(pattern <= cone for cone in maximal_cones(fan))
