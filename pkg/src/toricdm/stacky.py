"""Core operations on combinatorial stack data.

The input datum bundles a simplicial fan with a chosen lattice point on each
ray, a list of root orders r_1..r_R, and an R x n integer matrix b.  From it
this module builds the exponent matrices of the defining torus homomorphism,
the acting quotient group, generic and per-cone isotropy groups, the
rigidification, the splitting over the sublattice spanned by the rays, and
the associated stacky fan.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .errors import (ConeNotInFanError, NonSpanningRaysError, ValidationReport,
                     Violation)
from .fans import SimplicialFan, is_admissible_zero_pattern, rays_span, validate_fan
from .lattice import (FgAbelianGroup, IntegerMatrix, _snf_full, cokernel,
                      cokernel_with_projection, invariant_factor_chain)


@dataclass(frozen=True)
class StackyData:
    """A fan with ray vectors plus root orders ``r`` and twist matrix ``b``.

    ``b`` has one row per root order and one column per ray.  ``r`` may be
    empty, in which case ``b`` has zero rows and the datum is rigid.
    """

    fan: SimplicialFan
    r: tuple[int, ...] = ()
    b: IntegerMatrix | None = None

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        if self.b is None:
            object.__setattr__(self, "b", IntegerMatrix.zeros(len(self.r), self.fan.ray_count))

    @property
    def lattice_rank(self) -> int:
        return self.fan.lattice_rank

    @property
    def ray_count(self) -> int:
        return self.fan.ray_count

    @property
    def root_count(self) -> int:
        return len(self.r)

    @property
    def is_rigid(self) -> bool:
        return not self.r


@dataclass(frozen=True)
class QuotientGroupDesc:
    """The group acting in the quotient construction, up to isomorphism.

    ``character_classes[k]`` is the class of the k-th standard coordinate
    character in the cokernel presentation, written as its torsion residues
    (one per invariant factor of ``finite_part``, in chain order) followed by
    its free coordinates.
    """

    torus_rank: int
    finite_part: FgAbelianGroup
    character_classes: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class StackyFan:
    """Extended-group fan data: the fan together with lifted ray vectors.

    Each lifted ray is the ray vector followed by the residues of its b-column
    modulo the respective root orders.
    """

    extended_group: FgAbelianGroup
    fan: SimplicialFan
    lifted_rays: tuple[tuple[int, ...], ...]


def validate_data(data: StackyData) -> ValidationReport:
    """Validate the full datum: fan invariants, root orders and b shape."""
    fan_report = validate_fan(data.fan)
    if not fan_report.valid:
        return fan_report
    for i, r in enumerate(data.r):
        if r < 1:
            return ValidationReport((Violation(
                "nonpositive_root_order", f"root order r[{i}] = {r} must be at least 1", i),))
    if data.b.rows != data.root_count or data.b.cols != data.ray_count:
        return ValidationReport((Violation(
            "bad_b_shape",
            f"b is {data.b.rows}x{data.b.cols}, expected {data.root_count}x{data.ray_count}",
            (data.b.rows, data.b.cols)),))
    return ValidationReport()


def build_matrices(data: StackyData) -> tuple[IntegerMatrix, IntegerMatrix]:
    """The exponent blocks of the defining homomorphism.

    The first matrix stacks the ray coordinates over the rows of b, giving a
    (d+R) x n matrix; the second is zero on the first d rows with the root
    orders on the diagonal below, giving (d+R) x R.
    """
    d, n, big_r = data.lattice_rank, data.ray_count, data.root_count
    rows = [[data.fan.rays[k][l] for k in range(n)] for l in range(d)]
    rows.extend(data.b.to_rows())
    b_matrix = IntegerMatrix.from_rows(rows, n)
    q_rows = [[0] * big_r for _ in range(d)]
    for i in range(big_r):
        q_rows.append([data.r[i] if j == i else 0 for j in range(big_r)])
    q_matrix = IntegerMatrix.from_rows(q_rows, big_r)
    return b_matrix, q_matrix


def psi_exponents(data: StackyData) -> IntegerMatrix:
    """The full (d+R) x (n+R) exponent matrix of the torus homomorphism."""
    b_matrix, q_matrix = build_matrices(data)
    return b_matrix.hstack(q_matrix)


def quotient_group(data: StackyData) -> QuotientGroupDesc:
    """Rank and torsion of the acting group, with its coordinate characters.

    The group is the character dual of the cokernel of the transposed exponent
    matrix; only its isomorphism type (torus rank plus invariant factors) and
    the classes of the standard characters are exposed.
    """
    relations = psi_exponents(data).transpose()
    group, project = cokernel_with_projection(relations)
    ambient = data.ray_count + data.root_count
    classes = tuple(project(tuple(1 if i == k else 0 for i in range(ambient)))
                    for k in range(ambient))
    return QuotientGroupDesc(torus_rank=group.free_rank,
                             finite_part=FgAbelianGroup(0, group.invariant_factors),
                             character_classes=classes)


def stacky_fan(data: StackyData) -> StackyFan:
    """The fan with rays lifted into the extended group.

    Requires the rays to span the ambient lattice rationally; use
    :func:`split_nonspanning` first when they do not.
    """
    spans, _ = rays_span(data.fan)
    if not spans:
        raise NonSpanningRaysError(
            "rays do not span the lattice; split off the torus factor first")
    _, q_matrix = build_matrices(data)
    lifted = tuple(
        data.fan.rays[k] + tuple(data.b[i, k] % data.r[i] for i in range(data.root_count))
        for k in range(data.ray_count))
    extended = FgAbelianGroup(free_rank=data.lattice_rank,
                              invariant_factors=invariant_factor_chain(data.r),
                              presentation=q_matrix)
    return StackyFan(extended_group=extended, fan=data.fan, lifted_rays=lifted)


def generic_stabilizer(data: StackyData) -> FgAbelianGroup:
    """The automorphism group of a general point: the sum of Z/r_i."""
    return FgAbelianGroup(free_rank=0,
                          invariant_factors=invariant_factor_chain(data.r),
                          presentation=IntegerMatrix.diagonal(data.r))


def point_stabilizer(data: StackyData, cone: Sequence[int] | frozenset[int]) -> FgAbelianGroup:
    """Isotropy group of a point whose coordinates vanish exactly on ``cone``.

    Computed as the quotient of the character lattice modulo the exponent rows
    together with the coordinate vectors of the rays outside the cone; the
    result is always finite for cones of the fan.
    """
    cone = frozenset(int(i) for i in cone)
    if cone not in data.fan.cones:
        raise ConeNotInFanError(f"cone {sorted(cone)} is not in the fan")
    n, big_r = data.ray_count, data.root_count
    exponents = psi_exponents(data)
    columns = [exponents.row(i) for i in range(exponents.rows)]
    for k in range(n):
        if k not in cone:
            columns.append(tuple(1 if pos == k else 0 for pos in range(n + big_r)))
    relations = IntegerMatrix.column_stack(columns, n + big_r)
    group = cokernel(relations)
    if group.free_rank:
        raise ArithmeticError("isotropy group came out infinite; invalid input data")
    return group


def rigidify(data: StackyData) -> StackyData:
    """The same fan and rays with all root data removed."""
    return StackyData(fan=data.fan, r=(), b=IntegerMatrix.zeros(0, data.ray_count))


def split_nonspanning(data: StackyData) -> tuple[StackyData, int]:
    """Re-express the datum over the sublattice the rays span.

    Returns the datum written in a basis of the saturated span together with
    the rank of the complementary torus factor.  Data with spanning rays is
    returned unchanged with factor 0, which makes the operation idempotent.
    """
    full = _snf_full(data.fan.ray_matrix())
    rank = sum(1 for x in full.d.diagonal_entries() if x != 0)
    d = data.lattice_rank
    if rank == d:
        return data, 0
    new_rays = []
    for ray in data.fan.rays:
        coords = full.u_inv.apply(ray)
        if any(coords[rank:]):
            raise ArithmeticError("ray escaped the span of the ray matrix")
        new_rays.append(coords[:rank])
    new_fan = SimplicialFan(rank, tuple(new_rays), data.fan.cones)
    return StackyData(fan=new_fan, r=data.r, b=data.b), d - rank


def canonical_ray_decomposition(data: StackyData) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Split each ray vector into its primitive generator and multiplicity.

    For each ray returns (n, alpha) with the ray equal to alpha * n, where n
    is the primitive lattice point on the ray and alpha the gcd of the ray's
    coordinates.
    """
    result = []
    for ray in data.fan.rays:
        g = 0
        for x in ray:
            g = gcd(g, abs(x))
        result.append((tuple(x // g for x in ray), g))
    return tuple(result)


def dm_torus(data: StackyData) -> tuple[int, FgAbelianGroup]:
    """Dimension and band of the dense open torus of the stack."""
    if not is_admissible_zero_pattern(data.fan, frozenset()):
        raise ArithmeticError("the empty zero pattern must always be admissible")
    return data.lattice_rank, FgAbelianGroup(0, invariant_factor_chain(data.r))
