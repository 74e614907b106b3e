"""Picard presentation of rigid data and classification of banded gerbes.

The Picard group of a rigid datum is presented as the dual ray lattice modulo
the image of the character lattice (the column span of the transposed ray
matrix).  Divisor classes, the twist classes attached to the root data, the
divisor-chain canonical form and the banded-isomorphism decision all live
here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import MismatchedUnderlyingDataError, NotInChainFormError
from .lattice import (FgAbelianGroup, IntegerMatrix, _snf_full, cokernel,
                      divisible_in_quotient, solve_linear)
from .stacky import StackyData, rigidify


@dataclass(frozen=True)
class PicardPresentation:
    """Pic as a cokernel: Z^n (dual ray basis) modulo the relation columns.

    ``relation_matrix`` is n x d; its l-th column pairs the l-th standard
    character with every ray vector.
    """

    n: int
    relation_matrix: IntegerMatrix
    group: FgAbelianGroup

    def class_of(self, representative: Sequence[int]) -> "PicClass":
        return PicClass(tuple(int(x) for x in representative), self)

    def zero_class(self) -> "PicClass":
        return self.class_of((0,) * self.n)

    def vector_is_zero_class(self, vector: Sequence[int]) -> bool:
        solution, _ = solve_linear(self.relation_matrix, vector)
        return solution is not None


@dataclass(frozen=True, eq=False)
class PicClass:
    """A divisor class: an integer vector taken modulo the relation columns."""

    representative: tuple[int, ...]
    presentation: PicardPresentation

    def __post_init__(self):
        object.__setattr__(self, "representative",
                           tuple(int(x) for x in self.representative))
        if len(self.representative) != self.presentation.n:
            raise ValueError(
                f"representative has length {len(self.representative)}, "
                f"expected {self.presentation.n}")

    @property
    def is_zero(self) -> bool:
        return self.presentation.vector_is_zero_class(self.representative)

    def __eq__(self, other):
        if not isinstance(other, PicClass):
            return NotImplemented
        if self.presentation != other.presentation:
            return False
        diff = tuple(a - b for a, b in zip(self.representative, other.representative))
        return self.presentation.vector_is_zero_class(diff)

    def __add__(self, other: "PicClass") -> "PicClass":
        if not isinstance(other, PicClass) or self.presentation != other.presentation:
            raise ValueError("classes live in different Picard presentations")
        return PicClass(tuple(a + b for a, b in zip(self.representative, other.representative)),
                        self.presentation)

    def __neg__(self) -> "PicClass":
        return PicClass(tuple(-a for a in self.representative), self.presentation)

    def __sub__(self, other: "PicClass") -> "PicClass":
        return self + (-other)

    def __mul__(self, scalar: int) -> "PicClass":
        return PicClass(tuple(int(scalar) * a for a in self.representative), self.presentation)

    __rmul__ = __mul__

    def __repr__(self):
        return f"PicClass({self.representative})"


def picard_group(data: StackyData) -> PicardPresentation:
    """Picard presentation of a rigid datum (no root data allowed).

    When the rays span the lattice the relation columns are independent and
    the free rank of the group is the ray count minus the lattice rank.
    """
    if not data.is_rigid:
        raise ValueError("picard_group expects rigid data; call rigidify first")
    n, d = data.ray_count, data.lattice_rank
    relation = IntegerMatrix.from_rows(
        [[data.fan.rays[k][l] for l in range(d)] for k in range(n)], d)
    return PicardPresentation(n=n, relation_matrix=relation, group=cokernel(relation))


def gerbe_class(data: StackyData, index: int) -> PicClass:
    """The divisor class attached to the ``index``-th root datum (1-based)."""
    if not 1 <= index <= data.root_count:
        raise IndexError(f"root index {index} out of range 1..{data.root_count}")
    presentation = picard_group(rigidify(data))
    return presentation.class_of(data.b.row(index - 1))


def _is_chain(r: Sequence[int]) -> bool:
    return all(r[i] >= 1 and r[i + 1] % r[i] == 0 for i in range(len(r) - 1)) \
        and all(x >= 1 for x in r)


def is_isomorphic_banded(data1: StackyData, data2: StackyData) -> bool:
    """Do two data sets over the same fan define isomorphic banded gerbes?

    Both root-order lists must already be in divisor-chain form.  The verdict
    is: equal chains, and for each index the difference of the b rows is
    divisible by the respective root order in the Picard quotient.
    """
    if data1.fan != data2.fan:
        raise MismatchedUnderlyingDataError(
            "data sets do not share the same lattice, fan and ray vectors")
    if not _is_chain(data1.r):
        raise NotInChainFormError(f"root orders {data1.r} are not a divisor chain")
    if not _is_chain(data2.r):
        raise NotInChainFormError(f"root orders {data2.r} are not a divisor chain")
    if data1.r != data2.r:
        return False
    presentation = picard_group(rigidify(data1))
    for i, r in enumerate(data1.r):
        diff = tuple(a - b for a, b in zip(data1.b.row(i), data2.b.row(i)))
        if not divisible_in_quotient(diff, r, presentation.relation_matrix):
            return False
    return True


def canonicalize(data: StackyData) -> tuple[StackyData, IntegerMatrix]:
    """Rewrite the root data in divisor-chain form.

    The chain is read off the Smith form of diag(r); the certificate is the
    matrix of the induced isomorphism from the sum of Z/r_i onto the sum of
    the chain factors, and the b rows are pushed forward through it.  Factors
    equal to 1 are dropped.  Data already in chain form comes back unchanged
    with an identity certificate.
    """
    big_r = data.root_count
    if big_r == 0:
        return data, IntegerMatrix.identity(0)
    full = _snf_full(IntegerMatrix.diagonal(data.r))
    diag = full.d.diagonal_entries()
    keep = [j for j in range(big_r) if diag[j] >= 2]
    transported = full.u_inv @ data.b
    certificate = IntegerMatrix.from_rows([full.u_inv.row(j) for j in keep], big_r)
    new_b = IntegerMatrix.from_rows([transported.row(j) for j in keep], data.ray_count)
    new_data = StackyData(fan=data.fan, r=tuple(diag[j] for j in keep), b=new_b)
    return new_data, certificate
