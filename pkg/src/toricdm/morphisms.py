"""Homogeneous polynomial maps between toric stack data.

A morphism candidate is a tuple of polynomials in the source ray variables,
one per target ray, plus one source divisor class per target root index.
Three verdicts are computed: the degree condition on the classes, the
nondegeneracy condition on where the polynomials may vanish, and whether two
tuples differ by the group action (a scalar per coordinate satisfying the
exponent relations of the target rays).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import (MismatchedSourceTargetError, NotHomogeneousError,
                     SourceNotCompleteError, SourceNotRigidError,
                     TargetRaysNotSpanningError, ZeroPolynomialError)
from .fans import (SimplicialFan, is_admissible_zero_pattern, is_complete,
                   maximal_cones, rays_span)
from .gerbes import PicClass, picard_group
from .stacky import StackyData

DEFAULT_SAMPLE_VALUES = (Fraction(1), Fraction(-1), Fraction(2), Fraction(-2),
                         Fraction(3), Fraction(-3), Fraction(1, 2), Fraction(-1, 2))
DEFAULT_SAMPLE_BUDGET = 2000


@dataclass(frozen=True)
class SparsePolynomial:
    """A polynomial with exact rational coefficients in sparse form.

    Terms are (coefficient, exponent vector) pairs with nonnegative exponents;
    construction merges duplicate exponent vectors, drops zero coefficients
    and sorts, so equal polynomials compare equal.
    """

    num_vars: int
    terms: tuple[tuple[Fraction, tuple[int, ...]], ...]

    def __post_init__(self):
        merged: dict[tuple[int, ...], Fraction] = {}
        for coeff, exponents in self.terms:
            exponents = tuple(int(e) for e in exponents)
            if len(exponents) != self.num_vars:
                raise ValueError(f"exponent vector {exponents} has wrong length")
            if any(e < 0 for e in exponents):
                raise ValueError(f"negative exponent in {exponents}")
            merged[exponents] = merged.get(exponents, Fraction(0)) + Fraction(coeff)
        cleaned = tuple(sorted(((c, e) for e, c in merged.items() if c), key=lambda t: t[1]))
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def zero(cls, num_vars: int) -> "SparsePolynomial":
        return cls(num_vars, ())

    @classmethod
    def monomial(cls, num_vars: int, coefficient, exponents: Sequence[int]) -> "SparsePolynomial":
        return cls(num_vars, ((Fraction(coefficient), tuple(exponents)),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def support_vars(self) -> frozenset[int]:
        """Variables that occur with a positive exponent in some term."""
        return frozenset(k for _, exps in self.terms for k, e in enumerate(exps) if e)

    def evaluate(self, values: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for coeff, exps in self.terms:
            term = coeff
            for v, e in zip(values, exps):
                if e:
                    term *= v ** e
            total += term
        return total

    def scale(self, factor) -> "SparsePolynomial":
        factor = Fraction(factor)
        return SparsePolynomial(self.num_vars,
                                tuple((factor * c, e) for c, e in self.terms))

    def __mul__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        terms = [(ca * cb, tuple(x + y for x, y in zip(ea, eb)))
                 for ca, ea in self.terms for cb, eb in other.terms]
        return SparsePolynomial(self.num_vars, tuple(terms))


@dataclass(frozen=True)
class MorphismData:
    """Source and target data, one polynomial per target ray, one source
    divisor class per target root index."""

    source: StackyData
    target: StackyData
    polys: tuple[SparsePolynomial, ...]
    chi: tuple[PicClass, ...]

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        object.__setattr__(self, "chi", tuple(self.chi))


@dataclass(frozen=True)
class ConditionBVerdict:
    """Outcome of the vanishing-locus check: proven, refuted, or unknown.

    A refutation carries either the failing maximal source cone (worst-case
    zero pattern) or an explicit rational point of the source locus whose
    image leaves the target locus.
    """

    status: str  # "proven" | "refuted" | "unknown"
    witness_pattern: Optional[frozenset[int]] = None
    witness_point: Optional[tuple[Fraction, ...]] = None

    @classmethod
    def proven(cls):
        return cls("proven")

    @classmethod
    def refuted_pattern(cls, pattern: Iterable[int]):
        return cls("refuted", witness_pattern=frozenset(pattern))

    @classmethod
    def refuted_point(cls, point: Sequence[Fraction]):
        return cls("refuted", witness_point=tuple(point))

    @classmethod
    def unknown(cls):
        return cls("unknown")

    @property
    def is_proven(self) -> bool:
        return self.status == "proven"

    @property
    def is_refuted(self) -> bool:
        return self.status == "refuted"


@dataclass(frozen=True)
class TwoIsoVerdict:
    """Outcome of the group-action comparison of two polynomial tuples."""

    status: str  # "yes" | "no" | "unknown"
    ratios: Optional[tuple[Fraction, ...]] = None

    @classmethod
    def yes(cls, ratios: Sequence[Fraction]):
        return cls("yes", tuple(ratios))

    @classmethod
    def no(cls):
        return cls("no")

    @classmethod
    def unknown(cls):
        return cls("unknown")


def validate_morphism_data(md: MorphismData) -> None:
    """Enforce the structural preconditions, raising a typed error on failure."""
    if not md.source.is_rigid:
        raise SourceNotRigidError("morphism sources must carry no root data")
    if len(md.polys) != md.target.ray_count:
        raise MismatchedSourceTargetError(
            f"{len(md.polys)} polynomials for {md.target.ray_count} target rays")
    if len(md.chi) != md.target.root_count:
        raise MismatchedSourceTargetError(
            f"{len(md.chi)} twist classes for {md.target.root_count} root indices")
    if any(p.num_vars != md.source.ray_count for p in md.polys):
        raise MismatchedSourceTargetError("polynomial variable count differs from source rays")
    if md.chi:
        source_presentation = picard_group(md.source)
        if any(cls.presentation != source_presentation for cls in md.chi):
            raise MismatchedSourceTargetError(
                "twist classes do not live on the source Picard presentation")
    if not is_complete(md.source.fan):
        raise SourceNotCompleteError("the source fan must be complete")
    if not rays_span(md.target.fan)[0]:
        raise TargetRaysNotSpanningError("the target rays must span the target lattice")


def degree(p: SparsePolynomial, source: StackyData) -> PicClass:
    """The common divisor class of all terms of ``p`` in the source grading.

    A monomial's class is the class of its exponent vector.  Raises when the
    polynomial is zero or mixes classes.
    """
    if not source.is_rigid:
        raise SourceNotRigidError("grading is defined for rigid data only")
    if p.is_zero:
        raise ZeroPolynomialError("the zero polynomial has no degree")
    presentation = picard_group(source)
    first = presentation.class_of(p.terms[0][1])
    for _, exponents in p.terms[1:]:
        if presentation.class_of(exponents) != first:
            raise NotHomogeneousError(
                f"terms {p.terms[0][1]} and {exponents} have different classes")
    return first


def check_condition_a(md: MorphismData) -> bool:
    """The degree condition on the polynomial classes.

    Writing chi_rho for the class of the polynomial at target ray rho, this
    checks that the sum of a_rho-weighted classes vanishes coordinatewise and
    that for each root index i the b-weighted class sum plus r_i times the
    chosen twist class vanishes.
    """
    validate_morphism_data(md)
    presentation = picard_group(md.source)
    classes = [degree(p, md.source) for p in md.polys]
    d = md.target.lattice_rank
    for l in range(d):
        total = presentation.zero_class()
        for k, cls in enumerate(classes):
            total = total + md.target.fan.rays[k][l] * cls
        if not total.is_zero:
            return False
    for i in range(md.target.root_count):
        total = md.target.r[i] * md.chi[i]
        for k, cls in enumerate(classes):
            total = total + md.target.b[i, k] * cls
        if not total.is_zero:
            return False
    return True


def irrelevant_patterns(fan: SimplicialFan) -> list[frozenset[int]]:
    """The maximal admissible zero patterns: the ray sets of the maximal cones."""
    return maximal_cones(fan)


def _admissible_patterns(fan: SimplicialFan) -> list[frozenset[int]]:
    patterns = {frozenset()}
    for cone in maximal_cones(fan):
        cone = tuple(sorted(cone))
        for size in range(len(cone) + 1):
            patterns.update(frozenset(c) for c in itertools.combinations(cone, size))
    return sorted(patterns, key=lambda p: (len(p), sorted(p)))


def check_condition_b(md: MorphismData,
                      sample_values: Sequence[Fraction] = DEFAULT_SAMPLE_VALUES,
                      sample_budget: int = DEFAULT_SAMPLE_BUDGET,
                      seed: int = 0) -> ConditionBVerdict:
    """Does the polynomial tuple map the source locus into the target locus?

    For tuples in which every polynomial is a single monomial or zero the
    question is decided exactly: the worst case for a maximal source cone is
    the point vanishing exactly on its rays, whose image vanishes on the
    target rays whose polynomial meets the cone (or is zero); the verdict is
    proven when each such image pattern is admissible on the target, refuted
    with the failing cone otherwise.

    General tuples are only searched for refutations: for every admissible
    source zero pattern the free coordinates run over ``sample_values`` (all
    combinations when they fit in the budget, seeded random draws otherwise)
    and any sample whose image pattern is inadmissible refutes.  With the
    budget exhausted or the search clean the verdict is unknown, never proven.
    """
    validate_morphism_data(md)
    target_fan = md.target.fan

    if all(len(p.terms) <= 1 for p in md.polys):
        for cone in maximal_cones(md.source.fan):
            image_pattern = frozenset(
                k for k, p in enumerate(md.polys)
                if p.is_zero or (p.support_vars() & cone))
            if not is_admissible_zero_pattern(target_fan, image_pattern):
                return ConditionBVerdict.refuted_pattern(cone)
        return ConditionBVerdict.proven()

    rng = random.Random(seed)
    remaining = sample_budget
    n_source = md.source.ray_count
    for pattern in _admissible_patterns(md.source.fan):
        if remaining <= 0:
            break
        free = [k for k in range(n_source) if k not in pattern]
        space = len(sample_values) ** len(free)
        if space <= remaining:
            assignments = itertools.product(sample_values, repeat=len(free))
            remaining -= space
        else:
            count = remaining
            assignments = (tuple(rng.choice(sample_values) for _ in free)
                           for _ in range(count))
            remaining = 0
        for assignment in assignments:
            point = [Fraction(0)] * n_source
            for k, value in zip(free, assignment):
                point[k] = value
            image_pattern = frozenset(
                k for k, p in enumerate(md.polys) if p.evaluate(point) == 0)
            if not is_admissible_zero_pattern(target_fan, image_pattern):
                return ConditionBVerdict.refuted_point(point)
    return ConditionBVerdict.unknown()


def _scalar_ratio(new: SparsePolynomial, old: SparsePolynomial) -> Optional[Fraction]:
    """The constant lambda with new = lambda * old, or None."""
    if new.is_zero and old.is_zero:
        return Fraction(1)
    if len(new.terms) != len(old.terms):
        return None
    if any(en != eo for (_, en), (_, eo) in zip(new.terms, old.terms)):
        return None
    ratio = new.terms[0][0] / old.terms[0][0]
    for (cn, _), (co, _) in zip(new.terms[1:], old.terms[1:]):
        if cn / co != ratio:
            return None
    return ratio


def check_two_isomorphic(md1: MorphismData, md2: MorphismData) -> TwoIsoVerdict:
    """Do two tuples define the same morphism up to the group action?

    The tuples must be proportional coordinatewise; the ratios must then
    satisfy, for every lattice coordinate of the target, the multiplicative
    relation given by the target ray exponents.  The root components of a
    witness always exist over the complex numbers, so only these relations
    decide.  All checks are exact over the rationals.
    """
    if md1.source != md2.source or md1.target != md2.target or md1.chi != md2.chi:
        raise MismatchedSourceTargetError(
            "comparison requires identical source, target and twist classes")
    validate_morphism_data(md1)
    ratios = []
    for p_new, p_old in zip(md2.polys, md1.polys):
        ratio = _scalar_ratio(p_new, p_old)
        if ratio is None:
            return TwoIsoVerdict.no()
        ratios.append(ratio)
    for l in range(md1.target.lattice_rank):
        product = Fraction(1)
        for k, ratio in enumerate(ratios):
            exponent = md1.target.fan.rays[k][l]
            if exponent:
                product *= ratio ** exponent
        if product != 1:
            return TwoIsoVerdict.no()
    return TwoIsoVerdict.yes(ratios)
