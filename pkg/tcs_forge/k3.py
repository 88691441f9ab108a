"""Degrees, slopes and destabilizer enumeration on polarized K3 Picard lattices.

Effective classes are over-approximated: a prime divisor has positive degree
and square at least -2, and every effective divisor is a sum of primes. An
empty candidate set is therefore a sound stability certificate.
"""

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum

import sympy as sp

from . import linalg
from .errors import HypothesisViolationError, InputError, LatticeError
from .lattice import IntLattice, LatticeVector, gram_eval, signature

logger = logging.getLogger(__name__)

# Smallest square of an irreducible curve on a K3 surface
PRIME_SQUARE_BOUND = -2


class StabilityVerdict(StrEnum):
    STABLE = "stable"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class PolarizedK3:
    """Picard lattice of a K3 surface with an ample class."""

    pic: IntLattice
    ample: LatticeVector

    def __post_init__(self):
        object.__setattr__(self, "ample", self.pic.vector(self.ample))
        if not self.pic.is_even:
            raise LatticeError("Picard lattice of a K3 surface must be even")
        if signature(self.pic) != (1, self.pic.rank - 1, 0):
            raise LatticeError(
                f"Picard lattice must be hyperbolic, got signature {signature(self.pic)}"
            )
        if gram_eval(self.pic, self.ample, self.ample) <= 0:
            raise LatticeError(f"Ample class {self.ample} has non-positive square")

    @property
    def ample_square(self) -> int:
        return gram_eval(self.pic, self.ample, self.ample)


@dataclass(frozen=True)
class Witness:
    """A class that could destabilize: effective-candidate of small degree."""

    cls: LatticeVector
    degree: int
    square: int
    composite: bool


@dataclass(frozen=True)
class DestabilizerReport:
    verdict: StabilityVerdict
    slope: sp.Rational
    max_degree: int
    witnesses: tuple[Witness, ...]


def degree(K: PolarizedK3, D: Sequence[int]) -> int:
    return gram_eval(K.pic, D, K.ample)


def slope(K: PolarizedK3, c1: Sequence[int], rk: int) -> sp.Rational:
    if rk < 1:
        raise InputError(f"Rank must be positive, got {rk}")
    return sp.Rational(degree(K, c1), rk)


def prime_square_filter(d_square: int) -> bool:
    """Necessary condition on the square of a prime divisor."""
    return d_square >= PRIME_SQUARE_BOUND


def _sqrt_upper(r: sp.Rational) -> sp.Rational:
    """Rational upper bound for sqrt(r), r >= 0."""
    p, q = int(r.p), int(r.q)
    return sp.Rational(math.isqrt(p * q) + 1, q)


def _affine_slice(K: PolarizedK3, d: int, min_square: int) -> list[LatticeVector]:
    """All D with D.ample = d and D^2 >= min_square.

    Solutions form D0 + span(kernel), with the kernel inside ample-perp where
    the form is negative definite, so the square bound cuts out an ellipsoid.
    """
    L = K.pic
    n = L.rank
    w = [sum(L.gram[i][j] * K.ample[j] for j in range(n)) for i in range(n)]
    # u * w = (g, 0, ..., 0) with g = gcd(w)
    h, u, _ = linalg.hermite_with_transform([[x] for x in w], 1)
    g = h[0][0]
    if d % g:
        return []
    d0 = tuple((d // g) * x for x in u[0])
    kernel = [tuple(row) for row in u[1:]]
    q0 = gram_eval(L, d0, d0)
    if not kernel:
        return [d0] if q0 >= min_square else []

    neg = sp.Matrix([[-gram_eval(L, a, b) for b in kernel] for a in kernel])
    b = sp.Matrix([gram_eval(L, d0, k) for k in kernel])
    neg_inv = neg.inv()
    center = neg_inv * b
    rho = q0 - min_square + (b.T * neg_inv * b)[0, 0]
    if rho < 0:
        return []
    ranges = []
    for i in range(len(kernel)):
        reach = _sqrt_upper(sp.Rational(rho * neg_inv[i, i]))
        lo = int(sp.floor(center[i] - reach))
        hi = int(sp.ceiling(center[i] + reach))
        ranges.append(range(lo, hi + 1))

    found = []
    for x in itertools.product(*ranges):
        D = tuple(
            d0[j] + sum(x[i] * kernel[i][j] for i in range(len(kernel)))
            for j in range(n)
        )
        if gram_eval(L, D, D) >= min_square:
            found.append(D)
    found.sort()
    return found


def enum_degree_slice(K: PolarizedK3, d: int, min_square: int) -> list[LatticeVector]:
    """Every class of degree d and square at least min_square (a finite set)."""
    if d < 1:
        raise InputError(f"Degree must be positive, got {d}")
    return _affine_slice(K, d, min_square)


def naive_degree_slice(
    K: PolarizedK3, d: int, min_square: int, radius: int
) -> list[LatticeVector]:
    """Box-scan oracle for enum_degree_slice; complete only for a large enough radius."""
    box = range(-radius, radius + 1)
    return [
        D
        for D in itertools.product(box, repeat=K.pic.rank)
        if degree(K, D) == d and gram_eval(K.pic, D, D) >= min_square
    ]


def destabilizer_search(
    K: PolarizedK3, c1: Sequence[int], rk: int = 2
) -> DestabilizerReport:
    """Enumerate candidate effective classes of degree at most the slope.

    Args:
        K: Polarized Picard lattice
        c1: First Chern class of the rank-2 bundle
        rk: Rank, must be 2

    Returns:
        Stable if no candidate exists, otherwise Inconclusive with witnesses.
    """
    if rk != 2:
        raise InputError("Destabilizer search is implemented for rank 2 only")
    mu = slope(K, c1, rk)
    if mu <= 0:
        raise HypothesisViolationError(f"Stability criterion needs slope > 0, got {mu}")
    max_degree = int(sp.floor(mu))
    n = K.pic.rank

    by_degree: dict[int, dict[LatticeVector, bool]] = {}
    for d in range(1, max_degree + 1):
        found = {D: False for D in enum_degree_slice(K, d, PRIME_SQUARE_BOUND)}
        for d1 in range(1, d // 2 + 1):
            for a in by_degree[d1]:
                for b in by_degree[d - d1]:
                    total = tuple(a[i] + b[i] for i in range(n))
                    found.setdefault(total, True)
        by_degree[d] = found

    witnesses = tuple(
        Witness(D, d, gram_eval(K.pic, D, D), composite)
        for d in sorted(by_degree)
        for D, composite in sorted(by_degree[d].items())
    )
    verdict = StabilityVerdict.INCONCLUSIVE if witnesses else StabilityVerdict.STABLE
    logger.debug(
        f"Destabilizer search c1={tuple(c1)} slope={mu}: {verdict} "
        f"({len(witnesses)} witnesses)"
    )
    return DestabilizerReport(verdict, mu, max_degree, witnesses)


def discriminant(rk: int, c1_square: int, c2: int) -> int:
    """Bogomolov discriminant 2*rk*c2 - (rk-1)*c1^2."""
    return 2 * rk * c2 - (rk - 1) * c1_square


def chamber_walls(
    K: PolarizedK3, rk: int, c1: Sequence[int], c2: int
) -> list[LatticeVector]:
    """Nonzero classes D orthogonal to the ample class with -Delta <= D^2 < 0."""
    delta = discriminant(rk, gram_eval(K.pic, c1, c1), c2)
    if delta <= 0:
        return []
    return [
        D
        for D in _affine_slice(K, 0, -delta)
        if any(D) and gram_eval(K.pic, D, D) < 0
    ]


def chamber_check(K: PolarizedK3, rk: int, c1: Sequence[int], c2: int) -> bool:
    """True iff the polarization lies in an open chamber for (rk, c1, c2)."""
    return not chamber_walls(K, rk, c1, c2)
