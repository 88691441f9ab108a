"""Mukai vectors on a K3 Picard lattice: pairing, Chern data, dimensions, twists."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from .errors import InconsistencyError, InputError, UnsupportedRankError
from .lattice import IntLattice, LatticeVector, Sublattice, gram_eval

logger = logging.getLogger(__name__)

# N0 of rank 1 must be generated by y with y^2 <= -8 and 4 | y^2
N0_SQUARE_CEILING = -8
N0_SQUARE_DIVISOR = 4


@dataclass(frozen=True)
class MukaiVector:
    """(rank, first Chern class, chi - rank)."""

    r: int
    l: LatticeVector  # noqa: E741
    s: int

    def to_json(self) -> dict:
        return {"r": self.r, "l": list(self.l), "s": self.s}

    @classmethod
    def from_json(cls, data: dict) -> "MukaiVector":
        return cls(int(data["r"]), tuple(int(x) for x in data["l"]), int(data["s"]))


@dataclass(frozen=True)
class N0ConstraintReport:
    generator: LatticeVector
    square: int
    square_bound_ok: bool
    divisibility_ok: bool

    @property
    def passed(self) -> bool:
        return self.square_bound_ok and self.divisibility_ok


def _check(pic: IntLattice, v: MukaiVector) -> None:
    if len(v.l) != pic.rank:
        raise InputError(
            f"Mukai vector lattice part has length {len(v.l)}, Picard rank is {pic.rank}"
        )


def mukai_pairing(pic: IntLattice, v: MukaiVector, w: MukaiVector) -> int:
    """l.l' - r*s' - r'*s."""
    _check(pic, v)
    _check(pic, w)
    return gram_eval(pic, v.l, w.l) - v.r * w.s - w.r * v.s


def euler_characteristic(rk: int, c1_square: int, c2: int) -> int:
    """chi(E) = c1^2/2 + 2*rk - c2 for a sheaf on a K3 surface."""
    if c1_square % 2:
        raise InputError(f"c1^2 = {c1_square} is odd; Picard lattice must be even")
    return c1_square // 2 + 2 * rk - c2


def mukai_from_chern(pic: IntLattice, rk: int, c1: Sequence[int], c2: int) -> MukaiVector:
    c1 = pic.vector(c1)
    chi = euler_characteristic(rk, gram_eval(pic, c1, c1), c2)
    return MukaiVector(rk, c1, chi - rk)


def c2_from_mukai(pic: IntLattice, v: MukaiVector) -> int:
    """Read back c2 = c1^2/2 + 2*rk - (s + rk)."""
    _check(pic, v)
    return gram_eval(pic, v.l, v.l) // 2 + 2 * v.r - (v.s + v.r)


def expanded_dim(rk: int, c1_square: int, c2: int) -> int:
    """(1 - rk)*c1^2 + 2*rk*c2 - 2*rk^2 + 2."""
    return (1 - rk) * c1_square + 2 * rk * c2 - 2 * rk * rk + 2


def moduli_dim(
    pic: IntLattice, v: MukaiVector, chern: tuple[int, Sequence[int], int] | None = None
) -> int:
    """Expected dimension v^2 + 2 of the moduli space of stable sheaves.

    Args:
        pic: Picard lattice
        v: Mukai vector
        chern: Optional (rk, c1, c2); when given the expanded Chern-class
            formula is evaluated too and must agree

    Returns:
        v^2 + 2
    """
    dim = mukai_pairing(pic, v, v) + 2
    if chern is not None:
        rk, c1, c2 = chern
        other = expanded_dim(rk, gram_eval(pic, c1, c1), c2)
        if other != dim:
            raise InconsistencyError(
                f"Dimension formulas disagree for {v}: v^2+2={dim}, Chern form={other}"
            )
    return dim


def rank2_dim_via_chi(c1_square: int, chi: int) -> int:
    """10 - 4*chi + c1^2, the rank-2 dimension in terms of the Euler characteristic."""
    return 10 - 4 * chi + c1_square


def twist(pic: IntLattice, v: MukaiVector, m: Sequence[int]) -> MukaiVector:
    """Mukai vector of E tensored with the line bundle of class m."""
    _check(pic, v)
    m = pic.vector(m)
    m_square = gram_eval(pic, m, m)
    if (v.r * m_square) % 2:
        raise InputError("Twist needs r*m^2 even")
    return MukaiVector(
        v.r,
        tuple(li + v.r * mi for li, mi in zip(v.l, m, strict=True)),
        v.s + gram_eval(pic, v.l, m) + v.r * m_square // 2,
    )


def n0_chern_constraints(n0: Sublattice) -> N0ConstraintReport:
    """Check the rank-1 lattice N0 against the square and divisibility constraints."""
    if n0.rank != 1:
        raise UnsupportedRankError(
            f"N0 constraints are stated for rank 1, got rank {n0.rank}"
        )
    y = n0.gens[0]
    square = gram_eval(n0.ambient, y, y)
    return N0ConstraintReport(
        generator=y,
        square=square,
        square_bound_ok=square <= N0_SQUARE_CEILING,
        divisibility_ok=square % N0_SQUARE_DIVISOR == 0,
    )
