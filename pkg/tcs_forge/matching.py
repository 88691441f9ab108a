"""Glued lattice configurations (N+, N-) along a common sublattice N0.

The glued lattice is the pushout of N+ and N- over N0: generators of both
sides modulo the identification of the two images of N0. Cross pairings are
forced by orthogonality, <x+, x-> = <proj_N0 x+, proj_N0 x->.
"""

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum

import sympy as sp

from . import linalg
from .errors import ConfigurationError, InputError, UnsupportedRankError
from .k3 import PolarizedK3
from .lattice import (
    IntLattice,
    LatticeVector,
    Sublattice,
    enum_vectors_with_square,
    gram_eval,
    intersect,
    is_orthogonal_configuration,
    is_primitive,
    orth_complement,
    signature,
)
from .mukai import N0_SQUARE_CEILING, N0_SQUARE_DIVISOR, n0_chern_constraints

logger = logging.getLogger(__name__)

# Necessary conditions for a primitive embedding into the K3 lattice 3U + 2E8
K3_LATTICE_RANK = 22
K3_POSITIVE_INDEX = 3
K3_NEGATIVE_INDEX = 19


class Side(StrEnum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class N0Data:
    lattice: IntLattice
    embed_p: tuple[LatticeVector, ...]
    embed_m: tuple[LatticeVector, ...]


@dataclass(frozen=True)
class Configuration:
    Np: IntLattice
    Nm: IntLattice
    n0: N0Data
    ample_p: LatticeVector
    ample_m: LatticeVector
    amp_p: tuple[LatticeVector, ...]
    amp_m: tuple[LatticeVector, ...]
    glued: IntLattice
    plus_in_glued: tuple[LatticeVector, ...]
    minus_in_glued: tuple[LatticeVector, ...]
    cross: tuple[tuple[int, ...], ...]
    name: str | None = None

    def lattice(self, side: Side) -> IntLattice:
        return self.Np if side == Side.PLUS else self.Nm

    def ample(self, side: Side) -> LatticeVector:
        return self.ample_p if side == Side.PLUS else self.ample_m

    def amp_constraints(self, side: Side) -> tuple[LatticeVector, ...]:
        return self.amp_p if side == Side.PLUS else self.amp_m

    def polarized(self, side: Side) -> PolarizedK3:
        return PolarizedK3(self.lattice(side), self.ample(side))

    def n0_in(self, side: Side) -> Sublattice:
        """Image of N0 in N+ or N-, in that lattice's coordinates."""
        embed = self.n0.embed_p if side == Side.PLUS else self.n0.embed_m
        return Sublattice.of(self.lattice(side), embed)

    def n0_coordinates(self, side: Side, v: Sequence[int]) -> tuple[int, ...] | None:
        """Coordinates of v in the N0 basis, or None if v is not in the image of N0."""
        embed = self.n0.embed_p if side == Side.PLUS else self.n0.embed_m
        return linalg.solve_in_rows(embed, self.lattice(side).vector(v))

    def side_in_glued(self, side: Side) -> Sublattice:
        rows = self.plus_in_glued if side == Side.PLUS else self.minus_in_glued
        return Sublattice.of(self.glued, rows)

    def r_part(self, side: Side) -> Sublattice:
        """R = N_side orthogonal to the other side, in N_side coordinates."""
        L = self.lattice(side)
        if side == Side.PLUS:
            basis = linalg.left_kernel(self.cross, self.Nm.rank)
        else:
            basis = linalg.right_kernel(self.cross, self.Nm.rank)
        return Sublattice.of(L, basis)


def _check_embedding(
    label: str, side: IntLattice, n0: IntLattice, embed: tuple[LatticeVector, ...]
) -> None:
    if len(embed) != n0.rank:
        raise ConfigurationError(
            f"{label}: {len(embed)} embedding rows for a rank-{n0.rank} N0"
        )
    for row in embed:
        if len(row) != side.rank:
            raise ConfigurationError(f"{label}: embedding row {row} has the wrong length")
    image = tuple(tuple(gram_eval(side, u, v) for v in embed) for u in embed)
    if image != n0.gram:
        raise ConfigurationError(
            f"{label}: embedding is not isometric (image Gram {image}, N0 Gram {n0.gram})"
        )
    if n0.rank and linalg.rank(embed, side.rank) != n0.rank:
        raise ConfigurationError(f"{label}: embedding is not injective")
    if not is_primitive(Sublattice.of(side, embed)):
        raise ConfigurationError(f"{label}: image of N0 is not primitive")


def _cross_pairings(
    Np: IntLattice, Nm: IntLattice, n0: N0Data
) -> tuple[tuple[int, ...], ...]:
    if n0.lattice.rank == 0:
        return tuple((0,) * Nm.rank for _ in range(Np.rank))
    if linalg.determinant(n0.lattice.gram) == 0:
        raise ConfigurationError("N0 is degenerate; projections onto N0 are undefined")
    p_plus = sp.Matrix(linalg.mat_mul(n0.embed_p, Np.gram, Np.rank))
    p_minus = sp.Matrix(linalg.mat_mul(n0.embed_m, Nm.gram, Nm.rank))
    cross = p_plus.T * sp.Matrix(n0.lattice.gram).inv() * p_minus
    if any(not x.is_integer for x in cross):
        raise ConfigurationError(f"Forced cross pairings are not integral: {cross.tolist()}")
    return tuple(tuple(int(x) for x in row) for row in cross.tolist())


def build_configuration(
    Np: IntLattice,
    Nm: IntLattice,
    n0: N0Data,
    ample_p: Sequence[int],
    ample_m: Sequence[int],
    amp_p: Sequence[Sequence[int]] = (),
    amp_m: Sequence[Sequence[int]] = (),
    name: str | None = None,
) -> Configuration:
    """Assemble and validate the glued lattice.

    Raises:
        ConfigurationError: non-isometric or non-primitive embeddings, an odd or
            non-integral glued form, or a glued lattice in which N+ and N- do not
            meet exactly in N0
    """
    _check_embedding("N+", Np, n0.lattice, n0.embed_p)
    _check_embedding("N-", Nm, n0.lattice, n0.embed_m)
    cross = _cross_pairings(Np, Nm, n0)

    rp, rm, r0 = Np.rank, Nm.rank, n0.lattice.rank
    n = rp + rm
    big = tuple(
        tuple(Np.gram[i][j] for j in range(rp)) + cross[i] for i in range(rp)
    ) + tuple(
        tuple(cross[i][j] for i in range(rp)) + Nm.gram[j] for j in range(rm)
    )
    relations = tuple(
        tuple(a) + tuple(-x for x in b)
        for a, b in zip(n0.embed_p, n0.embed_m, strict=True)
    )
    try:
        basis, coords = linalg.complete_basis(relations, n)
    except ValueError as e:
        raise ConfigurationError(f"Gluing relations are not primitive: {e}") from e
    complement = basis[r0:]
    gram = linalg.mat_mul(
        linalg.mat_mul(complement, big, n), linalg.transpose(complement, n), n
    )
    glued = IntLattice(gram)
    if not glued.is_even:
        raise ConfigurationError(f"Glued form is odd: {gram}")
    plus_rows = tuple(tuple(coords[i][r0:]) for i in range(rp))
    minus_rows = tuple(tuple(coords[rp + j][r0:]) for j in range(rm))

    cfg = Configuration(
        Np=Np,
        Nm=Nm,
        n0=n0,
        ample_p=Np.vector(ample_p),
        ample_m=Nm.vector(ample_m),
        amp_p=tuple(Np.vector(c) for c in amp_p),
        amp_m=tuple(Nm.vector(c) for c in amp_m),
        glued=glued,
        plus_in_glued=plus_rows,
        minus_in_glued=minus_rows,
        cross=cross,
        name=name,
    )
    _verify_glued(cfg)
    logger.info(
        f"Built configuration {name or ''}: glued rank {glued.rank}, "
        f"signature {signature(glued)}"
    )
    return cfg


def _verify_glued(cfg: Configuration) -> None:
    for side, rows in ((Side.PLUS, cfg.plus_in_glued), (Side.MINUS, cfg.minus_in_glued)):
        restricted = tuple(
            tuple(gram_eval(cfg.glued, u, v) for v in rows) for u in rows
        )
        if restricted != cfg.lattice(side).gram:
            raise ConfigurationError(f"Glued Gram does not restrict to N{side} on its block")
    n_plus = cfg.side_in_glued(Side.PLUS)
    n_minus = cfg.side_in_glued(Side.MINUS)
    n0_image = Sublattice.of(
        cfg.glued,
        [
            linalg.vec_mat(row, cfg.plus_in_glued, cfg.glued.rank)
            for row in cfg.n0.embed_p
        ],
    )
    if intersect(n_plus, n_minus) != n0_image:
        raise ConfigurationError("N+ and N- do not meet exactly in N0 inside the glued lattice")
    if not is_orthogonal_configuration(n_plus, n_minus):
        raise ConfigurationError("Configuration is not orthogonal")


def orthogonal_parts(cfg: Configuration) -> tuple[Sublattice, Sublattice, Sublattice]:
    """(N0, R+, R-) as sublattices of the glued lattice."""
    n_plus = cfg.side_in_glued(Side.PLUS)
    n_minus = cfg.side_in_glued(Side.MINUS)
    return (
        intersect(n_plus, n_minus),
        intersect(n_plus, orth_complement(n_minus)),
        intersect(n_minus, orth_complement(n_plus)),
    )


@dataclass(frozen=True)
class PrescreenReport:
    square_target: int
    square_witnesses: tuple[LatticeVector, ...]
    n0_generator: LatticeVector | None
    n0_square: int | None
    n0_ok: bool

    @property
    def passed(self) -> bool:
        return bool(self.square_witnesses) and self.n0_ok


def _primitive_n0_witness(cfg: Configuration, bound: int) -> LatticeVector | None:
    L = cfg.n0.lattice
    box = range(-bound, bound + 1)
    for y in itertools.product(box, repeat=L.rank):
        if not any(y) or math.gcd(*y) != 1:
            continue
        sq = gram_eval(L, y, y)
        if sq <= N0_SQUARE_CEILING and sq % N0_SQUARE_DIVISOR == 0:
            return linalg.vec_mat(y, cfg.n0.embed_p, cfg.Np.rank)
    return None


def step1_prescreen(cfg: Configuration, k: int, bound: int) -> PrescreenReport:
    """Look for x in N+ with x^2 = 2k - 6 and check the generator(s) of N0."""
    if k < 1:
        raise InputError(f"k must be positive, got {k}")
    target = 2 * k - 6
    witnesses = tuple(enum_vectors_with_square(cfg.Np, target, bound))
    n0_rank = cfg.n0.lattice.rank
    if n0_rank == 1:
        report = n0_chern_constraints(cfg.n0_in(Side.PLUS))
        generator, square, n0_ok = report.generator, report.square, report.passed
    elif n0_rank > 1:
        generator = _primitive_n0_witness(cfg, bound)
        square = None if generator is None else gram_eval(cfg.Np, generator, generator)
        n0_ok = generator is not None
    else:
        generator, square, n0_ok = None, None, False
    logger.info(
        f"Step 1 prescreen (k={k}): {len(witnesses)} classes of square {target}, "
        f"N0 generator {generator} ok={n0_ok}"
    )
    return PrescreenReport(target, witnesses, generator, square, n0_ok)


def amp_ray_check(cfg: Configuration) -> bool:
    """True iff on each side a generator of R (up to sign) is strictly positive on the cone data."""
    for side in (Side.PLUS, Side.MINUS):
        r_part = cfg.r_part(side)
        if r_part.rank != 1:
            raise UnsupportedRankError(
                f"Ample ray check needs rank(R{side}) = 1, got {r_part.rank}"
            )
        L = cfg.lattice(side)
        g = r_part.gens[0]
        constraints = cfg.amp_constraints(side)
        ok = any(
            all(gram_eval(L, tuple(sign * x for x in g), c) > 0 for c in constraints)
            for sign in (1, -1)
        )
        if not ok:
            logger.info(f"R{side} generator {g} misses the ample cone")
            return False
    return True


def ample_orthogonal_to_n0(cfg: Configuration) -> dict[Side, bool]:
    return {
        side: all(
            gram_eval(cfg.lattice(side), cfg.ample(side), y)
            == 0
            for y in cfg.n0_in(side).gens
        )
        for side in (Side.PLUS, Side.MINUS)
    }


@dataclass(frozen=True)
class EmbeddingReport:
    rank: int
    signature: tuple[int, int, int]
    checks: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def lattice_embedding_checks(L: IntLattice) -> EmbeddingReport:
    """Necessary conditions for a primitive embedding into the K3 lattice."""
    p, n, z = signature(L)
    checks = {
        "even": L.is_even,
        "rank": L.rank <= K3_LATTICE_RANK,
        "positive_index": p + z <= K3_POSITIVE_INDEX,
        "negative_index": n + z <= K3_NEGATIVE_INDEX,
    }
    return EmbeddingReport(L.rank, (p, n, z), checks)


def embedding_necessary_checks(cfg: Configuration) -> EmbeddingReport:
    return lattice_embedding_checks(cfg.glued)
