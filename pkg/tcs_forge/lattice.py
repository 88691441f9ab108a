"""Finite-rank integer lattices with symmetric bilinear forms.

Sublattices are stored by a canonical row Hermite basis, so two sublattices
compare equal exactly when they span the same Z-module.
"""

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import sympy as sp

from . import linalg
from .errors import InputError, LatticeError

logger = logging.getLogger(__name__)

LatticeVector = tuple[int, ...]

# Coordinate boxes larger than this are refused by enum_vectors_with_square;
# completeness-critical enumeration lives in k3.enum_degree_slice.
MAX_BOX_BOUND = 10


@dataclass(frozen=True)
class IntLattice:
    """Integer lattice given by its Gram matrix."""

    gram: tuple[tuple[int, ...], ...]
    basis_names: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        gram = linalg.as_matrix(self.gram)
        object.__setattr__(self, "gram", gram)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise LatticeError(f"Gram matrix is not square: {gram}")
        for i in range(n):
            for j in range(i + 1, n):
                if gram[i][j] != gram[j][i]:
                    raise LatticeError(f"Gram matrix is not symmetric at ({i}, {j})")
        if self.basis_names is not None:
            names = tuple(self.basis_names)
            object.__setattr__(self, "basis_names", names)
            if len(names) != n:
                raise LatticeError(
                    f"{len(names)} basis names given for a rank-{n} lattice"
                )

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @cached_property
    def signature(self) -> tuple[int, int, int]:
        return signature(self)

    def vector(self, coords: Sequence[int]) -> LatticeVector:
        """Validate coordinates against the rank."""
        v = tuple(int(x) for x in coords)
        if len(v) != self.rank:
            raise InputError(
                f"Vector {v} has length {len(v)}, lattice has rank {self.rank}"
            )
        return v

    def pair(self, u: Sequence[int], v: Sequence[int]) -> int:
        return gram_eval(self, u, v)

    def square(self, v: Sequence[int]) -> int:
        return gram_eval(self, v, v)

    def format_vector(self, v: Sequence[int]) -> str:
        """Render v as a combination of named basis classes, e.g. '2A-B'."""
        names = self.basis_names or tuple(f"e{i}" for i in range(self.rank))
        return format_combination(v, names)


def format_combination(coeffs: Sequence[int], names: Sequence[str]) -> str:
    parts: list[str] = []
    for c, name in zip(coeffs, names, strict=True):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else str(abs(c))
        parts.append(f"{sign}{mag}{name}")
    if not parts:
        return "0"
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text


@dataclass(frozen=True)
class Sublattice:
    """Sublattice of an ambient lattice, stored in row Hermite form."""

    ambient: IntLattice
    gens: tuple[LatticeVector, ...]

    @classmethod
    def of(cls, ambient: IntLattice, gens: Sequence[Sequence[int]]) -> "Sublattice":
        rows = [ambient.vector(g) for g in gens]
        return cls(ambient, linalg.row_basis(rows, ambient.rank))

    @classmethod
    def full(cls, ambient: IntLattice) -> "Sublattice":
        return cls(ambient, linalg.identity(ambient.rank))

    @property
    def rank(self) -> int:
        return len(self.gens)

    @property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        """Gram matrix of the stored basis."""
        return tuple(
            tuple(gram_eval(self.ambient, u, v) for v in self.gens) for u in self.gens
        )

    def as_lattice(self) -> IntLattice:
        return IntLattice(self.gram)

    def contains(self, v: Sequence[int]) -> bool:
        return linalg.solve_in_rows(self.gens, self.ambient.vector(v)) is not None

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...] | None:
        """Coefficients of v in the stored basis, or None if v is not in the sublattice."""
        return linalg.solve_in_rows(self.gens, self.ambient.vector(v))


def gram_eval(L: IntLattice, u: Sequence[int], v: Sequence[int]) -> int:
    """Return u^T * gram * v."""
    u = L.vector(u)
    v = L.vector(v)
    return sum(
        u[i] * L.gram[i][j] * v[j]
        for i in range(L.rank)
        if u[i]
        for j in range(L.rank)
        if v[j]
    )


def signature(L: IntLattice) -> tuple[int, int, int]:
    """Inertia (p, n, z) by exact rational congruence diagonalization."""
    a = [[sp.Rational(x) for x in row] for row in L.gram]
    p = n = z = 0
    while a:
        size = len(a)
        pivot = next((i for i in range(size) if a[i][i] != 0), None)
        if pivot is None:
            pair = next(
                ((i, j) for i in range(size) for j in range(size) if a[i][j] != 0),
                None,
            )
            if pair is None:
                z += size
                break
            i, j = pair
            # row_i += row_j and col_i += col_j makes a[i][i] = 2*a[i][j] != 0
            for k in range(size):
                a[i][k] += a[j][k]
            for k in range(size):
                a[k][i] += a[k][j]
            continue
        d = a[pivot][pivot]
        if d > 0:
            p += 1
        else:
            n += 1
        rest = [k for k in range(size) if k != pivot]
        a = [[a[r][c] - a[r][pivot] * a[pivot][c] / d for c in rest] for r in rest]
    return p, n, z


def saturate(S: Sublattice) -> Sublattice:
    """Primitive closure of S in its ambient lattice."""
    return Sublattice(S.ambient, linalg.saturation(S.gens, S.ambient.rank))


def is_primitive(S: Sublattice) -> bool:
    return saturate(S).gens == S.gens


def intersect(S1: Sublattice, S2: Sublattice) -> Sublattice:
    """Exact intersection of two sublattices of the same ambient."""
    if S1.ambient != S2.ambient:
        raise InputError("Cannot intersect sublattices of different ambient lattices")
    n = S1.ambient.rank
    if not S1.gens or not S2.gens:
        return Sublattice(S1.ambient, ())
    # (a, b) with a*B1 + b*B2 = 0 gives the common vector a*B1
    relations = linalg.left_kernel(S1.gens + S2.gens, n)
    common = [
        linalg.vec_mat(rel[: S1.rank], S1.gens, n) for rel in relations
    ]
    return Sublattice.of(S1.ambient, common)


def orth_complement(S: Sublattice) -> Sublattice:
    """All ambient vectors orthogonal to S; saturated by construction."""
    L = S.ambient
    functionals = linalg.mat_mul(S.gens, L.gram, L.rank) if S.gens else ()
    return Sublattice(L, linalg.row_basis(linalg.right_kernel(functionals, L.rank), L.rank))


def is_orthogonal_configuration(Np: Sublattice, Nm: Sublattice) -> bool:
    """True iff each of Np, Nm is rationally spanned by N0 and its R part."""
    n0 = intersect(Np, Nm)
    r_plus = intersect(Np, orth_complement(Nm))
    r_minus = intersect(Nm, orth_complement(Np))
    logger.debug(
        f"Configuration ranks: N0={n0.rank}, R+={r_plus.rank}, R-={r_minus.rank}"
    )
    return Np.rank == n0.rank + r_plus.rank and Nm.rank == n0.rank + r_minus.rank


def enum_vectors_with_square(L: IntLattice, m: int, bound: int) -> list[LatticeVector]:
    """All v with v^2 = m and max|coords| <= bound, lexicographically ordered."""
    if bound < 0:
        raise InputError(f"Box bound must be non-negative, got {bound}")
    if bound > MAX_BOX_BOUND:
        raise InputError(f"Box bound {bound} exceeds the limit {MAX_BOX_BOUND}")
    box = range(-bound, bound + 1)
    return [
        v for v in itertools.product(box, repeat=L.rank) if gram_eval(L, v, v) == m
    ]


def vector_divisibility(L: IntLattice, v: Sequence[int]) -> int:
    """Largest d with v/d integral."""
    v = L.vector(v)
    if not any(v):
        raise InputError("Divisibility of the zero vector is undefined")
    return math.gcd(*v)
