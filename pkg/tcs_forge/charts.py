"""Numeric intersection rings of Fano threefolds and building blocks.

A chart records triple intersection numbers, c2 pairings and the anticanonical
class in a named divisor basis, a basis of curve classes with its pairing
against divisors, and the restriction map to the anticanonical K3 surface.
Riemann-Roch and the blow-up and double-cover formulas are evaluated exactly;
oracle identities (Noether, genus of the centre, restriction sequence) guard
every constructed chart.
"""

import logging
import random
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from functools import cached_property
from itertools import permutations

from . import linalg
from .errors import ChartError, InconclusiveError, InputError
from .lattice import IntLattice, LatticeVector, format_combination, gram_eval
from .models import Attestation

logger = logging.getLogger(__name__)

# chi(O) of a Fano threefold and of a building block
CHI_STRUCTURE_SHEAF = 1
NOETHER_TARGET = 24 * CHI_STRUCTURE_SHEAF
# Hartshorne-Serre curves are rational; the normal bundle degree is c1(T).W - 2
HS_CURVE_GENUS = 0

Tensor = tuple[tuple[tuple[int, ...], ...], ...]


def dense_triple(rank: int, entries: Sequence[Sequence[int]]) -> Tensor:
    """Fill a symmetric rank^3 tensor from sparse [i, j, k, value] entries."""
    t = [[[0] * rank for _ in range(rank)] for _ in range(rank)]
    seen: dict[tuple[int, int, int], int] = {}
    for entry in entries:
        if len(entry) != 4:
            raise ChartError(f"Triple entry {entry} must be [i, j, k, value]")
        i, j, k, value = (int(x) for x in entry)
        if not all(0 <= x < rank for x in (i, j, k)):
            raise ChartError(f"Triple entry {entry} out of range for rank {rank}")
        key = tuple(sorted((i, j, k)))
        if key in seen and seen[key] != value:
            raise ChartError(f"Conflicting triple values for indices {key}")
        seen[key] = value
        for a, b, c in set(permutations((i, j, k))):
            t[a][b][c] = value
    return tuple(tuple(tuple(row) for row in plane) for plane in t)


def sparse_triple(t: Tensor) -> list[list[int]]:
    """Inverse of dense_triple: nonzero entries with i <= j <= k."""
    r = len(t)
    return [
        [i, j, k, t[i][j][k]]
        for i in range(r)
        for j in range(i, r)
        for k in range(j, r)
        if t[i][j][k]
    ]


@dataclass(frozen=True)
class CurveBasis:
    """Named curve classes; pair[divisor][curve] is the intersection number."""

    names: tuple[str, ...]
    pair: tuple[tuple[int, ...], ...]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ChartError(
                f"Unknown curve class {name!r}; known: {list(self.names)}"
            ) from None


@dataclass(frozen=True)
class Restriction:
    """Restriction of divisors to the anticanonical K3 surface, landing in N."""

    lattice: IntLattice
    matrix: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class BlowupCentre:
    """Smooth curve C in a Fano threefold: degrees D.C per basis divisor and genus."""

    degrees: tuple[int, ...]
    genus: int


@dataclass(frozen=True)
class InvariantResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class IntersectionChart:
    name: str
    div_basis: tuple[str, ...]
    triple: Tensor
    c2_pair: tuple[int, ...]
    minus_K: LatticeVector
    curves: CurveBasis
    restriction: Restriction

    def __post_init__(self):
        r = len(self.div_basis)
        if len(set(self.div_basis)) != r:
            raise ChartError(f"Duplicate divisor names in {self.div_basis}")
        if len(self.triple) != r or any(
            len(plane) != r or any(len(row) != r for row in plane)
            for plane in self.triple
        ):
            raise ChartError(f"Triple tensor of chart {self.name} is not {r}x{r}x{r}")
        for i in range(r):
            for j in range(r):
                for k in range(r):
                    if self.triple[i][j][k] != self.triple[j][i][k] or (
                        self.triple[i][j][k] != self.triple[i][k][j]
                    ):
                        raise ChartError(f"Triple tensor of chart {self.name} is not symmetric")
        for label, vec in (("c2_pair", self.c2_pair), ("minus_K", self.minus_K)):
            if len(vec) != r:
                raise ChartError(f"{label} of chart {self.name} has length {len(vec)}, expected {r}")
        if len(self.curves.pair) != r or any(
            len(row) != len(self.curves.names) for row in self.curves.pair
        ):
            raise ChartError(f"Curve pairing of chart {self.name} has the wrong shape")
        if len(self.restriction.matrix) != r or any(
            len(row) != self.restriction.lattice.rank for row in self.restriction.matrix
        ):
            raise ChartError(f"Restriction matrix of chart {self.name} has the wrong shape")

    @property
    def rank(self) -> int:
        return len(self.div_basis)

    @property
    def anticanonical(self) -> LatticeVector:
        return self.minus_K

    @cached_property
    def _nonzero(self) -> list[tuple[int, int, int, int]]:
        r = self.rank
        return [
            (i, j, k, self.triple[i][j][k])
            for i in range(r)
            for j in range(r)
            for k in range(r)
            if self.triple[i][j][k]
        ]

    def vector(self, coords: Sequence[int]) -> LatticeVector:
        v = tuple(int(x) for x in coords)
        if len(v) != self.rank:
            raise InputError(
                f"Divisor {v} has length {len(v)}, chart {self.name} has rank {self.rank}"
            )
        return v

    def unit(self, name: str) -> LatticeVector:
        try:
            i = self.div_basis.index(name)
        except ValueError:
            raise ChartError(f"Unknown divisor {name!r} in chart {self.name}") from None
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def format_divisor(self, D: Sequence[int]) -> str:
        return format_combination(D, self.div_basis)


@dataclass(frozen=True)
class FanoChart(IntersectionChart):
    """Intersection ring of a Fano threefold (chi(O) = 1)."""


@dataclass(frozen=True)
class BlockChart(IntersectionChart):
    """Intersection ring of a building block Z; minus_K is the fibre class S."""

    exceptional: int
    centre_genus: int

    @property
    def S_class(self) -> LatticeVector:
        return self.minus_K

    @property
    def exceptional_name(self) -> str:
        return self.div_basis[self.exceptional]

    def permuted(self, order: Sequence[int]) -> "BlockChart":
        """Chart with divisor i of the result equal to divisor order[i] here."""
        order = list(order)
        if sorted(order) != list(range(self.rank)):
            raise InputError(f"{order} is not a permutation of range({self.rank})")
        t = self.triple
        return replace(
            self,
            div_basis=tuple(self.div_basis[i] for i in order),
            triple=tuple(
                tuple(tuple(t[a][b][c] for c in order) for b in order) for a in order
            ),
            c2_pair=tuple(self.c2_pair[i] for i in order),
            minus_K=tuple(self.minus_K[i] for i in order),
            curves=CurveBasis(
                self.curves.names, tuple(self.curves.pair[i] for i in order)
            ),
            restriction=Restriction(
                self.restriction.lattice,
                tuple(self.restriction.matrix[i] for i in order),
            ),
            exceptional=order.index(self.exceptional),
        )

    def canonical(self) -> "BlockChart":
        """Divisor basis sorted by name."""
        return self.permuted(sorted(range(self.rank), key=lambda i: self.div_basis[i]))


def triple(C: IntersectionChart, D1: Sequence[int], D2: Sequence[int], D3: Sequence[int]) -> int:
    """Trilinear symmetric contraction D1.D2.D3."""
    a, b, c = C.vector(D1), C.vector(D2), C.vector(D3)
    return sum(v * a[i] * b[j] * c[k] for i, j, k, v in C._nonzero)


def c2_dot(C: IntersectionChart, D: Sequence[int]) -> int:
    D = C.vector(D)
    return sum(x * y for x, y in zip(C.c2_pair, D, strict=True))


def curve_degree(C: IntersectionChart, D: Sequence[int], curve: str) -> int:
    D = C.vector(D)
    j = C.curves.index(curve)
    return sum(D[i] * C.curves.pair[i][j] for i in range(C.rank))


def noether_number(C: IntersectionChart) -> int:
    """c1.c2, which must equal 24*chi(O)."""
    return c2_dot(C, C.minus_K)


def restrict_to_S(C: IntersectionChart, D: Sequence[int]) -> LatticeVector:
    D = C.vector(D)
    m = C.restriction.matrix
    return linalg.vec_mat(D, m, C.restriction.lattice.rank)


def rr_chi(C: IntersectionChart, L: Sequence[int]) -> int:
    """chi(O(L)) = L^3/6 + L^2.c1/4 + L.(c1^2 + c2)/12 + chi(O)."""
    L = C.vector(L)
    if noether_number(C) != NOETHER_TARGET:
        raise ChartError(
            f"Chart {C.name} fails Noether (c1.c2 = {noether_number(C)}); "
            "Riemann-Roch is not available"
        )
    c1 = C.minus_K
    twelve_chi = (
        2 * triple(C, L, L, L)
        + 3 * triple(C, L, L, c1)
        + triple(C, L, c1, c1)
        + c2_dot(C, L)
        + 12 * CHI_STRUCTURE_SHEAF
    )
    if twelve_chi % 12:
        raise ChartError(
            f"Non-integral Euler characteristic {twelve_chi}/12 for {C.format_divisor(L)} "
            f"on chart {C.name}"
        )
    return twelve_chi // 12


def anticanonical_base_curve(Y: FanoChart) -> BlowupCentre:
    """Base curve of a generic anticanonical pencil: class (-K)^2, 2g - 2 = (-K)^3."""
    k = Y.minus_K
    cube = triple(Y, k, k, k)
    if cube % 2:
        raise ChartError(f"(-K)^3 = {cube} is odd on chart {Y.name}")
    degrees = tuple(triple(Y, Y.unit(name), k, k) for name in Y.div_basis)
    return BlowupCentre(degrees, cube // 2 + 1)


def _anticanonical_restriction(triples: Tensor, minus_K: Sequence[int], names) -> Restriction:
    r = len(minus_K)
    gram = tuple(
        tuple(
            sum(triples[i][j][k] * minus_K[k] for k in range(r)) for j in range(r)
        )
        for i in range(r)
    )
    return Restriction(IntLattice(gram, tuple(names)), linalg.identity(r))


def fano_chart(
    name: str,
    div_basis: Sequence[str],
    triple_entries: Sequence[Sequence[int]],
    c2_pair: Sequence[int],
    minus_K: Sequence[int],
    curves: CurveBasis,
    restriction: Restriction | None = None,
) -> FanoChart:
    """Build a Fano chart; the restriction to S defaults to N = Pic(Y) with D.D'.(-K)."""
    r = len(div_basis)
    t = dense_triple(r, triple_entries)
    if restriction is None:
        restriction = _anticanonical_restriction(t, minus_K, div_basis)
    return FanoChart(
        name=name,
        div_basis=tuple(div_basis),
        triple=t,
        c2_pair=tuple(c2_pair),
        minus_K=tuple(minus_K),
        curves=curves,
        restriction=restriction,
    )


def blowup_chart(
    Y: FanoChart,
    centre: BlowupCentre,
    name: str | None = None,
    exceptional_name: str = "E",
    fibre_name: str = "l",
) -> BlockChart:
    """Chart of the blow-up of Y along a smooth curve.

    The exceptional divisor E is appended to the basis and the exceptional
    fibre is prepended to the curve basis.
    """
    r = Y.rank
    degrees = tuple(int(x) for x in centre.degrees)
    if len(degrees) != r:
        raise ChartError(f"Curve degrees {degrees} do not match the rank {r} of {Y.name}")
    if centre.genus < 0:
        raise ChartError(f"Genus must be non-negative, got {centre.genus}")
    if exceptional_name in Y.div_basis:
        raise ChartError(f"Divisor name {exceptional_name!r} already used in {Y.name}")
    if fibre_name in Y.curves.names:
        raise ChartError(f"Curve name {fibre_name!r} already used in {Y.name}")

    minus_k_dot_c = sum(k * d for k, d in zip(Y.minus_K, degrees, strict=True))
    e = r
    t = [[[0] * (r + 1) for _ in range(r + 1)] for _ in range(r + 1)]
    for i in range(r):
        for j in range(r):
            for k in range(r):
                t[i][j][k] = Y.triple[i][j][k]
    for i in range(r):
        for a, b, c in set(permutations((i, e, e))):
            t[a][b][c] = -degrees[i]
    t[e][e][e] = -minus_k_dot_c + 2 - 2 * centre.genus

    c2_pair = tuple(Y.c2_pair[i] + degrees[i] for i in range(r)) + (minus_k_dot_c,)
    s_class = tuple(Y.minus_K) + (-1,)
    curves = CurveBasis(
        (fibre_name,) + Y.curves.names,
        tuple((0,) + Y.curves.pair[i] for i in range(r))
        + ((-1,) + (0,) * len(Y.curves.names),),
    )
    # E meets S in the centre, whose class on S is (-K_Y)|_S
    restriction = Restriction(
        Y.restriction.lattice,
        Y.restriction.matrix + (restrict_to_S(Y, Y.minus_K),),
    )
    chart = BlockChart(
        name=name or f"Bl({Y.name})",
        div_basis=Y.div_basis + (exceptional_name,),
        triple=tuple(tuple(tuple(row) for row in plane) for plane in t),
        c2_pair=c2_pair,
        minus_K=s_class,
        curves=curves,
        restriction=restriction,
        exceptional=e,
        centre_genus=centre.genus,
    )
    logger.info(
        f"Built block chart {chart.name}: -K.C={minus_k_dot_c}, g={centre.genus}, "
        f"E^3={t[e][e][e]}"
    )
    return chart


def double_cover_chart(
    Y0: FanoChart, half_branch: Sequence[int], name: str | None = None
) -> FanoChart:
    """Chart of the double cover of Y0 branched over a divisor of class 2*half_branch.

    c2 is solved from chi(pi^*M) = chi(M) + chi(M - half_branch) on basis bundles.
    Curve classes are halves of pulled-back base curves, so their pairings with
    pulled-back divisors equal the base pairings.
    """
    hb = Y0.vector(half_branch)
    r = Y0.rank
    t = tuple(
        tuple(tuple(2 * x for x in row) for row in plane) for plane in Y0.triple
    )
    minus_k = tuple(k - h for k, h in zip(Y0.minus_K, hb, strict=True))
    zero = (0,) * r

    def pushforward_chi(M: Sequence[int]) -> int:
        shifted = tuple(m - h for m, h in zip(M, hb, strict=True))
        return rr_chi(Y0, M) + rr_chi(Y0, shifted)

    if pushforward_chi(zero) != CHI_STRUCTURE_SHEAF:
        raise ChartError(
            f"Double cover of {Y0.name} has chi(O) = {pushforward_chi(zero)}, expected 1"
        )

    provisional = FanoChart(
        name=name or f"DoubleCover({Y0.name})",
        div_basis=Y0.div_basis,
        triple=t,
        c2_pair=zero,
        minus_K=minus_k,
        curves=Y0.curves,
        restriction=_anticanonical_restriction(t, minus_k, Y0.div_basis),
    )
    c2 = []
    for label in Y0.div_basis:
        M = Y0.unit(label)
        # 12*chi(M) = 2M^3 + 3M^2.c1 + M.c1^2 + c2.M + 12
        known = (
            2 * triple(provisional, M, M, M)
            + 3 * triple(provisional, M, M, minus_k)
            + triple(provisional, M, minus_k, minus_k)
            + 12 * CHI_STRUCTURE_SHEAF
        )
        c2.append(12 * pushforward_chi(M) - known)
    chart = replace(provisional, c2_pair=tuple(c2))
    if noether_number(chart) != NOETHER_TARGET:
        raise ChartError(
            f"Solved c2 pairings {tuple(c2)} violate Noether on the double cover of {Y0.name}"
        )
    logger.info(f"Built double cover chart {chart.name}: -K={minus_k}, c2={tuple(c2)}")
    return chart


def chi_Lstar_constraint(C: BlockChart, c1L: Sequence[int]) -> tuple[int, bool]:
    """Euler characteristic of the dual line bundle; admissible when it is <= 0."""
    chi = rr_chi(C, tuple(-x for x in C.vector(c1L)))
    return chi, chi <= 0


def hs_compat(C: BlockChart, c1L: Sequence[int], curve: str) -> bool:
    """Numeric form of det N_W = L|_W on a rational curve: (S - c1(L)).W = 2."""
    diff = tuple(s - x for s, x in zip(C.S_class, C.vector(c1L), strict=True))
    return curve_degree(C, diff, curve) == 2


def conormal_h0(split: tuple[int, int]) -> int | None:
    """h0 of an extension 0 -> O(a) -> V -> O(b) -> 0 on P^1, or None if undetermined."""
    a, b = split
    if a < -1:
        return None
    return max(0, a + 1) + max(0, b + 1)


@dataclass(frozen=True)
class HSNumericDatum:
    """A Hartshorne-Serre datum: c1(L), a rational curve class, attested cohomology."""

    c1L: LatticeVector
    curve: str
    multiplicity: int = 1
    attestation: Attestation | None = None
    genus: int = HS_CURVE_GENUS

    def __post_init__(self):
        if self.genus != HS_CURVE_GENUS:
            raise InputError("Only rational curves are supported")
        if self.multiplicity < 1:
            raise InputError(f"Multiplicity must be positive, got {self.multiplicity}")


def expected_conormal_degree(C: BlockChart, c1L: Sequence[int], curve: str) -> int:
    """deg(N*_W tensor L|_W) = -(S.W - 2) + 2*c1(L).W for one rational component."""
    return -(curve_degree(C, C.S_class, curve) - 2) + 2 * curve_degree(C, c1L, curve)


def conormal_degree_check(C: BlockChart, datum: HSNumericDatum) -> bool:
    if datum.attestation is None:
        raise InconclusiveError("No attested conormal splitting")
    a, b = datum.attestation.conormal_split
    return a + b == expected_conormal_degree(C, datum.c1L, datum.curve)


def inelasticity_check(dim_moduli: int, datum: HSNumericDatum) -> bool:
    """dim/2 = h0(N*_W tensor L|_W) - h0(E) + 1, under H1(L*) = H1(E) = 0."""
    att = datum.attestation
    if att is None:
        raise InconclusiveError("No attested cohomology for the inelasticity identity")
    if not (att.h1_Lstar_zero and att.h1_E_zero):
        raise InconclusiveError("Inelasticity needs H1(L*) = 0 and H1(E) = 0")
    h0 = conormal_h0(att.conormal_split)
    if h0 is None:
        raise InconclusiveError(
            f"h0 of the conormal bundle is extension-dependent for split {att.conormal_split}"
        )
    if dim_moduli % 2:
        return False
    return dim_moduli // 2 == h0 - att.h0_E + 1


def search_basis(C: BlockChart) -> tuple[tuple[str, ...], tuple[LatticeVector, ...]]:
    """Basis (S, pulled-back divisors) of Pic(Z) used to scan c1(L)."""
    vectors = (C.S_class,) + tuple(
        C.unit(name) for i, name in enumerate(C.div_basis) if i != C.exceptional
    )
    if abs(linalg.determinant(vectors)) != 1:
        raise ChartError(
            f"S and the pulled-back divisors do not form a basis of Pic({C.name})"
        )
    names = ("S",) + tuple(n for i, n in enumerate(C.div_basis) if i != C.exceptional)
    return names, vectors


def from_search_coordinates(C: BlockChart, coeffs: Sequence[int]) -> LatticeVector:
    _, vectors = search_basis(C)
    return linalg.vec_mat(coeffs, vectors, C.rank)


def to_search_coordinates(C: BlockChart, D: Sequence[int]) -> LatticeVector:
    _, vectors = search_basis(C)
    coeffs = linalg.solve_in_rows(vectors, C.vector(D))
    if coeffs is None:
        raise ChartError(f"{D} is not an integral class of {C.name}")
    return coeffs


def format_search_class(C: BlockChart, D: Sequence[int]) -> str:
    """Render a divisor in the (S, pulled-back divisors) basis, e.g. '-S-G+H'."""
    names, _ = search_basis(C)
    return format_combination(to_search_coordinates(C, D), names)


# Oracles


def random_classes(rank: int, count: int, seed: int, radius: int = 3) -> list[LatticeVector]:
    rng = random.Random(seed)
    return [
        tuple(rng.randint(-radius, radius) for _ in range(rank)) for _ in range(count)
    ]


def check_noether(C: IntersectionChart) -> InvariantResult:
    value = noether_number(C)
    return InvariantResult("noether", value == NOETHER_TARGET, {"c1.c2": value})


def check_restriction_compatibility(C: IntersectionChart) -> InvariantResult:
    """D.D'.S equals the N-pairing of the restrictions for all basis pairs."""
    failures = []
    N = C.restriction.lattice
    for i, a in enumerate(C.div_basis):
        for b in C.div_basis[i:]:
            u, v = C.unit(a), C.unit(b)
            lhs = triple(C, u, v, C.minus_K)
            rhs = gram_eval(N, restrict_to_S(C, u), restrict_to_S(C, v))
            if lhs != rhs:
                failures.append({"pair": [a, b], "triple": lhs, "restricted": rhs})
    return InvariantResult("restriction_compatibility", not failures, {"failures": failures})


def check_restriction_identity(
    C: IntersectionChart, classes: Sequence[Sequence[int]]
) -> InvariantResult:
    """chi(L) - chi(L - S) = (L|_S)^2/2 + 2 on the sampled classes."""
    failures = []
    N = C.restriction.lattice
    for L in classes:
        L = C.vector(L)
        shifted = tuple(x - s for x, s in zip(L, C.minus_K, strict=True))
        lhs = rr_chi(C, L) - rr_chi(C, shifted)
        restricted = restrict_to_S(C, L)
        rhs2 = gram_eval(N, restricted, restricted) + 4
        if 2 * lhs != rhs2:
            failures.append({"class": list(L), "difference": lhs, "expected_twice": rhs2})
    return InvariantResult(
        "restriction_identity", not failures, {"samples": len(classes), "failures": failures}
    )


def check_rr_integrality(
    C: IntersectionChart, classes: Sequence[Sequence[int]]
) -> InvariantResult:
    failures = []
    for L in classes:
        try:
            rr_chi(C, L)
        except ChartError as e:
            failures.append({"class": list(L), "error": str(e)})
    return InvariantResult(
        "rr_integrality", not failures, {"samples": len(classes), "failures": failures}
    )


def check_genus_oracle(C: BlockChart) -> InvariantResult:
    """chi(O(-E)) = 1 - chi(O_C) = g."""
    minus_e = tuple(-1 if i == C.exceptional else 0 for i in range(C.rank))
    chi = rr_chi(C, minus_e)
    return InvariantResult(
        "genus_oracle", chi == C.centre_genus, {"chi(-E)": chi, "genus": C.centre_genus}
    )


def check_double_cover_oracle(
    Y0: FanoChart,
    half_branch: Sequence[int],
    cover: FanoChart,
    classes: Sequence[Sequence[int]],
) -> InvariantResult:
    """chi on the cover equals chi(M) + chi(M - half_branch) on the base."""
    failures = []
    samples = [Y0.unit(n) for n in Y0.div_basis] + [tuple(c) for c in classes]
    for M in samples:
        shifted = tuple(m - h for m, h in zip(M, half_branch, strict=True))
        base = rr_chi(Y0, M) + rr_chi(Y0, shifted)
        up = rr_chi(cover, M)
        if base != up:
            failures.append({"class": list(M), "cover": up, "base": base})
    return InvariantResult(
        "double_cover_oracle", not failures, {"samples": len(samples), "failures": failures}
    )


def chart_invariants(
    C: IntersectionChart, samples: int = 20, seed: int = 0
) -> list[InvariantResult]:
    """Run every oracle that applies to the chart; later oracles need Noether."""
    results = [check_noether(C), check_restriction_compatibility(C)]
    if not results[0].passed:
        return results
    classes = random_classes(C.rank, samples, seed)
    results.append(check_rr_integrality(C, classes))
    if not results[-1].passed:
        return results
    results.append(check_restriction_identity(C, classes))
    if isinstance(C, BlockChart):
        results.append(check_genus_oracle(C))
    return results
