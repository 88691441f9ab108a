import pytest
from hypothesis import given
from hypothesis import strategies as st

from tcs_forge.errors import HypothesisViolationError, InputError, LatticeError
from tcs_forge.k3 import (
    PRIME_SQUARE_BOUND,
    PolarizedK3,
    StabilityVerdict,
    chamber_check,
    chamber_walls,
    degree,
    destabilizer_search,
    discriminant,
    enum_degree_slice,
    naive_degree_slice,
    prime_square_filter,
    slope,
)
from tcs_forge.lattice import IntLattice, gram_eval

NP = PolarizedK3(IntLattice(((0, 3), (3, 2))), (1, 1))
WALLED = PolarizedK3(IntLattice(((-2, 0), (0, 2))), (0, 1))


def test_polarized_k3_rejects_odd_lattice():
    with pytest.raises(LatticeError):
        PolarizedK3(IntLattice(((1, 0), (0, -1))), (1, 0))


def test_polarized_k3_rejects_non_hyperbolic_lattice():
    with pytest.raises(LatticeError):
        PolarizedK3(IntLattice(((2, 0), (0, 2))), (1, 0))


def test_polarized_k3_rejects_non_positive_ample(hyperbolic_plane):
    with pytest.raises(LatticeError):
        PolarizedK3(hyperbolic_plane, (1, 0))


def test_degree_and_slope(Np):
    assert Np.ample_square == 8
    assert degree(Np, (-1, 1)) == 2
    assert slope(Np, (-1, 1), 2) == 1


def test_prime_square_filter():
    assert prime_square_filter(PRIME_SQUARE_BOUND)
    assert prime_square_filter(0)
    assert not prime_square_filter(-4)


def test_destabilizer_search_stable_on_plus_side(Np):
    report = destabilizer_search(Np, (-1, 1))
    assert report.verdict == StabilityVerdict.STABLE
    assert report.max_degree == 1
    assert report.witnesses == ()


def test_destabilizer_search_stable_on_minus_side(Nm):
    report = destabilizer_search(Nm, (1, 0))
    assert report.verdict == StabilityVerdict.STABLE


def test_destabilizer_search_reports_witness(Nm):
    # A has degree 4 and square 0, equal to the slope of c1 = 2A
    report = destabilizer_search(Nm, (2, 0))
    assert report.verdict == StabilityVerdict.INCONCLUSIVE
    witness = next(w for w in report.witnesses if w.cls == (1, 0))
    assert witness.degree == 4
    assert witness.square == 0
    assert not witness.composite


def test_destabilizer_search_needs_positive_slope(Np):
    with pytest.raises(HypothesisViolationError):
        destabilizer_search(Np, (1, -1))


def test_destabilizer_search_is_rank_two_only(Np):
    with pytest.raises(InputError):
        destabilizer_search(Np, (-1, 1), rk=3)


def test_enum_degree_slice_needs_positive_degree(Np):
    with pytest.raises(InputError):
        enum_degree_slice(Np, 0, PRIME_SQUARE_BOUND)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 6])
def test_enum_degree_slice_agrees_with_box_scan(Nm, d):
    radius = 12
    fast = enum_degree_slice(Nm, d, -10)
    naive = naive_degree_slice(Nm, d, -10, radius)
    assert set(naive) == {D for D in fast if max(abs(x) for x in D) <= radius}


def test_discriminant():
    assert discriminant(2, -4, 1) == 8
    assert discriminant(2, 0, 1) == 4


def test_chamber_walls():
    assert sorted(chamber_walls(WALLED, 2, (0, 0), 1)) == [(-1, 0), (1, 0)]
    assert not chamber_check(WALLED, 2, (0, 0), 1)


def test_chamber_check_without_walls():
    assert chamber_check(WALLED, 2, (0, 0), 0)


@given(st.integers(min_value=1, max_value=12), st.integers(min_value=-12, max_value=0))
def test_degree_slice_is_sound(d, min_square):
    for D in enum_degree_slice(NP, d, min_square):
        assert degree(NP, D) == d
        assert gram_eval(NP.pic, D, D) >= min_square


@given(st.integers(min_value=1, max_value=8))
def test_witnesses_never_exceed_slope(d):
    c1 = (d, 0)
    if degree(NP, c1) <= 0:
        return
    report = destabilizer_search(NP, c1)
    for w in report.witnesses:
        assert 1 <= w.degree <= report.slope
        assert w.square >= PRIME_SQUARE_BOUND or w.composite


def test_chamber_check_plus_side(Np):
    assert discriminant(2, -4, 1) == 8
    assert chamber_check(Np, 2, (-1, 1), 1)


ELEMENTARY = [((1, 1), (0, 1)), ((1, 0), (1, 1)), ((0, 1), (1, 0)), ((-1, 0), (0, 1))]


def _mul(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2)
    )


def _inverse(p):
    det = p[0][0] * p[1][1] - p[0][1] * p[1][0]
    return ((det * p[1][1], -det * p[0][1]), (-det * p[1][0], det * p[0][0]))


def _change_basis(K, p):
    """Rewrite K in the basis whose rows are p; coordinates map by v -> v p^-1."""
    q = _inverse(p)
    gram = _mul(_mul(p, K.pic.gram), tuple(zip(*p, strict=True)))
    return PolarizedK3(IntLattice(gram), _row(K.ample, q)), q


def _row(v, m):
    return tuple(sum(v[i] * m[i][j] for i in range(2)) for j in range(2))


@pytest.mark.parametrize(
    "gram, ample, c1",
    [
        (((0, 3), (3, 2)), (1, 1), (-1, 1)),
        (((0, 4), (4, 2)), (2, 1), (1, 0)),
        (((0, 4), (4, 2)), (2, 1), (2, 0)),
    ],
)
@given(st.lists(st.sampled_from(ELEMENTARY), min_size=1, max_size=6))
def test_stability_is_basis_independent(gram, ample, c1, steps):
    K = PolarizedK3(IntLattice(gram), ample)
    p = ((1, 0), (0, 1))
    for step in steps:
        p = _mul(step, p)
    moved, q = _change_basis(K, p)
    before = destabilizer_search(K, c1)
    after = destabilizer_search(moved, _row(c1, q))
    assert after.verdict == before.verdict
    assert after.slope == before.slope
    assert sorted(_row(w.cls, p) for w in after.witnesses) == sorted(
        w.cls for w in before.witnesses
    )
