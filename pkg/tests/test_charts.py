from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tcs_forge.charts import (
    BlockChart,
    BlowupCentre,
    HSNumericDatum,
    anticanonical_base_curve,
    blowup_chart,
    chart_invariants,
    check_double_cover_oracle,
    check_genus_oracle,
    chi_Lstar_constraint,
    conormal_degree_check,
    conormal_h0,
    curve_degree,
    dense_triple,
    double_cover_chart,
    expected_conormal_degree,
    format_search_class,
    from_search_coordinates,
    hs_compat,
    inelasticity_check,
    noether_number,
    random_classes,
    restrict_to_S,
    rr_chi,
    sparse_triple,
    to_search_coordinates,
    triple,
)
from tcs_forge.errors import ChartError, InconclusiveError, InputError
from tcs_forge.lattice import gram_eval
from tcs_forge.loaders import DATA_DIR, load_chart
from tcs_forge.models import Attestation

PLUS_BLOCK = load_chart(DATA_DIR / "p1xp2_block.json")
MINUS_BLOCK = load_chart(DATA_DIR / "dcover_block.json")

coord = st.integers(min_value=-4, max_value=4)


def _attestation(split, h0_E=1, **overrides):
    data = {
        "h0_E": h0_E,
        "conormal_split": split,
        "h1_Lstar_zero": True,
        "h2_Lstar_zero": True,
        "h1_E_zero": True,
        "provenance": "test",
    }
    data.update(overrides)
    return Attestation(**data)


def test_dense_triple_symmetrizes():
    t = dense_triple(2, [[0, 1, 1, 1]])
    assert t[1][0][1] == t[1][1][0] == t[0][1][1] == 1
    assert sparse_triple(t) == [[0, 1, 1, 1]]


def test_dense_triple_rejects_conflicts():
    with pytest.raises(ChartError):
        dense_triple(2, [[0, 1, 1, 1], [1, 0, 1, 2]])
    with pytest.raises(ChartError):
        dense_triple(2, [[0, 1, 2, 1]])


def test_fano_noether_and_rr(fano):
    assert noether_number(fano) == 24
    assert rr_chi(fano, (0, 0)) == 1
    assert rr_chi(fano, (1, 0)) == 2
    assert rr_chi(fano, (0, 1)) == 3
    assert rr_chi(fano, (1, 1)) == 6


def test_rr_needs_noether(fano):
    broken = replace(fano, c2_pair=(0, 0))
    with pytest.raises(ChartError):
        rr_chi(broken, (1, 0))


def test_anticanonical_base_curve(fano):
    assert anticanonical_base_curve(fano) == BlowupCentre((9, 12), 28)


def test_blowup_reproduces_bundled_block(fano, plus_block):
    block = blowup_chart(fano, anticanonical_base_curve(fano), name="Z+")
    assert sparse_triple(block.triple) == sparse_triple(plus_block.triple)
    assert block.c2_pair == plus_block.c2_pair == (12, 18, 54)
    assert block.S_class == plus_block.S_class == (2, 3, -1)
    assert block.restriction.matrix == plus_block.restriction.matrix
    assert block.restriction.lattice.gram == plus_block.restriction.lattice.gram
    assert block.centre_genus == 28
    assert block.curves.names == ("l", "h", "g")


def test_blowup_rejects_bad_centre(fano):
    with pytest.raises(ChartError):
        blowup_chart(fano, BlowupCentre((1, 2, 3), 0))
    with pytest.raises(ChartError):
        blowup_chart(fano, BlowupCentre((1, 0), 0), exceptional_name="G")


def test_double_cover(fano):
    cover = double_cover_chart(fano, (1, 1))
    assert sparse_triple(cover.triple) == [[0, 1, 1, 2]]
    assert cover.c2_pair == (4, 10)
    assert cover.minus_K == (1, 2)
    assert triple(cover, cover.minus_K, cover.minus_K, cover.minus_K) == 24
    assert anticanonical_base_curve(cover) == BlowupCentre((8, 8), 13)
    oracle = check_double_cover_oracle(fano, (1, 1), cover, random_classes(2, 5, 0))
    assert oracle.passed


def test_double_cover_blowup_reproduces_bundled_block(fano, minus_block):
    cover = double_cover_chart(fano, (1, 1))
    block = blowup_chart(cover, anticanonical_base_curve(cover))
    assert sparse_triple(block.triple) == sparse_triple(minus_block.triple)
    assert block.c2_pair == minus_block.c2_pair == (12, 18, 24)
    assert block.S_class == minus_block.S_class == (1, 2, -1)


@pytest.mark.parametrize("name", ["p1xp2_fano.json", "p1xp2_block.json", "dcover_block.json"])
def test_bundled_charts_pass_invariants(name):
    results = chart_invariants(load_chart(DATA_DIR / name), samples=10, seed=3)
    assert all(r.passed for r in results), [r for r in results if not r.passed]


def test_genus_oracle(plus_block, minus_block):
    assert rr_chi(plus_block, (0, 0, -1)) == 28
    assert check_genus_oracle(plus_block).passed
    assert check_genus_oracle(minus_block).passed
    wrong = replace(plus_block, centre_genus=27)
    assert not check_genus_oracle(wrong).passed


def test_restrict_to_S(plus_block):
    restricted = restrict_to_S(plus_block, (-3, -2, 1))
    assert restricted == (-1, 1)
    assert gram_eval(plus_block.restriction.lattice, restricted, restricted) == -4


def test_curve_degrees(plus_block, minus_block):
    assert curve_degree(plus_block, plus_block.S_class, "l") == 1
    assert curve_degree(minus_block, minus_block.S_class, "h") == 2


def test_hs_compat(plus_block, minus_block):
    assert hs_compat(plus_block, (-3, -2, 1), "l")
    assert hs_compat(minus_block, (1, 0, 0), "h")
    assert not hs_compat(plus_block, (0, 0, 0), "l")


def test_chi_Lstar(plus_block, minus_block):
    assert chi_Lstar_constraint(plus_block, (-3, -2, 1)) == (0, True)
    assert chi_Lstar_constraint(minus_block, (1, 0, 0)) == (0, True)


def test_search_basis_round_trip(plus_block):
    assert from_search_coordinates(plus_block, (-1, -1, 1)) == (-3, -2, 1)
    assert to_search_coordinates(plus_block, (-3, -2, 1)) == (-1, -1, 1)
    assert format_search_class(plus_block, (-3, -2, 1)) == "-S-G+H"


def test_canonical_order(plus_block):
    canon = plus_block.canonical()
    assert isinstance(canon, BlockChart)
    assert canon.div_basis == ("E", "G", "H")
    assert canon.exceptional_name == "E"
    assert canon.S_class == (-1, 2, 3)
    assert rr_chi(canon, (-1, 0, 0)) == 28
    assert format_search_class(canon, (1, -3, -2)) == "-S-G+H"


def test_permuted_rejects_non_permutation(plus_block):
    with pytest.raises(InputError):
        plus_block.permuted([0, 0, 1])


class TestConormalAttestations:
    """Test suite for the attested conormal and inelasticity checks."""

    def test_conormal_h0(self):
        """Test sections of O(a) + O(b) on a rational curve."""
        assert conormal_h0((0, -1)) == 1
        assert conormal_h0((0, 0)) == 2
        assert conormal_h0((-1, 3)) == 4
        assert conormal_h0((-2, 1)) is None

    def test_conormal_degree(self, plus_block, minus_block):
        """Test that the attested splitting must have the adjunction degree."""
        assert expected_conormal_degree(plus_block, (-3, -2, 1), "l") == -1
        assert expected_conormal_degree(minus_block, (1, 0, 0), "h") == 0
        good = HSNumericDatum((-3, -2, 1), "l", attestation=_attestation((0, -1)))
        bad = HSNumericDatum((-3, -2, 1), "l", attestation=_attestation((1, 0)))
        assert conormal_degree_check(plus_block, good)
        assert not conormal_degree_check(plus_block, bad)
        with pytest.raises(InconclusiveError):
            conormal_degree_check(plus_block, HSNumericDatum((-3, -2, 1), "l"))

    def test_inelasticity(self):
        """Test that half the moduli dimension matches the twisted conormal sections."""
        datum = HSNumericDatum((-3, -2, 1), "l", attestation=_attestation((0, -1), h0_E=1))
        assert inelasticity_check(2, datum)
        assert not inelasticity_check(4, datum)
        assert not inelasticity_check(3, datum)

    def test_inelasticity_is_inconclusive_without_vanishing(self):
        """Test that missing vanishing or an undetermined h0 stays inconclusive."""
        no_vanishing = HSNumericDatum(
            (-3, -2, 1), "l", attestation=_attestation((0, -1), h1_E_zero=False)
        )
        with pytest.raises(InconclusiveError):
            inelasticity_check(2, no_vanishing)
        undetermined = HSNumericDatum((-3, -2, 1), "l", attestation=_attestation((-2, 1)))
        with pytest.raises(InconclusiveError):
            inelasticity_check(2, undetermined)

    def test_datum_requires_rational_curve(self):
        """Test that only rational curves are accepted."""
        with pytest.raises(InputError):
            HSNumericDatum((0, 0, 0), "l", genus=1)


@given(st.tuples(coord, coord, coord))
def test_restriction_sequence_on_plus_block(L):
    # chi(L) - chi(L - S) = chi(L|_S) on the K3 fibre
    shifted = tuple(x - s for x, s in zip(L, PLUS_BLOCK.S_class, strict=True))
    restricted = restrict_to_S(PLUS_BLOCK, L)
    square = gram_eval(PLUS_BLOCK.restriction.lattice, restricted, restricted)
    assert 2 * (rr_chi(PLUS_BLOCK, L) - rr_chi(PLUS_BLOCK, shifted)) == square + 4


@given(st.tuples(coord, coord, coord))
def test_rr_is_integral_on_minus_block(L):
    assert isinstance(rr_chi(MINUS_BLOCK, L), int)


@given(st.tuples(coord, coord, coord))
def test_canonical_chart_preserves_triples(L):
    canon = PLUS_BLOCK.canonical()
    order = [PLUS_BLOCK.div_basis.index(name) for name in canon.div_basis]
    permuted = tuple(L[i] for i in order)
    assert triple(canon, permuted, permuted, permuted) == triple(PLUS_BLOCK, L, L, L)
