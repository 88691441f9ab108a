from dataclasses import replace

import pytest

from tcs_forge.config import Settings
from tcs_forge.errors import ChartError, ConfigurationError, InputError, SearchOverflowError
from tcs_forge.hs_search import (
    CandidatePair,
    SearchSpec,
    check_dimension,
    check_mod2_membership,
    check_positivity,
    describe_candidate,
    enumerate_candidates,
    evaluate_candidate,
    match_twists,
    run_search,
    scan_size,
    twisted_bundle_report,
    verify_candidate,
)
from tcs_forge.matching import Side
from tcs_forge.models import TraceStatus, Verdict
from tcs_forge.mukai import MukaiVector

# c1(L) of the known pair in canonical (E, G, H) coordinates
PLUS_C1L = (1, -3, -2)
MINUS_C1L = (0, 1, 0)
COMMON_TARGET = MukaiVector(2, (1,), -18)


def _known_pair(spec):
    return CandidatePair(
        describe_candidate(spec, Side.PLUS, PLUS_C1L, "l"),
        describe_candidate(spec, Side.MINUS, MINUS_C1L, "h"),
        (),
    )


def test_spec_stores_canonical_charts(search_spec):
    assert search_spec.chart_p.div_basis == ("E", "G", "H")
    assert search_spec.chart_m.div_basis == ("E", "G", "H")
    assert search_spec.multiplicity(Side.PLUS) == 1
    assert search_spec.curves(Side.MINUS) == ("h",)


def test_spec_validation(plus_block, minus_block, config):
    with pytest.raises(InputError):
        SearchSpec(plus_block, minus_block, config, k=0)
    with pytest.raises(InputError):
        SearchSpec(plus_block, minus_block, config, box=-1)
    with pytest.raises(ChartError):
        SearchSpec(plus_block, minus_block, config, curve_classes_m=("q",))
    with pytest.raises(ConfigurationError):
        SearchSpec(minus_block, plus_block, config)


def test_multiplicity_follows_k(plus_block, minus_block, config):
    spec = SearchSpec(plus_block, minus_block, config, k=3)
    assert spec.multiplicity(Side.PLUS) == 3
    assert spec.multiplicity(Side.MINUS) == 1


def test_mod2_membership(plus_block, minus_block, config):
    assert check_mod2_membership(config, plus_block, (-3, -2, 1), Side.PLUS)
    assert check_mod2_membership(config, minus_block, (1, 0, 0), Side.MINUS)
    assert not check_mod2_membership(config, plus_block, (1, 0, 0), Side.PLUS)


def test_positivity(plus_block, config):
    assert check_positivity(plus_block, config, (-3, -2, 1), Side.PLUS)
    assert not check_positivity(plus_block, config, (0, 0, 0), Side.PLUS)


def test_dimension(plus_block, minus_block, config):
    assert check_dimension(plus_block, config, (-3, -2, 1), "l", 1, 1, Side.PLUS)
    assert check_dimension(minus_block, config, (1, 0, 0), "h", 1, 1, Side.MINUS)
    assert not check_dimension(plus_block, config, (-3, -2, 1), "l", 2, 1, Side.PLUS)


def test_evaluate_known_candidates(search_spec):
    records, plus = evaluate_candidate(search_spec, Side.PLUS, PLUS_C1L, "l")
    assert all(r.status == TraceStatus.PASS for r in records)
    assert plus.label == "-S-G+H"
    assert plus.restricted == (-1, 1)
    assert plus.c2 == 1
    assert plus.mukai == MukaiVector(2, (-1, 1), -1)
    assert plus.chi_Lstar == 0

    records, minus = evaluate_candidate(search_spec, Side.MINUS, MINUS_C1L, "h")
    assert all(r.status == TraceStatus.PASS for r in records)
    assert minus.label == "G"
    assert minus.mukai == MukaiVector(2, (1, 0), 0)


def test_evaluate_reports_every_failure(search_spec):
    records, candidate = evaluate_candidate(search_spec, Side.PLUS, (0, 0, 0), "l")
    assert candidate is None
    statuses = {r.check: r.status for r in records}
    assert statuses["plus.positivity"] == TraceStatus.FAIL
    assert statuses["plus.stability"] == TraceStatus.INCONCLUSIVE
    assert len(records) == 7


def test_match_twists(search_spec):
    pair = _known_pair(search_spec)
    matches = match_twists(search_spec.cfg, pair.plus, pair.minus, 4)
    match = next(m for m in matches if m.target == COMMON_TARGET)
    assert match.twist_p == (3, -2)
    assert match.twist_m == (2, -1)


def test_twisted_bundle_report(search_spec):
    pair = _known_pair(search_spec)
    matches = match_twists(search_spec.cfg, pair.plus, pair.minus, 4)
    match = next(m for m in matches if m.target == COMMON_TARGET)
    report = twisted_bundle_report(search_spec.cfg, match)
    assert report["c1_in_Np"] == [5, -3]
    assert report["c1_in_Nm"] == [5, -2]
    assert report["c1_square"] == -72
    assert report["c2"] == -16
    assert report["chi"] == -16
    assert report["chi_nonpositive"]
    assert report["c1_primitive_in_N0"]


def test_verify_candidate_with_attestations(search_spec, attestations, settings):
    cert = verify_candidate(
        search_spec, _known_pair(search_spec), (attestations.plus, attestations.minus), settings
    )
    assert cert.verdict == Verdict.PASS
    assert cert.value == {"plus": ["-S-G+H", "l"], "minus": ["G", "h"], "k": 1}
    assert {f.fact for f in cert.attested} >= {"h0_E", "conormal_split"}
    assert any(w["twisted_bundle"]["c2"] == -16 for w in cert.witnesses)
    assert len(cert.assumptions) == 4


def test_verify_candidate_without_attestations_is_inconclusive(search_spec, settings):
    cert = verify_candidate(search_spec, _known_pair(search_spec), settings=settings)
    assert cert.verdict == Verdict.INCONCLUSIVE
    statuses = {r.check: r.status for r in cert.trace}
    assert statuses["twist_matching"] == TraceStatus.PASS
    assert statuses["plus.inelasticity"] == TraceStatus.INCONCLUSIVE


def test_verify_candidate_rejects_tampered_split(search_spec, attestations, settings):
    tampered = attestations.plus.model_copy(update={"conormal_split": (1, 0)})
    cert = verify_candidate(
        search_spec, _known_pair(search_spec), (tampered, attestations.minus), settings
    )
    assert cert.verdict == Verdict.FAIL
    statuses = {r.check: r.status for r in cert.trace}
    assert statuses["plus.conormal_degree"] == TraceStatus.FAIL


def test_run_search_finds_known_pair(search_result):
    found = [
        (p.plus.label, p.plus.curve, p.minus.label, p.minus.curve) for p in search_result.pairs
    ]
    assert ("-S-G+H", "l", "G", "h") in found
    for pair in search_result.pairs:
        assert pair.matches
        assert pair.certificate.verdict == Verdict.INCONCLUSIVE
        assert pair.checks["twist_matching"] == TraceStatus.PASS


def test_enumerate_candidates_returns_the_search_pairs(search_spec, settings, search_result):
    pairs = enumerate_candidates(search_spec, settings)
    assert [p.to_json() for p in pairs] == [p.to_json() for p in search_result.pairs]


def test_run_search_accounts_for_every_class(search_spec, search_result):
    assert search_result.scanned == scan_size(search_spec) == 250
    accepted = len(search_result.candidates_p) + len(search_result.candidates_m)
    assert len(search_result.rejections) + accepted == search_result.scanned


def test_run_search_is_deterministic_across_thread_counts(search_spec, settings):
    one = run_search(search_spec, settings.model_copy(update={"threads": 1}))
    four = run_search(search_spec, settings.model_copy(update={"threads": 4}))
    assert [c.coeffs for c in one.candidates_p] == [c.coeffs for c in four.candidates_p]
    assert [p.to_json() for p in one.pairs] == [p.to_json() for p in four.pairs]


def _pair_keys(result):
    return {(p.plus.label, p.plus.curve, p.minus.label, p.minus.curve) for p in result.pairs}


class TestSearchResults:
    """Test suite for properties of the emitted candidate pairs."""

    def test_enlarging_the_box_keeps_every_pair(self, search_spec, settings, search_result):
        """Test that the pairs found in box 1 are all found again in box 2."""
        small = run_search(replace(search_spec, box=1), settings)
        assert ("-S-G+H", "l", "G", "h") in _pair_keys(small)
        assert _pair_keys(small) <= _pair_keys(search_result)

    def test_every_pair_reverifies(self, search_spec, settings, search_result):
        """Test that no emitted pair fails when verified on its own."""
        assert search_result.pairs
        for pair in search_result.pairs:
            cert = verify_candidate(search_spec, pair, settings=settings)
            assert cert.verdict != Verdict.FAIL, pair.plus.label
            assert cert.verdict == pair.certificate.verdict


def test_empty_box(search_spec, settings):
    result = run_search(replace(search_spec, box=0), settings)
    assert result.scanned == 2
    assert result.pairs == []


def test_curve_g_gives_no_candidates(search_spec, settings):
    result = run_search(replace(search_spec, curve_classes_m=("g",)), settings)
    assert result.candidates_m == []
    assert result.pairs == []


def test_scan_cap(search_spec):
    with pytest.raises(SearchOverflowError):
        run_search(search_spec, Settings(max_scan=10))
