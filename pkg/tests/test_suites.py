import json

import pytest

from tcs_forge.checks import recheck
from tcs_forge.errors import InputError
from tcs_forge.main import main
from tcs_forge.models import Verdict
from tcs_forge.suites import SUITES, positive_n0_configuration, run_suite


def _run(argv):
    with pytest.raises(SystemExit) as exc_info:
        main(argv)
    return exc_info.value.code


@pytest.mark.parametrize("name", ["p1xp2", "dcover", "matching"])
def test_suite_passes(name, settings):
    certificates = run_suite(name, settings)
    failed = [(c.check_id, c.value) for c in certificates if c.verdict != Verdict.PASS]
    assert failed == []


def test_full_suite(settings):
    certificates = run_suite("full-paper", settings)
    assert len(certificates) >= 25
    failed = [(c.check_id, c.value) for c in certificates if c.verdict != Verdict.PASS]
    assert failed == []
    check_ids = {c.check_id for c in certificates}
    assert {"search.run", "search.verify_candidate", "matching.glue"} <= check_ids


def test_full_suite_is_the_union():
    parts = sum(len(SUITES[name]()) for name in ("p1xp2", "dcover", "matching"))
    assert len(SUITES["full-paper"]()) > parts


def test_matching_suite_rechecks(settings):
    for cert in run_suite("matching", settings):
        _, agrees = recheck(cert, settings)
        assert agrees, cert.check_id


def test_unknown_suite(settings):
    with pytest.raises(InputError):
        run_suite("nope", settings)


def test_verify_full_paper_from_the_command_line(capsys):
    """Test that the umbrella suite runs under its documented name and passes."""
    assert _run(["verify", "full-paper"]) == 0
    certificates = json.loads(capsys.readouterr().out)
    assert len(certificates) >= 25
    assert all(c["verdict"] == "pass" for c in certificates)


def test_full_is_an_alias_of_full_paper():
    assert SUITES["full"] is SUITES["full-paper"]


class TestMatchingSuite:
    """Test suite for the certificates of the bundled matching."""

    def test_n0_generators_have_square_minus_72(self, settings):
        """Test that both images of the N0 generator are certified separately."""
        squares = [
            (c.inputs["vector"], c.value)
            for c in run_suite("matching", settings)
            if c.check_id == "lattice.square"
        ]
        assert squares == [([5, -3], -72), ([5, -2], -72)]

    def test_prescreen_negative_control(self, settings):
        """Test that the square-2 gluing is rejected by the prescreen as expected."""
        cert = next(
            c
            for c in run_suite("matching", settings)
            if c.check_id == "matching.prescreen"
            and c.inputs["configuration"] == positive_n0_configuration()
        )
        assert cert.verdict == Verdict.PASS
        assert cert.value["n0_square"] == 2
        assert cert.value["n0_ok"] is False
        assert cert.trace[0].detail["computed_verdict"] == "fail"
