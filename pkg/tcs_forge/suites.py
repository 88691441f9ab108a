"""Bundled reproduction suites over the shipped charts and configuration."""

import copy
import logging
from collections.abc import Callable

from .charts import double_cover_chart, from_search_coordinates
from .checks import VERIFY_CHECK_ID, run_check, verify_inputs
from .config import Settings
from .errors import InputError
from .hs_search import spec_from_model
from .loaders import DATA_DIR, bundled, chart_to_json, load_chart, resolve_search_spec
from .models import Certificate

logger = logging.getLogger(__name__)

Entry = tuple[str, dict]

# c1(L) of the known pair in the (S, pulled-back divisors) basis
PLUS_C1L_COEFFS = (-1, -1, 1)
MINUS_C1L_COEFFS = (0, 1, 0)
PLUS_LABEL = ("-S-G+H", "l")
MINUS_LABEL = ("G", "h")


def _np(ample: bool = True) -> dict:
    cfg = bundled("matching_neg72.json")
    data = dict(cfg["Np"])
    if ample:
        data["ample"] = cfg["ample_p"]
    return data


def _nm(ample: bool = True) -> dict:
    cfg = bundled("matching_neg72.json")
    data = dict(cfg["Nm"])
    if ample:
        data["ample"] = cfg["ample_m"]
    return data


def p1xp2_entries() -> list[Entry]:
    fano = bundled("p1xp2_fano.json")
    block = bundled("p1xp2_block.json")
    c1L = [-3, -2, 1]
    return [
        ("chart.invariants", {"chart": fano}),
        (
            "chart.anticanonical_base_curve",
            {"chart": fano, "expected": {"degrees": [9, 12], "genus": 28}},
        ),
        (
            "chart.blowup",
            {
                "fano": fano,
                "base_locus": True,
                "expected": {
                    "triple": block["triple"],
                    "c2_pair": block["c2_pair"],
                    "S_class": block["S_class"],
                    "centre_genus": block["centre_genus"],
                    "restrict_S": block["restrict_S"]["matrix"],
                },
            },
        ),
        ("chart.invariants", {"chart": block}),
        ("chart.rr_chi", {"chart": block, "divisor": [0, 0, -1], "expected": 28}),
        ("chart.chi_Lstar", {"chart": block, "c1L": c1L, "expected": 0}),
        ("chart.hs_compat", {"chart": block, "c1L": c1L, "curve": "l", "expected": True}),
        (
            "chart.restrict",
            {"chart": block, "divisor": c1L, "expected": {"restricted": [-1, 1], "square": -4}},
        ),
        ("k3.destabilizer_search", {"lattice": _np(), "c1": [-1, 1], "expected": "stable"}),
        # discriminant 8; the ample-orthogonal classes have squares in -72 Z
        (
            "k3.chamber_check",
            {"lattice": _np(), "rk": 2, "c1": [-1, 1], "c2": 1, "expected": True},
        ),
        (
            "mukai.moduli_dim",
            {"lattice": _np(False), "rk": 2, "c1": [-1, 1], "c2": 1, "expected": 2},
        ),
    ]


def dcover_entries() -> list[Entry]:
    fano = bundled("p1xp2_fano.json")
    block = bundled("dcover_block.json")
    cover = chart_to_json(double_cover_chart(load_chart(fano), (1, 1)))
    return [
        (
            "chart.double_cover",
            {
                "base": fano,
                "half_branch": [1, 1],
                "expected": {
                    "triple": [[0, 1, 1, 2]],
                    "c2_pair": [4, 10],
                    "minus_K": [1, 2],
                    "cube": 24,
                },
            },
        ),
        (
            "chart.anticanonical_base_curve",
            {"chart": cover, "expected": {"degrees": [8, 8], "genus": 13}},
        ),
        (
            "chart.blowup",
            {
                "fano": cover,
                "base_locus": True,
                "expected": {
                    "triple": block["triple"],
                    "c2_pair": block["c2_pair"],
                    "S_class": block["S_class"],
                    "centre_genus": block["centre_genus"],
                    "restrict_S": block["restrict_S"]["matrix"],
                },
            },
        ),
        ("chart.invariants", {"chart": block}),
        ("chart.chi_Lstar", {"chart": block, "c1L": [1, 0, 0], "expected": 0}),
        ("chart.hs_compat", {"chart": block, "c1L": [1, 0, 0], "curve": "h", "expected": True}),
        ("k3.destabilizer_search", {"lattice": _nm(), "c1": [1, 0], "expected": "stable"}),
        (
            "mukai.moduli_dim",
            {"lattice": _nm(False), "rk": 2, "c1": [1, 0], "c2": 2, "expected": 2},
        ),
        # slope 4: the class A has degree 4 and square 0
        (
            "k3.destabilizer_search",
            {"lattice": _nm(), "c1": [2, 0], "expected": "inconclusive"},
        ),
    ]


def positive_n0_configuration() -> dict:
    """The bundled configuration glued instead along B+ = B- of square 2.

    The forced cross pairings stay integral, so it glues, but N0 breaks both
    the square bound and the divisibility constraint.
    """
    cfg = copy.deepcopy(bundled("matching_neg72.json"))
    cfg["name"] = "N0 of square 2"
    cfg["N0"] = {"gram": [[2]], "embed_p": [[0, 1]], "embed_m": [[0, 1]]}
    return cfg


def matching_entries() -> list[Entry]:
    cfg = bundled("matching_neg72.json")
    return [
        ("lattice.signature", {"lattice": _np(False), "expected": [1, 1, 0]}),
        ("lattice.signature", {"lattice": _nm(False), "expected": [1, 1, 0]}),
        ("lattice.vector_divisibility", {"lattice": _np(False), "vector": [5, -3], "expected": 1}),
        ("lattice.square", {"lattice": _np(False), "vector": [5, -3], "expected": -72}),
        ("lattice.square", {"lattice": _nm(False), "vector": [5, -2], "expected": -72}),
        ("lattice.vector_divisibility", {"lattice": _nm(False), "vector": [5, -2], "expected": 1}),
        ("mukai.n0_constraints", {"n0": {"gram": [[-72]]}}),
        (
            "mukai.n0_constraints",
            {
                "n0": {"gram": [[-70]]},
                "expected": {"square": -70, "square_bound_ok": True, "divisibility_ok": False},
            },
        ),
        (
            "matching.glue",
            {
                "configuration": cfg,
                "expected": {"rank": 3, "signature": [2, 1, 0], "even": True, "det": -2},
            },
        ),
        ("matching.orthogonal_parts", {"configuration": cfg, "expected": {"ranks": [1, 1, 1]}}),
        (
            "matching.prescreen",
            {
                "configuration": cfg,
                "k": 1,
                "bound": 3,
                "expected": {
                    "witnesses": [[-1, 1], [-1, 2], [1, -2], [1, -1]],
                    "n0_generator": [5, -3],
                    "n0_square": -72,
                    "n0_ok": True,
                },
            },
        ),
        (
            "matching.prescreen",
            {"configuration": cfg, "k": 2, "bound": 3, "expected_verdict": "fail"},
        ),
        (
            "matching.prescreen",
            {
                "configuration": positive_n0_configuration(),
                "k": 1,
                "bound": 3,
                "expected_verdict": "fail",
            },
        ),
        ("matching.amp_ray", {"configuration": cfg, "expected": True}),
        ("matching.embedding", {"configuration": cfg}),
        (
            "mukai.twist",
            {
                "lattice": _np(False),
                "mukai": {"r": 2, "l": [-1, 1], "s": -1},
                "twist": [3, -2],
                "expected": {"r": 2, "l": [5, -3], "s": -18},
            },
        ),
        (
            "mukai.twist",
            {
                "lattice": _nm(False),
                "mukai": {"r": 2, "l": [1, 0], "s": 0},
                "twist": [2, -1],
                "expected": {"r": 2, "l": [5, -2], "s": -18},
            },
        ),
    ]


def search_entries() -> list[Entry]:
    cfg = bundled("matching_neg72.json")
    plus_block = bundled("p1xp2_block.json")
    minus_block = bundled("dcover_block.json")
    spec = spec_from_model(resolve_search_spec(DATA_DIR / "search_neg72.json"))
    spec_json = spec.to_json()
    plus = (list(from_search_coordinates(spec.chart_p, PLUS_C1L_COEFFS)), PLUS_LABEL[1])
    minus = (list(from_search_coordinates(spec.chart_m, MINUS_C1L_COEFFS)), MINUS_LABEL[1])
    attestations = bundled("attestations.json")
    tampered = copy.deepcopy(attestations)
    tampered["plus"]["conormal_split"] = [1, 0]
    box0 = dict(spec_json, box=0)
    curve_g = dict(spec_json, curve_classes_m=["g"])

    def constraint(check: str, block: dict, side: str, c1L: list[int], **extra) -> Entry:
        inputs = {"chart": block, "configuration": cfg, "side": side, "c1L": c1L}
        inputs.update(extra)
        return (f"search.{check}", inputs)

    return [
        constraint("mod2_membership", plus_block, "plus", [-3, -2, 1], expected=True),
        constraint("mod2_membership", minus_block, "minus", [1, 0, 0], expected=True),
        constraint("mod2_membership", plus_block, "plus", [1, 0, 0], expected=False),
        constraint("positivity", plus_block, "plus", [-3, -2, 1], expected=True),
        constraint("positivity", minus_block, "minus", [1, 0, 0], expected=True),
        constraint("positivity", plus_block, "plus", [0, 0, 0], expected=False),
        constraint("dimension", plus_block, "plus", [-3, -2, 1], curve="l", expected=True),
        constraint("dimension", minus_block, "minus", [1, 0, 0], curve="h", expected=True),
        constraint("dimension", plus_block, "plus", [5, -3, 0], curve="l", expected=False),
        (
            "search.run",
            {"search": spec_json, "require": [[*PLUS_LABEL, *MINUS_LABEL]]},
        ),
        ("search.run", {"search": box0, "expected": []}),
        ("search.run", {"search": curve_g, "expected": []}),
        (VERIFY_CHECK_ID, verify_inputs(spec_json, plus, minus, attestations)),
        (
            VERIFY_CHECK_ID,
            dict(verify_inputs(spec_json, plus, minus), expected_verdict="inconclusive"),
        ),
        (
            VERIFY_CHECK_ID,
            dict(verify_inputs(spec_json, plus, minus, tampered), expected_verdict="fail"),
        ),
    ]


def extra_entries() -> list[Entry]:
    """Checks outside the four worked constructions."""
    return [
        (
            "k3.chamber_check",
            {
                "lattice": {"gram": [[-2, 0], [0, 2]], "ample": [0, 1]},
                "rk": 2,
                "c1": [0, 0],
                "c2": 1,
                "expected": False,
            },
        ),
    ]


def all_entries() -> list[Entry]:
    return (
        p1xp2_entries()
        + dcover_entries()
        + matching_entries()
        + search_entries()
        + extra_entries()
    )


SUITES: dict[str, Callable[[], list[Entry]]] = {
    "p1xp2": p1xp2_entries,
    "dcover": dcover_entries,
    "matching": matching_entries,
    "full-paper": all_entries,
    "full": all_entries,
}


def run_suite(name: str, settings: Settings | None = None) -> list[Certificate]:
    if name not in SUITES:
        raise InputError(f"Unknown suite {name!r}; known: {sorted(SUITES)}")
    settings = settings or Settings()
    entries = SUITES[name]()
    logger.info(f"Running suite {name} ({len(entries)} checks)")
    certificates = [run_check(check_id, inputs, settings) for check_id, inputs in entries]
    failed = [c.check_id for c in certificates if c.verdict != "pass"]
    logger.info(f"Suite {name}: {len(certificates) - len(failed)}/{len(certificates)} passed")
    return certificates
