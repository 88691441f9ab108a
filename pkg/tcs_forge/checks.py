"""Replayable checks: each check id maps JSON inputs to a certified outcome.

A certificate stores the check id and its full inputs, so `recheck` can
recompute it from the certificate alone. Inputs may carry `expected` (the
value the check must compute) or `expected_verdict`; the certificate then
passes iff the computation agrees, which lets negative controls pass.
"""

import json
import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

from . import __version__
from .charts import (
    BlockChart,
    BlowupCentre,
    anticanonical_base_curve,
    blowup_chart,
    chart_invariants,
    check_double_cover_oracle,
    check_noether,
    chi_Lstar_constraint,
    double_cover_chart,
    hs_compat,
    random_classes,
    restrict_to_S,
    rr_chi,
    sparse_triple,
    triple,
)
from .config import Settings
from .errors import (
    ChartError,
    ConfigurationError,
    HypothesisViolationError,
    InconclusiveError,
    InconsistencyError,
    InputError,
    LatticeError,
    UnsupportedRankError,
)
from .hs_search import (
    ASSUMPTIONS,
    VERIFY_CHECK_ID,
    CandidatePair,
    check_dimension,
    check_mod2_membership,
    check_positivity,
    describe_candidate,
    run_search,
    spec_from_model,
    verify_candidate,
)
from .k3 import (
    PRIME_SQUARE_BOUND,
    PolarizedK3,
    StabilityVerdict,
    chamber_walls,
    destabilizer_search,
    enum_degree_slice,
    naive_degree_slice,
)
from .lattice import (
    IntLattice,
    Sublattice,
    enum_vectors_with_square,
    gram_eval,
    is_primitive,
    orth_complement,
    saturate,
    signature,
    vector_divisibility,
)
from .linalg import determinant
from .loaders import (
    lattice_from_model,
    load_attestations,
    load_chart,
    load_configuration,
    parse_model,
    polarized_from_model,
)
from .matching import (
    Side,
    amp_ray_check,
    ample_orthogonal_to_n0,
    embedding_necessary_checks,
    orthogonal_parts,
    step1_prescreen,
)
from .models import (
    AttestedFact,
    Certificate,
    LatticeModel,
    SearchSpecModel,
    TraceRecord,
    TraceStatus,
    Verdict,
    combine_verdict,
)
from .mukai import (
    MukaiVector,
    euler_characteristic,
    expanded_dim,
    moduli_dim,
    mukai_from_chern,
    mukai_pairing,
    n0_chern_constraints,
    rank2_dim_via_chi,
    twist,
)

logger = logging.getLogger(__name__)

GENERIC_FIBRE = ASSUMPTIONS[0]
GENERIC_FAMILY = ASSUMPTIONS[1]
REALISED_CONFIGURATION = ASSUMPTIONS[2]

# Mathematical failures become failed certificates; bad input stays an error
_FAILING_ERRORS = (
    ChartError,
    ConfigurationError,
    HypothesisViolationError,
    InconsistencyError,
    LatticeError,
    UnsupportedRankError,
)


@dataclass
class Outcome:
    value: Any
    status: TraceStatus = TraceStatus.PASS
    witnesses: list[Any] = field(default_factory=list)
    trace: list[TraceRecord] = field(default_factory=list)
    attested: list[AttestedFact] = field(default_factory=list)
    assumptions: list[str] = field(default_factory=list)


def _jsonable(value: Any) -> Any:
    return json.loads(json.dumps(value, default=str))


def _status(ok: bool) -> TraceStatus:
    return TraceStatus.PASS if ok else TraceStatus.FAIL


def _record(check: str, ok: bool, **detail) -> TraceRecord:
    return TraceRecord(check=check, status=_status(ok), detail=_jsonable(detail))


# Input parsing


def _lattice(data: dict) -> IntLattice:
    return lattice_from_model(parse_model(LatticeModel, data, "lattice"))


def _polarized(data: dict) -> PolarizedK3:
    return polarized_from_model(parse_model(LatticeModel, data, "lattice"))


def _block(data: dict) -> BlockChart:
    chart = load_chart(data)
    if not isinstance(chart, BlockChart):
        raise InputError(f"Chart {chart.name} is not a building block")
    return chart


def _side(value: str) -> Side:
    try:
        return Side(value)
    except ValueError:
        raise InputError(f"side must be 'plus' or 'minus', got {value!r}") from None


# Lattice checks


def check_lattice_signature(inputs: dict, settings: Settings) -> Outcome:
    return Outcome(list(signature(_lattice(inputs["lattice"]))))


def check_lattice_even(inputs: dict, settings: Settings) -> Outcome:
    even = _lattice(inputs["lattice"]).is_even
    return Outcome(even, _status(even))


def check_enum_vectors(inputs: dict, settings: Settings) -> Outcome:
    L = _lattice(inputs["lattice"])
    found = enum_vectors_with_square(L, int(inputs["square"]), int(inputs["bound"]))
    return Outcome([list(v) for v in found], _status(bool(found)))


def check_divisibility(inputs: dict, settings: Settings) -> Outcome:
    L = _lattice(inputs["lattice"])
    return Outcome(vector_divisibility(L, inputs["vector"]))


def check_square(inputs: dict, settings: Settings) -> Outcome:
    L = _lattice(inputs["lattice"])
    return Outcome(L.square(inputs["vector"]))


def check_saturation(inputs: dict, settings: Settings) -> Outcome:
    L = _lattice(inputs["lattice"])
    S = Sublattice.of(L, inputs["gens"])
    sat = saturate(S)
    return Outcome(
        [list(g) for g in sat.gens],
        trace=[_record("primitive", True, primitive=is_primitive(S))],
    )


def check_orth_complement(inputs: dict, settings: Settings) -> Outcome:
    L = _lattice(inputs["lattice"])
    comp = orth_complement(Sublattice.of(L, inputs["gens"]))
    return Outcome([list(g) for g in comp.gens])


# K3 checks


def check_destabilizers(inputs: dict, settings: Settings) -> Outcome:
    """Destabilizer enumeration, cross-checked against a naive box scan."""
    K = _polarized(inputs["lattice"])
    c1 = K.pic.vector(inputs["c1"])
    report = destabilizer_search(K, c1, int(inputs.get("rk", 2)))
    trace = []
    for d in range(1, report.max_degree + 1):
        fast = set(enum_degree_slice(K, d, PRIME_SQUARE_BOUND))
        naive = set(naive_degree_slice(K, d, PRIME_SQUARE_BOUND, settings.oracle_radius))
        trace.append(
            _record(
                f"naive_slice_degree_{d}",
                naive <= fast,
                radius=settings.oracle_radius,
                missing=sorted(naive - fast),
            )
        )
    stable = report.verdict == StabilityVerdict.STABLE
    return Outcome(
        str(report.verdict),
        TraceStatus.PASS if stable else TraceStatus.INCONCLUSIVE,
        witnesses=[
            {"class": list(w.cls), "degree": w.degree, "square": w.square, "composite": w.composite}
            for w in report.witnesses
        ],
        trace=trace,
        assumptions=[GENERIC_FIBRE],
    )


def check_chamber(inputs: dict, settings: Settings) -> Outcome:
    K = _polarized(inputs["lattice"])
    walls = chamber_walls(K, int(inputs["rk"]), inputs["c1"], int(inputs["c2"]))
    return Outcome(not walls, _status(not walls), witnesses=[list(w) for w in walls])


# Mukai checks


def check_moduli_dim(inputs: dict, settings: Settings) -> Outcome:
    """Dimension v^2 + 2, with the Chern-class and Euler-characteristic forms compared."""
    pic = _lattice(inputs["lattice"])
    if "mukai" in inputs:
        v = MukaiVector.from_json(inputs["mukai"])
        dim = moduli_dim(pic, v)
        return Outcome(dim, witnesses=[v.to_json()])
    rk, c1, c2 = int(inputs["rk"]), pic.vector(inputs["c1"]), int(inputs["c2"])
    v = mukai_from_chern(pic, rk, c1, c2)
    dim = moduli_dim(pic, v, (rk, c1, c2))
    c1_sq = gram_eval(pic, c1, c1)
    trace = [_record("chern_form", expanded_dim(rk, c1_sq, c2) == dim, value=dim)]
    if rk == 2:
        via_chi = rank2_dim_via_chi(c1_sq, euler_characteristic(rk, c1_sq, c2))
        trace.append(_record("chi_form", via_chi == dim, value=via_chi))
    return Outcome(dim, witnesses=[v.to_json()], trace=trace)


def check_twist(inputs: dict, settings: Settings) -> Outcome:
    pic = _lattice(inputs["lattice"])
    v = MukaiVector.from_json(inputs["mukai"])
    w = twist(pic, v, inputs["twist"])
    preserved = mukai_pairing(pic, v, v) == mukai_pairing(pic, w, w)
    return Outcome(w.to_json(), trace=[_record("square_preserved", preserved)])


def check_n0_constraints(inputs: dict, settings: Settings) -> Outcome:
    n0 = _lattice(inputs["n0"])
    report = n0_chern_constraints(Sublattice.full(n0))
    return Outcome(
        {
            "square": report.square,
            "square_bound_ok": report.square_bound_ok,
            "divisibility_ok": report.divisibility_ok,
        },
        _status(report.passed),
    )


# Chart checks


def _invariant_records(chart, settings: Settings) -> list[TraceRecord]:
    return [
        _record(r.name, r.passed, **r.detail)
        for r in chart_invariants(chart, settings.restriction_samples, settings.seed)
    ]


def check_chart_invariants(inputs: dict, settings: Settings) -> Outcome:
    chart = load_chart(inputs["chart"])
    trace = _invariant_records(chart, settings)
    value = {r.check: r.status == TraceStatus.PASS for r in trace}
    return Outcome(value, _status(all(value.values())), trace=trace)


def _block_value(chart: BlockChart) -> dict:
    return {
        "triple": sparse_triple(chart.triple),
        "c2_pair": list(chart.c2_pair),
        "S_class": list(chart.S_class),
        "centre_genus": chart.centre_genus,
        "restrict_S": [list(row) for row in chart.restriction.matrix],
    }


def check_blowup(inputs: dict, settings: Settings) -> Outcome:
    fano = load_chart(inputs["fano"])
    if inputs.get("base_locus"):
        centre = anticanonical_base_curve(fano)
    else:
        centre = BlowupCentre(tuple(inputs["centre"]["degrees"]), int(inputs["centre"]["genus"]))
    block = blowup_chart(fano, centre, name=inputs.get("name"))
    trace = _invariant_records(block, settings)
    return Outcome(
        _block_value(block),
        _status(all(r.status == TraceStatus.PASS for r in trace)),
        trace=trace,
    )


def check_double_cover(inputs: dict, settings: Settings) -> Outcome:
    base = load_chart(inputs["base"])
    hb = base.vector(inputs["half_branch"])
    cover = double_cover_chart(base, hb, name=inputs.get("name"))
    classes = random_classes(base.rank, settings.restriction_samples, settings.seed)
    oracle = check_double_cover_oracle(base, hb, cover, classes)
    noether = check_noether(cover)
    k = cover.minus_K
    return Outcome(
        {
            "triple": sparse_triple(cover.triple),
            "c2_pair": list(cover.c2_pair),
            "minus_K": list(k),
            "cube": triple(cover, k, k, k),
        },
        _status(oracle.passed and noether.passed),
        trace=[
            _record(noether.name, noether.passed, **noether.detail),
            _record(oracle.name, oracle.passed, **oracle.detail),
        ],
    )


def check_rr_chi(inputs: dict, settings: Settings) -> Outcome:
    chart = load_chart(inputs["chart"])
    return Outcome(rr_chi(chart, inputs["divisor"]))


def check_base_curve(inputs: dict, settings: Settings) -> Outcome:
    centre = anticanonical_base_curve(load_chart(inputs["chart"]))
    return Outcome({"degrees": list(centre.degrees), "genus": centre.genus})


def check_restriction(inputs: dict, settings: Settings) -> Outcome:
    chart = load_chart(inputs["chart"])
    restricted = restrict_to_S(chart, inputs["divisor"])
    N = chart.restriction.lattice
    return Outcome(
        {"restricted": list(restricted), "square": gram_eval(N, restricted, restricted)}
    )


def check_hs_compat(inputs: dict, settings: Settings) -> Outcome:
    ok = hs_compat(_block(inputs["chart"]), inputs["c1L"], inputs["curve"])
    return Outcome(ok, _status(ok))


def check_chi_Lstar(inputs: dict, settings: Settings) -> Outcome:
    chi, ok = chi_Lstar_constraint(_block(inputs["chart"]), inputs["c1L"])
    return Outcome(chi, _status(ok))


# Matching checks


def check_glue(inputs: dict, settings: Settings) -> Outcome:
    cfg = load_configuration(inputs["configuration"])
    orth = ample_orthogonal_to_n0(cfg)
    return Outcome(
        {
            "rank": cfg.glued.rank,
            "signature": list(signature(cfg.glued)),
            "even": cfg.glued.is_even,
            "det": determinant(cfg.glued.gram),
        },
        witnesses=[[list(row) for row in cfg.glued.gram]],
        trace=[_record(f"ample_{side}_orthogonal_to_N0", ok) for side, ok in orth.items()],
        assumptions=[REALISED_CONFIGURATION],
    )


def check_orthogonal_parts(inputs: dict, settings: Settings) -> Outcome:
    cfg = load_configuration(inputs["configuration"])
    parts = orthogonal_parts(cfg)
    return Outcome(
        {"ranks": [p.rank for p in parts]},
        witnesses=[[list(g) for g in p.gens] for p in parts],
    )


def check_prescreen(inputs: dict, settings: Settings) -> Outcome:
    cfg = load_configuration(inputs["configuration"])
    report = step1_prescreen(cfg, int(inputs["k"]), int(inputs.get("bound", 3)))
    return Outcome(
        {
            "witnesses": [list(v) for v in report.square_witnesses],
            "n0_generator": list(report.n0_generator) if report.n0_generator else None,
            "n0_square": report.n0_square,
            "n0_ok": report.n0_ok,
        },
        _status(report.passed),
    )


def check_amp_ray(inputs: dict, settings: Settings) -> Outcome:
    cfg = load_configuration(inputs["configuration"])
    ok = amp_ray_check(cfg)
    return Outcome(
        ok,
        _status(ok),
        witnesses=[list(cfg.r_part(side).gens[0]) for side in (Side.PLUS, Side.MINUS)],
        assumptions=[GENERIC_FAMILY],
    )


def check_embedding(inputs: dict, settings: Settings) -> Outcome:
    cfg = load_configuration(inputs["configuration"])
    report = embedding_necessary_checks(cfg)
    return Outcome(
        {"checks": report.checks, "signature": list(report.signature)},
        _status(report.passed),
        assumptions=[REALISED_CONFIGURATION],
    )


# Search checks


def check_search_constraint(inputs: dict, settings: Settings, name: str) -> Outcome:
    chart = _block(inputs["chart"])
    cfg = load_configuration(inputs["configuration"])
    side = _side(inputs["side"])
    c1L = chart.vector(inputs["c1L"])
    if name == "mod2_membership":
        ok = check_mod2_membership(cfg, chart, c1L, side)
    elif name == "positivity":
        ok = check_positivity(chart, cfg, c1L, side)
    else:
        ok = check_dimension(
            chart,
            cfg,
            c1L,
            inputs["curve"],
            int(inputs.get("k", 1)),
            int(inputs.get("multiplicity", 1)),
            side,
        )
    return Outcome(ok, _status(ok), assumptions=[GENERIC_FIBRE])


def _search_settings(inputs: dict, settings: Settings) -> Settings:
    update = {key: inputs[key] for key in ("twist_radius", "max_scan") if key in inputs}
    return settings.model_copy(update=update)


def check_search_run(inputs: dict, settings: Settings) -> Outcome:
    spec = spec_from_model(parse_model(SearchSpecModel, inputs["search"], "search"))
    result = run_search(spec, _search_settings(inputs, settings))
    found = [
        [p.plus.label, p.plus.curve, p.minus.label, p.minus.curve] for p in result.pairs
    ]
    required = [list(r) for r in inputs.get("require", [])]
    missing = [r for r in required if r not in found]
    return Outcome(
        found,
        _status(bool(found) and not missing),
        trace=[_record("required_pairs_present", not missing, missing=missing)],
        assumptions=list(ASSUMPTIONS[:3]),
    )


def check_verify_candidate(inputs: dict, settings: Settings) -> Outcome:
    spec = spec_from_model(parse_model(SearchSpecModel, inputs["search"], "search"))
    pair = CandidatePair(
        describe_candidate(spec, Side.PLUS, inputs["plus"]["c1L"], inputs["plus"]["curve"]),
        describe_candidate(spec, Side.MINUS, inputs["minus"]["c1L"], inputs["minus"]["curve"]),
        (),
    )
    atts = load_attestations(inputs.get("attestations") or {})
    cert = verify_candidate(spec, pair, (atts.plus, atts.minus), _search_settings(inputs, settings))
    status = {
        Verdict.PASS: TraceStatus.PASS,
        Verdict.FAIL: TraceStatus.FAIL,
        Verdict.INCONCLUSIVE: TraceStatus.INCONCLUSIVE,
    }[cert.verdict]
    return Outcome(
        cert.value,
        status,
        witnesses=cert.witnesses,
        trace=cert.trace,
        attested=cert.attested,
        assumptions=cert.assumptions,
    )


def verify_inputs(
    spec_json: dict,
    plus: tuple[list[int], str],
    minus: tuple[list[int], str],
    attestations: dict | None = None,
    twist_radius: int | None = None,
) -> dict:
    """Inputs of a search.verify_candidate certificate (c1(L) in canonical coordinates)."""
    inputs: dict[str, Any] = {
        "search": spec_json,
        "plus": {"c1L": list(plus[0]), "curve": plus[1]},
        "minus": {"c1L": list(minus[0]), "curve": minus[1]},
        "attestations": attestations,
    }
    if twist_radius is not None:
        inputs["twist_radius"] = twist_radius
    return inputs


CheckFn = Callable[[dict, Settings], Outcome]

CHECKS: dict[str, CheckFn] = {
    "lattice.signature": check_lattice_signature,
    "lattice.is_even": check_lattice_even,
    "lattice.enum_vectors_with_square": check_enum_vectors,
    "lattice.vector_divisibility": check_divisibility,
    "lattice.square": check_square,
    "lattice.saturate": check_saturation,
    "lattice.orth_complement": check_orth_complement,
    "k3.destabilizer_search": check_destabilizers,
    "k3.chamber_check": check_chamber,
    "mukai.moduli_dim": check_moduli_dim,
    "mukai.twist": check_twist,
    "mukai.n0_constraints": check_n0_constraints,
    "chart.invariants": check_chart_invariants,
    "chart.blowup": check_blowup,
    "chart.double_cover": check_double_cover,
    "chart.rr_chi": check_rr_chi,
    "chart.anticanonical_base_curve": check_base_curve,
    "chart.restrict": check_restriction,
    "chart.hs_compat": check_hs_compat,
    "chart.chi_Lstar": check_chi_Lstar,
    "matching.glue": check_glue,
    "matching.orthogonal_parts": check_orthogonal_parts,
    "matching.prescreen": check_prescreen,
    "matching.amp_ray": check_amp_ray,
    "matching.embedding": check_embedding,
    "search.mod2_membership": lambda i, s: check_search_constraint(i, s, "mod2_membership"),
    "search.positivity": lambda i, s: check_search_constraint(i, s, "positivity"),
    "search.dimension": lambda i, s: check_search_constraint(i, s, "dimension"),
    "search.run": check_search_run,
    VERIFY_CHECK_ID: check_verify_candidate,
}


def _compute(check_id: str, inputs: dict, settings: Settings) -> Outcome:
    fn = CHECKS.get(check_id)
    if fn is None:
        raise InputError(f"Unknown check {check_id!r}; known: {sorted(CHECKS)}")
    try:
        return fn(inputs, settings)
    except InconclusiveError as e:
        return Outcome(
            None,
            TraceStatus.INCONCLUSIVE,
            trace=[
                TraceRecord(
                    check="error",
                    status=TraceStatus.INCONCLUSIVE,
                    detail={"message": str(e)},
                )
            ],
        )
    except _FAILING_ERRORS as e:
        logger.info(f"Check {check_id} failed with {type(e).__name__}: {e}")
        return Outcome(
            None,
            TraceStatus.FAIL,
            trace=[
                TraceRecord(
                    check="error",
                    status=TraceStatus.FAIL,
                    detail={"error": type(e).__name__, "message": str(e)},
                )
            ],
        )


def run_check(check_id: str, inputs: dict, settings: Settings | None = None) -> Certificate:
    """Compute one check and wrap it in a certificate."""
    settings = settings or Settings()
    outcome = _compute(check_id, inputs, settings)
    value = _jsonable(outcome.value)
    trace = list(outcome.trace) + [
        TraceRecord(check="result", status=outcome.status, detail={"value": value})
    ]
    computed = combine_verdict(trace)

    if "expected" in inputs or "expected_verdict" in inputs:
        agrees = True
        detail: dict[str, Any] = {
            "computed_verdict": str(computed),
            "subchecks": [r.model_dump(mode="json") for r in trace],
        }
        if "expected" in inputs:
            agrees = agrees and value == inputs["expected"]
            detail.update(expected=inputs["expected"], computed=value)
        if "expected_verdict" in inputs:
            agrees = agrees and str(computed) == inputs["expected_verdict"]
            detail.update(expected_verdict=inputs["expected_verdict"])
        trace = [TraceRecord(check="expectation", status=_status(agrees), detail=detail)]
        verdict = Verdict.PASS if agrees else Verdict.FAIL
    else:
        verdict = computed

    cert = Certificate(
        check_id=check_id,
        inputs=_jsonable(inputs),
        verdict=verdict,
        value=value,
        witnesses=_jsonable(outcome.witnesses),
        assumptions=outcome.assumptions,
        trace=trace,
        attested=outcome.attested,
        tool_version=__version__,
    )
    logger.debug(f"{check_id}: {verdict}")
    return cert


def recheck(cert: Certificate, settings: Settings | None = None) -> tuple[Certificate, bool]:
    """Recompute a certificate from its inputs; agreement means same verdict and value."""
    fresh = run_check(cert.check_id, cert.inputs, settings)
    agrees = fresh.verdict == cert.verdict and fresh.value == cert.value
    if not agrees:
        logger.warning(
            f"Recheck of {cert.check_id} disagrees: stored {cert.verdict} {cert.value}, "
            f"recomputed {fresh.verdict} {fresh.value}"
        )
    return fresh, agrees
