"""Search for Hartshorne-Serre parameters (c1(L), W) on a pair of building blocks.

A rank-2 bundle E on a block Z comes from a line bundle L and a rational curve
W. Its restriction to the anticanonical K3 fibre S has rank 2, c1 = c1(L)|_S
and c2 = S.W. A candidate on each side must satisfy numeric constraints
(mod-2 membership in N0, positivity, Hartshorne-Serre compatibility, moduli
dimension 2k, chi(L*) <= 0, stability), and the two restrictions must become
the same Mukai vector on N0 after twisting by line bundles.
"""

import itertools
import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any

from . import __version__, linalg
from .charts import (
    BlockChart,
    HSNumericDatum,
    chart_invariants,
    chi_Lstar_constraint,
    conormal_degree_check,
    curve_degree,
    expected_conormal_degree,
    format_search_class,
    from_search_coordinates,
    hs_compat,
    inelasticity_check,
    restrict_to_S,
    to_search_coordinates,
)
from .config import Settings
from .errors import (
    ConfigurationError,
    DataFormatError,
    InconclusiveError,
    InputError,
    SearchOverflowError,
)
from .k3 import StabilityVerdict, destabilizer_search
from .lattice import LatticeVector, gram_eval
from .loaders import (
    chart_from_model,
    chart_to_json,
    configuration_from_model,
    configuration_to_json,
)
from .matching import Configuration, Side
from .models import (
    Attestation,
    AttestedFact,
    Certificate,
    ChartModel,
    ConfigurationModel,
    SearchSpecModel,
    TraceRecord,
    TraceStatus,
    combine_verdict,
)
from .mukai import (
    MukaiVector,
    c2_from_mukai,
    euler_characteristic,
    moduli_dim,
    mukai_from_chern,
    twist,
)

logger = logging.getLogger(__name__)

VERIFY_CHECK_ID = "search.verify_candidate"

ASSUMPTIONS = (
    "Pic(S)=N for generic S: congruences mod 2Pic(S) are checked mod 2N",
    "(N, amp)-generic families: the restriction of Pic(Z) to the generic fibre is N",
    "configuration realised in the K3 lattice: only necessary embedding conditions are checked",
    "attested cohomology facts are taken as given with their provenance",
)

# Cheap checks first; the scan stops at the first failure
CHECK_ORDER = (
    "positivity",
    "mod2_membership",
    "hs_compat",
    "dimension",
    "chi_Lstar",
    "stability",
    "moduli_dim",
)


@dataclass(frozen=True)
class SearchSpec:
    """Inputs of one search; the charts are stored in canonical (name-sorted) order."""

    chart_p: BlockChart
    chart_m: BlockChart
    cfg: Configuration
    k: int = 1
    box: int = 2
    curve_classes_m: tuple[str, ...] = ("h",)
    plus_curve: str = "l"

    def __post_init__(self):
        if self.k < 1:
            raise InputError(f"k must be at least 1, got {self.k}")
        if self.box < 0:
            raise InputError(f"box must be non-negative, got {self.box}")
        object.__setattr__(self, "chart_p", self.chart_p.canonical())
        object.__setattr__(self, "chart_m", self.chart_m.canonical())
        object.__setattr__(self, "curve_classes_m", tuple(self.curve_classes_m))
        for side in (Side.PLUS, Side.MINUS):
            chart = self.chart(side)
            if chart.restriction.lattice.gram != self.cfg.lattice(side).gram:
                raise ConfigurationError(
                    f"Chart {chart.name} restricts to a lattice with Gram "
                    f"{chart.restriction.lattice.gram}, configuration has "
                    f"{self.cfg.lattice(side).gram} on the {side} side"
                )
        self.chart_p.curves.index(self.plus_curve)
        for name in self.curve_classes_m:
            self.chart_m.curves.index(name)

    def chart(self, side: Side) -> BlockChart:
        return self.chart_p if side == Side.PLUS else self.chart_m

    def multiplicity(self, side: Side) -> int:
        """W+ is k disjoint exceptional fibres; W- is a single curve."""
        return self.k if side == Side.PLUS else 1

    def curves(self, side: Side) -> tuple[str, ...]:
        return (self.plus_curve,) if side == Side.PLUS else self.curve_classes_m

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "chart_p": chart_to_json(self.chart_p),
            "chart_m": chart_to_json(self.chart_m),
            "configuration": configuration_to_json(self.cfg),
            "k": self.k,
            "box": self.box,
            "plus_curve": self.plus_curve,
            "curve_classes_m": list(self.curve_classes_m),
        }


def spec_from_model(m: SearchSpecModel) -> SearchSpec:
    """Build a SearchSpec from a model whose charts and configuration are inline."""
    if not isinstance(m.chart_p, ChartModel) or not isinstance(m.chart_m, ChartModel):
        raise DataFormatError("Search spec charts must be resolved before building")
    if not isinstance(m.configuration, ConfigurationModel):
        raise DataFormatError("Search spec configuration must be resolved before building")
    charts = []
    for label, model in (("chart_p", m.chart_p), ("chart_m", m.chart_m)):
        chart = chart_from_model(model)
        if not isinstance(chart, BlockChart):
            raise DataFormatError(f"{label} must be a block chart, got kind {model.kind!r}")
        charts.append(chart)
    return SearchSpec(
        chart_p=charts[0],
        chart_m=charts[1],
        cfg=configuration_from_model(m.configuration),
        k=m.k,
        box=m.box,
        curve_classes_m=tuple(m.curve_classes_m),
        plus_curve=m.plus_curve,
    )


@dataclass(frozen=True)
class HSCandidate:
    side: Side
    c1L: LatticeVector
    coeffs: LatticeVector
    label: str
    curve: str
    multiplicity: int
    restricted: LatticeVector
    c2: int
    mukai: MukaiVector
    chi_Lstar: int

    @property
    def sort_key(self) -> tuple:
        return (self.curve, self.coeffs)

    def to_json(self) -> dict:
        return {
            "side": str(self.side),
            "c1L": list(self.c1L),
            "label": self.label,
            "curve": self.curve,
            "multiplicity": self.multiplicity,
            "restricted_c1": list(self.restricted),
            "c2": self.c2,
            "mukai": self.mukai.to_json(),
            "chi_Lstar": self.chi_Lstar,
        }


@dataclass(frozen=True)
class TwistMatch:
    """Twists m+ and m- carrying both restrictions to one Mukai vector on N0."""

    target: MukaiVector  # lattice part in N0 coordinates
    twist_p: LatticeVector
    twist_m: LatticeVector

    def to_json(self) -> dict:
        return {
            "target": self.target.to_json(),
            "twist_p": list(self.twist_p),
            "twist_m": list(self.twist_m),
        }


@dataclass(frozen=True)
class CandidatePair:
    plus: HSCandidate
    minus: HSCandidate
    matches: tuple[TwistMatch, ...]
    checks: dict[str, TraceStatus] = field(default_factory=dict)
    certificate: Certificate | None = None

    def to_json(self) -> dict:
        return {
            "plus": self.plus.to_json(),
            "minus": self.minus.to_json(),
            "matches": [m.to_json() for m in self.matches],
            "checks": {k: str(v) for k, v in sorted(self.checks.items())},
            "certificate": self.certificate.model_dump(mode="json")
            if self.certificate
            else None,
        }


@dataclass
class SearchResult:
    pairs: list[CandidatePair]
    candidates_p: list[HSCandidate]
    candidates_m: list[HSCandidate]
    rejections: list[tuple[str, str, str]]
    scanned: int


# Constraint checks


def _in_span_mod2(x: Sequence[int], gens: Sequence[Sequence[int]]) -> bool:
    """Is x congruent mod 2 to an integer combination of gens? Elimination over F2."""
    pivots: list[tuple[int, list[int]]] = []
    for g in gens:
        row = [c % 2 for c in g]
        for col, p in pivots:
            if row[col]:
                row = [a ^ b for a, b in zip(row, p, strict=True)]
        lead = next((i for i, c in enumerate(row) if c), None)
        if lead is not None:
            pivots.append((lead, row))
    target = [c % 2 for c in x]
    for col, p in pivots:
        if target[col]:
            target = [a ^ b for a, b in zip(target, p, strict=True)]
    return not any(target)


def check_mod2_membership(
    cfg: Configuration, chart: BlockChart, c1L: Sequence[int], side: Side
) -> bool:
    """c1(L)|_S lies in N0 + 2N."""
    restricted = restrict_to_S(chart, c1L)
    return _in_span_mod2(restricted, cfg.n0_in(side).gens)


def check_positivity(
    chart: BlockChart, cfg: Configuration, c1L: Sequence[int], side: Side
) -> bool:
    restricted = restrict_to_S(chart, c1L)
    return gram_eval(cfg.lattice(side), restricted, cfg.ample(side)) > 0


def check_dimension(
    chart: BlockChart,
    cfg: Configuration,
    c1L: Sequence[int],
    W: str,
    k: int,
    multiplicity: int = 1,
    side: Side = Side.MINUS,
) -> bool:
    """4 S.W - c1(L|_S)^2 - 6 = 2k, with W taken with multiplicity.

    For W+ = k exceptional fibres this is c1^2 = 2k - 6. For a single W- it
    reads S.W - c1^2/4 = (2k + 6)/4. That equals k + 1 exactly when k = 1,
    where both sides read S.W - c1^2/4 = 2.
    """
    restricted = restrict_to_S(chart, c1L)
    sq = gram_eval(cfg.lattice(side), restricted, restricted)
    s_dot_w = multiplicity * curve_degree(chart, chart.S_class, W)
    return 4 * s_dot_w - sq - 6 == 2 * k


def _evaluate(
    spec: SearchSpec,
    side: Side,
    c1L: LatticeVector,
    curve: str,
    exhaustive: bool,
) -> tuple[list[TraceRecord], HSCandidate | None]:
    """Run the per-side constraints on one (c1(L), W).

    With exhaustive=False evaluation stops at the first failure.
    """
    chart = spec.chart(side)
    cfg = spec.cfg
    pic = cfg.lattice(side)
    mult = spec.multiplicity(side)
    restricted = restrict_to_S(chart, c1L)
    c1_sq = gram_eval(pic, restricted, restricted)
    c2 = mult * curve_degree(chart, chart.S_class, curve)
    records: list[TraceRecord] = []
    failed = False
    ample_degree = gram_eval(pic, restricted, cfg.ample(side))

    for name in CHECK_ORDER:
        detail: dict[str, Any] = {}
        if name == "positivity":
            ok = check_positivity(chart, cfg, c1L, side)
            detail = {"degree": ample_degree}
        elif name == "mod2_membership":
            ok = check_mod2_membership(cfg, chart, c1L, side)
            detail = {"restricted": list(restricted)}
        elif name == "hs_compat":
            ok = hs_compat(chart, c1L, curve)
            detail = {"curve": curve}
        elif name == "dimension":
            ok = check_dimension(chart, cfg, c1L, curve, spec.k, mult, side)
            detail = {"c1_square": c1_sq, "S.W": c2, "k": spec.k}
        elif name == "chi_Lstar":
            chi, ok = chi_Lstar_constraint(chart, c1L)
            detail = {"chi": chi}
        elif name == "stability":
            if ample_degree <= 0:
                records.append(
                    TraceRecord(
                        check=f"{side}.{name}",
                        status=TraceStatus.INCONCLUSIVE,
                        detail={"reason": "stability criterion needs positive slope"},
                    )
                )
                failed = True
                if not exhaustive:
                    return records, None
                continue
            report = destabilizer_search(cfg.polarized(side), restricted, 2)
            ok = report.verdict == StabilityVerdict.STABLE
            detail = {
                "verdict": str(report.verdict),
                "slope": str(report.slope),
                "witnesses": [list(w.cls) for w in report.witnesses],
            }
        else:
            v = mukai_from_chern(pic, 2, restricted, c2)
            dim = moduli_dim(pic, v, (2, restricted, c2))
            ok = dim == 2 * spec.k
            detail = {"dimension": dim, "mukai": v.to_json()}
        records.append(
            TraceRecord(
                check=f"{side}.{name}",
                status=TraceStatus.PASS if ok else TraceStatus.FAIL,
                detail=detail,
            )
        )
        if not ok:
            failed = True
            if not exhaustive:
                return records, None
    if failed:
        return records, None
    return records, describe_candidate(spec, side, c1L, curve)


def describe_candidate(
    spec: SearchSpec, side: Side, c1L: Sequence[int], curve: str
) -> HSCandidate:
    """Numeric data of (c1(L), W) without judging it."""
    chart = spec.chart(side)
    c1L = chart.vector(c1L)
    mult = spec.multiplicity(side)
    restricted = restrict_to_S(chart, c1L)
    c2 = mult * curve_degree(chart, chart.S_class, curve)
    return HSCandidate(
        side=side,
        c1L=c1L,
        coeffs=to_search_coordinates(chart, c1L),
        label=format_search_class(chart, c1L),
        curve=curve,
        multiplicity=mult,
        restricted=restricted,
        c2=c2,
        mukai=mukai_from_chern(spec.cfg.lattice(side), 2, restricted, c2),
        chi_Lstar=chi_Lstar_constraint(chart, c1L)[0],
    )


def evaluate_candidate(
    spec: SearchSpec, side: Side, c1L: Sequence[int], curve: str
) -> tuple[list[TraceRecord], HSCandidate | None]:
    """Every per-side check on one (c1(L), W) in canonical chart coordinates."""
    return _evaluate(spec, side, spec.chart(side).vector(c1L), curve, exhaustive=True)


# Twist matching


def twist_targets(
    cfg: Configuration, side: Side, v: MukaiVector, radius: int
) -> dict[tuple, LatticeVector]:
    """Mukai vectors on N0 reachable from v by twisting, keyed by (r, N0 coords, s).

    The lexicographically first twist is kept for each target.
    """
    pic = cfg.lattice(side)
    box = range(-radius, radius + 1)
    targets: dict[tuple, LatticeVector] = {}
    for m in itertools.product(box, repeat=pic.rank):
        w = twist(pic, v, m)
        coords = cfg.n0_coordinates(side, w.l)
        if coords is None:
            continue
        targets.setdefault((w.r, coords, w.s), m)
    return targets


def _common_targets(
    plus: dict[tuple, LatticeVector], minus: dict[tuple, LatticeVector]
) -> tuple[TwistMatch, ...]:
    return tuple(
        TwistMatch(MukaiVector(key[0], key[1], key[2]), plus[key], minus[key])
        for key in sorted(plus.keys() & minus.keys())
    )


def match_twists(
    cfg: Configuration, plus: HSCandidate, minus: HSCandidate, radius: int
) -> tuple[TwistMatch, ...]:
    return _common_targets(
        twist_targets(cfg, Side.PLUS, plus.mukai, radius),
        twist_targets(cfg, Side.MINUS, minus.mukai, radius),
    )


def twisted_bundle_report(cfg: Configuration, match: TwistMatch) -> dict:
    """Chern data of the twisted rank-2 bundle whose restriction has the common vector."""
    n0 = cfg.n0.lattice
    target = match.target
    coords = target.l
    c1_sq = gram_eval(n0, coords, coords)
    c2 = c2_from_mukai(n0, target)
    chi = euler_characteristic(target.r, c1_sq, c2)
    primitive = bool(coords) and math.gcd(*coords) == 1
    return {
        "rank": target.r,
        "c1_in_N0": list(coords),
        "c1_in_Np": list(linalg.vec_mat(coords, cfg.n0.embed_p, cfg.Np.rank)),
        "c1_in_Nm": list(linalg.vec_mat(coords, cfg.n0.embed_m, cfg.Nm.rank)),
        "c1_square": c1_sq,
        "c2": c2,
        "chi": chi,
        "chi_nonpositive": chi <= 0,
        "c1_primitive_in_N0": primitive,
    }


# Verification


def _attestation_records(
    spec: SearchSpec, side: Side, candidate: HSCandidate, att: Attestation | None
) -> tuple[list[TraceRecord], list[AttestedFact]]:
    chart = spec.chart(side)
    datum = HSNumericDatum(candidate.c1L, candidate.curve, candidate.multiplicity, att)
    expected = expected_conormal_degree(chart, candidate.c1L, candidate.curve)
    if att is None:
        reason = {"reason": "no attested cohomology", "expected_degree": expected}
        return [
            TraceRecord(
                check=f"{side}.conormal_degree",
                status=TraceStatus.INCONCLUSIVE,
                detail=reason,
            ),
            TraceRecord(
                check=f"{side}.inelasticity",
                status=TraceStatus.INCONCLUSIVE,
                detail={"reason": "no attested cohomology"},
            ),
        ], []

    facts = [
        AttestedFact(side=str(side), fact=name, value=value, provenance=att.provenance)
        for name, value in (
            ("h0_E", att.h0_E),
            ("conormal_split", list(att.conormal_split)),
            ("h1_Lstar_zero", att.h1_Lstar_zero),
            ("h2_Lstar_zero", att.h2_Lstar_zero),
            ("h1_E_zero", att.h1_E_zero),
        )
    ]
    records = [
        TraceRecord(
            check=f"{side}.attested_cohomology",
            status=TraceStatus.ATTESTED,
            detail={"provenance": att.provenance},
        ),
        TraceRecord(
            check=f"{side}.h2_Lstar_vanishing",
            status=TraceStatus.ATTESTED if att.h2_Lstar_zero else TraceStatus.INCONCLUSIVE,
            detail={"h2_Lstar_zero": att.h2_Lstar_zero},
        ),
    ]
    ok = conormal_degree_check(chart, datum)
    records.append(
        TraceRecord(
            check=f"{side}.conormal_degree",
            status=TraceStatus.PASS if ok else TraceStatus.FAIL,
            detail={"split": list(att.conormal_split), "expected_degree": expected},
        )
    )
    try:
        ok = inelasticity_check(2 * spec.k, datum)
        records.append(
            TraceRecord(
                check=f"{side}.inelasticity",
                status=TraceStatus.PASS if ok else TraceStatus.FAIL,
                detail={"dimension": 2 * spec.k, "h0_E": att.h0_E},
            )
        )
    except InconclusiveError as e:
        records.append(
            TraceRecord(
                check=f"{side}.inelasticity",
                status=TraceStatus.INCONCLUSIVE,
                detail={"reason": str(e)},
            )
        )
    return records, facts


def verify_candidate(
    spec: SearchSpec,
    pair: CandidatePair,
    data: tuple[Attestation | None, Attestation | None] = (None, None),
    settings: Settings | None = None,
) -> Certificate:
    """Re-run every numeric check on a pair, then the attested inelasticity checks.

    Args:
        spec: Search inputs the pair was found with
        pair: Candidate pair (c1(L) in canonical chart coordinates)
        data: Attested cohomology for the plus and minus bundles

    Returns:
        Certificate; inconclusive when attestations are missing, fail when any
        numeric or attested check fails.
    """
    settings = settings or Settings()
    trace: list[TraceRecord] = []
    attested: list[AttestedFact] = []
    candidates = {}
    for side, given in ((Side.PLUS, pair.plus), (Side.MINUS, pair.minus)):
        records, _ = evaluate_candidate(spec, side, given.c1L, given.curve)
        trace.extend(records)
        candidates[side] = describe_candidate(spec, side, given.c1L, given.curve)

    matches = match_twists(
        spec.cfg, candidates[Side.PLUS], candidates[Side.MINUS], settings.twist_radius
    )
    trace.append(
        TraceRecord(
            check="twist_matching",
            status=TraceStatus.PASS if matches else TraceStatus.FAIL,
            detail={
                "radius": settings.twist_radius,
                "common": [m.to_json() for m in matches],
            },
        )
    )

    for side, att in ((Side.PLUS, data[0]), (Side.MINUS, data[1])):
        records, facts = _attestation_records(spec, side, candidates[side], att)
        trace.extend(records)
        attested.extend(facts)

    verdict = combine_verdict(trace)
    logger.info(
        f"Verified pair ({pair.plus.label}, {pair.plus.curve}) / "
        f"({pair.minus.label}, {pair.minus.curve}): {verdict}"
    )
    return Certificate(
        check_id=VERIFY_CHECK_ID,
        inputs={
            "search": spec.to_json(),
            "plus": {"c1L": list(pair.plus.c1L), "curve": pair.plus.curve},
            "minus": {"c1L": list(pair.minus.c1L), "curve": pair.minus.curve},
            "attestations": {
                "plus": data[0].model_dump(mode="json") if data[0] else None,
                "minus": data[1].model_dump(mode="json") if data[1] else None,
            },
            "twist_radius": settings.twist_radius,
        },
        verdict=verdict,
        value={
            "plus": [pair.plus.label, pair.plus.curve],
            "minus": [pair.minus.label, pair.minus.curve],
            "k": spec.k,
        },
        witnesses=[
            {**m.to_json(), "twisted_bundle": twisted_bundle_report(spec.cfg, m)}
            for m in matches
        ],
        assumptions=list(ASSUMPTIONS),
        trace=trace,
        attested=attested,
        tool_version=__version__,
    )


# Enumeration


def _scan_slice(
    spec: SearchSpec, side: Side, curve: str, first: int
) -> tuple[list[HSCandidate], list[tuple[str, str, str]]]:
    chart = spec.chart(side)
    box = range(-spec.box, spec.box + 1)
    accepted: list[HSCandidate] = []
    rejected: list[tuple[str, str, str]] = []
    for rest in itertools.product(box, repeat=chart.rank - 1):
        coeffs = (first,) + rest
        c1L = from_search_coordinates(chart, coeffs)
        records, candidate = _evaluate(spec, side, c1L, curve, exhaustive=False)
        if candidate is None:
            failed = records[-1].check.split(".", 1)[1]
            rejected.append((str(side), curve, failed))
            logger.debug(f"{side} {format_search_class(chart, c1L)} with {curve}: {failed}")
        else:
            accepted.append(candidate)
    return accepted, rejected


def _scan_side(
    spec: SearchSpec, side: Side, executor: ThreadPoolExecutor
) -> tuple[list[HSCandidate], list[tuple[str, str, str]]]:
    tasks = [
        (curve, first)
        for curve in spec.curves(side)
        for first in range(-spec.box, spec.box + 1)
    ]
    accepted: list[HSCandidate] = []
    rejected: list[tuple[str, str, str]] = []
    for acc, rej in executor.map(lambda t: _scan_slice(spec, side, *t), tasks):
        accepted.extend(acc)
        rejected.extend(rej)
    accepted.sort(key=lambda c: c.sort_key)
    return accepted, rejected


def scan_size(spec: SearchSpec) -> int:
    width = 2 * spec.box + 1
    return sum(
        len(spec.curves(side)) * width ** spec.chart(side).rank
        for side in (Side.PLUS, Side.MINUS)
    )


def run_search(spec: SearchSpec, settings: Settings | None = None) -> SearchResult:
    """Scan both sides, pair the survivors by twist matching and certify each pair.

    Raises:
        SearchOverflowError: if the box would scan more classes than settings.max_scan
    """
    settings = settings or Settings()
    size = scan_size(spec)
    if size > settings.max_scan:
        raise SearchOverflowError(
            f"Box {spec.box} scans {size} classes, above the cap of {settings.max_scan}; "
            "shrink the box or raise TCS_FORGE_MAX_SCAN"
        )
    for side in (Side.PLUS, Side.MINUS):
        results = chart_invariants(
            spec.chart(side), settings.restriction_samples, settings.seed
        )
        failing = [r.name for r in results if not r.passed]
        if failing:
            raise ConfigurationError(
                f"Chart {spec.chart(side).name} fails invariants: {', '.join(failing)}"
            )

    logger.info(
        f"Scanning {size} classes (box {spec.box}, k={spec.k}) with {settings.threads} threads"
    )
    with ThreadPoolExecutor(max_workers=settings.threads) as executor:
        plus, rejected_p = _scan_side(spec, Side.PLUS, executor)
        minus, rejected_m = _scan_side(spec, Side.MINUS, executor)
    logger.info(f"Side candidates: {len(plus)} plus, {len(minus)} minus")

    targets_p = [twist_targets(spec.cfg, Side.PLUS, c.mukai, settings.twist_radius) for c in plus]
    targets_m = [twist_targets(spec.cfg, Side.MINUS, c.mukai, settings.twist_radius) for c in minus]
    pairs = []
    for cp, tp in zip(plus, targets_p, strict=True):
        for cm, tm in zip(minus, targets_m, strict=True):
            matches = _common_targets(tp, tm)
            if not matches:
                continue
            pair = CandidatePair(cp, cm, matches)
            certificate = verify_candidate(spec, pair, settings=settings)
            pairs.append(
                replace(
                    pair,
                    checks={r.check: r.status for r in certificate.trace},
                    certificate=certificate,
                )
            )
    logger.info(f"Found {len(pairs)} candidate pairs")
    return SearchResult(
        pairs=pairs,
        candidates_p=plus,
        candidates_m=minus,
        rejections=rejected_p + rejected_m,
        scanned=size,
    )


def enumerate_candidates(
    spec: SearchSpec, settings: Settings | None = None
) -> list[CandidatePair]:
    return run_search(spec, settings).pairs
