"""Pydantic models for tcs_forge file formats and certificates."""

import json
from enum import StrEnum
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SCHEMA_VERSION = 1


class Verdict(StrEnum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


class TraceStatus(StrEnum):
    PASS = "pass"
    FAIL = "fail"
    ATTESTED = "attested"
    INCONCLUSIVE = "inconclusive"


class LatticeModel(BaseModel):
    """Integer lattice, optionally with an ample class."""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = SCHEMA_VERSION
    rank: int | None = None
    gram: list[list[int]]
    basis_names: list[str] | None = None
    ample: list[int] | None = None

    @model_validator(mode="after")
    def check_shape(self):
        n = len(self.gram)
        if self.rank is not None and self.rank != n:
            raise ValueError(f"rank {self.rank} does not match a {n}x{n} Gram matrix")
        if any(len(row) != n for row in self.gram):
            raise ValueError("Gram matrix must be square")
        if self.ample is not None and len(self.ample) != n:
            raise ValueError("ample class length does not match the rank")
        return self


class N0Model(BaseModel):
    model_config = ConfigDict(extra="forbid")

    gram: list[list[int]]
    embed_p: list[list[int]]
    embed_m: list[list[int]]


class ConfigurationModel(BaseModel):
    """Gluing data for a pair of Picard lattices along a common N0."""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = SCHEMA_VERSION
    name: str | None = None
    Np: LatticeModel
    Nm: LatticeModel
    N0: N0Model
    amp_p: list[list[int]] = Field(default_factory=list)
    amp_m: list[list[int]] = Field(default_factory=list)
    ample_p: list[int]
    ample_m: list[int]


class CurvesModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    names: list[str]
    pair: list[list[int]]


class RestrictionModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    gram_N: list[list[int]]
    matrix: list[list[int]]
    basis_names: list[str] | None = None


class ChartModel(BaseModel):
    """Intersection ring of a Fano threefold or a building block."""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = SCHEMA_VERSION
    name: str
    kind: Literal["fano", "block"]
    div_basis: list[str]
    triple: list[list[int]]
    c2_pair: list[int]
    minus_K: list[int] | None = None
    S_class: list[int] | None = None
    exceptional: str | None = None
    centre_genus: int | None = None
    curves: CurvesModel
    restrict_S: RestrictionModel | None = None

    @model_validator(mode="after")
    def check_kind(self):
        if self.kind == "fano":
            if self.minus_K is None:
                raise ValueError("Fano charts need minus_K")
            if self.S_class is not None or self.exceptional is not None:
                raise ValueError("Fano charts carry no S_class or exceptional divisor")
        else:
            missing = [
                name
                for name in ("S_class", "exceptional", "centre_genus", "restrict_S")
                if getattr(self, name) is None
            ]
            if missing:
                raise ValueError(f"Block charts need {', '.join(missing)}")
            if self.minus_K is not None:
                raise ValueError("Block charts give S_class, not minus_K")
        return self


class BlowupCentreModel(BaseModel):
    """Smooth curve in a Fano threefold: degrees against the divisor basis and genus."""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = SCHEMA_VERSION
    degrees: list[int]
    genus: int = Field(ge=0)


class Attestation(BaseModel):
    """Sheaf-cohomology facts proven by hand, carried as data with provenance."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    h0_E: int = Field(ge=0)
    conormal_split: tuple[int, int]
    h1_Lstar_zero: bool
    h2_Lstar_zero: bool
    h1_E_zero: bool
    provenance: str

    @field_validator("provenance")
    @classmethod
    def provenance_not_empty(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("attested facts need a non-empty provenance")
        return v


class AttestationPairModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = SCHEMA_VERSION
    plus: Attestation | None = None
    minus: Attestation | None = None


class SearchSpecModel(BaseModel):
    """Search for Hartshorne-Serre parameters on a pair of block charts."""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = SCHEMA_VERSION
    chart_p: str | ChartModel
    chart_m: str | ChartModel
    configuration: str | ConfigurationModel
    k: int = Field(default=1, ge=1)
    box: int = Field(default=2, ge=0)
    plus_curve: str = "l"
    curve_classes_m: list[str]


class TraceRecord(BaseModel):
    model_config = ConfigDict(extra="forbid")

    check: str
    status: TraceStatus
    detail: dict[str, Any] = Field(default_factory=dict)


class AttestedFact(BaseModel):
    model_config = ConfigDict(extra="forbid")

    side: str
    fact: str
    value: Any
    provenance: str


def combine_verdict(trace: list[TraceRecord]) -> Verdict:
    """Fail beats inconclusive beats pass; attested records count as pass."""
    statuses = {record.status for record in trace}
    if TraceStatus.FAIL in statuses:
        return Verdict.FAIL
    if TraceStatus.INCONCLUSIVE in statuses:
        return Verdict.INCONCLUSIVE
    return Verdict.PASS


class Certificate(BaseModel):
    """Replayable verdict of one check with its inputs, witnesses and trace."""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = SCHEMA_VERSION
    check_id: str
    inputs: dict[str, Any]
    verdict: Verdict
    value: Any = None
    witnesses: list[Any] = Field(default_factory=list)
    assumptions: list[str] = Field(default_factory=list)
    trace: list[TraceRecord] = Field(default_factory=list)
    attested: list[AttestedFact] = Field(default_factory=list)
    tool_version: str

    @model_validator(mode="after")
    def pass_means_clean_trace(self):
        if self.verdict == Verdict.PASS and any(
            r.status in (TraceStatus.FAIL, TraceStatus.INCONCLUSIVE) for r in self.trace
        ):
            raise ValueError("a passing certificate cannot contain failed sub-checks")
        return self

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.model_validate_json(text)
