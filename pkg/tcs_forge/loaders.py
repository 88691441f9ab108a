"""Conversion between JSON files, pydantic models and domain objects."""

import json
import logging
from pathlib import Path
from typing import Any, TypeVar

from pydantic import BaseModel, ValidationError

from .charts import (
    BlockChart,
    CurveBasis,
    FanoChart,
    IntersectionChart,
    Restriction,
    dense_triple,
    fano_chart,
    sparse_triple,
)
from .errors import DataFormatError, TcsForgeError
from .k3 import PolarizedK3
from .lattice import IntLattice
from .matching import Configuration, N0Data, build_configuration
from .models import (
    AttestationPairModel,
    ChartModel,
    ConfigurationModel,
    LatticeModel,
    SearchSpecModel,
)

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent / "data"

M = TypeVar("M", bound=BaseModel)


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError as e:
        raise DataFormatError(f"File not found: {path}") from e
    except json.JSONDecodeError as e:
        raise DataFormatError(f"{path} is not valid JSON: {e}") from e


def write_json(path: str | Path, data: Any) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")
    logger.info(f"Wrote {path}")


def parse_model(model: type[M], data: Any, source: str = "input") -> M:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise DataFormatError(f"{source} does not match the {model.__name__} schema:\n{e}") from e


def bundled(name: str) -> Any:
    """Parsed JSON of a shipped data file."""
    return read_json(DATA_DIR / name)


# Lattices


def lattice_from_model(m: LatticeModel) -> IntLattice:
    try:
        return IntLattice(
            tuple(tuple(row) for row in m.gram),
            tuple(m.basis_names) if m.basis_names else None,
        )
    except TcsForgeError as e:
        raise DataFormatError(str(e)) from e


def lattice_to_json(L: IntLattice) -> dict:
    data: dict[str, Any] = {"rank": L.rank, "gram": [list(row) for row in L.gram]}
    if L.basis_names:
        data["basis_names"] = list(L.basis_names)
    return data


def polarized_from_model(m: LatticeModel) -> PolarizedK3:
    if m.ample is None:
        raise DataFormatError("Lattice has no ample class")
    return PolarizedK3(lattice_from_model(m), tuple(m.ample))


# Charts


def chart_from_model(m: ChartModel) -> FanoChart | BlockChart:
    r = len(m.div_basis)
    curves = CurveBasis(tuple(m.curves.names), tuple(tuple(row) for row in m.curves.pair))
    restriction = None
    if m.restrict_S is not None:
        names = m.restrict_S.basis_names
        restriction = Restriction(
            IntLattice(
                tuple(tuple(row) for row in m.restrict_S.gram_N),
                tuple(names) if names else None,
            ),
            tuple(tuple(row) for row in m.restrict_S.matrix),
        )
    try:
        if m.kind == "fano":
            return fano_chart(
                m.name, m.div_basis, m.triple, m.c2_pair, m.minus_K, curves, restriction
            )
        if m.exceptional not in m.div_basis:
            raise DataFormatError(f"Exceptional divisor {m.exceptional!r} is not in div_basis")
        return BlockChart(
            name=m.name,
            div_basis=tuple(m.div_basis),
            triple=dense_triple(r, m.triple),
            c2_pair=tuple(m.c2_pair),
            minus_K=tuple(m.S_class),
            curves=curves,
            restriction=restriction,
            exceptional=m.div_basis.index(m.exceptional),
            centre_genus=m.centre_genus,
        )
    except DataFormatError:
        raise
    except TcsForgeError as e:
        raise DataFormatError(f"Chart {m.name}: {e}") from e


def chart_to_json(C: IntersectionChart) -> dict:
    data: dict[str, Any] = {
        "schema_version": 1,
        "name": C.name,
        "div_basis": list(C.div_basis),
        "triple": sparse_triple(C.triple),
        "c2_pair": list(C.c2_pair),
        "curves": {
            "names": list(C.curves.names),
            "pair": [list(row) for row in C.curves.pair],
        },
        "restrict_S": {
            "gram_N": [list(row) for row in C.restriction.lattice.gram],
            "matrix": [list(row) for row in C.restriction.matrix],
        },
    }
    if C.restriction.lattice.basis_names:
        data["restrict_S"]["basis_names"] = list(C.restriction.lattice.basis_names)
    if isinstance(C, BlockChart):
        data.update(
            kind="block",
            S_class=list(C.S_class),
            exceptional=C.exceptional_name,
            centre_genus=C.centre_genus,
        )
    else:
        data.update(kind="fano", minus_K=list(C.minus_K))
    return data


def load_chart(source: str | Path | dict) -> FanoChart | BlockChart:
    data = read_json(source) if isinstance(source, str | Path) else source
    return chart_from_model(parse_model(ChartModel, data, str(source)[:80]))


# Configurations


def configuration_from_model(m: ConfigurationModel) -> Configuration:
    Np = lattice_from_model(m.Np)
    Nm = lattice_from_model(m.Nm)
    n0 = N0Data(
        IntLattice(tuple(tuple(row) for row in m.N0.gram)),
        tuple(tuple(row) for row in m.N0.embed_p),
        tuple(tuple(row) for row in m.N0.embed_m),
    )
    return build_configuration(
        Np, Nm, n0, m.ample_p, m.ample_m, m.amp_p, m.amp_m, name=m.name
    )


def configuration_to_json(cfg: Configuration) -> dict:
    data: dict[str, Any] = {
        "schema_version": 1,
        "Np": lattice_to_json(cfg.Np),
        "Nm": lattice_to_json(cfg.Nm),
        "N0": {
            "gram": [list(row) for row in cfg.n0.lattice.gram],
            "embed_p": [list(row) for row in cfg.n0.embed_p],
            "embed_m": [list(row) for row in cfg.n0.embed_m],
        },
        "amp_p": [list(c) for c in cfg.amp_p],
        "amp_m": [list(c) for c in cfg.amp_m],
        "ample_p": list(cfg.ample_p),
        "ample_m": list(cfg.ample_m),
    }
    if cfg.name:
        data["name"] = cfg.name
    return data


def load_configuration(source: str | Path | dict) -> Configuration:
    data = read_json(source) if isinstance(source, str | Path) else source
    return configuration_from_model(parse_model(ConfigurationModel, data, str(source)[:80]))


def resolve_search_spec(path: str | Path) -> SearchSpecModel:
    """Parse a search spec file, inlining referenced chart and configuration files."""
    path = Path(path)
    model = parse_model(SearchSpecModel, read_json(path), str(path))
    updates = {}
    for key in ("chart_p", "chart_m"):
        value = getattr(model, key)
        if isinstance(value, str):
            updates[key] = parse_model(ChartModel, read_json(path.parent / value), value)
    if isinstance(model.configuration, str):
        updates["configuration"] = parse_model(
            ConfigurationModel,
            read_json(path.parent / model.configuration),
            model.configuration,
        )
    return model.model_copy(update=updates)


def load_attestations(source: str | Path | dict) -> AttestationPairModel:
    data = read_json(source) if isinstance(source, str | Path) else source
    return parse_model(AttestationPairModel, data, "attestations")
