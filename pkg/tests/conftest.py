import pytest

from tcs_forge.config import Settings
from tcs_forge.hs_search import run_search, spec_from_model
from tcs_forge.k3 import PolarizedK3
from tcs_forge.lattice import IntLattice
from tcs_forge.loaders import (
    DATA_DIR,
    load_attestations,
    load_chart,
    load_configuration,
    resolve_search_spec,
)


@pytest.fixture
def settings():
    """Settings with small oracle samples so tests stay fast."""
    return Settings(
        threads=2,
        restriction_samples=5,
        oracle_radius=8,
        twist_radius=4,
        log_level="DEBUG",
    )


@pytest.fixture
def hyperbolic_plane():
    """The hyperbolic plane U with basis names A, B."""
    return IntLattice(((0, 1), (1, 0)), ("A", "B"))


@pytest.fixture
def fano():
    """Chart of P1 x P2."""
    return load_chart(DATA_DIR / "p1xp2_fano.json")


@pytest.fixture
def plus_block():
    """Blow-up of P1 x P2 along the anticanonical base curve."""
    return load_chart(DATA_DIR / "p1xp2_block.json")


@pytest.fixture
def minus_block():
    """Blow-up of the double cover of P1 x P2 along its base curve."""
    return load_chart(DATA_DIR / "dcover_block.json")


@pytest.fixture
def config():
    """Configuration glued along N0 of square -72."""
    return load_configuration(DATA_DIR / "matching_neg72.json")


@pytest.fixture
def Np(config):
    """Polarized plus-side Picard lattice."""
    return PolarizedK3(config.Np, config.ample_p)


@pytest.fixture
def Nm(config):
    """Polarized minus-side Picard lattice."""
    return PolarizedK3(config.Nm, config.ample_m)


@pytest.fixture
def search_spec():
    """Bundled search over both blocks with k = 1 and box 2."""
    return spec_from_model(resolve_search_spec(DATA_DIR / "search_neg72.json"))


@pytest.fixture
def attestations():
    """Attested cohomology for the known pair."""
    return load_attestations(DATA_DIR / "attestations.json")


@pytest.fixture
def search_result(search_spec, settings):
    """Result of the bundled search."""
    return run_search(search_spec, settings)
