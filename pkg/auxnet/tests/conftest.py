"""Test fixtures for auxnet tests."""
from __future__ import annotations

import pytest
from hypothesis import settings

from auxnet.network import LeeParams, PtBicParams

# Dense eigenproblems make single examples slow; keep property runs short.
settings.register_profile("auxnet", max_examples=25, deadline=None)
settings.load_profile("auxnet")


@pytest.fixture
def lee_params() -> LeeParams:
    """The two-bound-state Lee model (sigma = 3, G = 1.05)."""
    return LeeParams()


@pytest.fixture
def small_pt_bic() -> PtBicParams:
    """A 41-site BIC lattice; cheap enough for unit tests."""
    return PtBicParams(n_trunc=41)
