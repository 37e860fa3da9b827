"""Tests for partitioned networks, the scenario builders and network documents."""
from __future__ import annotations

import math

import numpy as np
import pytest

from auxnet.exceptions import ConfigError, DegenerateBond, DimensionMismatch, DomainError
from auxnet.network import (
    DefectChainParams,
    LeeParams,
    PartitionedHamiltonian,
    PtBicParams,
    assemble_composite,
    build_defect_chain,
    build_lee_exact,
    build_lee_synth,
    build_pt_bic,
    build_pt_bic_reference,
    lee_synthesis_values,
    network_from_json,
    network_to_json,
    pt_bic_hopping,
    validate,
)


def _two_site(h_s, h_a=((5.0,),), rho=((1.0, 1.0),)) -> PartitionedHamiltonian:
    return PartitionedHamiltonian(h_s=np.array(h_s), h_a=np.array(h_a), rho=np.array(rho))


# ----------------------------------------------------------------------------
# PartitionedHamiltonian / validate
# ----------------------------------------------------------------------------


def test_shapes_are_checked() -> None:
    """rho must be M x N for an N-site system and an M-site cluster."""
    with pytest.raises(DimensionMismatch):
        PartitionedHamiltonian(h_s=np.eye(3), h_a=np.eye(1), rho=np.ones((1, 2)))
    with pytest.raises(DimensionMismatch):
        PartitionedHamiltonian(h_s=np.ones((2, 3)), h_a=np.eye(1), rho=np.ones((1, 2)))


def test_blocks_are_read_only() -> None:
    """Stored blocks cannot be mutated behind a builder's back."""
    p = _two_site([[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(ValueError):
        p.h_s[0, 0] = 1.0


def test_validate_accepts_complex_potentials() -> None:
    """Complex on-site potentials are allowed anywhere."""
    p = _two_site([[0.3j, 1.0], [1.0, -0.3j]], h_a=[[2.0 - 1.0j]])
    assert validate(p).ok


def test_validate_flags_asymmetric_hopping() -> None:
    """Unequal mirror hoppings are reported once per bond."""
    report = validate(_two_site([[0.0, 1.0], [2.0, 0.0]]))
    assert not report.ok
    assert len(report.violations) == 1
    violation = report.violations[0]
    assert (violation.block, violation.i, violation.j, violation.kind) == ("h_s", 0, 1, "asymmetric")


def test_validate_flags_complex_hopping() -> None:
    """Complex hoppings inside the system are reported on both entries."""
    report = validate(_two_site([[0.0, 1j], [1j, 0.0]]))
    kinds = {(v.block, v.kind) for v in report.violations}
    assert kinds == {("h_s", "complex_hopping")}
    assert len(report.violations) == 2


def test_validate_flags_complex_coupling() -> None:
    """A complex system-cluster coupling is reported with its indices."""
    report = validate(_two_site([[0.0, 1.0], [1.0, 0.0]], rho=[[1.0, 0.5j]]))
    assert [(v.block, v.i, v.j, v.kind) for v in report.violations] == [("rho", 0, 1, "complex_coupling")]


def test_composite_is_block_matrix() -> None:
    """The composite stacks H_S, rho^T, rho and H_A in that order."""
    p = _two_site([[0.0, 1.0], [1.0, 0.0]], h_a=[[5.0]], rho=[[0.5, 0.25]])
    expected = np.array(
        [
            [0.0, 1.0, 0.5],
            [1.0, 0.0, 0.25],
            [0.5, 0.25, 5.0],
        ]
    )
    np.testing.assert_array_equal(assemble_composite(p), expected)


@pytest.mark.parametrize(
    "network",
    [
        build_defect_chain(DefectChainParams.invisible(0.2, -5.0, n_trunc=12)),
        build_lee_synth(LeeParams(n_trunc=20)),
        build_pt_bic(PtBicParams(n_trunc=21)),
    ],
    ids=["defect", "lee_synth", "pt_bic"],
)
def test_builders_satisfy_constraints(network: PartitionedHamiltonian) -> None:
    """Every scenario builder produces a valid, complex-symmetric composite."""
    assert validate(network).ok
    h = assemble_composite(network)
    np.testing.assert_array_equal(h, h.T)


def test_site_mapping() -> None:
    network = build_defect_chain(DefectChainParams(n_trunc=10))
    assert network.site(0) == 9
    assert network.site(-9) == 0
    assert network.site(10) == 19
    with pytest.raises(IndexError):
        network.site(11)


# ----------------------------------------------------------------------------
# Side-coupled defect
# ----------------------------------------------------------------------------


def test_invisible_tuning() -> None:
    """sigma = theta - kappa and omega^2 = U (theta - kappa)."""
    p = DefectChainParams.invisible(0.2, -40.0)
    assert p.sigma == pytest.approx(-0.8)
    assert p.omega == pytest.approx(4.0 * math.sqrt(2.0))


def test_invisible_tuning_needs_real_coupling() -> None:
    """A positive U with theta below kappa has no real side coupling."""
    with pytest.raises(DomainError):
        DefectChainParams.invisible(0.2, 5.0)


def test_defect_params_reject_short_chain() -> None:
    """Chains shorter than the minimum half-width are refused."""
    with pytest.raises(ValueError):
        DefectChainParams(n_trunc=5)


def test_defect_chain_entries() -> None:
    """The defect bond, its potentials and the side coupling land on sites 0 and 1."""
    p = DefectChainParams.invisible(0.2, -5.0, n_trunc=10)
    network = build_defect_chain(p)
    s0, s1 = network.site(0), network.site(1)
    assert network.n_sys == 20
    assert network.h_s[s0, s1] == pytest.approx(0.2)
    assert network.h_s[s0, s0] == pytest.approx(-0.8)
    assert network.h_s[s1, s1] == pytest.approx(-0.8)
    assert network.h_s[s0 - 1, s0] == 1.0
    np.testing.assert_allclose(network.rho[0, [s0, s1]], [2.0, 2.0])
    assert np.count_nonzero(network.rho) == 2
    assert network.h_a[0, 0] == -5.0


def test_homogeneous_defect_is_plain_chain() -> None:
    """Default parameters reproduce the uniform chain."""
    network = build_defect_chain(DefectChainParams(n_trunc=10))
    n = network.n_sys
    chain = np.diag(np.ones(n - 1), 1) + np.diag(np.ones(n - 1), -1)
    np.testing.assert_array_equal(network.h_s, chain)
    assert not np.any(network.rho)


# ----------------------------------------------------------------------------
# Lee model
# ----------------------------------------------------------------------------


def test_lee_exact_entries(lee_params: LeeParams) -> None:
    """Level sigma on site 0, -iG on the first bond and kappa beyond."""
    h = build_lee_exact(lee_params)
    assert h.shape == (301, 301)
    assert h[0, 0] == 3.0
    assert h[0, 1] == h[1, 0] == -1.05j
    assert h[1, 2] == 1.0
    np.testing.assert_array_equal(h, h.T)


def test_lee_exact_hermitian_without_coupling() -> None:
    """At G = 0 the Lee chain is Hermitian."""
    h = build_lee_exact(LeeParams(g_imag=0.0, n_trunc=10))
    np.testing.assert_array_equal(h, h.conj().T)


def test_lee_synthesis_values(lee_params: LeeParams) -> None:
    """U, sigma_1 and sigma_2 of the synthesized Lee model, U close to 11 - 45i."""
    values = lee_synthesis_values(lee_params)
    assert values["sigma_1"] == pytest.approx(3.2 + 1.05j)
    assert values["sigma_2"] == pytest.approx(0.2 + 1.05j)
    assert round(values["u_aux"].real) == 11
    assert round(values["u_aux"].imag) == -45
    assert values["e_ref"].real == pytest.approx(2.4148, abs=1e-3)


def test_lee_synth_network_layout(lee_params: LeeParams) -> None:
    """The synthesized chain has real bonds and a single complex auxiliary site."""
    network = build_lee_synth(lee_params)
    assert network.n_sys == lee_params.n_trunc + 1
    assert network.h_s[0, 1] == pytest.approx(0.2)
    np.testing.assert_allclose(network.rho[0, :2], [7.0, 7.0])
    assert network.h_a[0, 0].imag < 0


def test_lee_synthesis_degenerate_bond() -> None:
    """theta = G = 0 leaves no bond to host the synthesized coupling."""
    p = LeeParams(g_imag=0.0, theta=0.0)
    with pytest.raises(DegenerateBond):
        lee_synthesis_values(p, 0.0)


def test_lee_reference_label_is_checked(lee_params: LeeParams) -> None:
    """Only E1 and E2 name reference energies."""
    with pytest.raises(ValueError):
        lee_synthesis_values(lee_params, "E3")


# ----------------------------------------------------------------------------
# PT-symmetric BIC lattice
# ----------------------------------------------------------------------------


def test_pt_bic_hoppings() -> None:
    assert pt_bic_hopping(2) == pytest.approx(math.sqrt(3.0))
    assert pt_bic_hopping(3) == pytest.approx(math.sqrt(1.0 / 3.0))
    assert pt_bic_hopping(100) == pytest.approx(math.sqrt(101.0 / 99.0))
    with pytest.raises(ValueError):
        pt_bic_hopping(1)


@pytest.mark.parametrize("n", range(2, 60))
def test_pt_bic_hoppings_are_mirror_symmetric(n: int) -> None:
    """kappa_{-n} = kappa_{n+1} for every n."""
    assert pt_bic_hopping(-n) == pytest.approx(pt_bic_hopping(n + 1), rel=1e-15)


def test_pt_bic_params() -> None:
    """Default lattice geometry and the target coupling g = omega^2 / U."""
    p = PtBicParams()
    assert p.n_half == 200
    assert p.g == pytest.approx(2.5)
    with pytest.raises(ValueError):
        PtBicParams(n_trunc=400)
    with pytest.raises(DomainError):
        _ = PtBicParams(u_aux=0.0).g


def test_pt_bic_layout(small_pt_bic: PtBicParams) -> None:
    """The -iU and +iU sites couple to bonds (-1, 0) and (0, 1)."""
    network = build_pt_bic(small_pt_bic)
    zero = network.site(0)
    assert network.h_s[zero, zero - 1] == 0
    assert network.h_s[zero, zero + 1] == 0
    assert network.h_s[zero + 1, zero + 2] == pytest.approx(math.sqrt(3.0))
    np.testing.assert_allclose(np.diag(network.h_a), [-0.4j, 0.4j])
    assert list(np.flatnonzero(network.rho[0])) == [zero - 1, zero]
    assert list(np.flatnonzero(network.rho[1])) == [zero, zero + 1]


def test_pt_bic_reference_bonds(small_pt_bic: PtBicParams) -> None:
    """The reference lattice carries -ig and +ig on the two central bonds."""
    h = build_pt_bic_reference(small_pt_bic)
    zero = small_pt_bic.n_half
    assert h[zero, zero - 1] == pytest.approx(-2.5j)
    assert h[zero, zero + 1] == pytest.approx(2.5j)
    np.testing.assert_array_equal(h, h.T)


# ----------------------------------------------------------------------------
# Network documents
# ----------------------------------------------------------------------------


def test_document_round_trip() -> None:
    """A network survives serialization to its JSON document unchanged."""
    network = build_lee_synth(LeeParams(n_trunc=8))
    restored = network_from_json(network_to_json(network))
    np.testing.assert_array_equal(restored.h_s, network.h_s)
    np.testing.assert_array_equal(restored.h_a, network.h_a)
    np.testing.assert_array_equal(restored.rho, network.rho)
    assert (restored.offset, restored.name) == (0, "lee_synth")


def _doc(**overrides) -> dict:
    doc = {
        "schema_version": 1,
        "n_sys": 2,
        "m_aux": 1,
        "h_s": [[0, 1, 1.0, 0.0], [1, 0, 1.0, 0.0]],
        "h_a": [[0, 0, -3.0, -1.0]],
        "rho": [[0, 0, 0.5, 0.0]],
    }
    doc.update(overrides)
    return doc


def test_document_parses_triplets() -> None:
    """Triplets fill both blocks at the given indices."""
    network = network_from_json(_doc())
    assert network.h_a[0, 0] == -3.0 - 1.0j
    assert network.rho[0, 1] == 0.0


@pytest.mark.parametrize(
    "doc",
    [
        _doc(schema_version=2),
        _doc(extra=True),
        _doc(h_s=[[0, 1, 1.0]]),
        _doc(rho=[[0, 5, 1.0, 0.0]]),
    ],
    ids=["version", "unknown-key", "short-triplet", "index-out-of-range"],
)
def test_document_rejected(doc: dict) -> None:
    """Malformed network documents are configuration errors."""
    with pytest.raises(ConfigError):
        network_from_json(doc)
