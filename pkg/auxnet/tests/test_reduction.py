"""Tests for the elimination of auxiliary clusters.

The exact reduction is checked against hand-computed cases, its complex
symmetry and reality properties and the composite spectrum; the Markov
correction against direct quadrature of its defining integral.
"""
from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad_vec
from scipy.linalg import expm

from auxnet.exceptions import (
    DomainError,
    NonDissipativeAuxiliary,
    NoSynthesisNeeded,
    ResonantEnergy,
    SingularAuxiliary,
)
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
)
from auxnet.numerics import eig_dense
from auxnet.reduction import (
    EffectiveOperator,
    ReductionKind,
    defect_renormalized,
    effective_hamiltonian,
    implicit_eigenvalue,
    large_potential_effective,
    markov_effective,
    pt_bic_renormalized,
    synthesize_bond,
    weak_coupling_phi,
    weak_coupling_ratio,
)
from auxnet.scattering import lee_bound_energies, nearest_composite_eigenvalue

SEEDS = st.integers(min_value=0, max_value=2**32 - 1)


def _random_network(rng: np.random.Generator, n: int = 4, m: int = 3) -> PartitionedHamiltonian:
    """Gauge-free network with complex potentials and a lossy cluster."""
    h_s = rng.standard_normal((n, n))
    h_s = 0.5 * (h_s + h_s.T) + np.diag(rng.standard_normal(n) * 1j)
    h_a = 0.3 * rng.standard_normal((m, m))
    h_a = 0.5 * (h_a + h_a.T) + np.diag(rng.uniform(-3.0, 3.0, m) - 1j * rng.uniform(0.5, 2.0, m))
    return PartitionedHamiltonian(h_s=h_s, h_a=h_a, rho=rng.standard_normal((m, n)))


def _phi_by_quadrature(p: PartitionedHamiltonian) -> np.ndarray:
    """-i int_0^inf rho^T exp(-i H_A s) rho exp(i H_S s) ds, real and imaginary parts stacked."""
    shape = p.h_s.shape

    def integrand(s: float) -> np.ndarray:
        value = -1j * p.rho_t @ expm(-1j * p.h_a * s) @ p.rho @ expm(1j * p.h_s * s)
        return np.concatenate([value.real.ravel(), value.imag.ravel()])

    stacked, _ = quad_vec(integrand, 0.0, np.inf, epsabs=1e-12, epsrel=1e-11)
    half = stacked.shape[0] // 2
    return (stacked[:half] + 1j * stacked[half:]).reshape(shape)


# ----------------------------------------------------------------------------
# Exact reduction
# ----------------------------------------------------------------------------


def test_uncoupled_cluster_leaves_system_alone() -> None:
    """With rho = 0 the effective Hamiltonian is a copy of H_S."""
    p = PartitionedHamiltonian(h_s=[[0.0, 1.0], [1.0, 0.5]], h_a=[[2.0]], rho=[[0.0, 0.0]])
    h_eff = effective_hamiltonian(p, 0.7)
    np.testing.assert_array_equal(h_eff, p.h_s)
    h_eff[0, 0] = 9.0  # a copy, not a view of the frozen block
    assert p.h_s[0, 0] == 0.0


def test_defect_band_center() -> None:
    """theta = 0.2, sigma = -0.8, omega = 2, U = -5 at E = 0: bond 1, potentials 0."""
    p = build_defect_chain(DefectChainParams.invisible(0.2, -5.0, n_trunc=10))
    h_eff = effective_hamiltonian(p, 0.0)
    s0, s1 = p.site(0), p.site(1)
    assert h_eff[s0, s1] == pytest.approx(1.0, abs=1e-14)
    assert h_eff[s0, s0] == pytest.approx(0.0, abs=1e-14)
    assert h_eff[s1, s1] == pytest.approx(0.0, abs=1e-14)


def test_defect_renormalization_matches_matrix() -> None:
    """The closed-form renormalized bond and potential equal the reduced matrix entries."""
    params = DefectChainParams.invisible(0.2, -10.0, n_trunc=10)
    p = build_defect_chain(params)
    energy = 1.3
    h_eff = effective_hamiltonian(p, energy)
    renorm = defect_renormalized(params, energy)
    s0, s1 = p.site(0), p.site(1)
    assert h_eff[s0, s1] == pytest.approx(renorm.theta, abs=1e-14)
    assert h_eff[s0, s0] == pytest.approx(renorm.sigma, abs=1e-14)


def test_lee_synthesis_is_exact_at_reference_energy(lee_params: LeeParams) -> None:
    """Eliminating the auxiliary site at E2 gives back the Lee chain entrywise."""
    _, e2 = lee_bound_energies(lee_params.sigma, lee_params.g_imag)
    h_eff = effective_hamiltonian(build_lee_synth(lee_params, "E2"), e2)
    np.testing.assert_allclose(h_eff, build_lee_exact(lee_params), rtol=0, atol=1e-12)


def test_resonant_energy() -> None:
    """E on an eigenvalue of H_A has no reduction."""
    p = build_defect_chain(DefectChainParams.invisible(0.2, -5.0, n_trunc=10))
    with pytest.raises(ResonantEnergy):
        effective_hamiltonian(p, -5.0)
    with pytest.raises(ResonantEnergy):
        defect_renormalized(DefectChainParams.invisible(0.2, -5.0), -5.0)


@given(seed=SEEDS, energy=st.floats(min_value=-3.0, max_value=3.0))
def test_effective_hamiltonian_is_complex_symmetric(seed: int, energy: float) -> None:
    """H_eff(E) = H_eff(E)^T for any symmetric composite."""
    h_eff = effective_hamiltonian(_random_network(np.random.default_rng(seed)), energy)
    scale = max(1.0, float(np.max(np.abs(h_eff))))
    assert np.max(np.abs(h_eff - h_eff.T)) <= 1e-13 * scale


@given(seed=SEEDS, energy=st.floats(min_value=-1.0, max_value=1.0))
def test_effective_hamiltonian_is_real_for_real_input(seed: int, energy: float) -> None:
    """Real blocks at a real energy give a real effective Hamiltonian."""
    rng = np.random.default_rng(seed)
    h_s = rng.standard_normal((3, 3))
    h_a = np.diag(rng.uniform(2.0, 5.0, 2)) + 0.1 * np.array([[0.0, 1.0], [1.0, 0.0]])
    p = PartitionedHamiltonian(h_s=h_s + h_s.T, h_a=h_a, rho=rng.standard_normal((2, 3)))
    assert np.max(np.abs(effective_hamiltonian(p, energy).imag)) <= 1e-13


def test_composite_eigenpairs_solve_implicit_problem() -> None:
    """Every composite eigenpair solves H_eff(E) c = E c on the system sites."""
    p = build_defect_chain(DefectChainParams.invisible(0.2, -5.0, n_trunc=10))
    result = eig_dense(assemble_composite(p))
    checked = 0
    for value, vector in zip(result.values, result.right_vectors.T):
        v_s = vector[: p.n_sys]
        if np.linalg.norm(v_s) < 1e-3 or abs(value - p.h_a[0, 0]) < 1e-3:
            continue
        residual = effective_hamiltonian(p, value) @ v_s - value * v_s
        assert np.linalg.norm(residual) <= 1e-8 * np.linalg.norm(v_s)
        checked += 1
    assert checked >= p.n_sys - 1


# ----------------------------------------------------------------------------
# Large-potential limit and bond synthesis
# ----------------------------------------------------------------------------


def test_large_potential_single_site() -> None:
    """One site of potential U shifts the bonds by -rho rho^T / U."""
    p = PartitionedHamiltonian(h_s=np.zeros((2, 2)), h_a=[[-4.0]], rho=[[2.0, 1.0]])
    expected = np.array([[1.0, 0.5], [0.5, 0.25]])
    np.testing.assert_allclose(large_potential_effective(p), expected, atol=1e-15)


def test_large_potential_restores_invisible_defect() -> None:
    """In the large-U limit the tuned defect becomes a plain chain."""
    p = build_defect_chain(DefectChainParams.invisible(0.2, -40.0, n_trunc=10))
    h_lp = large_potential_effective(p)
    s0, s1 = p.site(0), p.site(1)
    assert h_lp[s0, s1] == pytest.approx(1.0, abs=1e-14)
    assert h_lp[s0, s0] == pytest.approx(0.0, abs=1e-14)


def test_large_potential_is_the_limit_of_the_exact_reduction() -> None:
    """The exact reduction converges to the limit as 1/U."""
    energies = np.linspace(-2.0, 2.0, 41)
    errors = []
    for u_aux in (-20.0, -40.0, -80.0):
        p = build_defect_chain(DefectChainParams.invisible(0.2, u_aux, n_trunc=10))
        h_lp = large_potential_effective(p)
        errors.append(max(np.linalg.norm(effective_hamiltonian(p, e) - h_lp, 2) for e in energies))
    assert errors[0] > errors[1] > errors[2]
    assert 1.7 <= errors[0] / errors[1] <= 2.3


def test_large_potential_singular_cluster() -> None:
    """A singular H_A has no large-potential limit."""
    p = PartitionedHamiltonian(h_s=np.zeros((2, 2)), h_a=[[0.0]], rho=[[1.0, 1.0]])
    with pytest.raises(SingularAuxiliary):
        large_potential_effective(p)


def test_synthesize_bond_examples() -> None:
    assert synthesize_bond(1.0, 0.2, -4.0) == pytest.approx(5.0)
    assert synthesize_bond(-2.5j, 0.0, 1.0) == pytest.approx(-0.4j)


@given(
    target=st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False),
    existing=st.floats(min_value=-2.0, max_value=2.0),
    omega=st.floats(min_value=0.5, max_value=3.0),
)
def test_synthesized_bond_is_realized(target: complex, existing: float, omega: float) -> None:
    """The synthesized potential reproduces the target bond in the limit."""
    if abs(target - existing) < 1e-3:
        return
    u_aux = synthesize_bond(target, existing, omega**2)
    p = PartitionedHamiltonian(
        h_s=[[0.0, existing], [existing, 0.0]],
        h_a=[[u_aux]],
        rho=[[omega, omega]],
    )
    assert large_potential_effective(p)[0, 1] == pytest.approx(target, abs=1e-12 * max(1.0, abs(u_aux)))


def test_synthesize_bond_errors() -> None:
    """Zero coupling and an already-correct bond are refused."""
    with pytest.raises(NoSynthesisNeeded):
        synthesize_bond(1.0, 1.0, 2.0)
    with pytest.raises(DomainError):
        synthesize_bond(1.0, 0.0, 0.0)


# ----------------------------------------------------------------------------
# Weak-coupling (Markov) reduction
# ----------------------------------------------------------------------------


def test_phi_scalar() -> None:
    """One lossy site gives Phi = -i eps^2 / gamma."""
    eps, gamma = 0.1, 2.0
    p = PartitionedHamiltonian(h_s=[[0.0]], h_a=[[-1j * gamma]], rho=[[eps]])
    np.testing.assert_allclose(weak_coupling_phi(p), [[-1j * eps**2 / gamma]], atol=1e-12)
    assert weak_coupling_ratio(p) == pytest.approx(eps / gamma)


def test_phi_without_coupling() -> None:
    """No coupling, no correction."""
    p = PartitionedHamiltonian(h_s=np.eye(2), h_a=[[-1j]], rho=[[0.0, 0.0]])
    np.testing.assert_array_equal(weak_coupling_phi(p), np.zeros((2, 2)))


@given(seed=SEEDS)
def test_phi_matches_quadrature(seed: int) -> None:
    """The Sylvester route equals the time integral of the memory kernel."""
    rng = np.random.default_rng(seed)
    h_s = rng.standard_normal((2, 2))
    h_a = np.diag(rng.uniform(-1.0, 1.0, 2) - 1j * rng.uniform(0.5, 2.0, 2))
    h_a[0, 1] = h_a[1, 0] = 0.2 * rng.standard_normal()
    p = PartitionedHamiltonian(h_s=0.5 * (h_s + h_s.T), h_a=h_a, rho=0.3 * rng.standard_normal((2, 2)))
    np.testing.assert_allclose(weak_coupling_phi(p), _phi_by_quadrature(p), rtol=0, atol=1e-8)


def test_markov_effective_adds_phi() -> None:
    """The Markov Hamiltonian is H_S plus the constant correction."""
    p = PartitionedHamiltonian(h_s=[[0.0, 0.5], [0.5, 0.3]], h_a=[[-2j]], rho=[[0.1, 0.0]])
    np.testing.assert_allclose(markov_effective(p), p.h_s + weak_coupling_phi(p), atol=1e-15)


@pytest.mark.parametrize("h_a", [[[1.0]], [[1.0 + 0.5j]]], ids=["real", "gain"])
def test_phi_needs_dissipation(h_a) -> None:
    """Real or gaining clusters have no convergent memory integral."""
    p = PartitionedHamiltonian(h_s=[[0.0]], h_a=h_a, rho=[[0.1]])
    with pytest.raises(NonDissipativeAuxiliary):
        weak_coupling_phi(p)


def test_phi_error_scales_with_fourth_power_of_coupling() -> None:
    """The slow eigenvalue of H_S + Phi misses the composite one by O(rho^4)."""
    errors = []
    for eps in (0.1, 0.05):
        p = PartitionedHamiltonian(h_s=[[0.3]], h_a=[[-2j]], rho=[[eps]])
        composite = eig_dense(assemble_composite(p)).values
        slow = composite[np.argmin(np.abs(composite - 0.3))]
        errors.append(abs(markov_effective(p)[0, 0] - slow))
    assert 12.0 <= errors[0] / errors[1] <= 20.0


# ----------------------------------------------------------------------------
# Operator wrapper, PT-BIC couplings, implicit eigenproblem
# ----------------------------------------------------------------------------


def test_effective_operator_kinds() -> None:
    """Each reduction kind dispatches to its own routine."""
    p = build_defect_chain(DefectChainParams.invisible(0.2, -5.0, n_trunc=10))
    np.testing.assert_array_equal(
        EffectiveOperator(p, ReductionKind.EXACT, 0.5).matrix(), effective_hamiltonian(p, 0.5)
    )
    np.testing.assert_array_equal(
        EffectiveOperator(p, ReductionKind.LARGE_POTENTIAL).matrix(), large_potential_effective(p)
    )
    with pytest.raises(ValueError):
        EffectiveOperator(p).matrix()
    with pytest.raises(NonDissipativeAuxiliary):
        EffectiveOperator(p, ReductionKind.MARKOV).matrix()


@pytest.mark.parametrize("energy", [0.0, 0.7, -1.3])
def test_pt_bic_couplings_match_matrix(small_pt_bic: PtBicParams, energy: float) -> None:
    """The renormalized PT couplings equal the reduced matrix entries."""
    p = build_pt_bic(small_pt_bic)
    h_eff = effective_hamiltonian(p, energy)
    couplings = pt_bic_renormalized(small_pt_bic, energy)
    m1, zero, one = p.site(-1), p.site(0), p.site(1)
    assert h_eff[m1, zero] == pytest.approx(couplings.theta_0, abs=1e-14)
    assert h_eff[zero, one] == pytest.approx(couplings.theta_1, abs=1e-14)
    assert h_eff[m1, m1] == pytest.approx(couplings.sigma_m1, abs=1e-14)
    assert h_eff[zero, zero] == pytest.approx(couplings.sigma_0, abs=1e-14)
    assert h_eff[one, one] == pytest.approx(couplings.sigma_1, abs=1e-14)


def test_pt_bic_couplings_at_band_center(small_pt_bic: PtBicParams) -> None:
    """At E = 0 the central bonds become -ig and +ig."""
    couplings = pt_bic_renormalized(small_pt_bic, 0.0)
    assert couplings.theta_0 == pytest.approx(-2.5j)
    assert couplings.theta_1 == pytest.approx(2.5j)
    assert couplings.sigma_0 == pytest.approx(0.0)


def test_implicit_eigenvalue_finds_lee_bound_state() -> None:
    """The secant iteration on H_eff(E) lands on E2 and on a composite eigenvalue."""
    p = LeeParams(n_trunc=60)
    _, e2 = lee_bound_energies(p.sigma, p.g_imag)
    network = build_lee_synth(p)
    solution = implicit_eigenvalue(network, 2.4)
    assert abs(solution.energy - e2) <= 1e-8
    assert abs(solution.energy - nearest_composite_eigenvalue(network, e2)) <= 1e-8
    assert solution.iterations >= 1
