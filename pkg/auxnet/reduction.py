"""Elimination of the auxiliary cluster.

Exact energy-dependent reduction H_eff(E) = H_S + rho^T (E - H_A)^-1 rho,
its large-potential limit, single-bond synthesis and the weak-coupling
(Markovian) correction for a dissipative cluster.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from .const import (
    DISSIPATION_TOL,
    IMPLICIT_MAX_ITER,
    IMPLICIT_TOL,
    RESONANCE_TOL,
    SYMMETRY_TOL,
)
from .exceptions import (
    ConvergenceFailure,
    DomainError,
    NonDissipativeAuxiliary,
    NoSynthesisNeeded,
    ResonantEnergy,
    SingularAuxiliary,
    SingularMatrix,
)
from .network import DefectChainParams, PartitionedHamiltonian, PtBicParams
from .numerics import eig_dense, solve_linear, solve_sylvester

_LOGGER = logging.getLogger(__name__)


class ReductionKind(str, Enum):
    EXACT = "exact"
    LARGE_POTENTIAL = "large_potential"
    MARKOV = "markov"


@dataclass(frozen=True)
class EffectiveOperator:
    """A deferred effective Hamiltonian for ``base``.

    ``energy`` is required for the exact kind and ignored otherwise.
    """

    base: PartitionedHamiltonian
    kind: ReductionKind = ReductionKind.EXACT
    energy: complex | None = None

    def matrix(self, energy: complex | None = None) -> np.ndarray:
        if self.kind is ReductionKind.EXACT:
            energy = self.energy if energy is None else energy
            if energy is None:
                raise ValueError("the exact reduction needs an energy")
            return effective_hamiltonian(self.base, energy)
        if self.kind is ReductionKind.LARGE_POTENTIAL:
            return large_potential_effective(self.base)
        return markov_effective(self.base)


def _check_resonance(p: PartitionedHamiltonian, energy: complex, tol: float) -> None:
    eigs = scipy.linalg.eigvals(p.h_a)
    scale = max(float(np.max(np.abs(eigs))), 1.0)
    distance = float(np.min(np.abs(energy - eigs)))
    if distance < tol * scale:
        raise ResonantEnergy(f"E = {energy} is {distance:.3e} from an auxiliary eigenvalue")


def effective_hamiltonian(
    p: PartitionedHamiltonian, energy: complex, *, tol: float = RESONANCE_TOL
) -> np.ndarray:
    """H_S + rho^T (E - H_A)^-1 rho; complex-symmetric whenever H_A is."""
    energy = complex(energy)
    _check_resonance(p, energy, tol)
    if not np.any(p.rho):
        return p.h_s.copy()
    resolvent_rho = solve_linear(energy * np.eye(p.m_aux) - p.h_a, p.rho)
    return p.h_s + p.rho_t @ resolvent_rho


def large_potential_effective(p: PartitionedHamiltonian) -> np.ndarray:
    """H_S - rho^T H_A^-1 rho, the energy-independent limit for |H_A| >> |E|."""
    if not np.any(p.rho):
        return p.h_s.copy()
    try:
        inv_rho = solve_linear(p.h_a, p.rho)
    except SingularMatrix as err:
        raise SingularAuxiliary(f"H_A is singular: {err}") from err
    return p.h_s - p.rho_t @ inv_rho


def synthesize_bond(
    target: complex,
    existing: float,
    rho_product: float,
    *,
    tol: float = SYMMETRY_TOL,
) -> complex:
    """Auxiliary potential U that turns bond ``existing`` into ``target``.

    In the large-potential limit one auxiliary site coupled with strengths
    whose product is ``rho_product`` shifts the bond by -rho_product / U.
    """
    if rho_product == 0:
        raise DomainError("a vanishing coupling product cannot shift the bond")
    shift = existing - complex(target)
    if abs(shift) <= tol * max(abs(existing), 1.0):
        raise NoSynthesisNeeded(f"target {target} already equals the existing hopping")
    return rho_product / shift


def _require_dissipative(h_a: np.ndarray) -> np.ndarray:
    eigs = scipy.linalg.eigvals(h_a)
    worst = float(np.max(eigs.imag))
    if worst >= -DISSIPATION_TOL:
        raise NonDissipativeAuxiliary(
            f"auxiliary eigenvalue with Im = {worst:.3e} is not strictly dissipative"
        )
    return eigs


def weak_coupling_phi(p: PartitionedHamiltonian) -> np.ndarray:
    """Markovian correction Phi = -i int_0^inf rho^T exp(-i H_A s) rho exp(i H_S s) ds.

    The integral is evaluated exactly as Phi = -i rho^T X, where X solves the
    Sylvester equation H_A X - X H_S = -i rho.
    """
    _require_dissipative(p.h_a)
    if not np.allclose(p.h_s, p.h_s.conj().T, atol=SYMMETRY_TOL):
        _LOGGER.warning("H_S is not Hermitian; the Markov correction assumes it is")
    if not np.any(p.rho):
        return np.zeros_like(p.h_s)
    x = solve_sylvester(p.h_a, p.h_s, -1j * p.rho)
    return -1j * (p.rho_t @ x)


def markov_effective(p: PartitionedHamiltonian) -> np.ndarray:
    """H_S + Phi."""
    phi = weak_coupling_phi(p)
    _LOGGER.debug("Markov reduction: ||Phi|| = %.3e, ratio %.3e", np.linalg.norm(phi, 2), weak_coupling_ratio(p))
    return p.h_s + phi


def weak_coupling_ratio(p: PartitionedHamiltonian) -> float:
    """||rho||_2 over the smallest decay rate of H_A; small values mean weak coupling."""
    eigs = _require_dissipative(p.h_a)
    return float(np.linalg.norm(p.rho, 2) / np.min(np.abs(eigs.imag)))


@dataclass(frozen=True)
class DefectRenormalization:
    sigma: complex
    theta: complex


def defect_renormalized(params: DefectChainParams, energy: complex) -> DefectRenormalization:
    """Energy-dependent potential and bond of the side-coupled defect."""
    detuning = complex(energy) - params.u_aux
    if abs(detuning) < RESONANCE_TOL * max(abs(params.u_aux), 1.0):
        raise ResonantEnergy(f"E = {energy} sits on the auxiliary potential {params.u_aux}")
    shift = params.omega**2 / detuning
    return DefectRenormalization(sigma=params.sigma + shift, theta=params.theta + shift)


@dataclass(frozen=True)
class PtBicCouplings:
    """Couplings of the BIC lattice after both auxiliary sites are eliminated."""

    theta_0: complex  # bond (-1, 0)
    theta_1: complex  # bond (0, 1)
    sigma_m1: complex
    sigma_0: complex
    sigma_1: complex


def pt_bic_renormalized(p: PtBicParams, energy: complex) -> PtBicCouplings:
    energy = complex(energy)
    if energy == 0 and p.u_aux == 0:
        raise ResonantEnergy("E = 0 is resonant with auxiliary potentials +-iU at U = 0")
    lossy = p.omega**2 / (energy + 1j * p.u_aux)
    gainy = p.omega**2 / (energy - 1j * p.u_aux)
    return PtBicCouplings(
        theta_0=lossy,
        theta_1=gainy,
        sigma_m1=lossy,
        sigma_0=lossy + gainy,
        sigma_1=gainy,
    )


@dataclass(frozen=True)
class ImplicitSolution:
    energy: complex
    vector: np.ndarray
    iterations: int


def _nearest_eigenpair(p: PartitionedHamiltonian, energy: complex) -> tuple[complex, np.ndarray]:
    result = eig_dense(effective_hamiltonian(p, energy))
    k = int(np.argmin(np.abs(result.values - energy)))
    return complex(result.values[k]), result.right_vectors[:, k]


def implicit_eigenvalue(
    p: PartitionedHamiltonian,
    e_guess: complex,
    *,
    tol: float = IMPLICIT_TOL,
    max_iter: int = IMPLICIT_MAX_ITER,
) -> ImplicitSolution:
    """Solve H_eff(E) c = E c by secant iteration on f(E) = lambda(E) - E.

    lambda(E) is the eigenvalue of H_eff(E) nearest to E. Every converged
    solution is an eigenvalue of the composite network with a nonzero S part.
    """
    e_prev = complex(e_guess)
    e_curr = e_prev + 1e-3 * max(abs(e_prev), 1.0)
    f_prev = _nearest_eigenpair(p, e_prev)[0] - e_prev
    for iteration in range(1, max_iter + 1):
        lam, vec = _nearest_eigenpair(p, e_curr)
        f_curr = lam - e_curr
        if abs(f_curr) <= tol * max(abs(e_curr), 1.0):
            _LOGGER.debug("implicit eigenvalue %s after %d iterations", e_curr, iteration)
            return ImplicitSolution(energy=e_curr, vector=vec, iterations=iteration)
        if f_curr == f_prev:
            break
        e_next = e_curr - f_curr * (e_curr - e_prev) / (f_curr - f_prev)
        e_prev, f_prev, e_curr = e_curr, f_curr, e_next
    raise ConvergenceFailure(f"secant iteration did not converge within {max_iter} steps from {e_guess}")
