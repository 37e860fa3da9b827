"""Plane-wave scattering on 1D lattices, bound-state poles and the Lee model closed forms.

Scattering states use the ansatz c_n = exp(-iqn) + r exp(iqn) on the left
lead and c_n = t exp(-iqn) on the right lead, with E = 2 kappa cos q.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable

import numpy as np

from .const import (
    DEFAULT_Q_POINTS,
    DEFAULT_SCATTERING_MARGIN,
    DEFECT_E_MAX,
    MIN_DEFECT_HALF_WIDTH,
    PIVOT_THRESHOLD,
    POLE_RADIUS_TOL,
    RESONANCE_TOL,
)
from .exceptions import (
    DomainError,
    ResonantEnergy,
    SingularMatrix,
    SingularScatteringSystem,
)
from .network import (
    DefectChainParams,
    PartitionedHamiltonian,
    PtBicParams,
    assemble_composite,
    build_defect_chain,
    build_pt_bic,
)
from .numerics import eig_dense, poly_roots, solve_linear
from .reduction import effective_hamiltonian

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScatteringPoint:
    q: float
    energy: float
    t: complex
    r: complex

    @property
    def transmittance(self) -> float:
        return abs(self.t) ** 2

    @property
    def reflectance(self) -> float:
        return abs(self.r) ** 2

    @property
    def unitarity_deviation(self) -> float:
        """| |t|^2 + |r|^2 - 1 |; zero for Hermitian scatterers."""
        return abs(self.transmittance + self.reflectance - 1.0)


@dataclass(frozen=True)
class TransmissionSweep:
    q: np.ndarray
    energy: np.ndarray
    t: np.ndarray
    r: np.ndarray

    @property
    def transmittance(self) -> np.ndarray:
        return np.abs(self.t) ** 2

    @property
    def reflectance(self) -> np.ndarray:
        return np.abs(self.r) ** 2

    @property
    def phase(self) -> np.ndarray:
        return np.angle(self.t)


def q_grid(n_q: int = DEFAULT_Q_POINTS) -> np.ndarray:
    """``n_q`` uniform wavenumbers strictly inside (0, pi); sin q vanishes at the ends."""
    if n_q < 1:
        raise ValueError(f"n_q must be positive, got {n_q}")
    return np.linspace(0.0, np.pi, n_q + 2)[1:-1]


# ----------------------------------------------------------------------------
# Side-coupled defect: closed form
# ----------------------------------------------------------------------------


def _defect_coefficients(params: DefectChainParams, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    q = np.asarray(q, dtype=float)
    if np.any((q <= 0.0) | (q >= np.pi)):
        raise DomainError("wavenumbers must lie strictly inside (0, pi)")
    kappa, theta, sigma = params.kappa, params.theta, params.sigma
    omega_sq = params.omega**2
    energy = 2.0 * kappa * np.cos(q)
    detuning = energy - params.u_aux
    if np.any(np.abs(detuning) < RESONANCE_TOL * max(abs(params.u_aux), 1.0)):
        raise ResonantEnergy(f"the q-grid hits the auxiliary potential U = {params.u_aux}")

    eiq = np.exp(1j * q)
    t = (
        2j * kappa * (theta * detuning + omega_sq) * np.sin(q) * eiq
        / ((kappa * eiq - sigma + theta) * (detuning * (kappa * eiq - sigma - theta) - 2.0 * omega_sq))
    )

    # r from the 2x2 matching system at sites 0 and 1 (Cramer's rule)
    shift = omega_sq / detuning
    sigma_p = sigma + shift
    theta_p = theta + shift
    a = kappa * eiq - sigma_p
    b = kappa / eiq - sigma_p
    det = a * a - theta_p * theta_p
    if np.any(np.abs(det) < PIVOT_THRESHOLD * max(kappa, 1.0)):
        raise SingularScatteringSystem("the matching system at the defect is singular")
    r = (theta_p * theta_p - a * b) / det
    return t, r


def defect_transmission(params: DefectChainParams, q: float) -> ScatteringPoint:
    """Closed-form transmission and reflection of the side-coupled defect."""
    t, r = _defect_coefficients(params, np.array([q]))
    return ScatteringPoint(q=float(q), energy=2.0 * params.kappa * float(np.cos(q)), t=complex(t[0]), r=complex(r[0]))


def transmission_sweep(params: DefectChainParams, n_q: int = DEFAULT_Q_POINTS) -> TransmissionSweep:
    q = q_grid(n_q)
    t, r = _defect_coefficients(params, q)
    return TransmissionSweep(q=q, energy=2.0 * params.kappa * np.cos(q), t=t, r=r)


def invisibility_deviation(
    params: DefectChainParams,
    e_max: float = DEFECT_E_MAX,
    n_q: int = DEFAULT_Q_POINTS,
) -> float:
    """max |1 - |t(E)|^2| over the grid points with |E| < e_max."""
    sweep = transmission_sweep(params, n_q)
    inside = np.abs(sweep.energy) < e_max
    if not np.any(inside):
        raise DomainError(f"no grid energies inside |E| < {e_max}")
    return float(np.max(np.abs(1.0 - sweep.transmittance[inside])))


# ----------------------------------------------------------------------------
# Numerical scattering on a finite window
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class ScatteringWindow:
    """Effective Hamiltonian on sites first_index .. first_index + n - 1.

    Both leads outside the window are homogeneous with hopping ``kappa`` and
    zero potential.
    """

    h: np.ndarray
    first_index: int
    kappa: float
    energy: float


WindowBuilder = Callable[[float, int], ScatteringWindow]


def scattering_numeric(
    window_builder: WindowBuilder,
    q: float,
    n_interior: int = 2 * DEFAULT_SCATTERING_MARGIN,
) -> ScatteringPoint:
    """Solve for the window amplitudes together with r and t.

    The lead amplitudes adjacent to the window are eliminated through the
    plane-wave ansatz; two extra rows pin the window ends to the ansatz.
    """
    if not 0.0 < q < np.pi:
        raise DomainError(f"q = {q} must lie strictly inside (0, pi)")
    window = window_builder(q, n_interior)
    h = np.asarray(window.h, dtype=np.complex128)
    n = h.shape[0]
    if n < 2:
        raise SingularScatteringSystem("the window needs at least two sites")
    first = window.first_index
    last = first + n - 1
    kappa, energy = window.kappa, window.energy

    system = np.zeros((n + 2, n + 2), dtype=np.complex128)
    rhs = np.zeros(n + 2, dtype=np.complex128)
    system[:n, :n] = energy * np.eye(n) - h
    i_r, i_t = n, n + 1
    # lead site first-1 carries exp(-iq(first-1)) + r exp(iq(first-1))
    system[0, i_r] = -kappa * np.exp(1j * q * (first - 1))
    rhs[0] = kappa * np.exp(-1j * q * (first - 1))
    # lead site last+1 carries t exp(-iq(last+1))
    system[n - 1, i_t] = -kappa * np.exp(-1j * q * (last + 1))
    system[i_r, 0] = 1.0
    system[i_r, i_r] = -np.exp(1j * q * first)
    rhs[i_r] = np.exp(-1j * q * first)
    system[i_t, n - 1] = 1.0
    system[i_t, i_t] = -np.exp(-1j * q * last)

    try:
        solution = solve_linear(system, rhs)
    except SingularMatrix as err:
        raise SingularScatteringSystem(f"scattering system at q = {q} is singular: {err}") from err
    return ScatteringPoint(q=float(q), energy=float(energy), t=complex(solution[i_t]), r=complex(solution[i_r]))


def homogeneous_window(kappa: float = 1.0) -> WindowBuilder:
    def build(q: float, n_interior: int) -> ScatteringWindow:
        n = max(n_interior, 2)
        h = np.zeros((n, n), dtype=np.complex128)
        idx = np.arange(n - 1)
        h[idx, idx + 1] = h[idx + 1, idx] = kappa
        return ScatteringWindow(h=h, first_index=0, kappa=kappa, energy=2.0 * kappa * np.cos(q))

    return build


def defect_window(params: DefectChainParams) -> WindowBuilder:
    """Window over the eliminated defect chain, sites -(half-1) .. half."""

    def build(q: float, n_interior: int) -> ScatteringWindow:
        half = max(n_interior // 2, MIN_DEFECT_HALF_WIDTH)
        network = build_defect_chain(replace(params, n_trunc=half))
        energy = 2.0 * params.kappa * float(np.cos(q))
        return ScatteringWindow(
            h=effective_hamiltonian(network, energy),
            first_index=-network.offset,
            kappa=params.kappa,
            energy=energy,
        )

    return build


def pt_bic_window(p: PtBicParams) -> WindowBuilder:
    """Window over the eliminated BIC lattice, sites -half .. half.

    The inhomogeneous hoppings only approach kappa asymptotically, so the
    result carries an O(1/half^2) error from the ends of the window.
    """

    def build(q: float, n_interior: int) -> ScatteringWindow:
        half = max(n_interior // 2, 3)
        network = build_pt_bic(replace(p, n_trunc=2 * half + 1))
        energy = 2.0 * p.kappa * float(np.cos(q))
        return ScatteringWindow(
            h=effective_hamiltonian(network, energy),
            first_index=-half,
            kappa=p.kappa,
            energy=energy,
        )

    return build


# ----------------------------------------------------------------------------
# Bound states of the defect
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundStatePole:
    y: complex
    energy: complex


def bound_state_cubic(u_aux: float, theta: float, kappa: float = 1.0) -> np.ndarray:
    """Coefficients of the pole condition of t(q) in y = exp(iq), invisibility tuning assumed."""
    u, th = u_aux / kappa, theta / kappa
    return np.array([1.0, 1.0 - u - 2.0 * th, 1.0 + u, 1.0 - 2.0 * th], dtype=np.complex128)


def bound_state_poles(u_aux: float, theta: float, kappa: float = 1.0) -> list[BoundStatePole]:
    """Poles with |y| > 1, i.e. states decaying as y^-|n| away from the defect."""
    roots = poly_roots(bound_state_cubic(u_aux, theta, kappa))
    poles = [
        BoundStatePole(y=complex(y), energy=complex(kappa * (y + 1.0 / y)))
        for y in roots
        if abs(y) > 1.0 + POLE_RADIUS_TOL
    ]
    _LOGGER.debug("U=%g theta=%g: %d bound-state poles", u_aux, theta, len(poles))
    return poles


def nearest_composite_eigenvalue(p: PartitionedHamiltonian, energy: complex) -> complex:
    """Eigenvalue of the full composite closest to ``energy``."""
    values = eig_dense(assemble_composite(p)).values
    return complex(values[int(np.argmin(np.abs(values - energy)))])


# ----------------------------------------------------------------------------
# Lee model with imaginary coupling
# ----------------------------------------------------------------------------


class LeePhase(str, Enum):
    ONE_BOUND_STATE = "I"
    TWO_BOUND_STATES = "II"
    BROKEN = "broken"


def lee_bound_energies(sigma: float, g_imag: float, kappa: float = 1.0) -> tuple[complex, complex]:
    """Closed-form energies (E1, E2); both real while (sigma/2)^2 >= G^2 + 1 (units of kappa)."""
    s, g2 = sigma / kappa, (g_imag / kappa) ** 2
    root = np.sqrt(complex((s / 2.0) ** 2 - g2 - 1.0))
    energies = []
    for x in (s / 2.0 + root, s / 2.0 - root):
        if x == 0:
            raise DomainError("the closed form is singular for sigma = 0 at the exceptional point")
        energies.append(complex(kappa * (x**2 + (1.0 + g2) ** 2) / ((1.0 + g2) * x)))
    return energies[0], energies[1]


@dataclass(frozen=True)
class LeeBoundState:
    """Decay factor z (c_n ~ z^-n along the chain) behind one closed-form branch."""

    label: str
    z: complex
    energy: complex

    @property
    def bound(self) -> bool:
        return abs(self.z) > 1.0 + POLE_RADIUS_TOL


def lee_bound_state_roots(sigma: float, g_imag: float, kappa: float = 1.0) -> tuple[LeeBoundState, LeeBoundState]:
    """Roots of z^2 - sigma z + 1 + G^2 = 0; E = kappa (z + 1/z).

    E1 belongs to the smaller root and E2 to the larger one, so E2 is bound
    for every G while E1 binds only above the first phase boundary.
    """
    s, g2 = sigma / kappa, (g_imag / kappa) ** 2
    small, large = sorted(poly_roots([1.0, -s, 1.0 + g2]), key=abs)
    return (
        LeeBoundState("E1", complex(small), complex(kappa * (small + 1.0 / small))),
        LeeBoundState("E2", complex(large), complex(kappa * (large + 1.0 / large))),
    )


def lee_phase_boundaries(sigma: float, kappa: float = 1.0) -> tuple[float, float]:
    """(G1, G2): the one/two bound-state boundary and the PT-breaking boundary."""
    s = sigma / kappa
    if s < 2.0:
        raise DomainError(f"sigma/kappa = {s} < 2 puts the level inside the band")
    return kappa * float(np.sqrt(s - 2.0)), kappa * float(np.sqrt((s / 2.0) ** 2 - 1.0))


def lee_phase(sigma: float, g_imag: float, kappa: float = 1.0) -> LeePhase:
    g1, g2 = lee_phase_boundaries(sigma, kappa)
    if g_imag > g2:
        return LeePhase.BROKEN
    if g_imag > g1:
        return LeePhase.TWO_BOUND_STATES
    return LeePhase.ONE_BOUND_STATE
