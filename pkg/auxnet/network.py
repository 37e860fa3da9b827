"""Partitioned tight-binding networks and the scenario lattice builders.

A network is a system S (N sites) side-coupled to an auxiliary cluster A
(M sites). Builders store energies in units of kappa exactly as given; the
signed lattice index n of a site lives at storage index ``n + offset``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import voluptuous as vol

from .const import (
    BOND_TOL,
    DEFAULT_DEFECT_HALF_WIDTH,
    DEFAULT_LEE_SITES,
    DEFAULT_PT_BIC_SITES,
    MIN_DEFECT_HALF_WIDTH,
    SCHEMA_VERSION,
    SYMMETRY_TOL,
)
from .exceptions import ConfigError, DegenerateBond, DimensionMismatch, DomainError

_LOGGER = logging.getLogger(__name__)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PartitionedHamiltonian:
    """The triple (H_S, H_A, rho) of a system coupled to an auxiliary cluster.

    ``rho`` is M x N and couples auxiliary site alpha to system site n; the
    reverse coupling is always ``rho.T``.
    """

    h_s: np.ndarray
    h_a: np.ndarray
    rho: np.ndarray
    offset: int = 0
    name: str = ""

    def __post_init__(self) -> None:
        h_s = np.array(self.h_s, dtype=np.complex128)
        h_a = np.array(self.h_a, dtype=np.complex128)
        rho = np.array(self.rho, dtype=np.complex128)
        if h_s.ndim != 2 or h_s.shape[0] != h_s.shape[1] or h_s.shape[0] == 0:
            raise DimensionMismatch(f"h_s must be square and non-empty, got {h_s.shape}")
        if h_a.ndim != 2 or h_a.shape[0] != h_a.shape[1] or h_a.shape[0] == 0:
            raise DimensionMismatch(f"h_a must be square and non-empty, got {h_a.shape}")
        if rho.shape != (h_a.shape[0], h_s.shape[0]):
            raise DimensionMismatch(
                f"rho must be {h_a.shape[0]}x{h_s.shape[0]}, got {rho.shape}"
            )
        object.__setattr__(self, "h_s", _frozen(h_s))
        object.__setattr__(self, "h_a", _frozen(h_a))
        object.__setattr__(self, "rho", _frozen(rho))

    @property
    def n_sys(self) -> int:
        return self.h_s.shape[0]

    @property
    def m_aux(self) -> int:
        return self.h_a.shape[0]

    @property
    def rho_t(self) -> np.ndarray:
        """S <- A coupling; always the transpose of rho."""
        return self.rho.T

    def site(self, n: int) -> int:
        """Storage index of signed lattice site ``n``."""
        index = n + self.offset
        if not 0 <= index < self.n_sys:
            raise IndexError(f"site {n} is outside the truncated lattice")
        return index


@dataclass(frozen=True)
class Violation:
    """One broken symmetry/reality constraint, with matrix indices."""

    block: str
    i: int
    j: int
    kind: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations


def _check_symmetric_real_offdiag(block: str, mat: np.ndarray, tol: float) -> list[Violation]:
    found: list[Violation] = []
    n = mat.shape[0]
    scale = max(float(np.max(np.abs(mat))), 1.0)
    rows, cols = np.nonzero(~np.eye(n, dtype=bool))
    for i, j in zip(rows, cols):
        value = mat[i, j]
        if abs(value.imag) > tol * scale:
            found.append(Violation(block, int(i), int(j), "complex_hopping", f"imag part {value.imag:.3e}"))
        if i < j and abs(value - mat[j, i]) > tol * scale:
            found.append(
                Violation(block, int(i), int(j), "asymmetric", f"({i},{j})={value} vs ({j},{i})={mat[j, i]}")
            )
    return found


def validate(p: PartitionedHamiltonian, *, tol: float = SYMMETRY_TOL) -> ValidationReport:
    """List every violation of the no-gauge-field constraints.

    Off-diagonal parts of H_S and H_A must be real and symmetric and rho must
    be real. Diagonal entries (site potentials) may be complex.
    """
    violations = _check_symmetric_real_offdiag("h_s", p.h_s, tol)
    violations += _check_symmetric_real_offdiag("h_a", p.h_a, tol)
    scale = max(float(np.max(np.abs(p.rho))), 1.0)
    for alpha, n in zip(*np.nonzero(np.abs(p.rho.imag) > tol * scale)):
        violations.append(
            Violation("rho", int(alpha), int(n), "complex_coupling", f"imag part {p.rho[alpha, n].imag:.3e}")
        )
    if violations:
        _LOGGER.debug("validate(%s): %d violations", p.name or "network", len(violations))
    return ValidationReport(tuple(violations))


def assemble_composite(p: PartitionedHamiltonian) -> np.ndarray:
    """The (N+M) x (N+M) block matrix [[H_S, rho^T], [rho, H_A]]."""
    return np.block([[p.h_s, p.rho_t], [p.rho, p.h_a]])


def _chain(n_sites: int, kappa: float) -> np.ndarray:
    h = np.zeros((n_sites, n_sites), dtype=np.complex128)
    idx = np.arange(n_sites - 1)
    h[idx, idx + 1] = kappa
    h[idx + 1, idx] = kappa
    return h


# ----------------------------------------------------------------------------
# Side-coupled defect
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class DefectChainParams:
    """Chain with defective bond theta and potential sigma on sites 0, 1,
    side-coupled by omega to one auxiliary site of potential U."""

    kappa: float = 1.0
    theta: float = 1.0
    sigma: float = 0.0
    omega: float = 0.0
    u_aux: complex = 0.0
    n_trunc: int = DEFAULT_DEFECT_HALF_WIDTH

    def __post_init__(self) -> None:
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.n_trunc < MIN_DEFECT_HALF_WIDTH:
            raise ValueError(f"n_trunc must be >= {MIN_DEFECT_HALF_WIDTH}, got {self.n_trunc}")

    @classmethod
    def invisible(
        cls,
        theta: float,
        u_aux: float,
        kappa: float = 1.0,
        n_trunc: int = DEFAULT_DEFECT_HALF_WIDTH,
    ) -> DefectChainParams:
        """Tune sigma = theta - kappa and omega^2 = U (theta - kappa).

        In the large-|U| limit the renormalized bond returns to kappa and the
        renormalized potentials vanish, so the defect becomes transparent.
        """
        omega_sq = u_aux * (theta - kappa)
        if omega_sq <= 0:
            raise DomainError(
                f"U (theta - kappa) = {omega_sq} must be positive for a real side coupling"
            )
        return cls(
            kappa=kappa,
            theta=theta,
            sigma=theta - kappa,
            omega=math.sqrt(omega_sq),
            u_aux=u_aux,
            n_trunc=n_trunc,
        )


def build_defect_chain(p: DefectChainParams) -> PartitionedHamiltonian:
    """2*n_trunc sites, signed indices -(n_trunc-1) .. n_trunc, defect on bond (0, 1)."""
    n_sites = 2 * p.n_trunc
    offset = p.n_trunc - 1
    h_s = _chain(n_sites, p.kappa)
    s0, s1 = offset, offset + 1
    h_s[s0, s1] = h_s[s1, s0] = p.theta
    h_s[s0, s0] = h_s[s1, s1] = p.sigma
    rho = np.zeros((1, n_sites))
    rho[0, s0] = rho[0, s1] = p.omega
    return PartitionedHamiltonian(
        h_s=h_s,
        h_a=np.array([[p.u_aux]], dtype=np.complex128),
        rho=rho,
        offset=offset,
        name="defect",
    )


# ----------------------------------------------------------------------------
# Lee model with imaginary coupling
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class LeeParams:
    """Localized level sigma coupled by g = -iG to the end of a semi-infinite chain.

    theta and omega only matter for the synthesized (auxiliary-site) version.
    """

    kappa: float = 1.0
    sigma: float = 3.0
    g_imag: float = 1.05
    theta: float = 0.2
    omega: float = 7.0
    n_trunc: int = DEFAULT_LEE_SITES

    def __post_init__(self) -> None:
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.g_imag < 0:
            raise ValueError(f"G must be non-negative, got {self.g_imag}")
        if self.n_trunc < 2:
            raise ValueError(f"n_trunc must be >= 2, got {self.n_trunc}")

    @property
    def coupling(self) -> complex:
        return -1j * self.g_imag


def build_lee_exact(p: LeeParams) -> np.ndarray:
    """(n_trunc+1)-site matrix: level sigma at site 0, -iG on bond (0, 1), chain beyond."""
    h = _chain(p.n_trunc + 1, p.kappa)
    h[0, 0] = p.sigma
    h[0, 1] = h[1, 0] = p.coupling
    return h


def lee_reference_energy(p: LeeParams, e_ref: complex | str = "E2") -> complex:
    """Resolve ``"E1"``/``"E2"`` to the closed-form bound-state energy."""
    if isinstance(e_ref, str):
        from .scattering import lee_bound_energies

        e1, e2 = lee_bound_energies(p.sigma, p.g_imag, kappa=p.kappa)
        try:
            return {"E1": e1, "E2": e2}[e_ref.upper()]
        except KeyError as err:
            raise ValueError(f"e_ref must be 'E1', 'E2' or a number, got {e_ref!r}") from err
    return complex(e_ref)


def lee_synthesis_values(p: LeeParams, e_ref: complex | str = "E2") -> dict[str, complex]:
    """U, sigma_1, sigma_2 that make the eliminated lattice equal the Lee model at e_ref."""
    bond = p.theta + 1j * p.g_imag
    if abs(bond) < BOND_TOL * p.kappa:
        raise DegenerateBond(f"|theta + iG| = {abs(bond):.3e} cannot host the synthesized coupling")
    energy = lee_reference_energy(p, e_ref)
    return {
        "e_ref": energy,
        "u_aux": p.omega**2 / bond + energy,
        "sigma_1": p.sigma + bond,
        "sigma_2": bond,
    }


def build_lee_synth(p: LeeParams, e_ref: complex | str = "E2") -> PartitionedHamiltonian:
    """Hermitian-coupled chain plus one complex-potential auxiliary site on bond (0, 1)."""
    values = lee_synthesis_values(p, e_ref)
    n_sites = p.n_trunc + 1
    h_s = _chain(n_sites, p.kappa)
    h_s[0, 1] = h_s[1, 0] = p.theta
    h_s[0, 0] = values["sigma_1"]
    h_s[1, 1] = values["sigma_2"]
    rho = np.zeros((1, n_sites))
    rho[0, 0] = rho[0, 1] = p.omega
    _LOGGER.debug(
        "Lee synthesis: U=%s sigma_1=%s sigma_2=%s at E=%s",
        values["u_aux"],
        values["sigma_1"],
        values["sigma_2"],
        values["e_ref"],
    )
    return PartitionedHamiltonian(
        h_s=h_s,
        h_a=np.array([[values["u_aux"]]], dtype=np.complex128),
        rho=rho,
        offset=0,
        name="lee_synth",
    )


# ----------------------------------------------------------------------------
# PT-symmetric lattice with a bound state in the continuum
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class PtBicParams:
    """Inhomogeneous chain of n_trunc sites (centered on 0) with auxiliary
    sites of potential -iU (coupled to -1, 0) and +iU (coupled to 0, 1)."""

    kappa: float = 1.0
    omega: float = 1.0
    u_aux: float = 0.4
    n_trunc: int = DEFAULT_PT_BIC_SITES

    def __post_init__(self) -> None:
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.n_trunc % 2 != 1 or self.n_trunc < 5:
            raise ValueError(f"n_trunc must be odd and >= 5, got {self.n_trunc}")

    @property
    def n_half(self) -> int:
        return (self.n_trunc - 1) // 2

    @property
    def g(self) -> float:
        """Coupling of the target lattice realized at E = 0: g = omega^2 / U."""
        if self.u_aux == 0:
            raise DomainError("U = 0 leaves the target coupling g undefined")
        return self.omega**2 / self.u_aux


def pt_bic_hopping(n: int, kappa: float = 1.0) -> float:
    """Hopping kappa_n on bond (n-1, n) for n != 0, 1."""
    if n in (0, 1):
        raise ValueError("bonds 0 and 1 carry the complex couplings, not kappa_n")
    if n % 2 == 0:
        return kappa * math.sqrt((n + 1) / (n - 1))
    return kappa * math.sqrt((n - 2) / n)


def _pt_bic_system(p: PtBicParams) -> np.ndarray:
    h = np.zeros((p.n_trunc, p.n_trunc), dtype=np.complex128)
    offset = p.n_half
    for n in range(-p.n_half + 1, p.n_half + 1):
        if n in (0, 1):
            continue
        h[n + offset, n - 1 + offset] = h[n - 1 + offset, n + offset] = pt_bic_hopping(n, p.kappa)
    return h


def build_pt_bic(p: PtBicParams) -> PartitionedHamiltonian:
    """System without bonds touching site 0, H_A = diag(-iU, +iU)."""
    offset = p.n_half
    rho = np.zeros((2, p.n_trunc))
    rho[0, offset - 1] = rho[0, offset] = p.omega
    rho[1, offset] = rho[1, offset + 1] = p.omega
    return PartitionedHamiltonian(
        h_s=_pt_bic_system(p),
        h_a=np.diag([-1j * p.u_aux, 1j * p.u_aux]),
        rho=rho,
        offset=offset,
        name="pt_bic",
    )


def build_pt_bic_reference(p: PtBicParams, g: float | None = None) -> np.ndarray:
    """Target lattice with complex hoppings kappa_0 = -ig and kappa_1 = +ig, no auxiliaries."""
    g = p.g if g is None else g
    h = _pt_bic_system(p)
    offset = p.n_half
    h[offset, offset - 1] = h[offset - 1, offset] = -1j * g
    h[offset, offset + 1] = h[offset + 1, offset] = 1j * g
    return h


# ----------------------------------------------------------------------------
# JSON network documents
# ----------------------------------------------------------------------------

_TRIPLET = vol.All([vol.Coerce(float)], vol.Length(min=4, max=4))

NETWORK_SCHEMA = vol.Schema(
    {
        vol.Required("schema_version"): vol.All(int, vol.In([SCHEMA_VERSION])),
        vol.Required("n_sys"): vol.All(int, vol.Range(min=1)),
        vol.Required("m_aux"): vol.All(int, vol.Range(min=1)),
        vol.Optional("offset", default=0): int,
        vol.Optional("name", default=""): str,
        vol.Required("h_s"): [_TRIPLET],
        vol.Required("h_a"): [_TRIPLET],
        vol.Required("rho"): [_TRIPLET],
    },
    extra=vol.PREVENT_EXTRA,
)


def _triplets(mat: np.ndarray) -> list[list[float]]:
    rows, cols = np.nonzero(mat)
    return [[int(i), int(j), float(mat[i, j].real), float(mat[i, j].imag)] for i, j in zip(rows, cols)]


def _from_triplets(block: str, triplets: list[list[float]], shape: tuple[int, int]) -> np.ndarray:
    mat = np.zeros(shape, dtype=np.complex128)
    for i, j, re, im in triplets:
        if i != int(i) or j != int(j) or not (0 <= i < shape[0] and 0 <= j < shape[1]):
            raise ConfigError(f"{block} triplet index ({i}, {j}) outside {shape}")
        mat[int(i), int(j)] += complex(re, im)
    return mat


def network_to_json(p: PartitionedHamiltonian) -> dict[str, Any]:
    """Serialize to the versioned triplet document."""
    return {
        "schema_version": SCHEMA_VERSION,
        "n_sys": p.n_sys,
        "m_aux": p.m_aux,
        "offset": p.offset,
        "name": p.name,
        "h_s": _triplets(p.h_s),
        "h_a": _triplets(p.h_a),
        "rho": _triplets(p.rho),
    }


def network_from_json(doc: dict[str, Any]) -> PartitionedHamiltonian:
    """Parse and validate a triplet document; raises ConfigError on any schema problem."""
    try:
        data = NETWORK_SCHEMA(doc)
    except vol.Invalid as err:
        raise ConfigError(f"invalid network document: {err}") from err
    n, m = data["n_sys"], data["m_aux"]
    return PartitionedHamiltonian(
        h_s=_from_triplets("h_s", data["h_s"], (n, n)),
        h_a=_from_triplets("h_a", data["h_a"], (m, m)),
        rho=_from_triplets("rho", data["rho"], (m, n)),
        offset=data["offset"],
        name=data["name"],
    )
