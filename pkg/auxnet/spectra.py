"""Finite-lattice spectra, participation ratios and the PT-symmetric BIC lattice."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, replace
from typing import Callable, Iterable

import numpy as np

from .const import (
    BAND_EDGE,
    DEFAULT_EPS_IMAG,
    PT_THRESHOLD_BRACKET,
    THRESHOLD_RESOLUTION,
)
from .exceptions import DomainError, NoBracket, ZeroVector
from .network import PtBicParams, assemble_composite, build_pt_bic, pt_bic_hopping
from .numerics import eig_dense, eigvals_dense, solve_linear

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenpairs of a finite lattice, sorted by (Re E, Im E)."""

    energies: np.ndarray
    vectors: np.ndarray
    participation: np.ndarray
    max_abs_imag: float
    n_sites: int


def participation_ratio(v) -> float:
    """(sum |c|^2)^2 / sum |c|^4: about 1 for localized, about N for extended states."""
    weights = np.abs(np.asarray(v, dtype=np.complex128).reshape(-1))
    peak = weights.max(initial=0.0)
    if peak == 0.0:
        raise ZeroVector("participation ratio of a zero vector")
    weights = (weights / peak) ** 2
    return float(weights.sum() ** 2 / np.sum(weights**2))


def _participation_columns(vectors: np.ndarray) -> np.ndarray:
    weights = np.abs(vectors) ** 2
    return weights.sum(axis=0) ** 2 / np.sum(weights**2, axis=0)


def spectrum(h) -> SpectrumReport:
    result = eig_dense(h)
    return SpectrumReport(
        energies=result.values,
        vectors=result.right_vectors,
        participation=_participation_columns(result.right_vectors),
        max_abs_imag=float(np.max(np.abs(result.values.imag))),
        n_sites=result.values.shape[0],
    )


def gap_states(report: SpectrumReport, kappa: float = 1.0) -> np.ndarray:
    """Indices of eigenvalues outside the band, |Re E| > 2 kappa."""
    return np.flatnonzero(np.abs(report.energies.real) > BAND_EDGE * kappa)


def align_phase(v: np.ndarray) -> np.ndarray:
    """Rotate so the largest-magnitude component is real and positive."""
    v = np.asarray(v, dtype=np.complex128)
    k = int(np.argmax(np.abs(v)))
    if v[k] == 0:
        raise ZeroVector("cannot align the phase of a zero vector")
    return v * (abs(v[k]) / v[k])


# ----------------------------------------------------------------------------
# Bound state in the continuum
# ----------------------------------------------------------------------------


def bic_state(g: float, n_half: int, kappa: float = 1.0) -> np.ndarray:
    """Algebraically localized zero mode over sites -n_half .. n_half.

    c_0 = kappa / g, odd sites vanish and c_n = sign(n) i^(n+1) / sqrt(n^2 - 1)
    on even n != 0.
    """
    if g == 0:
        raise DomainError("g = 0 has no bound state in the continuum")
    n = np.arange(-n_half, n_half + 1)
    c = np.zeros(n.shape, dtype=np.complex128)
    even = (n % 2 == 0) & (n != 0)
    phases = np.array([1.0, 1j, -1.0, -1j])[(n[even] + 1) % 4]
    c[even] = np.sign(n[even]) * phases / np.sqrt(n[even] ** 2 - 1.0)
    c[n_half] = kappa / g
    return c


def embed_bic_composite(p: PtBicParams) -> np.ndarray:
    """BIC amplitudes on the S sites followed by the auxiliary amplitudes (E - H_A)^-1 rho c at E = 0."""
    network = build_pt_bic(p)
    c = bic_state(p.g, p.n_half, p.kappa)
    aux = solve_linear(-network.h_a, network.rho @ c)
    return np.concatenate([c, aux])


def odd_site_mass(vector: np.ndarray, p: PtBicParams) -> float:
    """Fraction of the norm on odd S sites."""
    s_part = np.asarray(vector)[: p.n_trunc]
    odd = np.arange(-p.n_half, p.n_half + 1) % 2 == 1
    total = float(np.sum(np.abs(vector) ** 2))
    if total == 0.0:
        raise ZeroVector("odd-site mass of a zero vector")
    return float(np.sum(np.abs(s_part[odd]) ** 2) / total)


@dataclass(frozen=True)
class BicResidual:
    """||H psi|| / ||psi|| split into interior rows and the two chain-end rows.

    ``tail_bound`` is the analytic end contribution, the missing hoppings
    times the amplitudes just beyond the truncation.
    """

    interior: float
    boundary_tail: float
    tail_bound: float
    total: float


def verify_bic(p: PtBicParams) -> BicResidual:
    psi = embed_bic_composite(p)
    residual = assemble_composite(build_pt_bic(p)) @ psi
    norm = float(np.linalg.norm(psi))
    ends = np.zeros(residual.shape, dtype=bool)
    ends[[0, p.n_trunc - 1]] = True

    beyond = bic_state(p.g, p.n_half + 1, p.kappa)
    missing = [
        pt_bic_hopping(-p.n_half, p.kappa) * beyond[0],
        pt_bic_hopping(p.n_half + 1, p.kappa) * beyond[-1],
    ]
    report = BicResidual(
        interior=float(np.linalg.norm(residual[~ends]) / norm),
        boundary_tail=float(np.linalg.norm(residual[ends]) / norm),
        tail_bound=float(np.linalg.norm(missing) / norm),
        total=float(np.linalg.norm(residual) / norm),
    )
    _LOGGER.debug("BIC residual for n_half=%d: %s", p.n_half, report)
    return report


def bic_index(report: SpectrumReport) -> int:
    """Index of the eigenvalue closest to E = 0."""
    return int(np.argmin(np.abs(report.energies)))


def bic_overlap(report: SpectrumReport, p: PtBicParams) -> float:
    """|<psi, v>| between the normalized analytic state and the mid-band eigenvector."""
    psi = align_phase(embed_bic_composite(p))
    v = align_phase(report.vectors[:, bic_index(report)])
    return float(abs(np.vdot(psi, v)) / (np.linalg.norm(psi) * np.linalg.norm(v)))


# ----------------------------------------------------------------------------
# PT-breaking threshold
# ----------------------------------------------------------------------------

CompositeBuilder = Callable[[float], np.ndarray]


def pt_bic_builder(p: PtBicParams) -> CompositeBuilder:
    def build(u_aux: float) -> np.ndarray:
        return assemble_composite(build_pt_bic(replace(p, u_aux=u_aux)))

    return build


def max_abs_imag(h) -> float:
    return float(np.max(np.abs(eigvals_dense(h).imag)))


def pt_threshold_scan(
    builder: CompositeBuilder,
    u_range: tuple[float, float] = PT_THRESHOLD_BRACKET,
    eps_imag: float = DEFAULT_EPS_IMAG,
    *,
    resolution: float = THRESHOLD_RESOLUTION,
) -> float:
    """Bisect for the smallest U whose spectrum has |Im E| > eps_imag."""
    lo, hi = u_range
    if not lo < hi:
        raise ValueError(f"empty U range {u_range}")
    if max_abs_imag(builder(lo)) > eps_imag or max_abs_imag(builder(hi)) <= eps_imag:
        raise NoBracket(f"U range {u_range} does not bracket the PT-breaking transition")
    steps = 0
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if max_abs_imag(builder(mid)) > eps_imag:
            hi = mid
        else:
            lo = mid
        steps += 1
    _LOGGER.debug("PT threshold bracket [%.6f, %.6f] after %d bisections", lo, hi, steps)
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ThresholdPoint:
    n_sites: int
    u_threshold: float


def pt_threshold_vs_size(
    sizes: Iterable[int],
    base: PtBicParams,
    u_range: tuple[float, float] = PT_THRESHOLD_BRACKET,
    eps_imag: float = DEFAULT_EPS_IMAG,
    *,
    max_workers: int | None = None,
) -> list[ThresholdPoint]:
    """Threshold per S-chain size; sizes without a bracket report NaN."""
    sizes = list(sizes)

    def one(n_trunc: int) -> ThresholdPoint:
        builder = pt_bic_builder(replace(base, n_trunc=n_trunc))
        try:
            value = pt_threshold_scan(builder, u_range, eps_imag)
        except NoBracket as err:
            _LOGGER.warning("N=%d: %s", n_trunc, err)
            value = float("nan")
        return ThresholdPoint(n_sites=n_trunc + 2, u_threshold=value)

    results: list[ThresholdPoint] = []
    with ThreadPoolExecutor(max_workers=max_workers) as ex:
        futures = [ex.submit(one, n) for n in sizes]
        for fut in as_completed(futures):
            results.append(fut.result())
    return sorted(results, key=lambda point: point.n_sites)
