"""Time evolution of composite and effective networks and the Lee-model comparison."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .const import DEFAULT_DT, DEFAULT_LEE_DT, DEFAULT_T_MAX, FREQUENCY_PAD_FACTOR
from .network import LeeParams, PartitionedHamiltonian, assemble_composite, build_lee_exact, build_lee_synth
from .numerics import Trajectory, as_matrix, propagate_linear
from .reduction import markov_effective
from .scattering import lee_bound_energies

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class TimeSeries:
    times: np.ndarray
    values: np.ndarray

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0


def echo_time(n_sites: int, kappa: float = 1.0) -> float:
    """Time after which waves reflected at the truncation reach the origin again."""
    return n_sites / (2.0 * kappa)


def _from_site(h: np.ndarray, site: int, t_max: float, dt: float) -> Trajectory:
    h = as_matrix(h, "H")
    if not 0 <= site < h.shape[0]:
        raise IndexError(f"site {site} outside 0..{h.shape[0] - 1}")
    c0 = np.zeros(h.shape[0], dtype=np.complex128)
    c0[site] = 1.0
    return propagate_linear(h, c0, t_max, dt)


def occupation_series(h, site: int = 0, t_max: float = DEFAULT_T_MAX, dt: float = DEFAULT_DT) -> TimeSeries:
    """P(t) = |c_site(t)|^2 starting from c_n(0) = delta_{n,site}; no renormalization."""
    traj = _from_site(h, site, t_max, dt)
    return TimeSeries(times=traj.times, values=np.abs(traj.states[:, site]) ** 2)


def norm_series(h, site: int = 0, t_max: float = DEFAULT_T_MAX, dt: float = DEFAULT_DT) -> TimeSeries:
    traj = _from_site(h, site, t_max, dt)
    return TimeSeries(times=traj.times, values=np.sum(np.abs(traj.states) ** 2, axis=1))


def dominant_frequency(series: TimeSeries, pad_factor: int = FREQUENCY_PAD_FACTOR) -> float:
    """Angular frequency of the strongest oscillation in ``series``.

    Hann window after removing the window-weighted mean, zero padding by
    ``pad_factor`` and parabolic interpolation around the peak bin.
    """
    values = np.asarray(series.values, dtype=float)
    n = values.shape[0]
    if n < 4 or series.dt <= 0.0:
        raise ValueError("need at least four uniformly spaced samples")
    window = np.hanning(n)
    centered = values - np.sum(window * values) / np.sum(window)
    n_fft = pad_factor * n
    magnitude = np.abs(np.fft.rfft(centered * window, n=n_fft))
    if not np.any(magnitude[1:]):
        return 0.0
    k = int(np.argmax(magnitude[1:])) + 1
    offset = 0.0
    if k + 1 < magnitude.shape[0]:
        left, mid, right = magnitude[k - 1], magnitude[k], magnitude[k + 1]
        curvature = left - 2.0 * mid + right
        if curvature != 0.0:
            offset = 0.5 * (left - right) / curvature
    return float(2.0 * np.pi * (k + offset) / (n_fft * series.dt))


@dataclass(frozen=True)
class LeeComparison:
    series_exact: TimeSeries
    series_synth: TimeSeries
    linf_gap: float
    dominant_frequency: float
    dominant_frequency_synth: float
    beat_frequency: float
    echo_time: float


def compare_lee(
    p: LeeParams,
    t_max: float = DEFAULT_T_MAX,
    dt: float = DEFAULT_LEE_DT,
    e_ref: complex | str = "E2",
) -> LeeComparison:
    """P(t) of the exact Lee chain against the auxiliary-site synthesis, both from c_n(0) = delta_{n,0}."""
    window = echo_time(p.n_trunc + 1, p.kappa)
    if t_max > window:
        _LOGGER.warning("t_max=%g exceeds the echo-free window %g of n_trunc=%d", t_max, window, p.n_trunc)
    exact = occupation_series(build_lee_exact(p), 0, t_max, dt)
    synth = occupation_series(assemble_composite(build_lee_synth(p, e_ref)), 0, t_max, dt)
    e1, e2 = lee_bound_energies(p.sigma, p.g_imag, p.kappa)
    comparison = LeeComparison(
        series_exact=exact,
        series_synth=synth,
        linf_gap=float(np.max(np.abs(exact.values - synth.values))),
        dominant_frequency=dominant_frequency(exact),
        dominant_frequency_synth=dominant_frequency(synth),
        beat_frequency=abs(e1 - e2),
        echo_time=window,
    )
    _LOGGER.debug(
        "Lee comparison: gap %.3e, frequencies %.4f / %.4f (beat %.4f)",
        comparison.linf_gap,
        comparison.dominant_frequency,
        comparison.dominant_frequency_synth,
        comparison.beat_frequency,
    )
    return comparison


def markov_discrepancy(
    p: PartitionedHamiltonian,
    site: int = 0,
    t_max: float = DEFAULT_T_MAX,
    dt: float = DEFAULT_DT,
) -> float:
    """max_t |P_full(t) - P_markov(t)| for a start on system site ``site``."""
    full = occupation_series(assemble_composite(p), site, t_max, dt)
    reduced = occupation_series(markov_effective(p), site, t_max, dt)
    return float(np.max(np.abs(full.values - reduced.values)))
