"""Dense complex linear-algebra substrate.

Every public operation takes numpy arrays (or anything ``np.asarray`` accepts),
rejects non-finite input and returns fresh arrays; nothing here keeps state.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg
from scipy.linalg import LinAlgError, LinAlgWarning
from scipy.linalg.lapack import get_lapack_funcs

from .const import (
    CONDITION_CAP,
    DEFAULT_DT,
    EIG_MAX_SWEEPS,
    EIG_TOL,
    PIVOT_THRESHOLD,
    RK4_STABILITY_LIMIT,
    ROOT_TOL,
    SOLVE_TOL,
    SPECTRA_GAP_THRESHOLD,
    SYLVESTER_TOL,
)
from .exceptions import (
    ConvergenceFailure,
    DegenerateLeadingCoefficient,
    DimensionMismatch,
    NonFiniteInput,
    SingularMatrix,
    SpectraOverlap,
    StepTooLarge,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class EigResult:
    """Eigenvalues sorted by (real, imag) and their unit-norm right eigenvectors.

    Column ``k`` of ``right_vectors`` pairs with ``values[k]``.
    """

    values: np.ndarray
    right_vectors: np.ndarray
    max_residual: float


@dataclass(frozen=True)
class Trajectory:
    """States of a linear ODE sampled on a uniform time grid."""

    times: np.ndarray
    states: np.ndarray  # shape (len(times), n)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0


def as_matrix(a, name: str = "matrix", *, square: bool = True) -> np.ndarray:
    """Return ``a`` as a finite 2-D complex array, validating its shape."""
    arr = np.array(a, dtype=np.complex128, copy=True)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DimensionMismatch(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{name} contains NaN or Inf")
    return arr


def as_vector(v, name: str = "vector") -> np.ndarray:
    """Return ``v`` as a finite 1-D complex array."""
    arr = np.array(v, dtype=np.complex128, copy=True).reshape(-1)
    if arr.size == 0:
        raise DimensionMismatch(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{name} contains NaN or Inf")
    return arr


def solve_linear(a, b, *, tol: float = SOLVE_TOL) -> np.ndarray:
    """Solve ``A x = b`` by LU with partial pivoting.

    ``b`` may be a vector or a matrix of right-hand sides (one per column).
    Raises SingularMatrix when a pivot underflows PIVOT_THRESHOLD * ||A||, when
    the LAPACK 1-norm condition estimate exceeds CONDITION_CAP, or when the
    backward error ||Ax - b|| / (||A|| ||x|| + ||b||) exceeds ``tol``.
    """
    a = as_matrix(a, "A")
    b = as_matrix(b, "b", square=False) if np.ndim(b) == 2 else as_vector(b, "b")
    n = a.shape[0]
    if b.shape[0] != n:
        raise DimensionMismatch(f"b has {b.shape[0]} rows, expected {n}")

    a_norm = np.linalg.norm(a, 1)
    if a_norm == 0.0:
        raise SingularMatrix("A is the zero matrix")

    with warnings.catch_warnings():
        # Exact zero pivots are reported below with their index.
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)

    pivots = np.abs(np.diag(lu))
    smallest = int(np.argmin(pivots))
    if pivots[smallest] < PIVOT_THRESHOLD * a_norm:
        raise SingularMatrix(
            f"pivot {smallest} has magnitude {pivots[smallest]:.3e} "
            f"(threshold {PIVOT_THRESHOLD * a_norm:.3e})"
        )

    (gecon,) = get_lapack_funcs(("gecon",), (lu,))
    rcond, info = gecon(lu, a_norm, norm="1")
    if info == 0 and rcond > 0.0 and 1.0 / rcond > CONDITION_CAP:
        raise SingularMatrix(f"condition estimate {1.0 / rcond:.3e} exceeds cap {CONDITION_CAP:.1e}")

    x = scipy.linalg.lu_solve((lu, piv), b, check_finite=False)

    residual = np.linalg.norm(a @ x - b)
    scale = np.linalg.norm(a, 2 if n <= 64 else "fro") * np.linalg.norm(x) + np.linalg.norm(b)
    if scale > 0.0 and residual > tol * scale:
        raise SingularMatrix(f"backward error {residual / scale:.3e} exceeds tolerance {tol:.1e}")
    return x


def eig_dense(a, *, tol: float = EIG_TOL) -> EigResult:
    """General (non-Hermitian) eigendecomposition via LAPACK Hessenberg QR.

    Values are sorted by real part, then imaginary part. The residual
    max_k ||A v_k - l_k v_k|| / (||A||_F ||v_k||) must stay below ``tol``.
    """
    a = as_matrix(a, "A")
    try:
        values, vectors = scipy.linalg.eig(a, check_finite=False)
    except LinAlgError as err:
        raise ConvergenceFailure(
            f"QR iteration did not converge within {EIG_MAX_SWEEPS} sweeps per eigenvalue"
        ) from err

    order = np.lexsort((values.imag, values.real))
    values = values[order]
    vectors = vectors[:, order]
    norms = np.linalg.norm(vectors, axis=0)
    norms[norms == 0.0] = 1.0
    vectors = vectors / norms

    a_norm = np.linalg.norm(a, "fro")
    residuals = np.linalg.norm(a @ vectors - vectors * values, axis=0)
    max_residual = float(residuals.max() / a_norm) if a_norm > 0.0 else float(residuals.max())
    if max_residual > tol:
        raise ConvergenceFailure(
            f"eigen-residual {max_residual:.3e} exceeds tolerance {tol:.1e} (n={a.shape[0]})"
        )
    _LOGGER.debug("eig_dense: n=%d, max residual %.2e", a.shape[0], max_residual)
    return EigResult(values=values, right_vectors=vectors, max_residual=max_residual)


def eigvals_dense(a) -> np.ndarray:
    """Eigenvalues only, sorted like eig_dense; for scans that never need vectors."""
    a = as_matrix(a, "A")
    try:
        values = scipy.linalg.eigvals(a, check_finite=False)
    except LinAlgError as err:
        raise ConvergenceFailure(f"QR iteration did not converge (n={a.shape[0]})") from err
    return values[np.lexsort((values.imag, values.real))]


def solve_sylvester(a, b, c, *, tol: float = SYLVESTER_TOL) -> np.ndarray:
    """Solve ``A X - X B = C`` (A m*m, B n*n, C m*n) by Bartels-Stewart."""
    a = as_matrix(a, "A")
    b = as_matrix(b, "B")
    c = as_matrix(c, "C", square=False)
    if c.shape != (a.shape[0], b.shape[0]):
        raise DimensionMismatch(f"C has shape {c.shape}, expected {(a.shape[0], b.shape[0])}")

    scale = np.linalg.norm(a, "fro") + np.linalg.norm(b, "fro")
    gap = np.min(np.abs(scipy.linalg.eigvals(a)[:, None] - scipy.linalg.eigvals(b)[None, :]))
    if gap < SPECTRA_GAP_THRESHOLD * max(scale, 1.0):
        raise SpectraOverlap(f"spectra of A and B are {gap:.3e} apart")

    try:
        x = scipy.linalg.solve_sylvester(a, -b, c)
    except LinAlgError as err:
        raise SpectraOverlap(f"Sylvester solve failed: {err}") from err

    residual = np.linalg.norm(a @ x - x @ b - c)
    bound = tol * scale * np.linalg.norm(x)
    if residual > max(bound, tol * np.linalg.norm(c)):
        raise ConvergenceFailure(f"Sylvester residual {residual:.3e} exceeds bound {bound:.3e}")
    return x


def _poly_scale(coeffs: np.ndarray, root: complex) -> float:
    degree = len(coeffs) - 1
    powers = np.abs(root) ** np.arange(degree, -1, -1)
    return float(np.sum(np.abs(coeffs) * powers))


def poly_roots(coeffs: Sequence[complex], *, tol: float = ROOT_TOL) -> np.ndarray:
    """Roots of ``c[0] y^d + c[1] y^(d-1) + ... + c[d]`` (companion-matrix eigenvalues).

    Each root is polished with Newton steps until |p(y)| <= tol * sum_k |c_k||y|^(d-k).
    Returned sorted by (real, imag).
    """
    c = as_vector(coeffs, "coeffs")
    if len(c) < 2:
        raise DimensionMismatch("a polynomial of degree >= 1 needs at least two coefficients")
    if abs(c[0]) <= np.finfo(float).tiny * max(np.max(np.abs(c)), 1.0):
        raise DegenerateLeadingCoefficient("leading coefficient is zero")

    roots = np.roots(c).astype(np.complex128)
    derivative = np.polyder(c)
    for k, root in enumerate(roots):
        for _ in range(8):
            value = np.polyval(c, root)
            if abs(value) <= tol * _poly_scale(c, root) * 1e-3:
                break
            slope = np.polyval(derivative, root)
            if slope == 0:
                break
            root = root - value / slope
        if abs(np.polyval(c, root)) > tol * _poly_scale(c, root):
            raise ConvergenceFailure(f"root {root!r} has residual {abs(np.polyval(c, root)):.3e}")
        roots[k] = root

    return roots[np.lexsort((roots.imag, roots.real))]


def _rk4_propagator(h: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step for ``i dc/dt = H c`` as a matrix.

    For a linear autonomous system the four stages collapse to the degree-4
    Taylor polynomial of exp(-i H dt), applied here in Horner form.
    """
    n = h.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    z = -1j * dt * h
    step = eye + z / 4.0
    step = eye + (z / 3.0) @ step
    step = eye + (z / 2.0) @ step
    return eye + z @ step


def propagate_linear(h, c0, t_max: float, dt: float = DEFAULT_DT) -> Trajectory:
    """Integrate ``i dc/dt = H c`` with fixed-step classical RK4.

    The grid is ``k * dt`` for ``k = 0 .. round(t_max / dt)``. Raises
    StepTooLarge when dt * ||H||_2 exceeds RK4_STABILITY_LIMIT.
    """
    h = as_matrix(h, "H")
    c = as_vector(c0, "c0")
    if c.shape[0] != h.shape[0]:
        raise DimensionMismatch(f"c0 has length {c.shape[0]}, expected {h.shape[0]}")
    if not t_max > 0.0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    if not dt > 0.0:
        raise StepTooLarge(f"dt must be positive, got {dt}")

    h_norm = float(np.linalg.norm(h, 2))
    if dt * h_norm > RK4_STABILITY_LIMIT:
        raise StepTooLarge(
            f"dt * ||H|| = {dt * h_norm:.3f} exceeds the RK4 bound {RK4_STABILITY_LIMIT}"
        )

    n_steps = max(int(round(t_max / dt)), 1)
    times = dt * np.arange(n_steps + 1)
    states = np.empty((n_steps + 1, h.shape[0]), dtype=np.complex128)
    states[0] = c
    step = _rk4_propagator(h, dt)
    for k in range(n_steps):
        states[k + 1] = step @ states[k]

    _LOGGER.debug("propagate_linear: n=%d, %d steps of dt=%g", h.shape[0], n_steps, dt)
    return Trajectory(times=times, states=states)
