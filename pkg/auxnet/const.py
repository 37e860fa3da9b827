"""Constants for the auxnet network-engineering toolkit.

Energies are in units of the lattice hopping kappa, times in units of 1/kappa.
"""

import json
from pathlib import Path
from typing import Final

# Read version from manifest.json
_MANIFEST_PATH = Path(__file__).parent / "manifest.json"
with open(_MANIFEST_PATH, encoding="utf-8") as _f:
    _MANIFEST = json.load(_f)
INTEGRATION_VERSION: Final[str] = _MANIFEST.get("version", "0.0.0")

DOMAIN: Final[str] = "auxnet"

# JSON documents (scenario configs, network files) carry this schema version
SCHEMA_VERSION: Final[int] = 1

# Numerical tolerances (all overridable per call)
SOLVE_TOL: Final[float] = 1e-10
EIG_TOL: Final[float] = 1e-9
SYLVESTER_TOL: Final[float] = 1e-10
ROOT_TOL: Final[float] = 1e-10
# Pivot magnitude (relative to ||A||) below which a linear system is singular.
PIVOT_THRESHOLD: Final[float] = 1e-14
# Condition-number cap for solve_linear (1-norm estimate).
CONDITION_CAP: Final[float] = 1e14
# Minimum eigenvalue gap (relative to ||A||+||B||) for a Sylvester solve.
SPECTRA_GAP_THRESHOLD: Final[float] = 1e-10
# |E - eig(H_A)| below RESONANCE_TOL * scale is treated as resonant.
RESONANCE_TOL: Final[float] = 1e-8
# Imaginary parts above -DISSIPATION_TOL count as non-dissipative.
DISSIPATION_TOL: Final[float] = 1e-12
# Entry tolerance used by network.validate.
SYMMETRY_TOL: Final[float] = 1e-12
# |theta + iG| below this cannot host the synthesized Lee bond.
BOND_TOL: Final[float] = 1e-12

# Fixed-step RK4 integrator
DEFAULT_DT: Final[float] = 0.01
# Classical RK4 is stable on the imaginary axis for |lambda dt| < 2*sqrt(2).
RK4_STABILITY_LIMIT: Final[float] = 2.8
RK4_ORDER: Final[int] = 4

# Eigensolver iteration cap reported by ConvergenceFailure (LAPACK QR sweeps per eigenvalue)
EIG_MAX_SWEEPS: Final[int] = 30

# Scattering
DEFAULT_Q_POINTS: Final[int] = 2000
POLE_RADIUS_TOL: Final[float] = 1e-9
DEFAULT_SCATTERING_MARGIN: Final[int] = 6
BOUND_STATE_ORACLE_HALF_WIDTH: Final[int] = 400
BOUND_STATE_ORACLE_TOL: Final[float] = 1e-6

# Network truncation
MIN_DEFECT_HALF_WIDTH: Final[int] = 10
DEFAULT_DEFECT_HALF_WIDTH: Final[int] = 200
DEFAULT_LEE_SITES: Final[int] = 300
# 401 system sites + 2 auxiliary sites = a 403-site composite lattice.
DEFAULT_PT_BIC_SITES: Final[int] = 401

# Spectra
DEFAULT_EPS_IMAG: Final[float] = 1e-6
THRESHOLD_RESOLUTION: Final[float] = 1e-3
BAND_EDGE: Final[float] = 2.0

# Dynamics
DEFAULT_T_MAX: Final[float] = 40.0
DEFAULT_LEE_DT: Final[float] = 0.005
FREQUENCY_PAD_FACTOR: Final[int] = 16

# Implicit eigenproblem H_eff(E) c = E c (secant iteration)
IMPLICIT_MAX_ITER: Final[int] = 60
IMPLICIT_TOL: Final[float] = 1e-12

# Reference parameter sets of the three scenarios
DEFECT_THETA: Final[float] = 0.2
DEFECT_SIGMA: Final[float] = -0.8
# (U, omega) pairs of the four transmission curves; all satisfy the invisibility tuning.
DEFECT_CURVES: Final[tuple[tuple[float, float], ...]] = (
    (-5.0, 2.0),
    (-10.0, 2.0 * 2.0**0.5),
    (-20.0, 4.0),
    (-40.0, 4.0 * 2.0**0.5),
)
DEFECT_E_MAX: Final[float] = 1.9

LEE_SIGMA: Final[float] = 3.0
LEE_G: Final[float] = 1.05
LEE_OMEGA: Final[float] = 7.0
LEE_THETA: Final[float] = 0.2

PT_BIC_OMEGA: Final[float] = 1.0
PT_BIC_U: Final[float] = 0.4
PT_THRESHOLD_BRACKET: Final[tuple[float, float]] = (0.40, 0.55)

# Side-coupled defect reduced by the reduce scenario when no network is given
REDUCE_THETA: Final[float] = 0.2
REDUCE_U: Final[float] = -5.0
REDUCE_HALF_WIDTH: Final[int] = MIN_DEFECT_HALF_WIDTH

# CLI
SCENARIOS: Final[tuple[str, ...]] = ("defect", "lee", "ptbic", "reduce", "sweep")
OUTPUT_FORMATS: Final[tuple[str, ...]] = ("csv", "json", "svg")
CSV_SIGNIFICANT_DIGITS: Final[int] = 17
MANIFEST_FILENAME: Final[str] = "manifest.txt"
EXIT_OK: Final[int] = 0
EXIT_INVALID_CONFIG: Final[int] = 2
EXIT_NUMERICAL_FAILURE: Final[int] = 3
