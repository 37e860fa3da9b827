"""Scenario configuration documents.

A config is a JSON object::

    {"schema_version": 1, "scenario": "lee", "parameters": {...}, "formats": ["csv", "svg"]}

Every parameter is optional; the keys filled from defaults are recorded on
the resulting ScenarioConfig so the run manifest can echo them.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import voluptuous as vol

from .const import (
    BOND_TOL,
    BOUND_STATE_ORACLE_HALF_WIDTH,
    DEFAULT_DEFECT_HALF_WIDTH,
    DEFAULT_EPS_IMAG,
    DEFAULT_LEE_DT,
    DEFAULT_LEE_SITES,
    DEFAULT_PT_BIC_SITES,
    DEFAULT_Q_POINTS,
    DEFAULT_T_MAX,
    DEFECT_CURVES,
    DEFECT_E_MAX,
    DEFECT_THETA,
    LEE_G,
    LEE_OMEGA,
    LEE_SIGMA,
    LEE_THETA,
    MIN_DEFECT_HALF_WIDTH,
    OUTPUT_FORMATS,
    PT_BIC_OMEGA,
    PT_BIC_U,
    REDUCE_HALF_WIDTH,
    REDUCE_THETA,
    REDUCE_U,
    SCENARIOS,
    SCHEMA_VERSION,
)
from .exceptions import ConfigError

_LOGGER = logging.getLogger(__name__)

CONF_SCHEMA_VERSION = "schema_version"
CONF_SCENARIO = "scenario"
CONF_PARAMETERS = "parameters"
CONF_FORMATS = "formats"


def _odd(value: int) -> int:
    if value % 2 != 1:
        raise vol.Invalid(f"expected an odd number of sites, got {value}")
    return value


_POSITIVE = vol.All(vol.Coerce(float), vol.Range(min=0.0, min_included=False))
_FINITE = vol.All(vol.Coerce(float), vol.Range(min=-1e12, max=1e12))
_ODD_SITES = vol.All(int, vol.Range(min=5), _odd)
_COMPLEX = vol.Any(_FINITE, vol.All([_FINITE], vol.Length(min=2, max=2)))

DEFECT_PARAMETERS: dict[Any, Any] = {
    vol.Optional("kappa", default=1.0): _POSITIVE,
    vol.Optional("theta", default=DEFECT_THETA): _FINITE,
    vol.Optional("u_values", default=[u for u, _ in DEFECT_CURVES]): vol.All(
        [_FINITE], vol.Length(min=1)
    ),
    vol.Optional("e_max", default=DEFECT_E_MAX): _POSITIVE,
    vol.Optional("n_q", default=DEFAULT_Q_POINTS): vol.All(int, vol.Range(min=3)),
    vol.Optional("n_trunc", default=DEFAULT_DEFECT_HALF_WIDTH): vol.All(
        int, vol.Range(min=MIN_DEFECT_HALF_WIDTH, max=BOUND_STATE_ORACLE_HALF_WIDTH)
    ),
    vol.Optional("bound_state_oracle", default=True): bool,
}

LEE_PARAMETERS: dict[Any, Any] = {
    vol.Optional("kappa", default=1.0): _POSITIVE,
    vol.Optional("sigma", default=LEE_SIGMA): _FINITE,
    vol.Optional("g_imag", default=LEE_G): vol.All(vol.Coerce(float), vol.Range(min=0.0)),
    vol.Optional("theta", default=LEE_THETA): _FINITE,
    vol.Optional("omega", default=LEE_OMEGA): _FINITE,
    vol.Optional("n_trunc", default=DEFAULT_LEE_SITES): vol.All(int, vol.Range(min=2)),
    vol.Optional("t_max", default=DEFAULT_T_MAX): _POSITIVE,
    vol.Optional("dt", default=DEFAULT_LEE_DT): _POSITIVE,
    vol.Optional("e_ref", default="E2"): vol.In(["E1", "E2"]),
}

PTBIC_PARAMETERS: dict[Any, Any] = {
    vol.Optional("kappa", default=1.0): _POSITIVE,
    vol.Optional("omega", default=PT_BIC_OMEGA): _FINITE,
    vol.Optional("u_aux", default=PT_BIC_U): _FINITE,
    vol.Optional("n_trunc", default=DEFAULT_PT_BIC_SITES): _ODD_SITES,
    vol.Optional("eps_imag", default=DEFAULT_EPS_IMAG): _POSITIVE,
}

REDUCE_PARAMETERS: dict[Any, Any] = {
    vol.Optional("kind", default="exact"): vol.In(["exact", "large_potential", "markov"]),
    vol.Optional("energy", default=0.0): _COMPLEX,
    # a network document inline, or a path to one; the side-coupled defect otherwise
    vol.Optional("network", default=None): vol.Any(None, dict),
    vol.Optional("network_file", default=None): vol.Any(None, str),
    vol.Optional("theta", default=REDUCE_THETA): _FINITE,
    vol.Optional("u_aux", default=REDUCE_U): _FINITE,
    vol.Optional("n_trunc", default=REDUCE_HALF_WIDTH): vol.All(
        int, vol.Range(min=MIN_DEFECT_HALF_WIDTH, max=BOUND_STATE_ORACLE_HALF_WIDTH)
    ),
}

SWEEP_PARAMETERS: dict[Any, Any] = {
    vol.Optional("kappa", default=1.0): _POSITIVE,
    vol.Optional("omega", default=PT_BIC_OMEGA): _FINITE,
    vol.Optional("sizes", default=[101, 201, DEFAULT_PT_BIC_SITES]): vol.All(
        [_ODD_SITES], vol.Length(min=1)
    ),
    vol.Optional("u_min", default=0.3): vol.Coerce(float),
    vol.Optional("u_max", default=0.7): vol.Coerce(float),
    vol.Optional("eps_imag", default=DEFAULT_EPS_IMAG): _POSITIVE,
    vol.Optional("max_workers", default=4): vol.All(int, vol.Range(min=1)),
}

SCENARIO_PARAMETERS: dict[str, dict[Any, Any]] = {
    "defect": DEFECT_PARAMETERS,
    "lee": LEE_PARAMETERS,
    "ptbic": PTBIC_PARAMETERS,
    "reduce": REDUCE_PARAMETERS,
    "sweep": SWEEP_PARAMETERS,
}


# Cross-field constraints; the per-key schemas cannot see more than one value.


def _invisible_tuning(theta: float, u_aux: float, kappa: float, key: str) -> None:
    if u_aux * (theta - kappa) <= 0:
        raise vol.Invalid(
            f"U (theta - kappa) = {u_aux * (theta - kappa):g} must be positive for U = {u_aux:g}",
            path=[key],
        )


def _defect_check(prm: dict[str, Any]) -> dict[str, Any]:
    for u_aux in prm["u_values"]:
        _invisible_tuning(prm["theta"], u_aux, prm["kappa"], "u_values")
    return prm


def _lee_check(prm: dict[str, Any]) -> dict[str, Any]:
    if abs(complex(prm["theta"], prm["g_imag"])) < BOND_TOL * prm["kappa"]:
        raise vol.Invalid("theta = G = 0 leaves no bond to synthesize", path=["theta"])
    return prm


def _ptbic_check(prm: dict[str, Any]) -> dict[str, Any]:
    if prm["u_aux"] == 0:
        raise vol.Invalid("u_aux = 0 leaves the target coupling omega^2 / U undefined", path=["u_aux"])
    return prm


def _reduce_check(prm: dict[str, Any]) -> dict[str, Any]:
    if prm["network"] is not None and prm["network_file"] is not None:
        raise vol.Invalid("give either network or network_file, not both")
    if prm["network"] is None and prm["network_file"] is None:
        _invisible_tuning(prm["theta"], prm["u_aux"], 1.0, "u_aux")
    return prm


def _sweep_check(prm: dict[str, Any]) -> dict[str, Any]:
    if not prm["u_min"] < prm["u_max"]:
        raise vol.Invalid(f"empty U range [{prm['u_min']:g}, {prm['u_max']:g}]", path=["u_min"])
    return prm


SCENARIO_CHECKS: dict[str, Callable[[dict[str, Any]], dict[str, Any]]] = {
    "defect": _defect_check,
    "lee": _lee_check,
    "ptbic": _ptbic_check,
    "reduce": _reduce_check,
    "sweep": _sweep_check,
}


def _formats(value: Any) -> list[str]:
    if isinstance(value, str):
        value = [part.strip() for part in value.split(",") if part.strip()]
    return vol.Schema(vol.All([vol.In(OUTPUT_FORMATS)], vol.Length(min=1)))(value)


def document_schema(scenario: str) -> vol.Schema:
    return vol.Schema(
        {
            vol.Required(CONF_SCHEMA_VERSION): vol.All(int, vol.In([SCHEMA_VERSION])),
            vol.Optional(CONF_SCENARIO): vol.In([scenario]),
            vol.Optional(CONF_PARAMETERS, default={}): vol.All(
                vol.Schema(SCENARIO_PARAMETERS[scenario], extra=vol.PREVENT_EXTRA),
                SCENARIO_CHECKS[scenario],
            ),
            vol.Optional(CONF_FORMATS, default=list(OUTPUT_FORMATS)): _formats,
        },
        extra=vol.PREVENT_EXTRA,
    )


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    parameters: dict[str, Any]
    output: Path
    formats: tuple[str, ...] = OUTPUT_FORMATS
    defaults_filled: tuple[str, ...] = field(default_factory=tuple)

    def wants(self, fmt: str) -> bool:
        return fmt in self.formats


def parse_config(
    doc: Any,
    scenario: str,
    output: str | Path,
    formats: str | None = None,
) -> ScenarioConfig:
    """Validate a config document for ``scenario``; ``formats`` overrides the document's list."""
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}; expected one of {', '.join(SCENARIOS)}")
    if not isinstance(doc, dict):
        raise ConfigError("the config document must be a JSON object")
    given = doc.get(CONF_PARAMETERS) or {}
    try:
        data = document_schema(scenario)(doc)
        chosen = _formats(formats) if formats is not None else data[CONF_FORMATS]
    except vol.Invalid as err:
        raise ConfigError(f"invalid {scenario} config: {err}") from err

    filled = tuple(sorted(key for key in data[CONF_PARAMETERS] if key not in given))
    _LOGGER.debug("%s config: defaults filled for %s", scenario, ", ".join(filled) or "nothing")
    return ScenarioConfig(
        scenario=scenario,
        parameters=data[CONF_PARAMETERS],
        output=Path(output),
        formats=tuple(fmt for fmt in OUTPUT_FORMATS if fmt in chosen),
        defaults_filled=filled,
    )


def load_config(
    path: str | Path | None,
    scenario: str,
    output: str | Path,
    formats: str | None = None,
) -> ScenarioConfig:
    """Read and validate a config file; ``None`` means every default."""
    if path is None:
        doc: Any = {CONF_SCHEMA_VERSION: SCHEMA_VERSION}
    else:
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as err:
            raise ConfigError(f"cannot read config {path}: {err}") from err
        except json.JSONDecodeError as err:
            raise ConfigError(f"config {path} is not valid JSON: {err}") from err
    return parse_config(doc, scenario, output, formats)
