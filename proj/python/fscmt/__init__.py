"""Python bindings for the FS-CMT massive MIMO simulator."""

from ._fscmt import (
    ScenarioConfig,
    ScenarioResult,
    __version__,
    coefficients,
    default_config,
    load_config,
    mmse_combiner,
    parse_config,
    prototype,
    round_trip_sir,
    run_scenario,
    selftest,
    theoretical_sinr,
)

__all__ = [
    "ScenarioConfig",
    "ScenarioResult",
    "__version__",
    "coefficients",
    "default_config",
    "load_config",
    "mmse_combiner",
    "parse_config",
    "prototype",
    "round_trip_sir",
    "run_scenario",
    "selftest",
    "theoretical_sinr",
]
