"""Coupled common-pool resource / cooperation dynamics."""

from ._core import (
    AbmConfig,
    ConfigError,
    GridSpec,
    IntegrationError,
    IntegratorOptions,
    ModelError,
    ModelSpec,
    RunConfig,
    __version__,
    compare_ode_abm,
    compute_subcommand,
    critical_value,
    density_sweep,
    integrate,
    jacobian,
    parse_config,
    region_of,
    run_ensemble,
    run_subcommand,
    sample_trajectory,
    stationary_solutions,
    subcommand_names,
)

TERMINAL_CODES = {0: "Steady", 1: "Depleted", 2: "MaxTimeReached"}

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
