"""Levy-walk tatonnement: order-book simulator and search analytics."""

from ._core import (  # noqa: F401
    ConfigError,
    __version__,
    ballistic_scaling,
    cauchy_propagator,
    factor_surface,
    interauction_density,
    msd_exponent_synthetic,
    propagator,
    simulate,
)
