"""Foot-mounted pedestrian dead reckoning.

Strapdown INS with SHOE stance detection, zero-velocity updates, and
quasi-static-field gated heading correction (electronic compass / HDR),
in three estimator variants: iez, iez-cqmd and aiez.
"""

from ._core import (
    ConfigError,
    DataError,
    NumericalError,
    __version__,
    compare,
    compass_heading,
    roll_pitch_from_accel,
    run_variant,
    simulate_to_dir,
    wrap_pi,
)

__all__ = [
    "ConfigError",
    "DataError",
    "NumericalError",
    "__version__",
    "compare",
    "compass_heading",
    "roll_pitch_from_accel",
    "run_variant",
    "simulate_to_dir",
    "wrap_pi",
]
