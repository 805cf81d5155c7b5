"""Shared numerical tolerance.

Every approximate comparison in the package funnels through one epsilon.
The default is 1e-10; it can be overridden globally by the ``QRFLAB_EPS``
environment variable or at runtime via :func:`set_eps` (the CLI ``--eps``
flag does the latter).
"""

import os

DEFAULT_EPS = 1e-10

# Amplitudes below this are treated as exactly zero when reading off the
# classical support of a state (floating-point dust from prior transforms).
SUPPORT_EPS = 1e-12

_eps = float(os.environ.get("QRFLAB_EPS", DEFAULT_EPS))


def get_eps() -> float:
    return _eps


def set_eps(value: float) -> None:
    global _eps
    if not value > 0.0:
        raise ValueError(f"tolerance must be positive, got {value}")
    _eps = float(value)


def resolve_eps(eps: float | None) -> float:
    """Return the explicit tolerance if given, else the shared one."""
    return _eps if eps is None else float(eps)
