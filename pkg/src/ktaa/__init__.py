"""Lattice-based dynamic k-times anonymous authentication.

Executable toy presets exercise the full protocol (join, grant/revoke,
bounded anonymous authentication, public tracing); the paper-scale presets
exist for the communication-cost estimator only.  The bundled proof backend
is transparent — NOT zero-knowledge — see the README before using any of
this for anything beyond study.
"""

__version__ = "0.1.0"

from .params import PRESETS, ParamSet, get_preset  # noqa: F401
