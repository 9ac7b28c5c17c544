"""Central tolerance record shared by all numerical checks."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    algebraic: float = 1e-10
    fd_first: float = 1e-8
    fd_second: float = 1e-5
    rank_rel: float = 1e-9
    membership: float = 1e-12
    # FD steps, relative to the parameter magnitude
    h_first: float = 1e-5
    h_second: float = 1e-4
    max_condition: float = 1e8


DEFAULT = Tolerances()
