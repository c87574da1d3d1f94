"""Central tolerance configuration.

Every numeric threshold used by the package lives in one frozen record so
that the CLI (and tests) can override them in a single place instead of
hunting for magic numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # value-type construction
    normalization: float = 1e-12
    no_signaling: float = 1e-9
    interval_slack: float = 1e-12

    # facet / inequality decisions
    facet: float = 1e-9
    inequality_slack: float = 1e-12

    # linear programming
    lp_feasibility: float = 1e-9
    lp_pivot: float = 1e-10
    lp_iteration_factor: int = 50  # pivot cap = factor * (m + n)

    # semidefinite programming
    sdp_gap_target: float = 1e-9
    sdp_gap_accept: float = 1e-6
    sdp_feasibility_accept: float = 1e-7
    sdp_max_iterations: int = 200
    sdp_step_fraction: float = 0.98

    # brute-force oracles
    oracle_max_bases: int = 10**6

    # entropy vectors
    entropy_cone: float = 1e-9

    def with_overrides(self, **kwargs: float) -> "Tolerances":
        return replace(self, **kwargs)


DEFAULT_TOLERANCES = Tolerances()
