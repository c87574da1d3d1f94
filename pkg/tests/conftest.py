"""Shared generators for randomized tests.

Everything is seeded by the caller, so the suite is deterministic.
"""

import numpy as np

from polybounds import (
    Behavior,
    DichotomicObservable,
    ExperimentalData,
    ObservationalData,
    TwoQubitState,
    enumerate_strategies,
    iv_table_from_response_dist,
    quantum_behavior,
)

STRATEGY_TABLES = np.stack([s.behavior().p for s in enumerate_strategies()])


def random_local_behavior(rng) -> Behavior:
    weights = rng.dirichlet(np.ones(16))
    return Behavior(np.tensordot(weights, STRATEGY_TABLES, axes=(0, 0)))


def random_observable(rng) -> DichotomicObservable:
    return DichotomicObservable.from_bloch(rng.normal(size=3))


def random_state(rng) -> TwoQubitState:
    ket = rng.normal(size=4) + 1j * rng.normal(size=4)
    return TwoQubitState.from_ket(ket)


def random_quantum_behavior(rng) -> Behavior:
    return quantum_behavior(
        random_state(rng),
        random_observable(rng),
        random_observable(rng),
        random_observable(rng),
        random_observable(rng),
    )


def random_nosignaling_behavior(rng) -> Behavior:
    """Mixture family covering local, quantum, and noisy PR-box behaviors."""
    kind = rng.integers(3)
    if kind == 0:
        return random_local_behavior(rng)
    if kind == 1:
        return random_quantum_behavior(rng)
    lam = rng.uniform()
    return Behavior(lam * Behavior.pr_box().p + (1.0 - lam) * np.full((2, 2, 2, 2), 0.25))


def random_iv_table(rng):
    return iv_table_from_response_dist(rng.dirichlet(np.ones(16)))


def structural_iv_tables(rng, count: int) -> np.ndarray:
    """Forward-simulate the instrumental causal structure.

    A latent variable drawn from a random finite prior picks a pair of
    deterministic response functions; the observed table aggregates them.
    Returns an array of shape (count, 2, 2, 2) indexed [y, x, z].
    """
    tables = np.zeros((count, 2, 2, 2))
    for t in range(count):
        n_latent = int(rng.integers(1, 33))
        prior = rng.dirichlet(np.ones(n_latent))
        fx = rng.integers(0, 2, size=(n_latent, 2))  # treatment response per z
        fy = rng.integers(0, 2, size=(n_latent, 2))  # outcome response per x
        for u in range(n_latent):
            for z in range(2):
                x = fx[u, z]
                y = fy[u, x]
                tables[t, y, x, z] += prior[u]
    return tables


def random_counterfactual_instance(rng) -> tuple[ExperimentalData, ObservationalData]:
    """Forward-construct consistent experimental + observational data from an
    explicit joint over (Y0, Y1, X)."""
    pi = rng.dirichlet(np.ones(8))  # atom index 4*y0 + 2*y1 + x
    p_do1 = float(pi[2] + pi[3] + pi[6] + pi[7])
    p_do0 = float(pi[4] + pi[5] + pi[6] + pi[7])
    joint = np.array(
        [
            [pi[0] + pi[2], pi[4] + pi[6]],
            [pi[1] + pi[5], pi[3] + pi[7]],
        ]
    )
    return ExperimentalData(p_do1, p_do0), ObservationalData(joint)
