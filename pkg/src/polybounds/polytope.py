"""The local-realist polytope and its coupling-side relatives.

The polytope is the convex hull of the 16 deterministic strategies
(4 sign bits: Alice's two answers and Bob's two answers).  Membership is
decided by LP in behavior space (16-dimensional), so biased marginals are
handled; non-membership of a no-signaling behavior is certified by the
most-violated of the 8 CHSH facets.

The same module houses the three-variable correlation checks (the
two-sided inequality |E[AB] - E[AC]| <= 1 - E[BC] and the exact
joint-feasibility LP) and the coupling bounds on a pair of event
probabilities, since all of these are faces of one marginal-compatibility
story.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import SignalingError, ValidationError
from .model import (
    CHSH_VARIANTS,
    SIGNS,
    Behavior,
    CorrelationTable,
    CorrelationTriple,
    Interval,
    behavior_to_correlations,
    chsh_variant_values,
)
from .oracles import AtomGrid, oracle_joint_feasibility
from .solvers import LpProblem, lp_solve


def _bit(sign: int) -> int:
    return (1 - sign) // 2


@dataclass(frozen=True)
class DeterministicStrategy:
    """One of the 16 deterministic strategies: pre-agreed +-1 answers
    (a0, a1) for Alice's settings and (b0, b1) for Bob's.

    The causal view of the same object is a response pair: the treatment
    response maps instrument to treatment via bit(a_z), the outcome
    response maps treatment to outcome via bit(b_x), with bit(+1) = 0 and
    bit(-1) = 1.  ``response_indices`` and ``from_response_indices`` fix
    the bijection.
    """

    a0: int
    a1: int
    b0: int
    b1: int

    def __post_init__(self):
        for name, v in (("a0", self.a0), ("a1", self.a1), ("b0", self.b0), ("b1", self.b1)):
            if v not in (-1, 1):
                raise ValidationError(f"{name} must be +1 or -1, got {v}")

    @classmethod
    def from_bits(cls, bits: tuple[int, int, int, int]) -> "DeterministicStrategy":
        return cls(*(int(SIGNS[b]) for b in bits))

    @classmethod
    def from_response_indices(cls, rx: int, ry: int) -> "DeterministicStrategy":
        if not (0 <= rx < 4 and 0 <= ry < 4):
            raise ValidationError("response indices must lie in 0..3")
        return cls.from_bits((rx >> 1, rx & 1, ry >> 1, ry & 1))

    def response_indices(self) -> tuple[int, int]:
        """(treatment response, outcome response), each 2*f(0) + f(1)."""
        rx = 2 * _bit(self.a0) + _bit(self.a1)
        ry = 2 * _bit(self.b0) + _bit(self.b1)
        return rx, ry

    def correlations(self) -> CorrelationTable:
        a = np.array([self.a0, self.a1], dtype=float)
        b = np.array([self.b0, self.b1], dtype=float)
        return CorrelationTable(np.outer(a, b))

    def behavior(self) -> Behavior:
        p = np.zeros((2, 2, 2, 2))
        a_bits = (_bit(self.a0), _bit(self.a1))
        b_bits = (_bit(self.b0), _bit(self.b1))
        for x in range(2):
            for y in range(2):
                p[a_bits[x], b_bits[y], x, y] = 1.0
        return Behavior(p)


def enumerate_strategies() -> list[DeterministicStrategy]:
    """All 16 strategies in lexicographic (a0, a1, b0, b1) order, +1 first."""
    return [DeterministicStrategy.from_bits(bits) for bits in itertools.product((0, 1), repeat=4)]


def _strategy_behavior_matrix() -> np.ndarray:
    cols = [s.behavior().p.reshape(16) for s in enumerate_strategies()]
    return np.column_stack(cols)


_STRATEGY_MATRIX = _strategy_behavior_matrix()
_STRATEGY_MATRIX.setflags(write=False)


@dataclass(frozen=True, eq=False)
class MembershipCertificate:
    """Either mixing weights reproducing the behavior, or the most-violated
    CHSH facet (sign-variant index into ``model.CHSH_VARIANTS``)."""

    member: bool
    weights: np.ndarray | None
    facet_index: int | None
    facet_coefficients: np.ndarray | None
    facet_value: float | None


def local_membership(b: Behavior, tol: Tolerances = DEFAULT_TOLERANCES) -> MembershipCertificate:
    """Decide membership in the local polytope by LP over the 16 strategies."""
    target = b.p.reshape(16)
    result = lp_solve(
        LpProblem(c=np.zeros(16), A=_STRATEGY_MATRIX, b=target, sense="min"), tol
    )
    if result.status == "optimal":
        w = np.clip(result.x, 0.0, None)
        return MembershipCertificate(True, w / w.sum(), None, None, None)
    variants = chsh_variant_values(behavior_to_correlations(b))
    k = int(np.argmax(variants))
    return MembershipCertificate(False, None, k, CHSH_VARIANTS[k].copy(), float(variants[k]))


class FineCheckResult(NamedTuple):
    joint_exists: bool
    all_chsh_hold: bool


def fine_check(b: Behavior, tol: Tolerances = DEFAULT_TOLERANCES) -> FineCheckResult:
    """Joint-distribution existence versus the 8 CHSH inequalities.

    The joint is sought over the 16 atoms of the four observables by LP;
    the facet check is plain arithmetic on the correlators.  The two
    answers must agree for every no-signaling behavior; signaling input is
    rejected because the equivalence presupposes no-signaling.
    """
    if not b.no_signaling:
        raise SignalingError("joint-distribution equivalence requires a no-signaling behavior")
    grid = AtomGrid.signs(4)  # atom = (value A0, value A1, value B0, value B1)
    constraints = []
    for a in range(2):
        for bb in range(2):
            for x in range(2):
                for y in range(2):
                    row = np.array(
                        [
                            1.0 if atom[x] == SIGNS[a] and atom[2 + y] == SIGNS[bb] else 0.0
                            for atom in grid.atoms
                        ]
                    )
                    constraints.append((row, float(b.p[a, bb, x, y])))
    joint = oracle_joint_feasibility(constraints, grid, tol)
    variants = chsh_variant_values(behavior_to_correlations(b))
    return FineCheckResult(joint, bool(variants.max() <= 2.0 + tol.facet))


class BooleBellResult(NamedTuple):
    holds: bool
    slack: float


def boole_bell_check(t: CorrelationTriple) -> BooleBellResult:
    """Two-sided three-variable inequality |E[AB] - E[AC]| <= 1 - E[BC]."""
    slack = (1.0 - t.e_bc) - abs(t.e_ab - t.e_ac)
    return BooleBellResult(slack >= -DEFAULT_TOLERANCES.inequality_slack, float(slack))


def triple_feasibility(t: CorrelationTriple, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Is there a joint +-1 distribution with the three pair correlations?

    Single-variable marginals are left free; unit variances are automatic
    for sign variables.
    """
    grid = AtomGrid.signs(3)
    atoms = np.asarray(grid.atoms, dtype=float)
    constraints = [
        (atoms[:, 0] * atoms[:, 1], t.e_ab),
        (atoms[:, 0] * atoms[:, 2], t.e_ac),
        (atoms[:, 1] * atoms[:, 2], t.e_bc),
    ]
    return oracle_joint_feasibility(constraints, grid, tol)


def frechet_bounds(u: float, v: float) -> Interval:
    """Coupling bounds on P(A and B) given P(A) = u, P(B) = v:
    max(u + v - 1, 0) <= P(A and B) <= min(u, v)."""
    for name, p in (("u", u), ("v", v)):
        if not (np.isfinite(p) and 0.0 <= p <= 1.0):
            raise ValidationError(f"{name} must be a probability in [0, 1], got {p}")
    return Interval(max(u + v - 1.0, 0.0), min(u, v))


def comonotone_coupling(u: float, v: float) -> np.ndarray:
    """Joint table [i, j] = P(A=i, B=j) of the rank-preserving coupling;
    attains the upper coupling bound min(u, v)."""
    frechet_bounds(u, v)  # domain check
    p11 = min(u, v)
    return np.array([[1.0 - u - v + p11, v - p11], [u - p11, p11]])


def countermonotone_coupling(u: float, v: float) -> np.ndarray:
    """Rank-reversing coupling; attains the lower bound max(u + v - 1, 0)."""
    frechet_bounds(u, v)
    p11 = max(u + v - 1.0, 0.0)
    return np.array([[1.0 - u - v + p11, v - p11], [u - p11, p11]])


def local_max(functional, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """LP maximum of a correlation functional over the local polytope."""
    f = np.asarray(functional, dtype=float)
    if f.shape != (2, 2):
        raise ValidationError("functional must be a 2x2 coefficient array")
    values = np.array([np.sum(f * s.correlations().e) for s in enumerate_strategies()])
    result = lp_solve(
        LpProblem(c=values, A=np.ones((1, 16)), b=np.array([1.0]), sense="max"), tol
    )
    return result.value


def no_signaling_max(functional, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """LP maximum of a correlation functional over the no-signaling polytope.

    Variables are the 16 behavior entries; constraints are the four
    normalizations plus marginal independence of the remote setting.
    """
    f = np.asarray(functional, dtype=float)
    if f.shape != (2, 2):
        raise ValidationError("functional must be a 2x2 coefficient array")

    def idx(a, b, x, y):
        return ((a * 2 + b) * 2 + x) * 2 + y

    rows, rhs = [], []
    for x in range(2):
        for y in range(2):
            row = np.zeros(16)
            for a in range(2):
                for b in range(2):
                    row[idx(a, b, x, y)] = 1.0
            rows.append(row)
            rhs.append(1.0)
    for x in range(2):  # Alice's marginal independent of y (a = 0 suffices)
        row = np.zeros(16)
        for b in range(2):
            row[idx(0, b, x, 0)] += 1.0
            row[idx(0, b, x, 1)] -= 1.0
        rows.append(row)
        rhs.append(0.0)
    for y in range(2):  # Bob's marginal independent of x
        row = np.zeros(16)
        for a in range(2):
            row[idx(a, 0, 0, y)] += 1.0
            row[idx(a, 0, 1, y)] -= 1.0
        rows.append(row)
        rhs.append(0.0)

    c = np.zeros(16)
    for a in range(2):
        for b in range(2):
            for x in range(2):
                for y in range(2):
                    c[idx(a, b, x, y)] = SIGNS[a] * SIGNS[b] * f[x, y]
    result = lp_solve(LpProblem(c=c, A=np.array(rows), b=np.array(rhs), sense="max"), tol)
    return result.value
