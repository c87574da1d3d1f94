"""Partial identification for the binary instrumental-variable model.

The latent coordinate is a distribution over 16 response types: a
treatment response (instrument -> treatment) paired with an outcome
response (treatment -> outcome), four functions each.  The observed table
pins the type distribution down to a polytope; causal quantities are
linear, so their sharp bounds are LPs over that polytope.

Type order (index = 4 * treatment_response + outcome_response):

======================  =========================
treatment response      outcome response
======================  =========================
0  never-taker (0, 0)   0  never-recover (0, 0)
1  complier    (0, 1)   1  helped        (0, 1)
2  defier      (1, 0)   2  hurt          (1, 0)
3  always-taker (1, 1)  3  always-recover (1, 1)
======================  =========================

where (f(0), f(1)) lists the response function's values.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import (
    InconsistentDataError,
    InfeasibleTableError,
    ValidationError,
    ZeroConditioningError,
)
from .model import Interval, ObservedIVTable, ResponseTypeDist
from .solvers import LpProblem, lp_solve

#: (f(0), f(1)) for each treatment response index.
X_RESPONSES = ((0, 0), (0, 1), (1, 0), (1, 1))
X_RESPONSE_NAMES = ("never-taker", "complier", "defier", "always-taker")

#: (f(0), f(1)) for each outcome response index.
Y_RESPONSES = ((0, 0), (0, 1), (1, 0), (1, 1))
Y_RESPONSE_NAMES = ("never-recover", "helped", "hurt", "always-recover")


def response_matrix() -> np.ndarray:
    """The 8x16 matrix mapping type weights to the observed table.

    Row order matches ``ObservedIVTable.flat()``: index 4y + 2x + z.
    Column t = 4i + j contributes to row (y, x, z) iff the treatment
    response i sends z to x and the outcome response j sends x to y.
    """
    A = np.zeros((8, 16))
    for i, xr in enumerate(X_RESPONSES):
        for j, yr in enumerate(Y_RESPONSES):
            col = 4 * i + j
            for z in range(2):
                x = xr[z]
                y = yr[x]
                A[4 * y + 2 * x + z, col] = 1.0
    return A


RESPONSE_MATRIX = response_matrix()
RESPONSE_MATRIX.setflags(write=False)

#: Treatment-effect coefficient of each type: y(1) - y(0), a function of the
#: outcome response alone (0 for never/always, +1 helped, -1 hurt).
ACE_COEFFS = np.tile([0.0, 1.0, -1.0, 0.0], 4)
ACE_COEFFS.setflags(write=False)


def iv_table_from_response_dist(q) -> ObservedIVTable:
    """Forward map: the observed table generated by a type distribution."""
    qv = q.q if isinstance(q, ResponseTypeDist) else ResponseTypeDist(np.asarray(q, dtype=float)).q
    return ObservedIVTable((RESPONSE_MATRIX @ qv).reshape(2, 2, 2))


class InstrumentalCheck(NamedTuple):
    holds: bool
    value: float
    variant: str


def instrumental_inequality(t: ObservedIVTable, variant: str = "standard") -> InstrumentalCheck:
    """Testable implication of the IV model on the observed table.

    ``standard`` evaluates max over treatment arms of
    sum_y max_z p(y, x | z); ``paper_literal`` evaluates
    max_z sum_y max_x p(y, x | z), which is algebraically vacuous
    (bounded by each arm's normalization) and is kept only so the
    discrepancy with the standard form can be surfaced, not resolved.
    """
    p = t.p  # indexed [y, x, z]
    if variant == "standard":
        value = float(p.max(axis=2).sum(axis=0).max())
    elif variant == "paper_literal":
        value = float(p.max(axis=1).sum(axis=0).max())
    else:
        raise ValidationError(f"unknown variant {variant!r}")
    holds = value <= 1.0 + DEFAULT_TOLERANCES.inequality_slack
    return InstrumentalCheck(holds, value, variant)


def ace_bounds(t: ObservedIVTable, tol: Tolerances = DEFAULT_TOLERANCES) -> Interval:
    """Sharp bounds on the average causal effect by LP over type weights.

    Raises ``InfeasibleTableError`` when the observed table is outside the
    IV-compatible polytope (the LP analog of an instrumental-inequality
    violation).
    """
    p = t.flat()
    lo = lp_solve(LpProblem(c=ACE_COEFFS, A=RESPONSE_MATRIX, b=p, sense="min"), tol)
    if lo.status == "infeasible":
        raise InfeasibleTableError(
            f"observed table is not IV-compatible (phase-1 infeasibility {lo.phase1_infeasibility:.3e})"
        )
    hi = lp_solve(LpProblem(c=ACE_COEFFS, A=RESPONSE_MATRIX, b=p, sense="max"), tol)
    return Interval(lo.value, hi.value)


def manski_bounds(e1: float, e0: float, px1: float) -> Interval:
    """No-assumption bounds on the average treatment effect for a bounded
    outcome: width exactly 1 and always containing zero."""
    for name, v in (("e1", e1), ("e0", e0), ("px1", px1)):
        if not (np.isfinite(v) and 0.0 <= v <= 1.0):
            raise ValidationError(f"{name} must lie in [0, 1], got {v}")
    px0 = 1.0 - px1
    lower = e1 * px1 - (e0 * px0 + px1)
    upper = e1 * px1 + px0 - e0 * px0
    return Interval(lower, upper)


@dataclass(frozen=True)
class ExperimentalData:
    """Interventional outcome rates: P(Y=1 | do(X=1)) and P(Y=1 | do(X=0))."""

    p_do1: float
    p_do0: float

    def __post_init__(self):
        for name, v in (("p_do1", self.p_do1), ("p_do0", self.p_do0)):
            if not (np.isfinite(v) and 0.0 <= v <= 1.0):
                raise ValidationError(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True, eq=False)
class ObservationalData:
    """Joint distribution of (treatment, outcome), indexed [x, y]."""

    joint: np.ndarray

    def __post_init__(self):
        arr = np.array(self.joint, dtype=float)
        if arr.shape != (2, 2):
            raise ValidationError(f"observational joint must be 2x2, got {arr.shape}")
        if arr.min() < -DEFAULT_TOLERANCES.normalization:
            raise ValidationError("observational joint has a negative cell")
        arr = np.where(arr < 0.0, 0.0, arr)
        if abs(arr.sum() - 1.0) > DEFAULT_TOLERANCES.normalization:
            raise ValidationError(f"observational joint must sum to 1, got {arr.sum()!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "joint", arr)

    @property
    def p_y(self) -> float:
        return float(self.joint[:, 1].sum())


def pns_bounds(exp: ExperimentalData, obs: ObservationalData) -> Interval:
    """Sharp closed-form bounds on the probability that treatment is both
    necessary and sufficient, combining experimental and observational data.

    The upper bound carries four terms; dropping the mixed term
    P(y_x) - P(y_x') + P(x, y') + P(x', y) leaves a valid but non-sharp
    bound that the atom-grid LP oracle beats on some inputs.
    """
    p_y = obs.p_y
    p_xy = float(obs.joint[1, 1])
    p_xyp = float(obs.joint[1, 0])
    p_xpy = float(obs.joint[0, 1])
    p_xpyp = float(obs.joint[0, 0])
    lower = max(0.0, exp.p_do1 - exp.p_do0, p_y - exp.p_do0, exp.p_do1 - p_y)
    upper = min(
        exp.p_do1,
        1.0 - exp.p_do0,
        p_xy + p_xpyp,
        exp.p_do1 - exp.p_do0 + p_xyp + p_xpy,
    )
    if lower > upper + DEFAULT_TOLERANCES.inequality_slack:
        raise InconsistentDataError(
            f"experimental and observational data admit no common model "
            f"(lower {lower:.6f} > upper {upper:.6f})"
        )
    return Interval(min(lower, upper), upper)


def counterfactual_atom_system(exp: ExperimentalData, obs: ObservationalData) -> tuple[np.ndarray, np.ndarray]:
    """Constraint system over the 8 atoms of (Y0, Y1, X).

    Atom index = 4*y0 + 2*y1 + x.  Rows: the two interventional rates and
    the four observational cells (which imply normalization).
    """
    A = np.zeros((6, 8))
    b = np.zeros(6)
    for y0 in range(2):
        for y1 in range(2):
            for x in range(2):
                k = 4 * y0 + 2 * y1 + x
                if y1 == 1:
                    A[0, k] = 1.0
                if y0 == 1:
                    A[1, k] = 1.0
                y_obs = y1 if x == 1 else y0
                A[2 + 2 * x + y_obs, k] = 1.0
    b[0] = exp.p_do1
    b[1] = exp.p_do0
    b[2], b[3] = obs.joint[0, 0], obs.joint[0, 1]
    b[4], b[5] = obs.joint[1, 0], obs.joint[1, 1]
    return A, b


def pns_objective() -> np.ndarray:
    """Coefficients of P(Y1=1, Y0=0) over the 8 atoms."""
    c = np.zeros(8)
    for x in range(2):
        c[4 * 0 + 2 * 1 + x] = 1.0
    return c


class PointBounds(NamedTuple):
    pn: Interval
    ps: Interval


def pn_ps_point_bounds(
    exp: ExperimentalData, obs: ObservationalData, tol: Tolerances = DEFAULT_TOLERANCES
) -> PointBounds:
    """LP bounds on the probabilities of necessity and of sufficiency.

    Closed forms are not used here; both quantities are bounded over the
    counterfactual atom polytope and divided by their conditioning cells.
    """
    p_xy = float(obs.joint[1, 1])
    p_xpyp = float(obs.joint[0, 0])
    if p_xy <= 0.0:
        raise ZeroConditioningError("necessity is conditioned on P(X=1, Y=1) > 0")
    if p_xpyp <= 0.0:
        raise ZeroConditioningError("sufficiency is conditioned on P(X=0, Y=0) > 0")
    A, b = counterfactual_atom_system(exp, obs)

    def lp_range(c: np.ndarray) -> Interval:
        lo = lp_solve(LpProblem(c=c, A=A, b=b, sense="min"), tol)
        if lo.status == "infeasible":
            raise InconsistentDataError(
                "experimental and observational data admit no common causal model"
            )
        hi = lp_solve(LpProblem(c=c, A=A, b=b, sense="max"), tol)
        return Interval(lo.value, hi.value)

    pn_num = np.zeros(8)
    pn_num[4 * 0 + 2 * 1 + 1] = 1.0  # atoms with Y0=0, Y1=1, X=1
    ps_num = np.zeros(8)
    ps_num[4 * 0 + 2 * 1 + 0] = 1.0  # atoms with Y0=0, Y1=1, X=0
    pn = lp_range(pn_num)
    ps = lp_range(ps_num)
    return PointBounds(
        Interval(pn.lo / p_xy, pn.hi / p_xy),
        Interval(ps.lo / p_xpyp, ps.hi / p_xpyp),
    )
