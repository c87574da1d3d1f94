"""Shannon entropies of behaviors and the polymatroid outer cone.

Entropies are in bits throughout.  Entropy vectors are indexed by subset
bitmask: component s is the joint entropy of the variables whose bits are
set in s, with component 0 (the empty set) pinned to zero, so a vector
over n variables has length 2**n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import NormalizationError, ValidationError
from .model import Behavior


def entropy(dist) -> float:
    """Base-2 entropy of a discrete distribution, with 0 log 0 = 0."""
    p = np.asarray(dist, dtype=float).reshape(-1)
    if p.min() < -DEFAULT_TOLERANCES.normalization:
        raise ValidationError(f"negative probability {p.min():.3e}")
    if abs(p.sum() - 1.0) > DEFAULT_TOLERANCES.normalization:
        raise NormalizationError(f"distribution sums to {p.sum()!r}, not 1")
    p = p[p > 0.0]
    return float(-(p * np.log2(p)).sum() + 0.0)


def mutual_information(joint) -> float:
    """I(A : B) of a bivariate joint given as a 2-D table."""
    j = np.asarray(joint, dtype=float)
    if j.ndim != 2:
        raise ValidationError("mutual information needs a 2-D joint table")
    return entropy(j.sum(axis=1)) + entropy(j.sum(axis=0)) - entropy(j)


class EntropicChshResult(NamedTuple):
    lhs: float
    rhs: float
    holds: bool
    mutual_informations: tuple
    settings_entropy: float


#: How the right-hand side is read; surfaced in every report that uses it.
SETTINGS_CONVENTION = (
    "rhs = 2 * H(joint settings distribution), uniform settings by default (rhs = 4 bits); "
    "the inequality is evaluated as printed (paper-literal form)"
)


def entropic_chsh(b: Behavior, settings=None) -> EntropicChshResult:
    """Entropic analog of the CHSH combination:
    I(A:B|00) + I(A:B|01) + I(A:B|10) - I(A:B|11) <= 2 H(settings)."""
    if settings is None:
        s = np.full((2, 2), 0.25)
    else:
        s = np.asarray(settings, dtype=float)
        if s.shape != (2, 2):
            raise ValidationError("settings distribution must be 2x2 over (x, y)")
        if s.min() < -DEFAULT_TOLERANCES.normalization:
            raise ValidationError("settings distribution has a negative entry")
        if abs(s.sum() - 1.0) > DEFAULT_TOLERANCES.normalization:
            raise NormalizationError("settings distribution must sum to 1")
    infos = tuple(
        mutual_information(b.p[:, :, x, y]) for x in range(2) for y in range(2)
    )
    lhs = infos[0] + infos[1] + infos[2] - infos[3]
    h_settings = entropy(s)
    rhs = 2.0 * h_settings
    holds = lhs <= rhs + DEFAULT_TOLERANCES.inequality_slack
    return EntropicChshResult(float(lhs), float(rhs), bool(holds), infos, float(h_settings))


@dataclass(frozen=True, eq=False)
class EntropyVector:
    """Joint entropies of every nonempty subset of n <= 4 variables,
    indexed by subset bitmask (component 0 is the empty set, fixed at 0)."""

    h: np.ndarray
    n: int

    def __post_init__(self):
        arr = np.array(self.h, dtype=float)
        if self.n < 1 or self.n > 4:
            raise ValidationError(f"entropy vectors cover 1..4 variables, got n = {self.n}")
        if arr.shape != (2**self.n,):
            raise ValidationError(
                f"incomplete entropy vector: need {2**self.n} components for n = {self.n}, got {arr.shape}"
            )
        if abs(arr[0]) > 1e-12:
            raise ValidationError("the empty-set component must be zero")
        if arr.min() < -1e-12:
            raise ValidationError("entropies must be nonnegative")
        arr.setflags(write=False)
        object.__setattr__(self, "h", arr)

    @classmethod
    def from_joint(cls, joint) -> "EntropyVector":
        """Entropy vector of an explicit joint distribution; axis i of the
        array is variable i (bit i of the subset mask)."""
        j = np.asarray(joint, dtype=float)
        n = j.ndim
        if n < 1 or n > 4:
            raise ValidationError("joint must have between 1 and 4 axes")
        h = np.zeros(2**n)
        for mask in range(1, 2**n):
            drop = tuple(i for i in range(n) if not (mask >> i) & 1)
            h[mask] = entropy(j.sum(axis=drop) if drop else j)
        return cls(h, n)


class ShannonViolation(NamedTuple):
    kind: str
    description: str
    amount: float


class ShannonConeResult(NamedTuple):
    member: bool
    violations: tuple


def shannon_cone_check(
    vector: EntropyVector, tol: float = DEFAULT_TOLERANCES.entropy_cone
) -> ShannonConeResult:
    """Check every elemental polymatroid inequality.

    Elemental monotonicity: H(all) >= H(all minus one variable).
    Elemental submodularity: H(iK) + H(jK) >= H(ijK) + H(K) for each pair
    i < j and each context K avoiding both.  Together these imply all
    monotonicity and submodularity relations.
    """
    h = vector.h
    n = vector.n
    full = 2**n - 1
    violations: list[ShannonViolation] = []
    for i in range(n):
        amount = h[full] - h[full ^ (1 << i)]
        if amount < -tol:
            violations.append(
                ShannonViolation(
                    "monotonicity",
                    f"H(all) >= H(all \\ {{{i}}}) fails by {-amount:.3e}",
                    float(amount),
                )
            )
    for i in range(n - 1):
        for j in range(i + 1, n):
            rest = [k for k in range(n) if k not in (i, j)]
            for pick in range(2 ** len(rest)):
                K = 0
                for t, k in enumerate(rest):
                    if (pick >> t) & 1:
                        K |= 1 << k
                amount = h[K | 1 << i] + h[K | 1 << j] - h[K | (1 << i) | (1 << j)] - h[K]
                if amount < -tol:
                    violations.append(
                        ShannonViolation(
                            "submodularity",
                            f"I({i};{j}|K=0b{K:0{n}b}) >= 0 fails by {-amount:.3e}",
                            float(amount),
                        )
                    )
    return ShannonConeResult(not violations, tuple(violations))
