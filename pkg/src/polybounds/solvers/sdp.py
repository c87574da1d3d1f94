"""Primal-dual path-following solver for small dense semidefinite programs.

Solves  max <C, X>  subject to  <A_k, X> = b_k,  X >= 0 (PSD)  with the
infeasible-start Nesterov-Todd symmetrized Newton direction and Mehrotra
predictor-corrector centering.  Matrices here never exceed ~32x32, so all
linear algebra is dense eigendecomposition plus a Cholesky solve of the
m x m Schur complement.

The dual is  min b'y  subject to  Z = sum_k y_k A_k - C >= 0,  and the
reported ``gap`` is |primal - dual| on the returned iterates, the quantity
callers verify independently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..config import DEFAULT_TOLERANCES, Tolerances
from ..errors import DimensionMismatchError, SdpConvergenceError, ValidationError

_DEBUG = False


@dataclass(frozen=True, eq=False)
class SdpProblem:
    """max tr(C X) subject to tr(A_k X) = b_k, X PSD; all matrices symmetric n x n."""

    C: np.ndarray
    constraints: tuple

    def __post_init__(self):
        C = np.array(self.C, dtype=float)
        if C.ndim != 2 or C.shape[0] != C.shape[1]:
            raise DimensionMismatchError(f"objective must be square, got shape {C.shape}")
        n = C.shape[0]
        if np.abs(C - C.T).max() > 1e-10:
            raise ValidationError("objective matrix must be symmetric")
        C = 0.5 * (C + C.T)
        C.setflags(write=False)
        frozen = []
        for k, (Ak, bk) in enumerate(self.constraints):
            Ak = np.array(Ak, dtype=float)
            if Ak.shape != (n, n):
                raise DimensionMismatchError(f"constraint {k} has shape {Ak.shape}, expected {(n, n)}")
            if np.abs(Ak - Ak.T).max() > 1e-10:
                raise ValidationError(f"constraint matrix {k} must be symmetric")
            Ak = 0.5 * (Ak + Ak.T)
            Ak.setflags(write=False)
            frozen.append((Ak, float(bk)))
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "constraints", tuple(frozen))

    @property
    def dimension(self) -> int:
        return self.C.shape[0]


@dataclass(frozen=True, eq=False)
class SdpResult:
    status: str
    value: float
    X: np.ndarray
    y: np.ndarray
    Z: np.ndarray
    dual_value: float
    gap: float
    primal_residual: float
    dual_residual: float
    iterations: int


def realify(H: np.ndarray) -> np.ndarray:
    """Real-symmetric embedding [[Re H, -Im H], [Im H, Re H]] of a Hermitian matrix.

    The embedding doubles every eigenvalue's multiplicity, so PSD-ness and
    spectral bounds transfer; it is how a complex Hermitian program would be
    fed to this real solver.
    """
    H = np.asarray(H)
    re, im = H.real, H.imag
    return np.block([[re, -im], [im, re]])


def _psd_sqrt_pair(S: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(S^1/2, S^-1/2, S^-1) via eigendecomposition with an eigenvalue floor."""
    w, Q = np.linalg.eigh(S)
    floor = max(w.max(), 1.0) * 1e-15
    w = np.maximum(w, floor)
    sq = np.sqrt(w)
    half = (Q * sq) @ Q.T
    inv_half = (Q / sq) @ Q.T
    inv = (Q / w) @ Q.T
    return half, inv_half, inv


def _max_step(S: np.ndarray, dS: np.ndarray) -> float:
    """Largest alpha with S + alpha dS still PSD (S assumed PD)."""
    _, inv_half, _ = _psd_sqrt_pair(S)
    K = inv_half @ dS @ inv_half
    lam = np.linalg.eigvalsh(0.5 * (K + K.T)).min()
    if lam >= -1e-14:
        return np.inf
    return -1.0 / lam


def sdp_solve(
    problem: SdpProblem,
    tol: Tolerances = DEFAULT_TOLERANCES,
    start: np.ndarray | None = None,
) -> SdpResult:
    """Solve a small dense SDP; raises ``SdpConvergenceError`` on stagnation.

    ``start`` may supply a strictly feasible primal matrix (a Slater point);
    without it the solver uses the identity-based infeasible start.
    """
    n = problem.dimension
    m = len(problem.constraints)
    if m == 0:
        raise ValidationError("SDP needs at least one equality constraint")
    As = np.stack([Ak for Ak, _ in problem.constraints])
    b = np.array([bk for _, bk in problem.constraints])
    C0 = -problem.C  # interior-point core minimizes

    def Aop(M: np.ndarray) -> np.ndarray:
        return np.tensordot(As, M, axes=([1, 2], [0, 1]))

    def Aadj(y: np.ndarray) -> np.ndarray:
        return np.tensordot(y, As, axes=(0, 0))

    if start is not None:
        X = 0.5 * (np.array(start, dtype=float) + np.array(start, dtype=float).T)
        if X.shape != (n, n):
            raise DimensionMismatchError(f"start must have shape {(n, n)}, got {X.shape}")
        if np.linalg.eigvalsh(X).min() <= 0:
            raise ValidationError("start matrix must be strictly positive definite")
    else:
        X = np.eye(n) * max(1.0, float(np.abs(b).max()))
    Z = np.eye(n) * max(1.0, np.linalg.norm(C0, "fro") / np.sqrt(n))
    y = np.zeros(m)

    norm_b = 1.0 + np.linalg.norm(b)
    norm_c = 1.0 + np.linalg.norm(C0, "fro")
    tau = tol.sdp_step_fraction

    mu0 = float(np.tensordot(X, Z)) / n
    infeas0 = max(
        np.linalg.norm(b - Aop(X)) / norm_b,
        np.linalg.norm(C0 - Z - Aadj(y), "fro") / norm_c,
        1e-12,
    )

    best: tuple[float, tuple] | None = None
    iterations = 0
    for iterations in range(1, tol.sdp_max_iterations + 1):
        # boundary lifting: while materially infeasible, keep both iterates
        # off the PSD boundary or the Newton system becomes unsolvable
        if max(
            np.linalg.norm(b - Aop(X)) / norm_b,
            np.linalg.norm(C0 - Z - Aadj(y), "fro") / norm_c,
        ) > 1e-9:
            mu_est = max(float(np.tensordot(X, Z)) / n, 1e-12)
            lam_x = np.linalg.eigvalsh(X)
            lam_z = np.linalg.eigvalsh(Z)
            floor_x = 1e-3 * mu_est / max(lam_z.max(), 1e-12)
            floor_z = 1e-3 * mu_est / max(lam_x.max(), 1e-12)
            if lam_x.min() < floor_x:
                X = X + (floor_x - lam_x.min()) * np.eye(n)
            if lam_z.min() < floor_z:
                Z = Z + (floor_z - lam_z.min()) * np.eye(n)

        mu = float(np.tensordot(X, Z)) / n
        rp = b - Aop(X)
        Rd = C0 - Z - Aadj(y)
        pobj = float(np.tensordot(C0, X))
        dobj = float(b @ y)
        if _DEBUG:
            print(
                f"it {iterations:3d} mu {mu:9.2e} rp {np.linalg.norm(rp)/norm_b:9.2e} "
                f"rd {np.linalg.norm(Rd,'fro')/norm_c:9.2e} gap {abs(pobj-dobj):9.2e} "
                f"lamX {np.linalg.eigvalsh(X).min():8.1e} lamZ {np.linalg.eigvalsh(Z).min():8.1e}"
            )
        gap = abs(pobj - dobj)
        rel_gap = gap / (1.0 + abs(pobj) + abs(dobj))
        rp_rel = np.linalg.norm(rp) / norm_b
        rd_rel = np.linalg.norm(Rd, "fro") / norm_c

        merit = rel_gap + rp_rel + rd_rel
        if best is None or merit < best[0]:
            best = (merit, (X.copy(), y.copy(), Z.copy(), pobj, dobj, gap, rp_rel, rd_rel, iterations))
        if rel_gap <= tol.sdp_gap_target and rp_rel <= 1e-10 and rd_rel <= 1e-10:
            break
        if mu < 1e-16 and rp_rel <= 1e-10:
            break

        # Nesterov-Todd scaling point W with W Z W = X
        Zh, Zih, Zinv = _psd_sqrt_pair(Z)
        T = Zh @ X @ Zh
        Th, _, _ = _psd_sqrt_pair(0.5 * (T + T.T))
        W = Zih @ Th @ Zih
        W = 0.5 * (W + W.T)

        WAW = np.einsum("ij,kjl,lm->kim", W, As, W)
        M = np.tensordot(As, WAW, axes=([1, 2], [1, 2]))
        M = 0.5 * (M + M.T)
        try:
            L = np.linalg.cholesky(M + np.eye(m) * max(M.diagonal().max(), 1.0) * 1e-14)

            def msolve(v: np.ndarray) -> np.ndarray:
                return np.linalg.solve(L.T, np.linalg.solve(L, v))

        except np.linalg.LinAlgError:
            # dependent constraints make the Schur complement singular;
            # solve in the row space via a spectral pseudo-inverse
            w_m, Q_m = np.linalg.eigh(M)
            cutoff = max(w_m.max(), 1.0) * 1e-13
            w_inv = np.where(w_m > cutoff, 1.0 / np.maximum(w_m, cutoff), 0.0)

            def msolve(v: np.ndarray) -> np.ndarray:
                return (Q_m * w_inv) @ (Q_m.T @ v)

        WRdW = W @ Rd @ W

        def direction(mu_target: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
            E = mu_target * Zinv - X
            dy = msolve(rp - Aop(E - WRdW))
            dZ = Rd - Aadj(dy)
            dX = E - W @ dZ @ W
            return 0.5 * (dX + dX.T), dy, 0.5 * (dZ + dZ.T)

        # predictor to pick the centering weight
        dXa, _, dZa = direction(0.0)
        ap = min(1.0, tau * _max_step(X, dXa))
        ad = min(1.0, tau * _max_step(Z, dZa))
        mu_aff = float(np.tensordot(X + ap * dXa, Z + ad * dZa)) / n
        sigma = min(0.999, max(1e-6, (max(mu_aff, 0.0) / mu) ** 3))
        infeasible = max(rp_rel, rd_rel) > 1e-12
        if infeasible:
            sigma = max(sigma, 0.05)

        # Step selection.  The neighborhood guard keeps complementarity
        # positive and synchronized with infeasibility (otherwise the
        # iterate strands on the PSD boundary while still infeasible);
        # backtracking restores it because alpha -> 0 reproduces the
        # current in-neighborhood iterate.  If the guard forces the step
        # to collapse, the direction itself is too aggressive: escalate
        # the centering weight and recompute.
        beta = 100.0
        best_step = None
        for _ in range(5):
            dX, dy, dZ = direction(sigma * mu)
            ap = min(1.0, tau * _max_step(X, dX))
            ad = min(1.0, tau * _max_step(Z, dZ))
            for _ in range(40):
                mu_new = float(np.tensordot(X + ap * dX, Z + ad * dZ)) / n
                infeas_new = max((1.0 - ap) * rp_rel, (1.0 - ad) * rd_rel)
                ok_mu = mu_new >= 0.02 * sigma * mu
                ok_nbhd = (not infeasible) or infeas_new / infeas0 <= beta * max(mu_new, 0.0) / mu0
                if ok_mu and ok_nbhd:
                    break
                ap *= 0.7
                ad *= 0.7
            candidate = (min(ap, ad), sigma, dX, dy, dZ, ap, ad)
            if best_step is None or candidate[0] > best_step[0]:
                best_step = candidate
            if not infeasible or candidate[0] >= 0.05:
                break
            sigma = min(0.95, max(3.0 * sigma, 0.3))
        _, sigma, dX, dy, dZ, ap, ad = best_step

        for _ in range(30):  # keep the iterates safely positive definite
            Xn = X + ap * dX
            if np.linalg.eigvalsh(Xn).min() > 0:
                break
            ap *= 0.5
        for _ in range(30):
            Zn = Z + ad * dZ
            if np.linalg.eigvalsh(Zn).min() > 0:
                break
            ad *= 0.5
        X = 0.5 * (Xn + Xn.T)
        Z = 0.5 * (Zn + Zn.T)
        y = y + ad * dy

    _, (X, y, Z, pobj, dobj, gap, rp_rel, rd_rel, _) = best
    accepted = (
        gap / (1.0 + abs(pobj) + abs(dobj)) <= tol.sdp_gap_accept
        and rp_rel <= tol.sdp_feasibility_accept
        and rd_rel <= tol.sdp_feasibility_accept
    )
    if not accepted:
        raise SdpConvergenceError(
            f"no convergence in {iterations} iterations "
            f"(gap {gap:.2e}, primal residual {rp_rel:.2e}, dual residual {rd_rel:.2e}); "
            "the instance is ill-conditioned or lacks an interior point"
        )
    return SdpResult(
        status="optimal",
        value=-pobj,
        X=X,
        y=-y,
        Z=Z,
        dual_value=-dobj,
        gap=gap,
        primal_residual=rp_rel,
        dual_residual=rd_rel,
        iterations=iterations,
    )
