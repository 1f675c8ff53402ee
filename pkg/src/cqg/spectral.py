"""Spectral projections of rho-operators and the twisted trace identity verifier.

Projections are index sets over the canonical descending basis; dense
matrices appear only inside the identity verifier, where the CG contraction
needs them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CGUnavailableError, PreconditionError
from .intertwiners import cg_set
from .rep_data import DEFAULT_TOLERANCE, QGModel, RhoSpectrum, Tolerance


@dataclass(frozen=True)
class SpectralProjection:
    """Projection onto the eigenvalue class of ``value`` inside one spectrum."""

    value: float
    index_set: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.index_set)


def spectral_projection(
    s: RhoSpectrum, t: float, tol: Tolerance = DEFAULT_TOLERANCE
) -> SpectralProjection:
    """Indices of eigenvalues equal to t under log-scale grouping; may be empty."""
    if not (t > 0 and math.isfinite(t)):
        raise PreconditionError("spectral parameter t must be a positive finite real")
    idx = tuple(a for a, lam in enumerate(s) if tol.same_eigenvalue(lam, t))
    return SpectralProjection(value=float(t), index_set=idx)


def eigenspace_dim(s: RhoSpectrum, t: float, tol: Tolerance = DEFAULT_TOLERANCE) -> int:
    return spectral_projection(s, t, tol).dim


def distinct_eigenvalues(s: RhoSpectrum, tol: Tolerance = DEFAULT_TOLERANCE) -> list[float]:
    """One representative per grouped eigenvalue class, descending."""
    reps: list[float] = []
    for lam in s:
        if not reps or not tol.same_eigenvalue(reps[-1], lam):
            reps.append(float(lam))
    return reps


def tensor_projection_pairs(
    s_u: RhoSpectrum, s_v: RhoSpectrum, t: float, tol: Tolerance = DEFAULT_TOLERANCE
) -> list[tuple[float, float]]:
    """Eigenvalue pairs (t', t/t') that contribute to the product projection at t.

    Summing dim H_U(t') * dim H_V(t/t') over the returned pairs gives the
    eigenspace dimension of the tensor product at t.
    """
    if not (t > 0 and math.isfinite(t)):
        raise PreconditionError("spectral parameter t must be a positive finite real")
    pairs: list[tuple[float, float]] = []
    for t_prime in distinct_eigenvalues(s_u, tol):
        complement = t / t_prime
        if eigenspace_dim(s_v, complement, tol) > 0:
            pairs.append((t_prime, complement))
    return pairs


def spectral_grid(
    m: QGModel, alpha: str, beta: str, probes: int = 2, tol: Tolerance = DEFAULT_TOLERANCE
) -> list[tuple[float, float]]:
    """All (s, t) with t in Sp(rho_beta) and s*t in Sp(rho_alpha), plus probe points.

    The grid exhausts the support of both twisted trace identities for the
    pair (alpha, beta); the probes are deterministic off-support points where
    both sides of both identities must vanish.  Sorted by (t, s) descending.
    """
    s_alpha = m.rho(alpha)
    s_beta = m.rho(beta)
    points: list[tuple[float, float]] = []
    for t in distinct_eigenvalues(s_beta, tol):
        for product in distinct_eigenvalues(s_alpha, tol):
            points.append((product / t, t))
    seen: list[tuple[float, float]] = []
    for s, t in points:
        if not any(tol.same_eigenvalue(s, s0) and tol.same_eigenvalue(t, t0) for s0, t0 in seen):
            seen.append((s, t))

    def off_support(s: float, t: float) -> bool:
        return eigenspace_dim(s_beta, t, tol) == 0 or eigenspace_dim(s_alpha, s * t, tol) == 0

    probe_points: list[tuple[float, float]] = []
    base = [(7.0, 11.0), (11.0, 7.0), (7.0, 7.0), (11.0, 11.0)]
    k = 0
    while len(probe_points) < max(0, probes):
        s, t = base[k % len(base)]
        scale = math.e ** (k // len(base))
        if off_support(s * scale, t * scale):
            probe_points.append((s * scale, t * scale))
        k += 1
    ordered = sorted(seen, key=lambda p: (-p[1], -p[0]))
    return ordered + probe_points


def _projection_diag(s: RhoSpectrum, t: float, tol: Tolerance) -> np.ndarray:
    diag = np.zeros(len(s))
    for a in spectral_projection(s, t, tol).index_set:
        diag[a] = 1.0
    return diag


def verify_theorem_5_3(
    m: QGModel,
    alpha: str,
    beta: str,
    s: float,
    t: float,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> dict:
    """Residuals of the two twisted trace identities at one (s, t) point.

    eq1: sum over gamma, i of d_1(gamma) V(alpha, gamma x beta, i)^*
         (P_gamma(s) x P_beta(t)) V = (d_alpha / t) dim H_beta(t) P_alpha(st)
    eq2: sum over gamma, i of d_1(gamma) V(alpha, beta x gamma, i)^*
         (P_beta(t) x P_gamma(s)) V = d_alpha t dim H_beta(t) P_alpha(st)

    On support the residuals are relative operator norms; off support both
    sides must vanish and the reported residual is the larger absolute norm.
    The sums need every gamma with nonzero multiplicity; when the fragment
    cannot certify that set complete the result is flagged truncated.
    """
    if not (s > 0 and t > 0 and math.isfinite(s) and math.isfinite(t)):
        raise PreconditionError("spectral parameters must be positive finite reals")
    s_alpha = m.rho(alpha)
    s_beta = m.rho(beta)
    n_alpha = m.dim(alpha)
    d_alpha = float(s_alpha.trace())
    dim_beta_t = eigenspace_dim(s_beta, t, tol)
    dim_alpha_st = eigenspace_dim(s_alpha, s * t, tol)
    on_grid = dim_beta_t > 0 and dim_alpha_st > 0
    proj_alpha = np.diag(_projection_diag(s_alpha, s * t, tol))
    proj_beta = _projection_diag(s_beta, t, tol)

    def certified_candidates(first_is_gamma: bool) -> tuple[list[str], bool, list[str]]:
        """Contributing gamma labels, completeness certainty, and missing pairs.

        eq1 (gamma in the first slot) needs every component of
        alpha x conj(beta); eq2 needs every component of conj(beta) x alpha.
        """
        probe_pair = (alpha, m.conjugate(beta)) if first_is_gamma else (m.conjugate(beta), alpha)
        if probe_pair in m.fusion:
            required = list(m.fusion.components(*probe_pair))
            missing = []
            for gamma in required:
                pair = (gamma, beta) if first_is_gamma else (beta, gamma)
                if pair not in m.fusion:
                    missing.append(gamma)
            available = [g for g in required if g not in missing]
            return available, not missing, missing
        # fall back to scanning ingested pairs; completeness unknown
        available = []
        for left, right in m.fusion.pairs():
            if first_is_gamma and right == beta:
                gamma = left
            elif not first_is_gamma and left == beta:
                gamma = right
            else:
                continue
            if m.fusion.components(left, right).get(alpha, 0) > 0:
                available.append(gamma)
        return sorted(set(available)), False, []

    def side(first_is_gamma: bool) -> tuple[np.ndarray, bool]:
        candidates, complete, _ = certified_candidates(first_is_gamma)
        acc = np.zeros((n_alpha, n_alpha), dtype=complex)
        for gamma in candidates:
            pair = (gamma, beta) if first_is_gamma else (beta, gamma)
            row = m.fusion.components(*pair)
            if row.get(alpha, 0) == 0:
                continue
            s_gamma = m.rho(gamma)
            d_gamma = float(s_gamma.trace())
            proj_gamma = _projection_diag(s_gamma, s, tol)
            weight = (
                np.multiply.outer(proj_gamma, proj_beta)
                if first_is_gamma
                else np.multiply.outer(proj_beta, proj_gamma)
            ).reshape(-1)
            for tensor in cg_set(m, *pair):
                if tensor.alpha != alpha:
                    continue
                v = tensor.matrix
                acc += d_gamma * (v.conj().T @ (weight[:, None] * v))
        return acc, complete

    lhs1, complete1 = side(True)
    lhs2, complete2 = side(False)
    rhs1 = (d_alpha / t) * dim_beta_t * proj_alpha
    rhs2 = d_alpha * t * dim_beta_t * proj_alpha

    def residual(lhs: np.ndarray, rhs: np.ndarray) -> tuple[float, float, float]:
        lhs_norm = float(np.linalg.norm(lhs, 2))
        rhs_norm = float(np.linalg.norm(rhs, 2))
        if on_grid:
            return float(np.linalg.norm(lhs - rhs, 2)) / max(rhs_norm, 1.0), lhs_norm, rhs_norm
        return max(lhs_norm, rhs_norm), lhs_norm, rhs_norm

    residual_eq1, lhs_norm_1, rhs_norm_1 = residual(lhs1, rhs1)
    residual_eq2, lhs_norm_2, rhs_norm_2 = residual(lhs2, rhs2)
    truncated = not (complete1 and complete2)
    return {
        "alpha": alpha,
        "beta": beta,
        "s": float(s),
        "t": float(t),
        "on_grid": on_grid,
        "dim_h_beta_t": dim_beta_t,
        "dim_h_alpha_st": dim_alpha_st,
        "residual_eq1": residual_eq1,
        "residual_eq2": residual_eq2,
        "lhs_norm_eq1": lhs_norm_1,
        "rhs_norm_eq1": rhs_norm_1,
        "lhs_norm_eq2": lhs_norm_2,
        "rhs_norm_eq2": rhs_norm_2,
        "truncated": truncated,
        "pass": (residual_eq1 <= max(tol.abs, tol.rel) and residual_eq2 <= max(tol.abs, tol.rel))
        if not truncated
        else None,
    }
