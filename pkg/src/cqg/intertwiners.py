"""Clebsch-Gordan isometries and the dual-algebra calculus built on them.

The three concerns of this module:

* constructing and checking the isometries V(alpha, beta x gamma, i) that
  embed an irreducible component into a tensor product, expressed in the
  descending-rho eigenbasis of every irrep;
* the comultiplication of the dual block algebra on matrix units, with the
  component of the RIGHT tensor factor placed in the FIRST leg of the output
  (the convention every identity below is stated in);
* the dual Haar weight h(e^alpha_{a,a'}) = d_1(alpha) * lambda^alpha_a *
  delta_{a,a'} and its two modular identities, verified blockwise.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import (
    CGUnavailableError,
    ModelConsistencyError,
    ModelSchemaError,
    PreconditionError,
    TruncationError,
)
from .rep_data import DEFAULT_TOLERANCE, QGModel, Tolerance

_ZERO_ENTRY = 1e-12  # below this (relative to the largest entry) a CG coefficient counts as 0


@dataclass(frozen=True, eq=False)
class CGTensor:
    """One isometry V(alpha, beta x gamma, i): H_alpha -> H_beta x H_gamma.

    ``coeffs[b, c, a]`` is the coefficient of basis vector b x c in the image
    of basis vector a; all indices are 0-based over the descending-rho bases,
    while ``copy_index`` runs 1..m(alpha, beta x gamma).
    """

    alpha: str
    beta: str
    gamma: str
    copy_index: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.coeffs, dtype=complex)
        if arr.ndim != 3:
            raise ModelConsistencyError("CG coefficient array must have three indices (b, c, a)")
        if self.copy_index < 1:
            raise ModelConsistencyError("CG copy index must be >= 1")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.coeffs.shape  # (n_beta, n_gamma, n_alpha)

    @property
    def matrix(self) -> np.ndarray:
        """Matrix form with row index b * n_gamma + c and column index a."""
        n_b, n_c, n_a = self.coeffs.shape
        return self.coeffs.reshape(n_b * n_c, n_a)

    def coefficient(self, a: int, b: int, c: int) -> complex:
        return complex(self.coeffs[b, c, a])


class C00Element:
    """Finitely supported element of the dual block algebra.

    One square complex matrix per irrep label; labels absent from the support
    stand for zero blocks.  Instances are value objects: all arithmetic
    returns new elements.
    """

    def __init__(self, blocks: Mapping[str, Any]):
        store: dict[str, np.ndarray] = {}
        for label, mat in blocks.items():
            arr = np.array(mat, dtype=complex)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise ModelConsistencyError(f"block {label!r} must be a square matrix")
            store[str(label)] = arr
        self._blocks = store

    @classmethod
    def zero(cls) -> "C00Element":
        return cls({})

    @classmethod
    def matrix_unit(cls, m: QGModel, label: str, i: int, j: int) -> "C00Element":
        n = m.dim(label)
        if not (0 <= i < n and 0 <= j < n):
            raise PreconditionError(
                f"matrix unit indices ({i}, {j}) out of range for {label!r} of dim {n}"
            )
        block = np.zeros((n, n), dtype=complex)
        block[i, j] = 1.0
        return cls({label: block})

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(sorted(self._blocks))

    def block(self, label: str) -> np.ndarray | None:
        arr = self._blocks.get(label)
        return arr.copy() if arr is not None else None

    def blocks(self) -> dict[str, np.ndarray]:
        return {label: arr.copy() for label, arr in self._blocks.items()}

    def _binary(self, other: "C00Element", op) -> "C00Element":
        out: dict[str, np.ndarray] = {label: arr.copy() for label, arr in self._blocks.items()}
        for label, arr in other._blocks.items():
            if label in out:
                out[label] = op(out[label], arr)
            else:
                out[label] = op(np.zeros_like(arr), arr)
        return C00Element(out)

    def __add__(self, other: "C00Element") -> "C00Element":
        return self._binary(other, np.add)

    def __sub__(self, other: "C00Element") -> "C00Element":
        return self._binary(other, np.subtract)

    def __neg__(self) -> "C00Element":
        return C00Element({label: -arr for label, arr in self._blocks.items()})

    def __mul__(self, scalar: complex) -> "C00Element":
        return C00Element({label: scalar * arr for label, arr in self._blocks.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "C00Element") -> "C00Element":
        out: dict[str, np.ndarray] = {}
        for label, arr in self._blocks.items():
            rhs = other._blocks.get(label)
            if rhs is not None:
                out[label] = arr @ rhs
        return C00Element(out)

    def adjoint(self) -> "C00Element":
        return C00Element({label: arr.conj().T for label, arr in self._blocks.items()})

    def max_abs(self) -> float:
        return max((float(np.max(np.abs(arr))) for arr in self._blocks.values()), default=0.0)

    def is_zero(self, threshold: float = 0.0) -> bool:
        return self.max_abs() <= threshold


# ---------------------------------------------------------------------------
# CG retrieval and verification


def cg_set(
    m: QGModel, beta: str, gamma: str, tol: Tolerance = DEFAULT_TOLERANCE, check: bool = True
) -> list[CGTensor]:
    """All isometries for the pair (beta, gamma), one per (target, copy).

    The returned list is ordered by the target's declaration order and copy
    index, covers the fusion row exactly, and (unless ``check`` is disabled)
    has passed stacked unitarity and eigenvalue intertwining.
    """
    m.irrep(beta)
    m.irrep(gamma)
    row = m.fusion.components(beta, gamma)
    if m.cg is None:
        raise CGUnavailableError(f"model {m.name!r} supplies no Clebsch-Gordan data")
    raw = m.cg(m, beta, gamma)
    n_b, n_c = m.dim(beta), m.dim(gamma)
    tensors: list[CGTensor] = []
    for alpha, copy_index, coeffs in raw:
        arr = np.asarray(coeffs, dtype=complex)
        expected_shape = (n_b, n_c, m.dim(alpha))
        if arr.shape != expected_shape:
            raise ModelConsistencyError(
                f"CG data for ({beta!r}, {gamma!r}) -> {alpha!r}: shape {arr.shape}, "
                f"expected {expected_shape}"
            )
        tensors.append(
            CGTensor(alpha=alpha, beta=beta, gamma=gamma, copy_index=int(copy_index), coeffs=arr)
        )
    order = {label: k for k, label in enumerate(m.labels)}
    tensors.sort(key=lambda t: (order[t.alpha], t.copy_index))

    counts: dict[str, int] = {}
    for t in tensors:
        counts[t.alpha] = counts.get(t.alpha, 0) + 1
    if counts != row:
        raise ModelConsistencyError(
            f"CG data for ({beta!r}, {gamma!r}) covers {counts}, fusion row is {row}"
        )
    for t in tensors:
        expected = list(range(1, counts[t.alpha] + 1))
        got = sorted(u.copy_index for u in tensors if u.alpha == t.alpha)
        if got != expected:
            raise ModelConsistencyError(
                f"CG copy indices for ({beta!r}, {gamma!r}) -> {t.alpha!r} are {got}, "
                f"expected {expected}"
            )

    if check:
        report = verify_cg_unitarity(tensors, tol)
        bound = max(tol.abs, 1e-9)
        if report["max_residual"] > bound:
            raise ModelConsistencyError(
                f"CG data for ({beta!r}, {gamma!r}) fails unitarity: "
                f"max residual {report['max_residual']:.3e}"
            )
        for t in tensors:
            resid = cg_intertwining_residual(m, t)
            if resid > bound:
                raise ModelConsistencyError(
                    f"CG tensor ({beta!r}, {gamma!r}) -> {t.alpha!r} breaks eigenvalue "
                    f"intertwining: residual {resid:.3e}"
                )
    return tensors


def verify_cg_unitarity(tensors: Sequence[CGTensor], tol: Tolerance = DEFAULT_TOLERANCE) -> dict:
    """Isometry, mutual orthogonality, and completeness residuals of a pair's stack."""
    if not tensors:
        raise PreconditionError("verify_cg_unitarity needs at least one tensor")
    pair = (tensors[0].beta, tensors[0].gamma)
    if any((t.beta, t.gamma) != pair for t in tensors):
        raise PreconditionError("all tensors must share the same (beta, gamma) pair")
    per_tensor = []
    max_resid = 0.0
    for t in tensors:
        v = t.matrix
        resid = float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))))
        per_tensor.append(
            {"alpha": t.alpha, "copy_index": t.copy_index, "isometry_residual": resid}
        )
        max_resid = max(max_resid, resid)
    cross = 0.0
    for i in range(len(tensors)):
        for j in range(i + 1, len(tensors)):
            cross = max(
                cross,
                float(np.max(np.abs(tensors[i].matrix.conj().T @ tensors[j].matrix))),
            )
    dim_prod = tensors[0].coeffs.shape[0] * tensors[0].coeffs.shape[1]
    acc = np.zeros((dim_prod, dim_prod), dtype=complex)
    for t in tensors:
        v = t.matrix
        acc += v @ v.conj().T
    completeness = float(np.max(np.abs(acc - np.eye(dim_prod))))
    max_resid = max(max_resid, cross, completeness)
    return {
        "pair": list(pair),
        "tensors": per_tensor,
        "cross_orthogonality_residual": cross,
        "completeness_residual": completeness,
        "max_residual": max_resid,
        "pass": max_resid <= max(tol.abs, 1e-9),
    }


def cg_intertwining_residual(m: QGModel, t: CGTensor) -> float:
    """Largest weighted violation of lambda_b * lambda_c = lambda_a on the tensor's support."""
    lam_b = np.asarray(tuple(m.rho(t.beta)))
    lam_c = np.asarray(tuple(m.rho(t.gamma)))
    lam_a = np.asarray(tuple(m.rho(t.alpha)))
    products = lam_b[:, None, None] * lam_c[None, :, None]
    targets = lam_a[None, None, :]
    mags = np.abs(t.coeffs)
    scale = float(mags.max()) or 1.0
    weights = np.where(mags > _ZERO_ENTRY * scale, mags, 0.0)
    return float(np.max(weights * np.abs(products / targets - 1.0)))


# ---------------------------------------------------------------------------
# Comultiplication on matrix units, Haar weight, modular identities


def _cg_for_target(m: QGModel, beta: str, gamma: str, alpha: str) -> list[CGTensor] | None:
    """Tensors for (beta, gamma) targeting alpha; None when the pair or its CG is unavailable."""
    if (beta, gamma) not in m.fusion:
        return None
    try:
        tensors = cg_set(m, beta, gamma)
    except CGUnavailableError:
        return None
    return [t for t in tensors if t.alpha == alpha]


def _canonical_pairs(m: QGModel, support: Iterable[tuple[str, str]]) -> list[tuple[str, str]]:
    order = {label: k for k, label in enumerate(m.labels)}
    pairs = {(str(b), str(g)) for b, g in support}
    for b, g in pairs:
        if b not in m or g not in m:
            raise ModelSchemaError(f"support pair ({b!r}, {g!r}) references labels outside the model")
    return sorted(pairs, key=lambda p: (order[p[0]], order[p[1]]))


def delta_hat(
    m: QGModel, alpha: str, a: int, a_prime: int, support: Iterable[tuple[str, str]]
) -> dict[tuple[str, str], np.ndarray]:
    """Blocks of the dual comultiplication of the matrix unit e^alpha_{a, a'}.

    For each requested pair (beta, gamma) the returned array acts on
    H_gamma x H_beta, the gamma factor FIRST, with flattened index
    c * n_beta + b.  Its entries are
    sum_i V_i^{b,c}_a * conj(V_i^{b',c'}_{a'}).
    """
    n_a = m.dim(alpha)
    if not (0 <= a < n_a and 0 <= a_prime < n_a):
        raise PreconditionError(f"matrix unit indices ({a}, {a_prime}) out of range for {alpha!r}")
    out: dict[tuple[str, str], np.ndarray] = {}
    for beta, gamma in _canonical_pairs(m, support):
        row = m.fusion.components(beta, gamma)  # raises TruncationError when absent
        dim_block = m.dim(gamma) * m.dim(beta)
        block = np.zeros((dim_block, dim_block), dtype=complex)
        if row.get(alpha, 0) > 0:
            tensors = _cg_for_target(m, beta, gamma, alpha)
            if tensors is None:
                raise CGUnavailableError(
                    f"no Clebsch-Gordan data for pair ({beta!r}, {gamma!r})"
                )
            for t in tensors:
                u = t.coeffs[:, :, a].T.reshape(-1)  # index c * n_beta + b
                v = t.coeffs[:, :, a_prime].T.reshape(-1)
                block += np.outer(u, v.conj())
        out[(beta, gamma)] = block
    return out


def haar_weight(m: QGModel, x: C00Element) -> complex:
    """sum over the support of d_1(label) * sum_a lambda_a * x[label][a, a]."""
    total = 0.0 + 0.0j
    for label in x.support:
        block = x.block(label)
        if block.shape[0] != m.dim(label):
            raise ModelConsistencyError(
                f"block {label!r} has size {block.shape[0]}, model dim is {m.dim(label)}"
            )
        lam = np.asarray(tuple(m.rho(label)))
        d1 = float(m.rho(label).trace())
        total += d1 * complex(np.sum(lam * np.diag(block)))
    return total


def verify_modular(
    m: QGModel,
    alpha: str,
    support: Iterable[tuple[str, str]],
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> dict:
    """Blockwise check of the two modular identities of the dual Haar weight.

    Applying (id x h) to the comultiplication of e^alpha_{a,a'} must give
    h(e^alpha_{a,a'}) times the inverse-square of rho on each first-leg
    block; applying (h x id) must give h(e^alpha_{a,a'}) times the identity
    on each second-leg block.  A block whose contributing sum cannot be
    certified complete inside the fragment is reported with a truncation
    flag instead of being asserted.
    """
    pairs = _canonical_pairs(m, support)
    n_a = m.dim(alpha)
    lam_alpha = np.asarray(tuple(m.rho(alpha)))
    d_alpha = float(m.rho(alpha).trace())

    pair_tensors: dict[tuple[str, str], list[CGTensor]] = {}
    for beta, gamma in pairs:
        row = m.fusion.components(beta, gamma)
        if row.get(alpha, 0) > 0:
            tensors = _cg_for_target(m, beta, gamma, alpha)
            if tensors is None:
                raise CGUnavailableError(f"no Clebsch-Gordan data for pair ({beta!r}, {gamma!r})")
            pair_tensors[(beta, gamma)] = tensors
        else:
            pair_tensors[(beta, gamma)] = []

    first_leg_labels = sorted(
        {gamma for _, gamma in pairs}, key={l: k for k, l in enumerate(m.labels)}.get
    )
    second_leg_labels = sorted(
        {beta for beta, _ in pairs}, key={l: k for k, l in enumerate(m.labels)}.get
    )

    def first_leg_complete(gamma: str) -> tuple[bool, list[str]]:
        # the true sum runs over every beta with alpha contained in beta x gamma,
        # i.e. the components of alpha x conj(gamma)
        pair = (alpha, m.conjugate(gamma))
        if pair not in m.fusion:
            return False, []
        required = [
            label for label in m.fusion.components(*pair) if label in m
        ]
        missing = [b for b in required if (b, gamma) not in pairs]
        return (not missing), missing

    def second_leg_complete(beta: str) -> tuple[bool, list[str]]:
        # the true sum runs over every gamma with alpha contained in beta x gamma,
        # i.e. the components of conj(beta) x alpha
        pair = (m.conjugate(beta), alpha)
        if pair not in m.fusion:
            return False, []
        required = [label for label in m.fusion.components(*pair) if label in m]
        missing = [g for g in required if (beta, g) not in pairs]
        return (not missing), missing

    first_blocks: list[dict] = []
    second_blocks: list[dict] = []
    max_complete = 0.0
    truncated = False

    for gamma in first_leg_labels:
        n_g = m.dim(gamma)
        lam_gamma = np.asarray(tuple(m.rho(gamma)))
        expected_diag = lam_gamma**-2.0
        diff = 0.0
        scale = max(1.0, d_alpha * float(lam_alpha.max()) * float(expected_diag.max()))
        for a in range(n_a):
            for a2 in range(n_a):
                acc = np.zeros((n_g, n_g), dtype=complex)
                for (beta, g2), tensors in pair_tensors.items():
                    if g2 != gamma:
                        continue
                    lam_beta = np.asarray(tuple(m.rho(beta)))
                    d_beta = float(m.rho(beta).trace())
                    for t in tensors:
                        ma = t.coeffs[:, :, a]
                        mb = t.coeffs[:, :, a2]
                        acc += d_beta * (ma.T @ (lam_beta[:, None] * mb.conj()))
                expected = (
                    d_alpha * lam_alpha[a] * np.diag(expected_diag)
                    if a == a2
                    else np.zeros((n_g, n_g))
                )
                diff = max(diff, float(np.max(np.abs(acc - expected))))
        complete, missing = first_leg_complete(gamma)
        resid = diff / scale
        first_blocks.append(
            {"label": gamma, "residual": resid, "complete": complete, "missing": missing}
        )
        if complete:
            max_complete = max(max_complete, resid)
        else:
            truncated = True

    for beta in second_leg_labels:
        n_b = m.dim(beta)
        diff = 0.0
        scale = max(1.0, d_alpha * float(lam_alpha.max()))
        for a in range(n_a):
            for a2 in range(n_a):
                acc = np.zeros((n_b, n_b), dtype=complex)
                for (b2, gamma), tensors in pair_tensors.items():
                    if b2 != beta:
                        continue
                    lam_gamma = np.asarray(tuple(m.rho(gamma)))
                    d_gamma = float(m.rho(gamma).trace())
                    for t in tensors:
                        ma = t.coeffs[:, :, a]
                        mb = t.coeffs[:, :, a2]
                        acc += d_gamma * (ma @ (lam_gamma[:, None] * mb.conj().T))
                expected = (
                    d_alpha * lam_alpha[a] * np.eye(n_b) if a == a2 else np.zeros((n_b, n_b))
                )
                diff = max(diff, float(np.max(np.abs(acc - expected))))
        complete, missing = second_leg_complete(beta)
        resid = diff / scale
        second_blocks.append(
            {"label": beta, "residual": resid, "complete": complete, "missing": missing}
        )
        if complete:
            max_complete = max(max_complete, resid)
        else:
            truncated = True

    return {
        "alpha": alpha,
        "support": [list(p) for p in pairs],
        "id_tensor_h": first_blocks,
        "h_tensor_id": second_blocks,
        "max_complete_residual": max_complete,
        "truncated": truncated,
        "pass": max_complete <= max(tol.abs, tol.rel),
    }


def verify_coassociativity(
    m: QGModel,
    alpha: str,
    support: Iterable[tuple[str, str]],
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> dict:
    """Compare the two iterated comultiplications of every matrix unit of alpha.

    Expanding the first leg of each outer block against expanding the second
    leg lands in triple blocks (first, middle, last); the two expansions are
    compared on every triple whose contributing sums are certified complete
    within the fragment, and the rest are reported as skipped.
    """
    pairs = _canonical_pairs(m, support)
    order = {label: k for k, label in enumerate(m.labels)}
    n_a = m.dim(alpha)

    # candidate triples from both expansions
    triples: set[tuple[str, str, str]] = set()
    for beta, gamma in pairs:
        if m.fusion.components(beta, gamma).get(alpha, 0) == 0:
            continue
        for mu, nu in m.fusion.pairs():
            if gamma in m.fusion.components(mu, nu):
                triples.add((nu, mu, beta))
        for sigma, tau in m.fusion.pairs():
            if beta in m.fusion.components(sigma, tau):
                triples.add((gamma, tau, sigma))

    def left_contributors(p: str, q: str, r: str):
        """gamma values feeding the first-leg expansion of triple (p, q, r), or None."""
        if (q, p) not in m.fusion:
            return None
        out = []
        for g in m.fusion.components(q, p):
            if (r, g) not in m.fusion:
                return None
            outer = _cg_for_target(m, r, g, alpha)
            inner_all = _cg_for_target(m, q, p, g)
            if outer is None or inner_all is None:
                return None
            if outer:
                out.append((g, outer, inner_all))
        return out

    def right_contributors(p: str, q: str, r: str):
        """beta values feeding the second-leg expansion of triple (p, q, r), or None."""
        if (r, q) not in m.fusion:
            return None
        out = []
        for b in m.fusion.components(r, q):
            if (b, p) not in m.fusion:
                return None
            outer = _cg_for_target(m, b, p, alpha)
            inner_all = _cg_for_target(m, r, q, b)
            if outer is None or inner_all is None:
                return None
            if outer:
                out.append((b, outer, inner_all))
        return out

    results: list[dict] = []
    skipped: list[dict] = []
    max_residual = 0.0
    for p, q, r in sorted(triples, key=lambda t: (order[t[0]], order[t[1]], order[t[2]])):
        left = left_contributors(p, q, r)
        right = right_contributors(p, q, r)
        if left is None or right is None:
            skipped.append({"triple": [p, q, r], "reason": "contributing sum leaves the fragment"})
            continue
        n_p, n_q, n_r = m.dim(p), m.dim(q), m.dim(r)
        size = n_p * n_q * n_r
        diff = 0.0
        scale = 1.0
        for a in range(n_a):
            for a2 in range(n_a):
                lhs = np.zeros((size, size), dtype=complex)
                for _, outer, inner_all in left:
                    for t_out in outer:
                        for t_in in inner_all:
                            ga = np.einsum("upc,rc->pur", t_in.coeffs, t_out.coeffs[:, :, a])
                            gb = np.einsum("upc,rc->pur", t_in.coeffs, t_out.coeffs[:, :, a2])
                            lhs += np.outer(ga.reshape(-1), gb.conj().reshape(-1))
                rhs = np.zeros((size, size), dtype=complex)
                for _, outer, inner_all in right:
                    for t_out in outer:
                        for t_in in inner_all:
                            ha = np.einsum("rub,bp->pur", t_in.coeffs, t_out.coeffs[:, :, a])
                            hb = np.einsum("rub,bp->pur", t_in.coeffs, t_out.coeffs[:, :, a2])
                            rhs += np.outer(ha.reshape(-1), hb.conj().reshape(-1))
                diff = max(diff, float(np.max(np.abs(lhs - rhs))))
                scale = max(scale, float(np.max(np.abs(rhs))))
        resid = diff / scale
        max_residual = max(max_residual, resid)
        results.append({"triple": [p, q, r], "residual": resid})
    return {
        "alpha": alpha,
        "support": [list(pair) for pair in pairs],
        "triples": results,
        "skipped": skipped,
        "max_residual": max_residual,
        "truncated": bool(skipped),
        "pass": max_residual <= max(tol.abs, tol.rel),
    }


# ---------------------------------------------------------------------------
# Built-in CG constructions


def _qint(n: int, q: float) -> float:
    """The q-bracket of an integer; the classical integer at q = 1."""
    if q == 1.0:
        return float(n)
    return (q**n - q ** (-n)) / (q - 1.0 / q)


def _weight_module(n: int, q: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Ladder operator matrices on the (n+1)-dimensional weight module.

    Basis index k = 0..n carries weight m_k = k - n/2.  Returns the diagonal
    of the group-like generator (eigenvalue q^{m_k}), the raising and
    lowering matrices, and the weight list.
    """
    dim = n + 1
    weights = np.array([k - n / 2.0 for k in range(dim)])
    kdiag = np.array([q**m for m in weights])
    raise_op = np.zeros((dim, dim))
    lower_op = np.zeros((dim, dim))
    for k in range(dim - 1):
        raise_op[k + 1, k] = math.sqrt(_qint(n - k, q) * _qint(k + 1, q))
    for k in range(1, dim):
        lower_op[k - 1, k] = math.sqrt(_qint(k, q) * _qint(n - k + 1, q))
    return kdiag, raise_op, lower_op, weights


def _rho_descending_order(n: int, q: float) -> list[int]:
    """Weight-basis indices ordered so the rho eigenvalues q^{2 m_k} descend.

    For q < 1 ascending weights already descend; otherwise (q = 1 included,
    as a fixed convention) descending weights are used.
    """
    if q < 1.0:
        return list(range(n + 1))
    return list(range(n, -1, -1))


def _suq2_pair_tensors(n1: int, n2: int, q: float) -> list[tuple[str, int, np.ndarray]]:
    """CG isometries for the pair of labels (n1, n2) of the q-deformed SU(2) series.

    Per target component: the highest-weight vector is the kernel of the
    coproduct raising operator on the matching total-weight subspace
    (one-dimensional: the series is multiplicity free), the rest of the
    component is generated by the coproduct lowering operator divided by the
    target module's own lowering coefficients.  Dividing by anything else
    would break the relative normalization between components that the
    modular identities depend on; only the overall phase per component is
    free, fixed by making the first nonzero coefficient of the
    highest-weight vector (in lexicographic product-basis order) real
    positive.
    """
    k1, e1, f1, w1 = _weight_module(n1, q)
    k2, e2, f2, w2 = _weight_module(n2, q)
    raise_full = np.kron(e1, np.diag(k2)) + np.kron(np.diag(1.0 / k1), e2)
    lower_full = np.kron(f1, np.diag(k2)) + np.kron(np.diag(1.0 / k1), f2)
    total_twice = np.rint(2.0 * np.add.outer(w1, w2).reshape(-1)).astype(int)
    perm1 = _rho_descending_order(n1, q)
    perm2 = _rho_descending_order(n2, q)
    out: list[tuple[str, int, np.ndarray]] = []
    for n3 in range(abs(n1 - n2), n1 + n2 + 1, 2):
        idx = np.flatnonzero(total_twice == n3)
        restricted = raise_full[:, idx]
        _, svals, vh = np.linalg.svd(restricted)
        top = svals[0]
        if len(idx) > 1 and svals[-2] <= 1e-6 * max(top, 1.0):
            raise ModelConsistencyError(
                f"highest-weight space for target {n3} of pair ({n1}, {n2}) is not one-dimensional"
            )
        if svals[-1] > 1e-10 * max(top, 1.0):
            raise ModelConsistencyError(
                f"no highest-weight vector for target {n3} of pair ({n1}, {n2})"
            )
        kernel = vh[-1]  # real: the ladder matrices are real for real q
        vec = np.zeros(raise_full.shape[0])
        vec[idx] = kernel
        first = idx[np.flatnonzero(np.abs(kernel) > 1e-10)[0]]
        if vec[first] < 0:
            vec = -vec
        cols = [vec]
        current = vec
        for step in range(n3):
            coefficient = math.sqrt(_qint(n3 - step, q) * _qint(step + 1, q))
            current = (lower_full @ current) / coefficient
            cols.append(current)
        weight_matrix = np.column_stack(cols[::-1])  # target weight index 0..n3 ascending
        perm3 = _rho_descending_order(n3, q)
        grid = weight_matrix.reshape(n1 + 1, n2 + 1, n3 + 1)
        coeffs = grid[np.ix_(perm1, perm2, perm3)].astype(complex)
        out.append((str(n3), 1, coeffs))
    return out


class SuQ2CGProvider:
    """On-demand, memoized CG construction for q-deformed SU(2) models."""

    def __init__(self, q: float):
        self.q = float(q)
        self._cache: dict[tuple[int, int], list[tuple[str, int, np.ndarray]]] = {}

    def __call__(
        self, model: QGModel, beta: str, gamma: str
    ) -> list[tuple[str, int, np.ndarray]]:
        key = (int(beta), int(gamma))
        if key not in self._cache:
            self._cache[key] = _suq2_pair_tensors(key[0], key[1], self.q)
        return self._cache[key]


class AbelianDualCGProvider:
    """Characters fuse to their product character with coefficient 1."""

    def __call__(
        self, model: QGModel, beta: str, gamma: str
    ) -> list[tuple[str, int, np.ndarray]]:
        row = model.fusion.components(beta, gamma)
        one = np.ones((1, 1, 1), dtype=complex)
        return [(alpha, 1, one) for alpha in model.labels if alpha in row]


class UnitPairCGProvider:
    """CG for pairs involving the trivial irrep only: the identity embedding."""

    def __call__(
        self, model: QGModel, beta: str, gamma: str
    ) -> list[tuple[str, int, np.ndarray]]:
        model.fusion.components(beta, gamma)
        triv = model.trivial
        if beta == triv:
            n = model.dim(gamma)
            return [(gamma, 1, np.eye(n, dtype=complex).reshape(1, n, n))]
        if gamma == triv:
            n = model.dim(beta)
            return [(beta, 1, np.eye(n, dtype=complex).reshape(n, 1, n))]
        raise CGUnavailableError(
            f"only pairs involving the trivial irrep carry CG data; got ({beta!r}, {gamma!r})"
        )


class GroupAverageCGProvider:
    """CG for a finite group dual by averaging candidate maps over the group.

    ``matrices`` holds one unitary matrix per group element per irrep label,
    all lists in the same element order.  Works for multiplicity-free fusion
    only.
    """

    def __init__(self, matrices: Mapping[str, Sequence[Any]]):
        self._matrices = {
            str(label): [np.asarray(g, dtype=complex) for g in mats]
            for label, mats in matrices.items()
        }
        sizes = {len(mats) for mats in self._matrices.values()}
        if len(sizes) != 1:
            raise ModelConsistencyError("all irreps must list the same group elements")
        self._cache: dict[tuple[str, str], list[tuple[str, int, np.ndarray]]] = {}

    def __call__(
        self, model: QGModel, beta: str, gamma: str
    ) -> list[tuple[str, int, np.ndarray]]:
        key = (beta, gamma)
        if key in self._cache:
            return self._cache[key]
        row = model.fusion.components(beta, gamma)
        reps_b = self._matrices[beta]
        reps_c = self._matrices[gamma]
        group_order = len(reps_b)
        big = [np.kron(b, c) for b, c in zip(reps_b, reps_c)]
        out: list[tuple[str, int, np.ndarray]] = []
        for alpha in model.labels:
            mult = row.get(alpha, 0)
            if mult == 0:
                continue
            if mult > 1:
                raise CGUnavailableError(
                    "group-average CG construction handles multiplicity-free fusion only"
                )
            reps_a = self._matrices[alpha]
            n_b, n_c, n_a = model.dim(beta), model.dim(gamma), model.dim(alpha)
            averaged = None
            for col in range(n_a):
                for rowi in range(n_b * n_c):
                    seed = np.zeros((n_b * n_c, n_a), dtype=complex)
                    seed[rowi, col] = 1.0
                    candidate = sum(
                        big[g] @ seed @ reps_a[g].conj().T for g in range(group_order)
                    ) / group_order
                    if np.max(np.abs(candidate)) > 1e-8:
                        averaged = candidate
                        break
                if averaged is not None:
                    break
            if averaged is None:
                raise ModelConsistencyError(
                    f"group averaging found no intertwiner for ({beta!r}, {gamma!r}) -> {alpha!r}"
                )
            gram = averaged.conj().T @ averaged
            c = float(np.trace(gram).real) / n_a
            if np.max(np.abs(gram - c * np.eye(n_a))) > 1e-10 * max(c, 1.0):
                raise ModelConsistencyError(
                    f"averaged map for ({beta!r}, {gamma!r}) -> {alpha!r} is not a scalar isometry"
                )
            isometry = averaged / math.sqrt(c)
            flat = isometry.reshape(-1)
            first = np.flatnonzero(np.abs(flat) > 1e-10)[0]
            isometry = isometry * (np.conj(flat[first]) / abs(flat[first]))
            out.append((alpha, 1, isometry.reshape(n_b, n_c, n_a)))
        self._cache[key] = out
        return out


# ---------------------------------------------------------------------------
# JSON CG supplement


def supplement_cg_provider(raw: Any):
    """Provider backed by the optional "cg" array of a model document.

    Each entry: {"alpha", "beta", "gamma", "i", "coeffs": [[a, b, c, re, im], ...]}
    with 0-based basis indices and 1-based copy index i.
    """
    if not isinstance(raw, list):
        raise ModelSchemaError("model field 'cg' must be a list")
    data: dict[tuple[str, str], list[tuple[str, int, list]]] = {}
    for entry in raw:
        if not isinstance(entry, Mapping):
            raise ModelSchemaError("each 'cg' entry must be an object")
        try:
            alpha = str(entry["alpha"])
            beta = str(entry["beta"])
            gamma = str(entry["gamma"])
            copy_index = int(entry["i"])
            coeffs = entry["coeffs"]
        except KeyError as exc:
            raise ModelSchemaError(f"'cg' entry missing field {exc}") from exc
        if not isinstance(coeffs, list):
            raise ModelSchemaError("'cg' coeffs must be a list of [a, b, c, re, im] rows")
        for rowv in coeffs:
            if (
                not isinstance(rowv, list)
                or len(rowv) != 5
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in rowv)
            ):
                raise ModelSchemaError("'cg' coeffs rows must be [a, b, c, re, im] numbers")
        data.setdefault((beta, gamma), []).append((alpha, copy_index, coeffs))

    def provider(model: QGModel, beta: str, gamma: str) -> list[tuple[str, int, np.ndarray]]:
        items = data.get((beta, gamma))
        if items is None:
            raise CGUnavailableError(
                f"model document supplies no CG data for pair ({beta!r}, {gamma!r})"
            )
        out = []
        for alpha, copy_index, coeffs in items:
            if alpha not in model:
                raise ModelSchemaError(f"'cg' entry targets unknown irrep {alpha!r}")
            arr = np.zeros((model.dim(beta), model.dim(gamma), model.dim(alpha)), dtype=complex)
            for a, b, c, re, im in coeffs:
                ai, bi, ci = int(a), int(b), int(c)
                try:
                    arr[bi, ci, ai] = complex(re, im)
                except IndexError:
                    raise ModelSchemaError(
                        f"'cg' coefficient index ({ai}, {bi}, {ci}) out of range for "
                        f"({alpha!r}, {beta!r}, {gamma!r})"
                    ) from None
            out.append((alpha, copy_index, arr))
        return out

    return provider


def cg_supplement_document(m: QGModel, pairs: Iterable[tuple[str, str]]) -> list[dict]:
    """Serialize the CG data of the given pairs into the document supplement format."""
    entries: list[dict] = []
    for beta, gamma in _canonical_pairs(m, pairs):
        for t in cg_set(m, beta, gamma):
            rows = []
            n_b, n_c, n_a = t.shape
            for b in range(n_b):
                for c in range(n_c):
                    for a in range(n_a):
                        v = t.coeffs[b, c, a]
                        if abs(v) > 0.0:
                            rows.append([a, b, c, float(v.real), float(v.imag)])
            entries.append(
                {
                    "alpha": t.alpha,
                    "beta": beta,
                    "gamma": gamma,
                    "i": t.copy_index,
                    "coeffs": rows,
                }
            )
    return entries
