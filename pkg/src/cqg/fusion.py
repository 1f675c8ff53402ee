"""Tensor decomposition engine over the fusion table.

Products, iterated powers with multiplicity bookkeeping, the maximal
component degree P_n, components attaining the maximal rho eigenvalue of a
product, and the multiplicity reciprocity report.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass

from .errors import ModelConsistencyError, PreconditionError
from .rep_data import DEFAULT_TOLERANCE, QGModel, Tolerance


@dataclass(frozen=True)
class Decomposition:
    """Multiset of irreducible components with multiplicities >= 1.

    Components are listed in the model's declaration order, the canonical
    iteration order used everywhere in the package.
    """

    components: tuple[tuple[str, int], ...]

    def as_dict(self) -> dict[str, int]:
        return dict(self.components)

    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.components)

    def multiplicity(self, label: str) -> int:
        return self.as_dict().get(label, 0)

    def total_dim(self, m: QGModel) -> int:
        return sum(mult * m.dim(label) for label, mult in self.components)

    def total_quantum_dim(self, m: QGModel) -> float:
        return sum(mult * m.rho(label).trace() for label, mult in self.components)


def _canonical(m: QGModel, counts: dict[str, int]) -> Decomposition:
    ordered = tuple((label, counts[label]) for label in m.labels if counts.get(label, 0) > 0)
    return Decomposition(components=ordered)


def decompose(m: QGModel, beta: str, gamma: str) -> Decomposition:
    """Decomposition of beta x gamma; the pair must be ingested."""
    m.irrep(beta)
    m.irrep(gamma)
    row = m.fusion.components(beta, gamma)
    return _canonical(m, row)


_POWER_CACHE: "weakref.WeakKeyDictionary[QGModel, dict[tuple[str, int], Decomposition]]" = (
    weakref.WeakKeyDictionary()
)


def tensor_power_decompose(m: QGModel, alpha: str, n: int) -> Decomposition:
    """Decomposition of the n-th tensor power, associating to the left.

    Dynamic programming over the fusion table: the power at n + 1 is the
    fusion convolution of the power at n with alpha.  Intermediate results
    are cached per model.
    """
    if n < 1:
        raise PreconditionError("tensor power exponent n must be >= 1")
    m.irrep(alpha)
    cache = _POWER_CACHE.setdefault(m, {})
    base = cache.get((alpha, 1))
    if base is None:
        base = _canonical(m, {alpha: 1})
        cache[(alpha, 1)] = base
    best = 1
    for k in range(n, 1, -1):
        if (alpha, k) in cache:
            best = k
            break
    current = cache[(alpha, best)]
    for k in range(best + 1, n + 1):
        counts: dict[str, int] = {}
        for label, mult in current.components:
            for comp, sub in m.fusion.components(label, alpha).items():
                counts[comp] = counts.get(comp, 0) + mult * sub
        current = _canonical(m, counts)
        cache[(alpha, k)] = current
    return current


def p_n(m: QGModel, alpha: str, n: int) -> int:
    """Maximal degree among irreducible components of the n-th tensor power."""
    power = tensor_power_decompose(m, alpha, n)
    return max(m.dim(label) for label, _ in power.components)


def gamma_top_components(
    m: QGModel, alpha: str, beta: str, tol: Tolerance = DEFAULT_TOLERANCE
) -> tuple[tuple[str, int], ...]:
    """Components of alpha x beta whose top rho eigenvalue is Gamma(alpha)*Gamma(beta).

    The product spectrum is the pairwise product multiset, so its maximum is
    the product of maxima and some component must attain it; an empty result
    therefore indicates inconsistent model data.
    """
    product_top = m.rho(alpha)[0] * m.rho(beta)[0]
    dec = decompose(m, alpha, beta)
    hits = tuple(
        (label, mult)
        for label, mult in dec.components
        if abs(math.log(m.rho(label)[0]) - math.log(product_top)) <= tol.eigen_group
    )
    if not hits:
        raise ModelConsistencyError(
            f"no component of {alpha!r} x {beta!r} attains the product top eigenvalue "
            f"{product_top:.12g}; the fusion row or the spectra are inconsistent"
        )
    return hits


def frobenius_check(m: QGModel) -> list[dict]:
    """Multiplicity reciprocity violations over all fully ingested triples.

    For each ingested pair (beta, gamma) and every label alpha, the
    multiplicity of alpha in beta x gamma is compared against the two
    reciprocal readings whenever their pairs are ingested too.
    """
    violations: list[dict] = []
    for beta, gamma in m.fusion.pairs():
        row = m.fusion.components(beta, gamma)
        gamma_bar = m.conjugate(gamma)
        beta_bar = m.conjugate(beta)
        for alpha in m.labels:
            m1 = row.get(alpha, 0)
            if (alpha, gamma_bar) in m.fusion:
                m2 = m.fusion.multiplicity(beta, alpha, gamma_bar)
                if m1 != m2:
                    violations.append(
                        {
                            "invariant": "frobenius",
                            "alpha": alpha,
                            "beta": beta,
                            "gamma": gamma,
                            "m_direct": m1,
                            "m_reciprocal": m2,
                            "message": f"m({alpha!r}, {beta!r} x {gamma!r}) = {m1} but "
                            f"m({beta!r}, {alpha!r} x {gamma_bar!r}) = {m2}",
                        }
                    )
            if (beta_bar, alpha) in m.fusion:
                m3 = m.fusion.multiplicity(gamma, beta_bar, alpha)
                if m1 != m3:
                    violations.append(
                        {
                            "invariant": "frobenius",
                            "alpha": alpha,
                            "beta": beta,
                            "gamma": gamma,
                            "m_direct": m1,
                            "m_reciprocal": m3,
                            "message": f"m({alpha!r}, {beta!r} x {gamma!r}) = {m1} but "
                            f"m({gamma!r}, {beta_bar!r} x {alpha!r}) = {m3}",
                        }
                    )
    return violations
