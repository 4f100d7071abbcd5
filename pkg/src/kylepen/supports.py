"""Lossless mapping between the normalized model (noise and fundamental both
uniform on [-1, 1]) and general uniform supports u ~ U(-a, a), v ~ U(b, c).

Only the normalized model is ever solved; these transforms rescale penalties
on the way in and solutions on the way out.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .metrics import Metrics
from .penalties import (
    ConstantAbovePenalty,
    ConstantNonzeroPenalty,
    LinearPenalty,
    Penalty,
    QuadraticPenalty,
    TabulatedPenalty,
    ZeroPenalty,
)


@dataclass(frozen=True)
class SupportSpec:
    """Half-width a of the noise support and endpoints b < c of the
    fundamental support."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a <= 0.0:
            raise DomainError("noise half-width must be positive")
        if self.b >= self.c:
            raise DomainError("fundamental support must satisfy b < c")

    @property
    def m(self) -> float:
        return 0.5 * (self.b + self.c)

    @property
    def sigma(self) -> float:
        return 0.5 * (self.c - self.b)

    def to_unit(self, v):
        """Affine map of the fundamental support onto [-1, 1]."""
        return (np.asarray(v, dtype=float) - self.m) / self.sigma

    def from_unit(self, v0):
        return self.m + self.sigma * np.asarray(v0, dtype=float)

    @property
    def is_identity(self) -> bool:
        return self.a == 1.0 and self.b == -1.0 and self.c == 1.0


def normalize_penalty(penalty: Penalty, spec: SupportSpec) -> Penalty:
    """Penalty of the normalized model: C0(x0) = C(a x0) / (a sigma).

    The divisor a*sigma is the factor by which the insider's objective
    rescales under the change of variables, so the normalized game has the
    same argmax structure as the original one.
    """
    scale = spec.a * spec.sigma
    if isinstance(penalty, ZeroPenalty):
        return penalty
    if isinstance(penalty, ConstantNonzeroPenalty):
        return ConstantNonzeroPenalty(penalty.K / scale)
    if isinstance(penalty, ConstantAbovePenalty):
        return ConstantAbovePenalty(penalty.K / scale, penalty.x0 / spec.a)
    if isinstance(penalty, LinearPenalty):
        # C(a x0) = alpha * a * |x0|
        return LinearPenalty(penalty.alpha / spec.sigma)
    if isinstance(penalty, QuadraticPenalty):
        # C(a x0) = alpha * a^2 * x0^2
        return QuadraticPenalty(penalty.alpha * spec.a / spec.sigma)
    if isinstance(penalty, TabulatedPenalty):
        pts = []
        for row in penalty.to_json()["points"]:
            scaled = [row[0] / spec.a, row[1] / scale, row[2]]
            if len(row) > 3:
                scaled.append(row[3] / scale)
            pts.append(scaled)
        return TabulatedPenalty(pts)
    raise DomainError(
        "penalty kind has no defined meaning on general supports"
    )


@dataclass
class DenormalizedSolution:
    """Equilibrium mapped back to the original supports."""

    spec: SupportSpec
    base: object  # EquilibriumSolution on [-1, 1]

    def demand(self, v):
        """X(v) = a X0(Phi(v)) for v in [b, c]."""
        return self.spec.a * self.base.schedule.evaluate(self.spec.to_unit(v))

    def price(self, d):
        """P(d) = Phi^{-1}(P0(d / a))."""
        return self.spec.from_unit(self.base.price.evaluate(np.asarray(d) / self.spec.a))

    def metrics(self) -> Metrics:
        from .metrics import compute_metrics

        m0 = compute_metrics(self.base.schedule)
        scale = self.spec.a * self.spec.sigma
        return Metrics(
            G=scale * m0.G,
            S=self.spec.sigma * m0.S,
            Pi_N=scale * m0.Pi_N,
            F=scale * m0.F,
        )


def denormalize_solution(sol0, spec: SupportSpec) -> DenormalizedSolution:
    return DenormalizedSolution(spec=spec, base=sol0)


def threshold_cutoffs(K: float, spec: SupportSpec):
    """No-trade band endpoints on the original fundamental support for a
    constant penalty of level K: m +- sqrt((c - b) K / a)."""
    half = np.sqrt((spec.c - spec.b) * K / spec.a)
    return spec.m - half, spec.m + half
