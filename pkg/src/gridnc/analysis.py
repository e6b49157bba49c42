"""Closed-form counting, energy models, and routing-vs-coding ratios.

All ratios are exact rationals until the moment they are printed, so the
closed-form identities never hinge on a float tolerance.  Two energy models
are covered: fixed_range compares both solutions at broadcast radius
sqrt(d), where per-transmission energy cancels and the ratio is a pure
transmission count; optimized_range lets routing shrink its radius to 1 and
weighs the coding side by the d^(alpha/2) cost of its longer reach.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .baseline import routing_total
from .topology import GridConfig, build_grid

FIXED_RANGE = "fixed_range"
OPTIMIZED_RANGE = "optimized_range"


@dataclass(frozen=True)
class EnergyModel:
    """Per-transmission energy c * range^alpha."""

    c: float
    alpha: float
    range: float

    def __post_init__(self) -> None:
        if self.c <= 0:
            raise ValueError("cost constant must be positive")
        if self.alpha < 2:
            raise ValueError("path-loss exponent must be >= 2")
        if self.range <= 0:
            raise ValueError("range must be positive")

    @property
    def energy_per_tx(self) -> float:
        return self.c * self.range ** self.alpha


@dataclass(frozen=True)
class BenefitReport:
    """Routing-vs-coding comparison for one configuration."""

    d: int
    K: int
    routing_tx: int
    nc_tx: int
    ratio: Fraction
    limit: Fraction
    model: str


def nc_tx_per_slot(d: int, K: int) -> int:
    """Coding-side transmissions per slot: (K-1)^d + 2d((K+1)^d - (K-1)^d)."""
    cfg = build_grid(d, K)
    return cfg.internal_count + 2 * d * cfg.border_count


def benefit_at(d: int, K: int) -> Fraction:
    """Exact routing/coding transmission ratio at finite K."""
    return Fraction(routing_total(build_grid(d, K)), nc_tx_per_slot(d, K))


def benefit_limit(d: int) -> Fraction:
    """Large-K limit of the fixed-range ratio: 2d / floor(sqrt(d))."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return Fraction(2 * d, math.isqrt(d))


def alt_model_benefit(d: int, alpha: float) -> float:
    """Large-K ratio when routing may shrink its range to 1: 2 * d^(1 - alpha/2)."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if alpha < 2:
        raise ValueError("path-loss exponent must be >= 2")
    return 2.0 * d ** (1.0 - alpha / 2.0)


def alt_model_benefit_at(d: int, K: int, alpha: float) -> float:
    """Finite-K ratio under the range-optimized model.

    Routing pays K unit-range hops per session; coding keeps radius sqrt(d)
    and pays d^(alpha/2) per transmission.  The cost constant cancels.
    """
    routing = 2 * d * K * (K + 1) ** (d - 1)
    coding = d ** (alpha / 2.0) * nc_tx_per_slot(d, K)
    return routing / coding


def energy_total(model: EnergyModel, tx_count: int) -> float:
    """Total energy of tx_count transmissions under the model."""
    if tx_count < 0:
        raise ValueError(f"transmission count must be >= 0, got {tx_count}")
    return tx_count * model.energy_per_tx


def make_report(d: int, K: int, model: str = FIXED_RANGE) -> BenefitReport:
    """Benefit report at finite K under the fixed-range model."""
    if model != FIXED_RANGE:
        raise ValueError("finite-K reports are defined for the fixed_range model")
    return BenefitReport(
        d=d,
        K=K,
        routing_tx=routing_total(build_grid(d, K)),
        nc_tx=nc_tx_per_slot(d, K),
        ratio=benefit_at(d, K),
        limit=benefit_limit(d),
        model=model,
    )
