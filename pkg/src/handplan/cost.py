"""Manipulation cost: the integral over normalized time t in [0, 1] of

    |dP| / (e3 + e2 * t)

where |dP| is the demanded motion and e2, e3 the displacements of the two
movable joints. A candidate configuration is kept when the cost is close to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from handplan.errors import DivergentIntegral

DEFAULT_EPSILON_F = 0.05


@dataclass(frozen=True)
class CostInput:
    delta_norm: float
    e3: float
    e2: float

    def __post_init__(self):
        for name in ("delta_norm", "e3", "e2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and nonnegative, got {v!r}")

    def scaled(self, factor: float) -> CostInput:
        return CostInput(self.delta_norm * factor, self.e3 * factor, self.e2 * factor)


def cost_closed_form(inp: CostInput) -> float:
    """Exact value of the cost integral; ``inf`` when it diverges."""
    d, e3, e2 = inp.delta_norm, inp.e3, inp.e2
    if e3 > 0:
        if e2 > 0:
            return d / e2 * math.log1p(e2 / e3)
        return d / e3
    # integrand ~ d / (e2 t) near t = 0
    return 0.0 if d == 0 else math.inf


def cost_array(delta_norm, e3, e2) -> np.ndarray:
    """Vectorized ``cost_closed_form`` over broadcastable arrays."""
    d, e3, e2 = np.broadcast_arrays(
        np.asarray(delta_norm, dtype=float), np.asarray(e3, dtype=float), np.asarray(e2, dtype=float)
    )
    out = np.full(d.shape, np.inf)
    with np.errstate(divide="ignore", invalid="ignore"):
        both = (e3 > 0) & (e2 > 0)
        out[both] = d[both] / e2[both] * np.log1p(e2[both] / e3[both])
        only3 = (e3 > 0) & (e2 <= 0)
        out[only3] = d[only3] / e3[only3]
    out[(e3 <= 0) & (d == 0)] = 0.0
    return out


def cost_quadrature(inp: CostInput, tolerance: float = 1e-10) -> float:
    """Adaptive quadrature of the cost integrand, independent of the closed form."""
    if inp.e3 <= 0:
        if inp.delta_norm == 0:
            return 0.0
        raise DivergentIntegral("integrand is singular at t = 0 when e3 = 0")
    d, e3, e2 = inp.delta_norm, inp.e3, inp.e2
    value, _ = integrate.quad(lambda t: d / (e3 + e2 * t), 0.0, 1.0, epsabs=tolerance, epsrel=0.0, limit=500)
    return value


def accepts(inp: CostInput, epsilon_f: float = DEFAULT_EPSILON_F) -> bool:
    """Acceptance band |f - 1| <= epsilon_f.

    The all-zero input (no demanded motion, no joint motion) is the identity
    task and is accepted outright.
    """
    if epsilon_f <= 0:
        raise ValueError("epsilon_f must be positive")
    if inp.delta_norm == 0 and inp.e2 == 0 and inp.e3 == 0:
        return True
    f = cost_closed_form(inp)
    return math.isfinite(f) and abs(f - 1.0) <= epsilon_f
