"""Weighted Sobolev norms and the conormal derivative family.

The weighted norm sums <w>^(l+m2) * dx^m1 dw^m2 f over m1+m2 <= m in L2,
where w is the wall-normal variable (slow y or fast eta) and <w> = 1 + w.
The conormal family {dt, dx, y*dy, sqrt(eps)*dy} stays uniformly bounded on
boundary-layer data, which is what makes it the right measuring stick here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NormSpec:
    """Order/weight descriptor: m derivatives, <w>^l decay weight."""

    m: int
    l: float
    variable: str = "fast"  # 'fast' (eta) or 'slow' (y)

    def __post_init__(self):
        if self.m < 0 or self.l < 0:
            raise ValueError("need m >= 0 and l >= 0")
        if self.variable not in ("fast", "slow"):
            raise ValueError("variable must be 'fast' or 'slow'")


def differentiate(grid, f, axis, order=1):
    """Discrete derivative on a GridSpec/EtaGrid: spectral in x, FD in y/eta."""
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    f = np.asarray(f, dtype=float)
    if axis == "x":
        if order == 1:
            return grid.spec.dx(f)
        if order == 2:
            return grid.spec.dxx(f)
        return grid.spec.dx3(f)
    if axis in ("y", "eta"):
        if hasattr(grid, "dy"):
            return grid.dy(f, order=order)
        if order == 3:
            raise ValueError("eta grids carry derivatives up to order 2")
        return grid.deta(f, order=order)
    raise ValueError("axis must be 'x' or 'y'/'eta'")


def weighted_norm(grid, f, spec: NormSpec):
    """Weighted Sobolev norm of f on grid (GridSpec for slow, EtaGrid for fast)."""
    if spec.m > 3:
        raise ValueError("norms implemented for m <= 3")
    w = grid.eta if spec.variable == "fast" else grid.y
    bracket = 1.0 + w
    dx = 2.0 * np.pi / grid.nx
    total = 0.0
    fx = {0: np.asarray(f, dtype=float)}
    for m1 in range(spec.m + 1):
        if m1 > 0:
            fx[m1] = differentiate(grid, fx[m1 - 1], "x", 1)
        g = fx[m1]
        for m2 in range(spec.m + 1 - m1):
            h = g if m2 == 0 else differentiate(grid, g, "y", m2)
            wf = bracket ** (spec.l + m2)
            total += np.sum((wf[None, :] * h) ** 2 * grid.wq[None, :]) * dx
    return float(np.sqrt(total))


CONORMAL_KINDS = ("dt", "dx", "y_dy", "sqrt_eps_dy")


def conormal_apply(grid, f, kind, eps=None, history=None, dt=None):
    """Apply one conormal derivative.

    'dt' needs two stored time levels: history = (f_prev, f_curr) with step
    dt, and f must be the current level (backward difference).  'y_dy'
    vanishes identically on the wall row because y[0] = 0.
    """
    if kind not in CONORMAL_KINDS:
        raise ValueError(f"kind must be one of {CONORMAL_KINDS}")
    if kind == "dt":
        if history is None or dt is None:
            raise ValueError("dt-derivative needs history=(f_prev, f_curr) and dt")
        f_prev, f_curr = history
        return (np.asarray(f_curr) - np.asarray(f_prev)) / dt
    if kind == "dx":
        return differentiate(grid, f, "x", 1)
    w = grid.y if hasattr(grid, "y") else grid.eta
    dyf = differentiate(grid, f, "y", 1)
    if kind == "y_dy":
        return w[None, :] * dyf
    if eps is None:
        raise ValueError("sqrt_eps_dy needs eps")
    return np.sqrt(eps) * dyf
