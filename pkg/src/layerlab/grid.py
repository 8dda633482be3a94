"""Half-plane discretization: periodic x, stretched wall-normal y.

The slow grid covers T x [0, y_max] with x uniform (spectral) and y strictly
increasing from the wall, clustered near y = 0 so that boundary layers of
width sqrt(eps) stay resolved for every eps in a sweep.  Fast-variable
profiles live on their own uniform eta grid (EtaGrid).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

from .operators import (
    AnchoredInverse,
    SpectralX,
    cumint_corrected,
    derivative_matrix,
    fornberg_weights,
    trapezoid_weights,
)


def stretched_nodes(ny, y_max, stretch):
    """Node set on [0, y_max] from a stretch descriptor.

    stretch is either the string 'uniform' or a dict like
    {'kind': 'sinh', 'gamma': 8.0} / {'kind': 'tanh', 'gamma': 3.0}.
    Larger gamma clusters more points at the wall.
    """
    s = np.linspace(0.0, 1.0, ny)
    if stretch == "uniform" or (isinstance(stretch, dict) and stretch.get("kind") == "uniform"):
        return y_max * s
    kind = stretch["kind"]
    gamma = float(stretch.get("gamma", 8.0))
    if kind == "sinh":
        y = y_max * np.sinh(gamma * s) / np.sinh(gamma)
    elif kind == "tanh":
        y = y_max * (1.0 - np.tanh(gamma * (1.0 - s)) / np.tanh(gamma))
    else:
        raise ValueError(f"unknown stretch kind {kind!r}")
    y[0] = 0.0
    y[-1] = y_max
    return y


class LayerResolutionError(ValueError):
    """Raised when a grid cannot place enough nodes inside the layer."""


@dataclass(frozen=True)
class GridSpec:
    """Tensor-product half-plane grid with its derivative operators.

    x: nx uniform nodes with period 2*pi. y: ny strictly increasing nodes,
    y[0] = 0, y[-1] = y_max.  eps is the viscosity scale the grid was sized
    for; at least 8 nodes must sit inside y <= sqrt(eps).
    """

    nx: int
    ny: int
    y_max: float
    eps: float
    stretch: object = "uniform"
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.nx < 8 or self.ny < 8:
            raise ValueError("need nx, ny >= 8")
        if not (0.0 < self.eps <= 1.0):
            raise ValueError("eps must lie in (0, 1]")
        if self.y_max <= 0:
            raise ValueError("y_max must be positive")
        n_layer = int(np.sum(self.y <= np.sqrt(self.eps)))
        if n_layer < 8:
            raise LayerResolutionError(
                f"only {n_layer} nodes inside y <= sqrt(eps)={np.sqrt(self.eps):.3g}; "
                "the layer is unresolved (need >= 8)"
            )

    # -- geometry ----------------------------------------------------------
    @cached_property
    def x(self):
        return 2.0 * np.pi * np.arange(self.nx) / self.nx

    @cached_property
    def y(self):
        return stretched_nodes(self.ny, self.y_max, self.stretch)

    @cached_property
    def xg(self):
        return self.x[:, None]

    @cached_property
    def yg(self):
        return self.y[None, :]

    # -- operators ----------------------------------------------------------
    @cached_property
    def spec(self):
        return SpectralX(self.nx)

    @cached_property
    def D1(self):
        return derivative_matrix(self.y, 1, width=3)

    @cached_property
    def D2(self):
        return derivative_matrix(self.y, 2, width=3, boundary_width=4)

    @cached_property
    def D3(self):
        return derivative_matrix(self.y, 3, width=5)

    def wall_trace_row(self, order, width=6):
        """One-sided wall stencil weights for d^order/dy^order at y = 0.

        Wider than the operator rows on purpose: Taylor coefficients of the
        outer fields need more accuracy at the wall than the bulk stencils
        carry.  Order 1 reuses the D1 wall row so that boundary conditions,
        traces and operators all mean the same discrete derivative.
        """
        if order == 1:
            return self.D1[0, :]
        row = np.zeros(self.ny)
        row[:width] = fornberg_weights(0.0, self.y[:width], order)[order]
        return row

    def trace(self, f, order=0, width=6):
        """Wall trace of f or of its order-th y-derivative, shape (nx,)."""
        if order == 0:
            return f[:, 0].copy()
        return f @ self.wall_trace_row(order, width=width)

    @cached_property
    def wq(self):
        """Quadrature weights in y (trapezoid)."""
        return trapezoid_weights(self.y)

    @cached_property
    def _cumint(self):
        return AnchoredInverse(self.D1, anchor=0)

    @cached_property
    def _cumint_top(self):
        return AnchoredInverse(self.D1, anchor=self.ny - 1)

    # -- derivative API ------------------------------------------------------
    def dx(self, f, order=1):
        if order == 1:
            return self.spec.dx(f)
        if order == 2:
            return self.spec.dxx(f)
        if order == 3:
            return self.spec.dx3(f)
        raise ValueError("order must be 1, 2 or 3")

    def dy(self, f, order=1):
        D = {1: self.D1, 2: self.D2, 3: self.D3}[order]
        return f @ D.T

    def integral_from_wall(self, f):
        """F with D1 F = f and F(y=0) = 0 exactly (discrete cumulative integral)."""
        return self._cumint.solve(f)

    def integral_tail(self, f):
        """F with D1 F = -f and F(y_max) = 0, i.e. F(y) = int_y^ymax f."""
        return self._cumint_top.solve(-f)

    def cumint_smooth(self, f, anchor="start"):
        """Smooth O(h^4) cumulative integral (no exact-inverse weak mode)."""
        return cumint_corrected(self.y, f, self.D1, anchor=anchor)

    def l2(self, f):
        """L2 norm over T x [0, y_max]."""
        dx = 2.0 * np.pi / self.nx
        return float(np.sqrt(np.sum(f * f * self.wq[None, :]) * dx))

    def linf(self, f):
        return float(np.max(np.abs(f)))

    def zeros(self):
        return np.zeros((self.nx, self.ny))

    def match(self, f):
        f = np.asarray(f)
        if f.shape != (self.nx, self.ny):
            raise ValueError(f"field shape {f.shape} != grid {(self.nx, self.ny)}")
        if not np.all(np.isfinite(f)):
            raise ValueError("field has non-finite entries")
        return f


def build_grid(nx, ny, y_max, eps, stretch="uniform"):
    """Construct a GridSpec, rejecting layer-unresolved configurations."""
    return GridSpec(nx=nx, ny=ny, y_max=y_max, eps=eps, stretch=stretch)


@dataclass(frozen=True)
class EtaGrid:
    """Uniform fast-variable grid [0, eta_max] for boundary-layer profiles."""

    nx: int
    neta: int
    eta_max: float

    @cached_property
    def x(self):
        return 2.0 * np.pi * np.arange(self.nx) / self.nx

    @cached_property
    def eta(self):
        return np.linspace(0.0, self.eta_max, self.neta)

    @cached_property
    def spec(self):
        return SpectralX(self.nx)

    @cached_property
    def D1(self):
        return derivative_matrix(self.eta, 1, width=3)

    @cached_property
    def D2(self):
        return derivative_matrix(self.eta, 2, width=3, boundary_width=4)

    @cached_property
    def wq(self):
        return trapezoid_weights(self.eta)

    @cached_property
    def _cumint(self):
        return AnchoredInverse(self.D1, anchor=0)

    @cached_property
    def _cumint_top(self):
        return AnchoredInverse(self.D1, anchor=self.neta - 1)

    @cached_property
    def _deta(self):
        return self.eta[1] - self.eta[0]

    def dx(self, f):
        return self.spec.dx(f)

    def deta(self, f, order=1):
        """Sliced tridiagonal derivative (uniform spacing), one-sided ends.

        Matches the D1/D2 matrices exactly on interior rows; the end rows use
        the same one-sided stencils the matrices carry.
        """
        h = self._deta
        out = np.empty_like(f)
        if order == 1:
            out[..., 1:-1] = (f[..., 2:] - f[..., :-2]) / (2.0 * h)
            out[..., 0] = (-1.5 * f[..., 0] + 2.0 * f[..., 1] - 0.5 * f[..., 2]) / h
            out[..., -1] = (1.5 * f[..., -1] - 2.0 * f[..., -2] + 0.5 * f[..., -3]) / h
            return out
        if order == 2:
            out[..., 1:-1] = (f[..., 2:] - 2.0 * f[..., 1:-1] + f[..., :-2]) / h**2
            out[..., 0] = f[..., :4] @ self.D2[0, :4]
            out[..., -1] = f[..., -4:] @ self.D2[-1, -4:]
            return out
        raise ValueError("eta derivatives implemented for orders 1 and 2")

    def integral_from_wall(self, f):
        return self._cumint.solve(f)

    def integral_tail(self, f):
        """F(eta) = int_eta^eta_max f, exact w.r.t. D1 (D1 F = -f, F(top) = 0)."""
        return self._cumint_top.solve(-f)

    def cumint_smooth(self, f, anchor="start"):
        """Smooth high-order cumulative integral (no exact-inverse weak mode)."""
        return cumint_corrected(self.eta, f, self.D1, anchor=anchor, deriv_fn=self.deta)

    def zeros(self):
        return np.zeros((self.nx, self.neta))

    def l2(self, f):
        dx = 2.0 * np.pi / self.nx
        return float(np.sqrt(np.sum(f * f * self.wq[None, :]) * dx))


class FastToSlow:
    """Evaluates eta-grid profiles at eta = y / sqrt(eps) on a slow grid.

    Profiles are extended by zero beyond eta_max (their far-field value);
    cubic-spline interpolation keeps the transfer error far below the
    finite-difference truncation of either grid.
    """

    def __init__(self, eta_grid: EtaGrid, grid: GridSpec, eps: float):
        self.eta_grid = eta_grid
        self.grid = grid
        self.eps = eps
        self.eta_of_y = grid.y / np.sqrt(eps)
        self.inside = self.eta_of_y <= eta_grid.eta_max

    def __call__(self, prof):
        spl = CubicSpline(self.eta_grid.eta, prof, axis=1)
        out = np.zeros((self.grid.nx, self.grid.ny))
        eta_in = np.clip(self.eta_of_y[self.inside], 0.0, self.eta_grid.eta_max)
        out[:, self.inside] = spl(eta_in)
        return out
