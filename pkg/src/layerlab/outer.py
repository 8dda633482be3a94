"""Ideal outer hierarchy on the slow grid.

Order 0 is the full inhomogeneous ideal MHD system with impermeable,
perfectly conducting wall (v = g = 0 at y = 0); orders 1 and 2 are its
linearizations around order 0, driven by wall traces of the layer recoveries
below them (order 2 additionally by explicit sources built from orders 0-1).
Heun stages with exact projections; pressure fields come from a
variable-coefficient Poisson solve consistent with the projected dynamics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elliptic import (
    clean_magnetic,
    leray_project,
    pressure_poisson_variable,
    project_variable_density,
)
from .timestep import advect_limited


@dataclass
class OuterState:
    order: int
    rho: np.ndarray
    u: np.ndarray
    v: np.ndarray
    h: np.ndarray
    g: np.ndarray
    p: np.ndarray
    t: float = 0.0

    def copy(self):
        return OuterState(
            self.order,
            *(f.copy() for f in (self.rho, self.u, self.v, self.h, self.g, self.p)),
            t=self.t,
        )


def _grad_all(grid, f):
    return grid.dx(f), grid.dy(f)


class OuterIdeal:
    """Leading-order solver; also owns the pressure diagnostics."""

    def __init__(self, grid, dealias=True):
        self.grid = grid
        self.filt = grid.spec.filt if dealias else (lambda f: f)
        self._phi = None

    def momentum_flux(self, s: OuterState, raw=False):
        """F = -(u.grad)u + (H.grad)H / rho: momentum RHS without pressure.

        raw skips the dealias filter (ledger evaluations must match plain
        pointwise products exactly)."""
        gr = self.grid
        filt = (lambda f: f) if raw else self.filt
        ux, uy = _grad_all(gr, s.u)
        vx, vy = _grad_all(gr, s.v)
        hx, hy = _grad_all(gr, s.h)
        gx, gy = _grad_all(gr, s.g)
        fu = filt(-(s.u * ux + s.v * uy) + (s.h * hx + s.g * hy) / s.rho)
        fv = filt(-(s.u * vx + s.v * vy) + (s.h * gx + s.g * gy) / s.rho)
        return fu, fv

    def solve_pressure(self, s: OuterState, p0=None):
        fu, fv = self.momentum_flux(s)
        return pressure_poisson_variable(self.grid, fu, fv, s.rho, flux0=0.0, p0=p0, tol=1e-7, maxit=25)

    def rhs(self, s: OuterState, raw=False):
        """Semidiscrete time derivative using the stored pressure field."""
        gr = self.grid
        filt = (lambda f: f) if raw else self.filt
        fu, fv = self.momentum_flux(s, raw)
        du = fu - gr.dx(s.p) / s.rho
        dv = fv - gr.dy(s.p) / s.rho
        hx, hy = _grad_all(gr, s.h)
        gx, gy = _grad_all(gr, s.g)
        ux, uy = _grad_all(gr, s.u)
        vx, vy = _grad_all(gr, s.v)
        dh = filt(-(s.u * hx + s.v * hy) + (s.h * ux + s.g * uy))
        dg = filt(-(s.u * gx + s.v * gy) + (s.h * vx + s.g * vy))
        drho = -(s.u * gr.dx(s.rho) + s.v * gr.dy(s.rho))
        return drho, du, dv, dh, dg

    def accel(self, s: OuterState, raw=False):
        """A = du/dt + (u.grad)u = (H.grad H - grad p)/rho, both components."""
        gr = self.grid
        filt = (lambda f: f) if raw else self.filt
        hx, hy = _grad_all(gr, s.h)
        gx, gy = _grad_all(gr, s.g)
        ax = (filt(s.h * hx + s.g * hy) - gr.dx(s.p)) / s.rho
        ay = (filt(s.h * gx + s.g * gy) - gr.dy(s.p)) / s.rho
        return ax, ay

    def _advance(self, s: OuterState, dt):
        gr = self.grid
        ux, uy = _grad_all(gr, s.u)
        vx, vy = _grad_all(gr, s.v)
        hx, hy = _grad_all(gr, s.h)
        gx, gy = _grad_all(gr, s.g)
        fu = self.filt(-(s.u * ux + s.v * uy) + (s.h * hx + s.g * hy) / s.rho)
        fv = self.filt(-(s.u * vx + s.v * vy) + (s.h * gx + s.g * gy) / s.rho)
        fh = self.filt(-(s.u * hx + s.v * hy) + (s.h * ux + s.g * uy))
        fg = self.filt(-(s.u * gx + s.v * gy) + (s.h * vx + s.g * vy))
        rho1 = advect_limited(s.rho, s.u, s.v, 2.0 * np.pi / gr.nx, gr.y, dt)
        u1, v1, phi = project_variable_density(
            gr, s.u + dt * fu, s.v + dt * fv, rho1, bc_normal=0.0, tol=2e-8,
            maxit=14, p0=self._phi,
        )
        self._phi = phi
        h1, g1, _ = clean_magnetic(gr, s.h + dt * fh, s.g + dt * fg, bc_g0=0.0)
        return OuterState(0, rho1, u1, v1, h1, g1, s.p, t=s.t + dt)

    def step(self, s: OuterState, dt) -> OuterState:
        s1 = self._advance(s, dt)
        s2 = self._advance(s1, dt)
        out = OuterState(
            0,
            0.5 * (s.rho + s2.rho),
            0.5 * (s.u + s2.u),
            0.5 * (s.v + s2.v),
            0.5 * (s.h + s2.h),
            0.5 * (s.g + s2.g),
            s.p,
            t=s.t + dt,
        )
        # Heun averaging of projected stages keeps both constraints exactly
        out.p = self.solve_pressure(out, p0=s.p)
        return out


class OuterLinearized:
    """Orders 1 and 2: ideal MHD linearized around the order-0 flow.

    The wall boundary data (v, g)(t, x, 0) comes from the previous layer's
    normal recoveries; order 2 additionally carries source vectors built
    from orders 0 and 1.
    """

    def __init__(self, grid, order, dealias=True, smooth=0.03):
        if order not in (1, 2):
            raise ValueError("linearized solver handles orders 1 and 2")
        self.grid = grid
        self.order = order
        self.filt = grid.spec.filt if dealias else (lambda f: f)
        self._phi = None
        # grid-scale-selective damping: without any diffusion these systems
        # accumulate two-cell noise on the wall-clustered grid, which later
        # derivative evaluations amplify by 1/h^2 per order
        self.smooth = smooth

    def _ysmooth(self, f):
        s = self.smooth
        if not s:
            return f
        out = f.copy()
        out[:, 2:-2] -= s * (
            f[:, 4:] - 4.0 * f[:, 3:-1] + 6.0 * f[:, 2:-2] - 4.0 * f[:, 1:-3] + f[:, :-4]
        )
        return out

    def momentum_flux(self, s, bg: OuterState, accel0, src=None, raw=False):
        """Momentum RHS without the order-n pressure gradient (per rho0)."""
        gr = self.grid
        filt = (lambda f: f) if raw else self.filt
        th = 1.0 / bg.rho
        ux, uy = _grad_all(gr, s.u)
        vx, vy = _grad_all(gr, s.v)
        fu = -(bg.u * ux + bg.v * uy) - (
            s.u * gr.dx(bg.u) + s.v * gr.dy(bg.u)
        ) - s.rho * accel0[0] * th + th * (
            bg.h * gr.dx(s.h) + bg.g * gr.dy(s.h) + s.h * gr.dx(bg.h) + s.g * gr.dy(bg.h)
        )
        fv = -(bg.u * vx + bg.v * vy) - (
            s.u * gr.dx(bg.v) + s.v * gr.dy(bg.v)
        ) - s.rho * accel0[1] * th + th * (
            bg.h * gr.dx(s.g) + bg.g * gr.dy(s.g) + s.h * gr.dx(bg.g) + s.g * gr.dy(bg.g)
        )
        if src is not None:
            fu = fu - th * src[0]
            fv = fv - th * src[1]
        return filt(fu), filt(fv)

    def induction_rhs(self, s, bg: OuterState, src=None, raw=False):
        gr = self.grid
        filt = (lambda f: f) if raw else self.filt
        dh = (
            -(bg.u * gr.dx(s.h) + bg.v * gr.dy(s.h))
            - (s.u * gr.dx(bg.h) + s.v * gr.dy(bg.h))
            + (bg.h * gr.dx(s.u) + bg.g * gr.dy(s.u))
            + (s.h * gr.dx(bg.u) + s.g * gr.dy(bg.u))
        )
        dg = (
            -(bg.u * gr.dx(s.g) + bg.v * gr.dy(s.g))
            - (s.u * gr.dx(bg.g) + s.v * gr.dy(bg.g))
            + (bg.h * gr.dx(s.v) + bg.g * gr.dy(s.v))
            + (s.h * gr.dx(bg.v) + s.g * gr.dy(bg.v))
        )
        if src is not None:
            dh = dh - src[0]
            dg = dg - src[1]
        return filt(dh), filt(dg)

    def density_rhs(self, s, bg: OuterState):
        gr = self.grid
        return -(bg.u * gr.dx(s.rho) + bg.v * gr.dy(s.rho)) - (
            s.u * gr.dx(bg.rho) + s.v * gr.dy(bg.rho)
        )

    def rhs(self, s, bg, accel0, src_mom=None, src_ind=None, raw=False):
        """Full semidiscrete time derivative using the stored pressure."""
        gr = self.grid
        fu, fv = self.momentum_flux(s, bg, accel0, src_mom, raw=raw)
        dh, dg = self.induction_rhs(s, bg, src_ind, raw=raw)
        drho = self.density_rhs(s, bg)
        th = 1.0 / bg.rho
        return drho, fu - th * gr.dx(s.p), fv - th * gr.dy(s.p), dh, dg

    def solve_pressure(self, s, bg, accel0, src_mom=None, dbc_v_dt=None, p0=None):
        """Pressure from the divergence of the momentum equation.

        The wall flux uses the traced v-momentum balance; dbc_v_dt is the
        time derivative of the prescribed normal-velocity trace.
        """
        gr = self.grid
        fu, fv = self.momentum_flux(s, bg, accel0, src_mom)
        dv_wall = 0.0 if dbc_v_dt is None else dbc_v_dt
        flux0 = gr.trace(bg.rho * fv) - gr.trace(bg.rho) * dv_wall
        return pressure_poisson_variable(gr, fu, fv, bg.rho, flux0=flux0, p0=p0, tol=1e-7, maxit=25)

    def _advance(self, s, dt, bg, accel0, bc_v, bc_g, src_mom, src_ind):
        gr = self.grid
        fu, fv = self.momentum_flux(s, bg, accel0, src_mom)
        dh, dg = self.induction_rhs(s, bg, src_ind)
        drho = self.density_rhs(s, bg)
        rho1 = s.rho + dt * drho
        u1, v1, phi = project_variable_density(
            gr, s.u + dt * fu, s.v + dt * fv, bg.rho, bc_normal=bc_v, tol=3e-7,
            maxit=14, p0=self._phi,
        )
        self._phi = phi
        h1, g1, _ = clean_magnetic(gr, s.h + dt * dh, s.g + dt * dg, bc_g0=bc_g)
        out = OuterState(self.order, rho1, u1, v1, h1, g1, s.p, t=s.t + dt)
        return out

    def step(self, s, dt, bg_pair, accel0_pair, bc_pair, src_pair=None, dbc_v_dt=None):
        """Heun step; *_pair holds values at t and t + dt."""
        bg0, bg1 = bg_pair
        a0, a1 = accel0_pair
        (bcv0, bcg0), (bcv1, bcg1) = bc_pair
        if src_pair is None:
            sm0 = si0 = sm1 = si1 = None
        else:
            (sm0, si0), (sm1, si1) = src_pair
        s1 = self._advance(s, dt, bg0, a0, bcv1, bcg1, sm0, si0)
        s2 = self._advance(s1, dt, bg1, a1, bcv1, bcg1, sm1, si1)
        out = OuterState(
            self.order,
            0.5 * (s.rho + s2.rho),
            0.5 * (s.u + s2.u),
            0.5 * (s.v + s2.v),
            0.5 * (s.h + s2.h),
            0.5 * (s.g + s2.g),
            s.p,
            t=s.t + dt,
        )
        # grid-scale damping, then exact re-pin of the wall traces (the Heun
        # average halves them) with divergence-free projections
        out.rho = self._ysmooth(out.rho)
        out.u, out.v, _ = leray_project(
            self.grid, self._ysmooth(out.u), self._ysmooth(out.v), bc_normal=bcv1
        )
        out.h, out.g, _ = clean_magnetic(
            self.grid, self._ysmooth(out.h), self._ysmooth(out.g), bc_g0=bcg1
        )
        out.p = self.solve_pressure(out, bg1, a1, sm1, dbc_v_dt, p0=s.p)
        return out


def compute_sources_2(grid, s0: OuterState, s1: OuterState, rhs1, mu, kappa, dealias=True):
    """Order-2 source vectors from orders 0 and 1.

    f4 = rho1*(du1/dt + (u0.grad)u1 + (u1.grad)u0) + rho0 (u1.grad)u1
         - (H1.grad)H1 - mu * Lap(u0)
    f5 = (u1.grad)H1 - (H1.grad)u1 - kappa * Lap(H0)

    rhs1 is the semidiscrete time derivative of the order-1 state (so the
    formula stays consistent with the solved dynamics).
    """
    gr = grid
    filt = gr.spec.filt if dealias else (lambda f: f)
    _, du1, dv1, _, _ = rhs1

    def adv(au, av, f):
        return au * gr.dx(f) + av * gr.dy(f)

    lap = lambda f: gr.dx(f, 2) + gr.dy(f, 2)
    f4x = (
        s1.rho * (du1 + adv(s0.u, s0.v, s1.u) + adv(s1.u, s1.v, s0.u))
        + s0.rho * adv(s1.u, s1.v, s1.u)
        - adv(s1.h, s1.g, s1.h)
        - mu * lap(s0.u)
    )
    f4y = (
        s1.rho * (dv1 + adv(s0.u, s0.v, s1.v) + adv(s1.u, s1.v, s0.v))
        + s0.rho * adv(s1.u, s1.v, s1.v)
        - adv(s1.h, s1.g, s1.g)
        - mu * lap(s0.v)
    )
    f5x = adv(s1.u, s1.v, s1.h) - adv(s1.h, s1.g, s1.u) - kappa * lap(s0.h)
    f5y = adv(s1.u, s1.v, s1.g) - adv(s1.h, s1.g, s1.v) - kappa * lap(s0.g)
    return (filt(f4x), filt(f4y)), (filt(f5x), filt(f5y))


TRACE_FIELDS = ("rho", "u", "v", "h", "g", "p")


def trace_set(grid, state, rhs=None, max_order=3):
    """Wall traces of every field and (optionally) of its time derivative.

    Returns {name: [trace_0, dy_trace, dy2_trace, dy3_trace], ...} plus
    'dt_<name>' entries built from the supplied semidiscrete rhs tuple
    (rho, u, v, h, g ordering; pressure has no dt entry).
    """
    out = {}
    for name in TRACE_FIELDS:
        f = getattr(state, name)
        out[name] = [grid.trace(f, k) for k in range(max_order + 1)]
    if rhs is not None:
        for name, df in zip(("rho", "u", "v", "h", "g"), rhs):
            out["dt_" + name] = [grid.trace(df, k) for k in range(max_order + 1)]
    return out
