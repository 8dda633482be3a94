"""Semi-implicit solver for 2-D inhomogeneous incompressible viscous MHD on
the half-plane, with no-slip velocity and a perfectly conducting wall
(dh/dy = 0, g = 0 at y = 0).

Scheme: variable-step IMEX-BDF2.  Stiff wall-normal diffusion (coefficients
mu*eps, kappa*eps) is implicit per x-column; advection, Lorentz/stretching
terms and x-diffusion are explicit (spectral in x, dealiased); density rides
a bound-preserving limited transport; incompressibility is restored by an
exact variable-density projection and the magnetic field is cleaned to
rounding-level divergence every step.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .elliptic import clean_magnetic, divergence, project_variable_density
from .timestep import ImplicitDiffusion, Sbdf2, ramped_steps, transport_ssprk2


@dataclass
class ViscousParams:
    mu: float
    kappa: float
    eps: float
    dt: float
    t_end: float
    cfl_margin: float = 2.0

    def __post_init__(self):
        if self.mu <= 0 or self.kappa <= 0:
            raise ValueError("mu, kappa must be positive")


@dataclass
class ViscousState:
    rho: np.ndarray
    u: np.ndarray
    v: np.ndarray
    h: np.ndarray
    g: np.ndarray
    p: np.ndarray
    t: float = 0.0

    def copy(self):
        return ViscousState(
            *(f.copy() for f in (self.rho, self.u, self.v, self.h, self.g, self.p)),
            t=self.t,
        )

    def fields(self):
        return self.rho, self.u, self.v, self.h, self.g


class DensityBoundsError(RuntimeError):
    pass


class CflError(RuntimeError):
    pass


def cfl_rate(grid, u, v):
    """Inverse of the largest stable advective step (rate = max |a|/h)."""
    dxu = 2.0 * np.pi / grid.nx
    hy = np.diff(grid.y)
    hloc = np.concatenate([[hy[0]], np.minimum(hy[:-1], hy[1:]), [hy[-1]]])
    return float(np.max(np.abs(u) / dxu + np.abs(v) / hloc[None, :]))


class ViscousSolver:
    """Integrates the viscous system; states are immutable snapshots."""

    def __init__(self, grid, params: ViscousParams):
        self.grid = grid
        self.params = params
        self.diff_dir = ImplicitDiffusion(grid.y, grid.D1, grid.D2, "dirichlet", "neumann")
        self.diff_neu = ImplicitDiffusion(grid.y, grid.D1, grid.D2, "neumann", "neumann")
        self.bdf = Sbdf2()
        self.prev: ViscousState | None = None
        self.rho_bounds = None

    # -- explicit right-hand sides -----------------------------------------
    def _explicit(self, s: ViscousState):
        gr = self.grid
        filt = gr.spec.filt
        ux, uy = gr.dx(s.u), gr.dy(s.u)
        vx, vy = gr.dx(s.v), gr.dy(s.v)
        hx, hy = gr.dx(s.h), gr.dy(s.h)
        gx, gy = gr.dx(s.g), gr.dy(s.g)
        adv_u = filt(s.u * ux + s.v * uy)
        adv_v = filt(s.u * vx + s.v * vy)
        adv_h = filt(s.u * hx + s.v * hy)
        adv_g = filt(s.u * gx + s.v * gy)
        lor_u = filt(s.h * hx + s.g * hy)
        lor_v = filt(s.h * gx + s.g * gy)
        str_h = filt(s.h * ux + s.g * uy)
        str_g = filt(s.h * vx + s.g * vy)
        nu = self.params.mu * self.params.eps
        ka = self.params.kappa * self.params.eps
        # no pressure here: it enters only through the projection impulse
        n_u = lor_u / s.rho - adv_u + (nu / s.rho) * gr.dx(s.u, 2)
        n_v = lor_v / s.rho - adv_v + (nu / s.rho) * gr.dx(s.v, 2)
        n_h = str_h - adv_h + ka * gr.dx(s.h, 2)
        n_g = str_g - adv_g + ka * gr.dx(s.g, 2)
        return n_u, n_v, n_h, n_g

    def rhs_time_derivative(self, s: ViscousState):
        """Instantaneous semidiscrete time derivative of every field."""
        gr = self.grid
        n_u, n_v, n_h, n_g = self._explicit(s)
        nu = self.params.mu * self.params.eps
        ka = self.params.kappa * self.params.eps
        du = n_u - gr.dx(s.p) / s.rho + (nu / s.rho) * gr.dy(s.u, 2)
        dv = n_v - gr.dy(s.p) / s.rho + (nu / s.rho) * gr.dy(s.v, 2)
        dh = n_h + ka * gr.dy(s.h, 2)
        dg = n_g + ka * gr.dy(s.g, 2)
        drho = -(s.u * gr.dx(s.rho) + s.v * gr.dy(s.rho))
        return drho, du, dv, dh, dg

    # -- one step ------------------------------------------------------------
    def step(self, s: ViscousState, dt) -> ViscousState:
        gr, pr = self.grid, self.params
        rate = cfl_rate(gr, s.u, s.v) + cfl_rate(gr, s.h, s.g)
        if dt * rate > 0.5:
            raise CflError(f"dt*rate = {dt * rate:.3f} exceeds the 1/2 stability bound")
        c = self.bdf.coeffs(dt)
        prev = self.prev if not c["startup"] else s

        # density: limited transport with midpoint-extrapolated velocity
        r = dt / (dt if c["startup"] else self._dt_prev)
        u_half = (1 + 0.5 * r) * s.u - 0.5 * r * prev.u
        v_half = (1 + 0.5 * r) * s.v - 0.5 * r * prev.v
        rho_new = transport_ssprk2(
            s.rho, (u_half, v_half), 2.0 * np.pi / gr.nx, gr.y, dt
        )
        if self.rho_bounds is not None:
            lo, hi = self.rho_bounds
            if rho_new.min() < lo - 1e-8 or rho_new.max() > hi + 1e-8:
                raise DensityBoundsError(
                    f"density left [{lo}, {hi}] by more than 1e-8"
                )

        n_cur = self._explicit(s)
        n_prev = self._explicit(prev) if not c["startup"] else n_cur
        a, b1, b2, g1, g2 = (c[k] for k in ("alpha", "beta1", "beta2", "g1", "g2"))

        nu = pr.mu * pr.eps
        ka = pr.kappa * pr.eps
        out = {}
        # pressure-free predictor: the projection supplies the full pressure
        # impulse afterwards.  The splitting error this leaves scales with
        # the O(eps) diffusivity, and it keeps the velocity and induction
        # updates identical operations (the symmetric-state invariant).
        for name, fld, fldp, ncur, nprv, solver, visc in (
            ("u", s.u, prev.u, n_cur[0], n_prev[0], self.diff_dir, nu),
            ("v", s.v, prev.v, n_cur[1], n_prev[1], self.diff_dir, nu),
            ("h", s.h, prev.h, n_cur[2], n_prev[2], self.diff_neu, ka),
            ("g", s.g, prev.g, n_cur[3], n_prev[3], self.diff_dir, ka),
        ):
            rhs = b1 * fld + b2 * fldp + dt * (g1 * ncur + g2 * nprv)
            if name in ("u", "v"):
                out[name] = solver.solve(a, dt * visc / rho_new, rhs)
            else:
                out[name] = solver.solve(a, dt * visc, rhs)

        # restore the divergence constraints
        u2, v2, dp = project_variable_density(
            gr, out["u"], out["v"], rho_new, bc_normal=0.0, tol=1e-10, maxit=30,
            p0=getattr(self, "_phi", None),
        )
        self._phi = dp
        h2, g2_, _ = clean_magnetic(gr, out["h"], out["g"], bc_g0=0.0)
        p_new = (a / dt) * dp  # instantaneous pressure impulse of this step

        self.prev = s
        self._dt_prev = dt
        return ViscousState(rho_new, u2, v2, h2, g2_, p_new, t=s.t + dt)

    def run(self, init: ViscousState, sample_times, ramp=True):
        """March to max(sample_times); returns states at the requested times.

        The step controller keeps dt at params.dt unless the advective
        stability bound (with the configured margin) demands less.
        """
        pr = self.params
        t_end = float(max(sample_times))
        n = int(round(t_end / pr.dt))
        if abs(n * pr.dt - t_end) > 1e-12:
            raise ValueError("t_end must be an integer multiple of dt")
        steps = ramped_steps(pr.dt, n) if ramp else np.full(n, pr.dt)
        rate = cfl_rate(self.grid, init.u, init.v) + cfl_rate(self.grid, init.h, init.g)
        if pr.dt * rate * pr.cfl_margin > 0.5:
            steps = steps * 0.5 / (pr.dt * rate * pr.cfl_margin)

        self.rho_bounds = (float(init.rho.min()), float(init.rho.max()))
        self.prev = None
        self.bdf = Sbdf2()
        out = []
        want = sorted(float(ts) for ts in sample_times)
        s = init.copy()
        if want and abs(want[0] - s.t) < 1e-12:
            out.append(s.copy())
            want.pop(0)
        for dt in steps:
            s = self.step(s, float(dt))
            if want and s.t >= want[0] - 1e-10:
                out.append(s.copy())
                want.pop(0)
        return out


def energy(grid, s: ViscousState):
    """Total kinetic plus magnetic energy."""
    dens = 0.5 * (s.rho * (s.u**2 + s.v**2) + s.h**2 + s.g**2)
    dxw = 2.0 * np.pi / grid.nx
    return float(np.sum(dens * grid.wq[None, :]) * dxw)


def cross_helicity(grid, s: ViscousState):
    dens = s.u * s.h + s.v * s.g
    dxw = 2.0 * np.pi / grid.nx
    return float(np.sum(dens * grid.wq[None, :]) * dxw)


def check_state(grid, s: ViscousState, tol_div=1e-10, tol_bc=1e-5):
    """Invariant audit for a viscous state; returns a dict of measures."""
    rep = {
        "div_u": float(np.max(np.abs(divergence(grid, s.u, s.v)))),
        "div_h": float(np.max(np.abs(divergence(grid, s.h, s.g)))),
        "u_wall": float(np.max(np.abs(s.u[:, 0]))),
        "v_wall": float(np.max(np.abs(s.v[:, 0]))),
        "g_wall": float(np.max(np.abs(s.g[:, 0]))),
        "dyh_wall": float(np.max(np.abs(grid.trace(s.h, 1)))),
        "rho_min": float(s.rho.min()),
        "rho_max": float(s.rho.max()),
    }
    rep["div_ok"] = rep["div_u"] <= tol_div and rep["div_h"] <= tol_div
    rep["bc_ok"] = max(rep["u_wall"], rep["v_wall"], rep["g_wall"], rep["dyh_wall"]) <= tol_bc
    return rep
