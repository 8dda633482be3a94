"""Shared time-stepping machinery: implicit wall-normal diffusion solves,
bound-preserving advection for transported densities, and variable-step
two-level IMEX coefficients.

The implicit solve treats only the wall-normal second derivative (the stiff
direction on a clustered grid); everything else is explicit.  Boundary rows
are imposed with the same one-sided first-derivative stencil used everywhere
else in the package, pre-eliminated so the batched solve stays tridiagonal.
"""

from __future__ import annotations

import numpy as np

from .operators import thomas


class ImplicitDiffusion:
    """Solves (a(x,w) I - c * d2/dw2) f = rhs over batched x-columns.

    bc_wall / bc_top are 'dirichlet' or 'neumann'; Neumann rows use the
    one-sided D1 row of the grid, folded into the tridiagonal system by one
    elimination step against the adjacent interior row.
    """

    def __init__(self, nodes, D1, D2, bc_wall="dirichlet", bc_top="dirichlet"):
        self.w = np.asarray(nodes, float)
        self.n = len(self.w)
        n = self.n
        self.bc_wall = bc_wall
        self.bc_top = bc_top
        # tridiagonal bands of D2 on interior rows
        self.d2_lower = np.zeros(n)
        self.d2_diag = np.zeros(n)
        self.d2_upper = np.zeros(n)
        for j in range(1, n - 1):
            self.d2_lower[j] = D2[j, j - 1]
            self.d2_diag[j] = D2[j, j]
            self.d2_upper[j] = D2[j, j + 1]
        self.d1_wall = D1[0, :3].copy()     # cols 0,1,2
        self.d1_top = D1[-1, -3:].copy()    # cols n-3,n-2,n-1

    def solve(self, a, c, rhs, wall_value=0.0, top_value=0.0):
        """a, c: scalars or arrays broadcastable to (nb, n); rhs: (nb, n)."""
        rhs = np.asarray(rhs, float)
        nb, n = rhs.shape
        a = np.broadcast_to(np.asarray(a, float), (nb, n))
        c = np.broadcast_to(np.asarray(c, float), (nb, n))
        lower = np.zeros((nb, n))
        diag = np.zeros((nb, n))
        upper = np.zeros((nb, n))
        lower[:, 1:-1] = -c[:, 1:-1] * self.d2_lower[1:-1]
        diag[:, 1:-1] = a[:, 1:-1] - c[:, 1:-1] * self.d2_diag[1:-1]
        upper[:, 1:-1] = -c[:, 1:-1] * self.d2_upper[1:-1]
        b = rhs.copy()
        wall = np.broadcast_to(np.asarray(wall_value, float), (nb,))
        top = np.broadcast_to(np.asarray(top_value, float), (nb,))

        if self.bc_wall == "dirichlet":
            diag[:, 0] = 1.0
            upper[:, 0] = 0.0
            b[:, 0] = wall
        else:  # one-sided Neumann row (cols 0..2), eliminate col 2 via row 1
            r0, r1, r2 = self.d1_wall
            f = r2 / upper[:, 1]
            diag[:, 0] = r0 - f * lower[:, 1]
            upper[:, 0] = r1 - f * diag[:, 1]
            b[:, 0] = wall - f * b[:, 1]

        if self.bc_top == "dirichlet":
            diag[:, -1] = 1.0
            lower[:, -1] = 0.0
            b[:, -1] = top
        else:  # one-sided Neumann row (cols n-3..n-1), eliminate col n-3
            r0, r1, r2 = self.d1_top
            f = r0 / lower[:, -2]
            lower[:, -1] = r1 - f * diag[:, -2]
            diag[:, -1] = r2 - f * upper[:, -2]
            b[:, -1] = top - f * b[:, -2]

        return thomas(lower, diag, upper, b)


def _limited_slope(dm, dp):
    """van Leer slope (harmonic mean) of one-sided differences dm, dp.

    Vanishes at extrema; magnitude bounded by twice either one-sided slope,
    which is what gives the advective update its maximum principle.
    """
    prod = dm * dp
    denom = dm + dp
    safe = np.where(denom == 0.0, 1.0, denom)
    return np.where(prod > 0.0, 2.0 * prod / safe, 0.0)


def advect_limited(f, a_x, a_w, dx, w, dt):
    """One advective Euler update of f by velocity (a_x, a_w).

    Dimension-wise slope advection with van Leer limiting: each sweep keeps
    f inside the hull of itself and its upwind neighbour at CFL <= 1/2, so
    transported densities preserve their initial bounds to rounding.  x is
    uniform periodic (spacing dx, axis 0), w the increasing wall-normal node
    vector (axis 1).
    """
    dm = (f - np.roll(f, 1, axis=0)) / dx
    dp = (np.roll(f, -1, axis=0) - f) / dx
    out = f - dt * a_x * _limited_slope(dm, dp)

    hw = np.diff(w)
    dm = np.zeros_like(f)
    dp = np.zeros_like(f)
    dm[:, 1:] = (out[:, 1:] - out[:, :-1]) / hw
    dp[:, :-1] = dm[:, 1:]
    out = out - dt * a_w * _limited_slope(dm, dp)
    return out


def transport_ssprk2(f, vel, dx, w, dt, source=None):
    """SSP-RK2 advective transport step; an optional source is integrated
    with the same two-stage rule (bounds then hold for the sourceless part)."""
    a_x, a_w = vel

    def stage(q):
        adv = advect_limited(q, a_x, a_w, dx, w, dt)
        return adv + dt * source(q) if source is not None else adv

    f1 = stage(f)
    f2 = stage(f1)
    return 0.5 * (f + f2)


class Sbdf2:
    """Variable-step two-level IMEX-BDF coefficients.

    For step ratio r = dt_new / dt_old the scheme solves

        alpha f_new - beta1 f_cur - beta2 f_prev
            = dt_new * (g1 * N(f_cur) + g2 * N(f_prev)) + dt_new * L(f_new)

    which reduces to standard SBDF2 at r = 1 and to backward Euler with
    one-level extrapolation when no history exists.
    """

    def __init__(self):
        self.dt_old = None

    def coeffs(self, dt):
        if self.dt_old is None:
            self.dt_old = dt
            return dict(alpha=1.0, beta1=1.0, beta2=0.0, g1=1.0, g2=0.0, startup=True)
        r = dt / self.dt_old
        self.dt_old = dt
        alpha = (1.0 + 2.0 * r) / (1.0 + r)
        beta1 = 1.0 + r
        beta2 = -(r**2) / (1.0 + r)
        g1 = 1.0 + r
        g2 = -r
        return dict(alpha=alpha, beta1=beta1, beta2=beta2, g1=g1, g2=g2, startup=False)


def ramped_steps(dt, n_uniform, ramp=(1 / 16, 1 / 16, 1 / 8, 1 / 4, 1 / 2)):
    """Step sequence starting with a geometric ramp worth one uniform step.

    Incompatible wall data makes the first instants rough; a short ramp keeps
    the early local error in check without complicating later bookkeeping.
    """
    steps = [dt * r for r in ramp]
    steps += [dt] * (n_uniform - 1)
    return np.asarray(steps)
