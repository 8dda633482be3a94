"""Initial-data presets.

Both presets are built from stream functions, so velocity and magnetic field
are divergence-free analytically; a projection pass at load time removes the
residual discrete divergence.  'shear' deliberately violates no-slip at the
wall so that the boundary layer carries an O(1) signal from t = 0+, keeps the
wall value of the tangential magnetic field at or above sigma = 0.5, and has
a genuinely two-dimensional density perturbation (a density layer forms).
"""

from __future__ import annotations

import numpy as np

from .elliptic import clean_magnetic, leray_project

SIGMA_DEFAULT = 0.5


def trivial(grid):
    """Constant equilibrium: rho = 1, u = 0, H = (1, 0); a fixed point."""
    z = grid.zeros()
    return dict(
        rho=np.ones_like(z),
        u=z.copy(),
        v=z.copy(),
        h=np.ones_like(z),
        g=z.copy(),
        p=z.copy(),
        sigma=SIGMA_DEFAULT,
    )


def shear(grid, u_wall=0.3, u_amp=0.1, rho_amp=0.2, h_amp=0.25):
    """Smooth shear with wall slip, layered density, near-uniform field.

    u  = U(y) + u_amp * sin(x) * d/dy(y e^{-y}),   U = 1 - (1-u_wall) e^{-y}
    v  = -u_amp * cos(x) * y e^{-y}
    h  = 1 + h_amp * sin(x) * (1 - y^2) e^{-y^2/2}   (dh/dy = 0 at the wall)
    g  = -h_amp * cos(x) * y e^{-y^2/2}
    rho = 1 + rho_amp * cos(x) e^{-y}
    """
    x, y = grid.xg, grid.yg
    ey = np.exp(-y)
    gauss = np.exp(-0.5 * y**2)
    rho = 1.0 + rho_amp * np.cos(x) * ey
    u = 1.0 - (1.0 - u_wall) * ey + u_amp * np.sin(x) * (1.0 - y) * ey
    v = -u_amp * np.cos(x) * y * ey
    h = 1.0 + h_amp * np.sin(x) * (1.0 - y**2) * gauss
    g = -h_amp * np.cos(x) * y * gauss

    u, v, _ = leray_project(grid, u, v, bc_normal=0.0)
    h, g, _ = clean_magnetic(grid, h, g, bc_g0=0.0)
    return dict(rho=rho, u=u, v=v, h=h, g=g, p=np.zeros_like(u), sigma=SIGMA_DEFAULT)


def wall_distant_pulse(grid, amp=0.2, y0=5.5, width=0.55):
    """Divergence-free pulse far from the wall; u = H exactly.

    Used for symmetry checks: with equal diffusivities and unit density the
    velocity and magnetic field then evolve identically until wall effects
    (exponentially small in y0) intrude.
    """
    x, y = grid.xg, grid.yg
    bump = np.exp(-((y - y0) ** 2) / (2.0 * width**2))
    psi = amp * np.sin(x) * bump
    u = grid.dy(psi)
    v = -grid.dx(psi)
    u, v, _ = leray_project(grid, u, v, bc_normal=0.0)
    return dict(
        rho=np.ones_like(u),
        u=u,
        v=v,
        h=u.copy(),
        g=v.copy(),
        p=np.zeros_like(u),
        sigma=SIGMA_DEFAULT,
    )


PRESETS = {
    "trivial": trivial,
    "shear": shear,
    "wall_distant_pulse": wall_distant_pulse,
}


def make(grid, name, **kw):
    try:
        fn = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; have {sorted(PRESETS)}") from None
    return fn(grid, **kw)
