"""Elliptic solvers: Leray projection and the wall-flux Poisson problem.

The projector is built so that the corrected field annihilates the discrete
divergence ik*u + D1y*v on every row to rounding, and hits the prescribed
wall-normal trace exactly.  Per x-mode it solves the square system whose rows
are the divergence rows of the corrected field plus one Neumann row for the
wall trace; a mirror ghost node below the wall makes the count square.
Variable-density projection wraps the constant-coefficient solve in a fixed
point with an exact final polish.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu


class ExactProjector:
    """Per-mode exact discrete Leray projector on a GridSpec.

    All nonzero modes are stacked into one block-diagonal system factorized
    once, so a projection costs two FFTs plus two triangular solves.
    """

    def __init__(self, grid):
        self.grid = grid
        ny = grid.ny
        y1 = grid.y[1]
        h_top = grid.y[-1] - grid.y[-2]
        # gradient map Gm: [phi_ghost, phi_0.., phi_top_ghost] -> dphi/dy on
        # nodes; wall and lid rows are centered across mirror ghosts.  The
        # zero-flux lid row keeps the exponentially growing homogeneous mode
        # of (d2/dy2 - k^2) out of the correction potential.
        Gm = np.zeros((ny, ny + 2))
        Gm[0, 0] = -0.5 / y1
        Gm[0, 2] = 0.5 / y1
        Gm[1:, 1:-1] = grid.D1[1:, :]
        Gm[-1, :] = 0.0
        Gm[-1, -3] = -0.5 / h_top
        Gm[-1, -1] = 0.5 / h_top
        self.Gm = Gm
        P = np.zeros((ny, ny + 2))
        P[:, 1:-1] = np.eye(ny)
        div_rows = grid.D1 @ Gm
        self._mode_idx = [i for i, k in enumerate(grid.spec.keff) if k != 0.0]
        blocks = [
            sp.csc_matrix(
                np.vstack(
                    [Gm[0:1, :], div_rows - (grid.spec.keff[i] ** 2) * P, Gm[-1:, :]]
                )
            )
            for i in self._mode_idx
        ]
        self._lu = splu(sp.block_diag(blocks, format="csc")) if blocks else None
        self._nblk = len(blocks)

    def project_modes(self, uh, vh, bh, sweeps=2):
        """Mode-space projection; mutates and returns (uh, vh, phih)."""
        grid = self.grid
        ny = grid.ny
        k = grid.spec.keff
        idx = self._mode_idx
        kv = k[idx][:, None]

        # modes without an x-derivative (mean, one-sided Nyquist): the only
        # divergence-free normal velocity is a y-constant
        phih = np.zeros_like(uh)
        for i, kk in enumerate(k):
            if kk == 0.0:
                phih[i] = grid.integral_from_wall(vh[i] - bh[i])
                vh[i] = bh[i] * np.ones(ny)

        for _ in range(sweeps):  # extra sweeps = iterative refinement
            div = (1j * kv) * uh[idx] + vh[idx] @ grid.D1.T
            rhs = np.empty((self._nblk, ny + 2), dtype=complex)
            rhs[:, 0] = vh[idx, 0] - bh[idx]
            rhs[:, 1:-1] = div
            rhs[:, -1] = 0.0
            flat = rhs.ravel()
            xi = (self._lu.solve(flat.real) + 1j * self._lu.solve(flat.imag)).reshape(
                self._nblk, ny + 2
            )
            uh[idx] -= 1j * kv * xi[:, 1:-1]
            vh[idx] -= xi @ self.Gm.T
            phih[idx] += xi[:, 1:-1]
        return uh, vh, phih

    def project(self, u, v, bc_normal, sweeps=2):
        """Return (u', v', phi): exact discrete div, v'(y=0) = bc_normal.

        phi is the correction potential (u' = u - dx phi, v' = v - dy phi
        with the ghost-aware wall row); its x-mean part is the anchored
        integral of the removed mean normal velocity.
        """
        grid = self.grid
        uh = np.fft.rfft(u, axis=0)
        vh = np.fft.rfft(v, axis=0)
        bh = np.fft.rfft(np.broadcast_to(bc_normal, (grid.nx,)).astype(float), axis=0)
        uh, vh, phih = self.project_modes(uh, vh, bh, sweeps=sweeps)
        u2 = np.fft.irfft(uh, n=grid.nx, axis=0)
        v2 = np.fft.irfft(vh, n=grid.nx, axis=0)
        phi = np.fft.irfft(phih, n=grid.nx, axis=0)
        return u2, v2, phi


_PROJ_CACHE = {}


def _projector_for(grid):
    proj = _PROJ_CACHE.get(id(grid))
    if proj is None or proj.grid is not grid:
        proj = ExactProjector(grid)
        _PROJ_CACHE[id(grid)] = proj
    return proj


def divergence(grid, u, v):
    return grid.dx(u) + grid.dy(v)


def leray_project(grid, u, v, bc_normal=0.0):
    """Constant-density Leray projection with exact discrete divergence."""
    proj = _projector_for(grid)
    bc = np.broadcast_to(np.asarray(bc_normal, dtype=float), (grid.nx,))
    return proj.project(np.asarray(u, float), np.asarray(v, float), bc)


def project_variable_density(grid, u, v, rho, bc_normal=0.0, tol=1e-12, maxit=60, p0=None):
    """Remove the gradient-over-rho part of (u, v).

    Fixed point: each pass applies the exact constant-coefficient projector,
    then rescales the applied correction by theta/theta_ref with theta=1/rho.
    The final pass is an exact projection, so the returned divergence is at
    rounding level and the wall trace exact.  Returns (u', v', p) with the
    accumulated pressure-like potential p (correction ~ theta * grad p);
    p0 warm-starts the iteration (e.g. with the previous step's potential).
    """
    theta = 1.0 / np.asarray(rho, dtype=float)
    theta_ref = float(theta.mean())
    rel = theta / theta_ref
    proj = _projector_for(grid)
    bc = np.broadcast_to(np.asarray(bc_normal, dtype=float), (grid.nx,))

    ucur = np.asarray(u, float).copy()
    vcur = np.asarray(v, float).copy()
    p = np.zeros_like(ucur)
    if p0 is not None:
        gx, gy = grid.dx(p0), grid.dy(p0)
        ucur -= theta * gx
        vcur -= theta * gy
        p += np.asarray(p0, float)
    scale = max(np.max(np.abs(ucur)), np.max(np.abs(vcur)), 1e-30)
    for _ in range(maxit):
        u1, v1, dphi = proj.project(ucur, vcur, bc, sweeps=1)
        p += dphi / theta_ref
        du = rel * (ucur - u1)
        dv = rel * (vcur - v1)
        ucur -= du
        vcur -= dv
        # the applied increment bounds the remaining defect (contraction)
        if max(np.max(np.abs(du)), np.max(np.abs(dv))) <= tol * scale:
            break
    u2, v2, _ = proj.project(ucur, vcur, bc)
    return u2, v2, p


def clean_magnetic(grid, h, g, bc_g0=0.0):
    """Divergence cleaning for (h, g): exact projector, g is the normal part."""
    return leray_project(grid, h, g, bc_normal=bc_g0)


class CachedNeumannPoisson:
    """Factorized Laplace solve: dp/dy = flux at the wall, Dirichlet lid for
    nonzero modes, pinned-and-gauged double-Neumann mean mode."""

    def __init__(self, grid):
        self.grid = grid
        ny = grid.ny
        blocks = []
        self._mode_idx = []
        for i, kk in enumerate(grid.spec.keff):
            A = grid.D2 - (kk**2) * np.eye(ny)
            A[0, :] = grid.D1[0, :]
            if kk == 0.0:
                A[-1, :] = grid.D1[-1, :]
                A[ny // 2, :] = 0.0
                A[ny // 2, ny // 2] = 1.0
                self._mean = np.linalg.inv(A)
                self._mean_idx = i
            else:
                A[-1, :] = 0.0
                A[-1, -1] = 1.0
                blocks.append(sp.csc_matrix(A))
                self._mode_idx.append(i)
        self._lu = splu(sp.block_diag(blocks, format="csc")) if blocks else None

    def solve(self, rhs, flux0):
        """rhs (nx, ny) and wall flux (nx,); returns zero-mean p."""
        grid = self.grid
        ny = grid.ny
        rh = np.fft.rfft(np.asarray(rhs, float), axis=0)
        fh = np.fft.rfft(np.broadcast_to(flux0, (grid.nx,)).astype(float), axis=0)
        ph = np.zeros_like(rh)

        idx = self._mode_idx
        b = rh[idx].copy()
        b[:, 0] = fh[idx]
        b[:, -1] = 0.0
        flat = b.ravel()
        ph[idx] = (self._lu.solve(flat.real) + 1j * self._lu.solve(flat.imag)).reshape(
            len(idx), ny
        )

        i0 = self._mean_idx
        w = grid.wq
        defect = float(w @ np.real(rh[i0]) / grid.nx + np.real(fh[i0]) / grid.nx)
        b0 = np.real(rh[i0]).copy()
        b0[1:] -= (defect / grid.y_max) * grid.nx
        b0[0] = np.real(fh[i0])
        b0[-1] = 0.0
        b0[ny // 2] = 0.0
        ph[i0] = self._mean @ b0

        p = np.fft.irfft(ph, n=grid.nx, axis=0)
        dxw = 2.0 * np.pi / grid.nx
        area = dxw * grid.nx * np.sum(grid.wq)
        p -= np.sum(p * grid.wq[None, :]) * dxw / area
        return p


_POISSON_CACHE = {}


def _poisson_for(grid):
    slv = _POISSON_CACHE.get(id(grid))
    if slv is None or slv.grid is not grid:
        slv = CachedNeumannPoisson(grid)
        _POISSON_CACHE[id(grid)] = slv
    return slv


def pressure_poisson_variable(grid, Fx, Fy, rho, flux0=0.0, tol=1e-9, maxit=60, p0=None):
    """Solve div(grad(p)/rho) = div(Fx, Fy) with dp/dy(y=0) = flux0.

    Fixed point preconditioned by the cached constant-coefficient solve; the
    Neumann row re-pins the wall flux exactly on every pass.  p0 warm-starts
    the iteration.  Returns p with zero mean.
    """
    theta = 1.0 / np.asarray(rho, dtype=float)
    theta_ref = float(theta.mean())
    slv = _poisson_for(grid)
    div_f = divergence(grid, Fx, Fy)
    target = np.broadcast_to(np.asarray(flux0, float), (grid.nx,)).astype(float)
    scale = max(float(np.max(np.abs(div_f))), float(np.max(np.abs(target))), 1e-30)
    p = np.zeros_like(div_f) if p0 is None else np.asarray(p0, float).copy()
    for _ in range(maxit):
        gx, gy = grid.dx(p), grid.dy(p)
        res = div_f - divergence(grid, theta * gx, theta * gy)
        rf = target - grid.trace(p, 1)
        dp = slv.solve(res / theta_ref, rf)
        p = p + dp
        # the solver projects away any incompatible mean-mode part of res,
        # so convergence is judged on the applied increment
        if np.max(np.abs(dp)) <= tol * max(scale, float(np.max(np.abs(p)))):
            break
    return p


def neumann_poisson(grid, rhs, flux0):
    """Solve Laplace(p) = rhs with dp/dy = flux0 at the wall.

    Nonzero x-modes decay and take a homogeneous Dirichlet lid at y_max; the
    x-mean mode is a double-Neumann problem whose compatibility defect is
    removed by a constant shift of the right-hand side (reported in info).
    The result is gauge-fixed to zero mean.  Returns (p, info).
    """
    rhs = grid.match(np.asarray(rhs, float))
    flux = np.broadcast_to(np.asarray(flux0, dtype=float), (grid.nx,))
    rh = np.fft.rfft(rhs, axis=0)
    fh = np.fft.rfft(flux.astype(float), axis=0)
    k = grid.spec.k
    ny = grid.ny
    ph = np.zeros_like(rh)

    info = {"compat_defect": 0.0}
    for i, kk in enumerate(k):
        A = grid.D2 - (kk**2) * np.eye(ny)
        b = rh[i].copy()
        A[0, :] = grid.D1[0, :]
        b[0] = fh[i]
        if kk == 0.0:
            # with a zero-flux lid, solvability needs int rhs_mean = -flux0_mean
            w = grid.wq
            defect = float(w @ np.real(rh[i]) / grid.nx + np.real(fh[i]) / grid.nx)
            info["compat_defect"] = defect
            shift = defect / grid.y_max
            b[1:] = rh[i][1:] - shift * grid.nx
            A[-1, :] = grid.D1[-1, :]
            b[-1] = 0.0
            A[ny // 2, :] = 0.0
            A[ny // 2, ny // 2] = 1.0
            b[ny // 2] = 0.0
        else:
            A[-1, :] = 0.0
            A[-1, -1] = 1.0
            b[-1] = 0.0
        ph[i] = np.linalg.solve(A, b)

    p = np.fft.irfft(ph, n=grid.nx, axis=0)
    dxw = 2.0 * np.pi / grid.nx
    area = dxw * grid.nx * np.sum(grid.wq)
    p -= np.sum(p * grid.wq[None, :]) * dxw / area
    return p, info
