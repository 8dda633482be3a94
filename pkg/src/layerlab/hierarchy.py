"""Lockstep integrator for the full expansion hierarchy.

Within one time step the subsystems advance in dependency order: outer order
0, leading layer, outer order 1 (wall data from the layer recoveries), first
layer, outer order 2 (with its explicit sources), second layer.  Each stage
consumes only states already advanced this round, so a single sweep marches
everything from t to t + dt.  The hierarchy is independent of the viscosity
scale; one run serves an entire sweep.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import EtaGrid, GridSpec
from .layers import (
    BLProfile,
    LayerLinear,
    LayerZero,
    insert_normal_dt_symbols,
    pressure_p1,
    profile_arrays,
    recover_normal,
    source_f1,
    source_f2,
    source_f3,
    source_f6,
    source_f7,
    source_f8,
    taylor_symbols,
)
from .outer import OuterIdeal, OuterLinearized, OuterState, compute_sources_2, trace_set
from .timestep import ramped_steps


@dataclass
class HierarchyParams:
    mu: float = 1.0
    kappa: float = 1.0
    sigma: float = 0.5
    dt: float = 2e-3
    t_end: float = 0.25
    neta: int = 1000
    eta_max: float = 40.0


@dataclass
class HBundle:
    """Deep snapshot of everything the assembler consumes at one time."""

    t: float
    outer: tuple
    outer_rhs: tuple
    bl: tuple
    bl_rhs: tuple
    traces: tuple
    lay: dict
    sym: dict       # symbol table on the eta grid
    accel0: tuple


class Hierarchy:
    """Owns all six solvers and their coupling data."""

    def __init__(self, grid: GridSpec, params: HierarchyParams, init: dict, dealias=True):
        self.grid = grid
        self.pr = params
        self.eta = EtaGrid(grid.nx, params.neta, params.eta_max)
        self.out0 = OuterIdeal(grid, dealias)
        self.out1 = OuterLinearized(grid, 1, dealias)
        self.out2 = OuterLinearized(grid, 2, dealias)
        self.lay0 = LayerZero(self.eta, params.mu, params.kappa, params.sigma)
        self.lay1 = LayerLinear(self.eta, 1, params.mu, params.kappa)
        self.lay2 = LayerLinear(self.eta, 2, params.mu, params.kappa)

        z = grid.zeros()
        self.s0 = OuterState(0, init["rho"], init["u"], init["v"], init["h"], init["g"], z.copy())
        self.s0.p = self.out0.solve_pressure(self.s0)
        self.s1 = OuterState(1, *(z.copy() for _ in range(6)))
        self.s2 = OuterState(2, *(z.copy() for _ in range(6)))
        ze = self.eta.zeros()
        self.b0 = BLProfile(0, ze.copy(), ze.copy(), ze.copy())
        self.b1 = BLProfile(1, ze.copy(), ze.copy(), ze.copy())
        self.b2 = BLProfile(2, ze.copy(), ze.copy(), ze.copy())
        self.t = 0.0
        self._refresh_caches()

    # -- cached coupling data at the current time ---------------------------
    def _layer_wall_data(self, rhs0=None, rhs1=None):
        g = self.eta
        vb0 = recover_normal(g, self.b0.u_b, "tail")[:, 0]
        gb0 = recover_normal(g, self.b0.h_b, "tail")[:, 0]
        vb1 = recover_normal(g, self.b1.u_b, "tail")[:, 0]
        gb1 = recover_normal(g, self.b1.h_b, "tail")[:, 0]
        lay = dict(vb0=vb0, gb0=gb0, vb1=vb1, gb1=gb1)
        if rhs0 is not None:
            lay["dt_vb0"] = recover_normal(g, rhs0[1], "tail")[:, 0]
            lay["dt_gb0"] = recover_normal(g, rhs0[2], "tail")[:, 0]
        if rhs1 is not None:
            lay["dt_vb1"] = recover_normal(g, rhs1[1], "tail")[:, 0]
            lay["dt_gb1"] = recover_normal(g, rhs1[2], "tail")[:, 0]
        return lay

    def _refresh_caches(self):
        # the cached chain is evaluated raw (no dealias filter) so that the
        # ledger identities close on plain pointwise products
        gr = self.grid
        r0 = self.out0.rhs(self.s0, raw=True)
        self.tr0 = trace_set(gr, self.s0, r0)
        self.accel0 = self.out0.accel(self.s0, raw=True)
        rhs1 = self.out1.rhs(self.s1, self.s0, self.accel0, raw=True)
        self.tr1 = trace_set(gr, self.s1, rhs1)
        self.src2 = compute_sources_2(gr, self.s0, self.s1, rhs1, self.pr.mu, self.pr.kappa, dealias=False)
        rhs2 = self.out2.rhs(self.s2, self.s0, self.accel0, *self.src2, raw=True)
        self.tr2 = trace_set(gr, self.s2, rhs2)
        self.rhs_outer = (r0, rhs1, rhs2)

        lay = self._layer_wall_data()
        sym = taylor_symbols(self.eta.spec, self.eta.eta, self.tr0, self.tr1, self.tr2, lay)
        b0rhs = self.lay0.rhs(self.b0, sym, self.tr0)
        self.P0 = profile_arrays(self.eta, self.b0, "0", b0rhs)
        self.f123 = (
            source_f1(sym, self.P0),
            source_f2(sym, self.P0),
            source_f3(sym, self.P0),
        )
        b1rhs = self.lay1.rhs(self.b1, self.P0, sym, self.tr0, self.f123)
        # layer time derivatives feed the dt entries of the normal families
        lay["dt_vb0"] = recover_normal(self.eta, b0rhs[1], "tail")[:, 0]
        lay["dt_gb0"] = recover_normal(self.eta, b0rhs[2], "tail")[:, 0]
        lay["dt_vb1"] = recover_normal(self.eta, b1rhs[1], "tail")[:, 0]
        lay["dt_gb1"] = recover_normal(self.eta, b1rhs[2], "tail")[:, 0]
        insert_normal_dt_symbols(sym, self.eta.eta, self.tr0, self.tr1, self.tr2, lay)
        self.lay = lay
        self.sym = sym
        self.P1 = profile_arrays(self.eta, self.b1, "1", b1rhs)
        PP = dict(self.P0)
        PP.update(self.P1)
        # the first fast-order pressure feeds the second-order momentum
        self.pb1 = pressure_p1(self.eta, sym, self.P0, self.pr.mu)
        self.f678 = (
            source_f6(sym, PP),
            source_f7(sym, PP, self.pr.mu) + self.eta.dx(self.pb1),
            source_f8(sym, PP, self.pr.kappa),
        )
        b2rhs = self.lay2.rhs(self.b2, self.P0, sym, self.tr0, self.f678)
        self.P2 = profile_arrays(self.eta, self.b2, "2", b2rhs)
        self.rhs_bl = (b0rhs, b1rhs, b2rhs)

    # -- stepping ------------------------------------------------------------
    def step(self, dt):
        gr = self.grid
        # stash time-t coupling data
        tr0_a, tr1_a, tr2_a = self.tr0, self.tr1, self.tr2
        sym_a = self.sym
        P0_a, P1_a = self.P0, self.P1
        accel_a = self.accel0
        src2_a = self.src2
        rhs1_a = self.rhs_outer[1]
        f123_a = self.f123
        f678_a = self.f678

        # outer order 0
        s0_new = self.out0.step(self.s0, dt)
        r0_new = self.out0.rhs(s0_new)
        tr0_b = trace_set(gr, s0_new, r0_new)
        accel_b = self.out0.accel(s0_new)

        # leading layer
        b0_new = self.lay0.step(self.b0, dt, (sym_a, None), (tr0_a, tr0_b))
        vb0_b = recover_normal(self.eta, b0_new.u_b, "tail")[:, 0]
        gb0_b = recover_normal(self.eta, b0_new.h_b, "tail")[:, 0]
        lay_b = dict(vb0=vb0_b, gb0=gb0_b, vb1=self.lay["vb1"], gb1=self.lay["gb1"])
        sym_b0 = taylor_symbols(self.eta.spec, self.eta.eta, tr0_b, lay=lay_b)
        b0rhs_new = self.lay0.rhs(b0_new, sym_b0, tr0_b)
        dt_vb0_b = recover_normal(self.eta, b0rhs_new[1], "tail")[:, 0]

        # outer order 1
        s1_new = self.out1.step(
            self.s1,
            dt,
            (self.s0, s0_new),
            (accel_a, accel_b),
            ((-self.lay["vb0"], -self.lay["gb0"]), (-vb0_b, -gb0_b)),
            dbc_v_dt=-dt_vb0_b,
        )
        rhs1_b = self.out1.rhs(s1_new, s0_new, accel_b)
        tr1_b = trace_set(gr, s1_new, rhs1_b)

        # first layer
        P0_b = profile_arrays(self.eta, b0_new, "0", b0rhs_new)
        b1_new = self.lay1.step(
            self.b1,
            dt,
            (P0_a, P0_b),
            (sym_a, None),
            (tr0_a, tr0_b),
            (f123_a, None),
            (-tr1_b["u"][0], -tr0_b["h"][1]),
        )
        vb1_b = recover_normal(self.eta, b1_new.u_b, "tail")[:, 0]
        gb1_b = recover_normal(self.eta, b1_new.h_b, "tail")[:, 0]

        # outer order 2
        src2_b_partial = None  # sources at t+dt need s1_new; compute now
        src2_b_partial = compute_sources_2(gr, s0_new, s1_new, rhs1_b, self.pr.mu, self.pr.kappa)
        s2_new = self.out2.step(
            self.s2,
            dt,
            (self.s0, s0_new),
            (accel_a, accel_b),
            ((-self.lay["vb1"], -self.lay["gb1"]), (-vb1_b, -gb1_b)),
            src_pair=(src2_a, src2_b_partial),
            dbc_v_dt=None,
        )
        rhs2_b = self.out2.rhs(s2_new, s0_new, accel_b, *src2_b_partial)
        tr2_b = trace_set(gr, s2_new, rhs2_b)

        # second layer
        b2_new = self.lay2.step(
            self.b2,
            dt,
            (P0_a, P0_b),
            (sym_a, None),
            (tr0_a, tr0_b),
            (f678_a, None),
            (-tr2_b["u"][0], -tr1_b["h"][1]),
        )

        self.s0, self.s1, self.s2 = s0_new, s1_new, s2_new
        self.b0, self.b1, self.b2 = b0_new, b1_new, b2_new
        self.t += dt
        self._refresh_caches()

    def run(self, t_end, callback=None, ramp=True):
        n = int(round(t_end / self.pr.dt))
        if abs(n * self.pr.dt - t_end) > 1e-12:
            raise ValueError("t_end must be an integer multiple of dt")
        steps = ramped_steps(self.pr.dt, n) if ramp else np.full(n, self.pr.dt)
        if callback is not None:
            callback(self)
        for dt in steps:
            self.step(float(dt))
            if callback is not None:
                callback(self)

    # -- snapshots ------------------------------------------------------------
    def bundle(self) -> HBundle:
        return HBundle(
            t=self.t,
            outer=(self.s0.copy(), self.s1.copy(), self.s2.copy()),
            outer_rhs=tuple(tuple(a.copy() for a in r) for r in self.rhs_outer),
            bl=(self.b0.copy(), self.b1.copy(), self.b2.copy()),
            bl_rhs=tuple(tuple(a.copy() for a in r) for r in self.rhs_bl),
            traces=tuple(
                {k: [a.copy() for a in v] for k, v in tr.items()}
                for tr in (self.tr0, self.tr1, self.tr2)
            ),
            lay={k: v.copy() for k, v in self.lay.items()},
            sym={k: v.copy() for k, v in self.sym.items()},
            accel0=tuple(a.copy() for a in self.accel0),
        )
