"""Assembly of the multi-scale approximate solution and its defect operator.

The assembled fields mix slow functions of (x, y), boundary-layer profiles of
(x, y/sqrt(eps)), and cutoff products.  Every component carries its own
value, x/y/t-derivative and Laplacian arrays on the slow grid, built with the
exact chain and product rules (profile derivatives come from the eta grid,
cutoff derivatives are analytic).  Sums of those arrays are the ledger
derivatives of the composite fields; all defect and identity work uses them,
since raw slow-grid stencils cannot see across the two scales.
"""

from __future__ import annotations

import numpy as np

from .grid import FastToSlow
from .layers import (
    insert_normal_dt_symbols,
    pressure_p1,
    pressure_p2,
    profile_arrays,
    taylor_symbols,
)

# ---------------------------------------------------------------------------
# cutoffs and the wall corrector template
# ---------------------------------------------------------------------------


def _smoothstep(t):
    """C^3 monotone step on [0, 1] (septic)."""
    t = np.clip(t, 0.0, 1.0)
    return 35 * t**4 - 84 * t**5 + 70 * t**6 - 20 * t**7


def _smoothstep_d(t, order):
    inside = (t > 0.0) & (t < 1.0)
    t = np.clip(t, 0.0, 1.0)
    if order == 1:
        v = 140 * t**3 - 420 * t**4 + 420 * t**5 - 140 * t**6
    elif order == 2:
        v = 420 * t**2 - 1680 * t**3 + 2100 * t**4 - 840 * t**5
    elif order == 3:
        v = 840 * t - 5040 * t**2 + 8400 * t**3 - 4200 * t**4
    else:
        raise ValueError(order)
    return np.where(inside, v, 0.0)


def cutoff_chi(y, order=0):
    """Wall cutoff: 1 on [0, 1], 0 on [2, inf), C^3 in between.

    order selects the derivative (0..3); all derivatives vanish outside
    (1, 2) and at the joints.
    """
    y = np.asarray(y, dtype=float)
    t = y - 1.0
    if order == 0:
        return np.where(y <= 1.0, 1.0, np.where(y >= 2.0, 0.0, 1.0 - _smoothstep(t)))
    return -_smoothstep_d(t, order)


def cutoff_zeta(y, order=0):
    """Same template as cutoff_chi (used for the ratio coefficients)."""
    return cutoff_chi(y, order)


def corrector_template(eta, order=0):
    """Decaying template with unit slope at the wall: m = eta * exp(-2 eta)."""
    eta = np.asarray(eta, dtype=float)
    e = np.exp(-2.0 * eta)
    if order == 0:
        return eta * e
    if order == 1:
        return (1.0 - 2.0 * eta) * e
    if order == 2:
        return (4.0 * eta - 4.0) * e
    raise ValueError(order)


def corrector_template_integral(eta):
    """int_0^eta of the template: (1 - (1 + 2 eta) exp(-2 eta)) / 4."""
    eta = np.asarray(eta, dtype=float)
    return 0.25 * (1.0 - (1.0 + 2.0 * eta) * np.exp(-2.0 * eta))


def phi_corrector(trace, eta):
    """Corrector field phi(x, eta) = -trace(x) * template(eta).

    Its eta-slope at the wall equals -trace, cancelling the second-order
    magnetic wall flux; it decays with all derivatives.
    """
    return -np.asarray(trace, float)[:, None] * corrector_template(eta)[None, :]


# ---------------------------------------------------------------------------
# components: (value, dx, dy, dt, lap) arrays with weights folded in
# ---------------------------------------------------------------------------

KEYS = ("val", "dx", "dy", "dt", "lap")


def _comp(val, dx, dy, dt, lap, w=1.0):
    return {"val": w * val, "dx": w * dx, "dy": w * dy, "dt": w * dt, "lap": w * lap}


def comp_sum(comps):
    return {k: sum(c[k] for c in comps) for k in KEYS}


class Assembler:
    """Builds constituent ledgers, composite fields and defect operators."""

    def __init__(self, grid, eta_grid, eps, mu, kappa):
        self.grid = grid
        self.eta = eta_grid
        self.eps = float(eps)
        self.mu = mu
        self.kappa = kappa
        self.sq = np.sqrt(self.eps)
        self.f2s = FastToSlow(eta_grid, grid, self.eps)
        self.eta_y = grid.y / self.sq
        self.chi = {k: cutoff_chi(grid.y, k)[None, :] for k in range(4)}

    # -- ledger ---------------------------------------------------------------
    def ledger(self, bundle):
        """Flat dict of every constituent on the slow grid.

        Slow fields come with dx/dy/dt/dxx/dyy entries; layer profiles are
        interpolated to eta = y/sqrt(eps) with their eta-grid derivatives;
        Taylor-coefficient symbols are evaluated directly on the slow nodes
        with the same formulas the layer solvers use.
        """
        gr, eta, I = self.grid, self.eta, self.f2s
        L = {"eps": self.eps, "mu": self.mu, "kappa": self.kappa, "t": bundle.t}

        for n, (state, rhs) in enumerate(zip(bundle.outer, bundle.outer_rhs)):
            for name, f in zip(("rho", "u", "v", "h", "g", "p"), (state.rho, state.u, state.v, state.h, state.g, state.p)):
                key = f"{name}{n}"
                L[key] = f
                L["dx_" + key] = gr.dx(f)
                L["dy_" + key] = gr.dy(f)
                L["dxx_" + key] = gr.dx(f, 2)
                L["dyy_" + key] = gr.dy(f, 2)
                L["lap_" + key] = L["dxx_" + key] + L["dyy_" + key]
            for name, df in zip(("rho", "u", "v", "h", "g"), rhs):
                L[f"dt_{name}{n}"] = df

        # layer profiles: eta-grid arrays interpolated to the slow nodes
        prefixes = ("deta2_", "deta_", "dxx_", "dx_", "dt_")
        for n, (prof, rhs) in enumerate(zip(bundle.bl, bundle.bl_rhs)):
            P = profile_arrays(eta, prof, str(n), rhs)
            for key, arr in P.items():
                for pref in prefixes:
                    if key.startswith(pref):
                        L[pref + "b_" + key[len(pref):]] = I(arr)
                        break
                else:
                    L["b_" + key] = I(arr)

        # Taylor symbols on the slow nodes (same formulas as the eta grid)
        tr0, tr1, tr2 = bundle.traces
        sym = taylor_symbols(gr.spec, self.eta_y, tr0, tr1, tr2, bundle.lay)
        insert_normal_dt_symbols(sym, self.eta_y, tr0, tr1, tr2, bundle.lay)
        L.update(sym)
        for name in ("rho", "u", "v", "h", "g"):
            L["tr_dt_" + name + "0"] = np.asarray(tr0["dt_" + name][0], float)[:, None] * np.ones(
                (1, gr.ny)
            )

        # layer pressures (tail integrals on the eta grid)
        sym_eta = bundle.sym
        P0 = profile_arrays(eta, bundle.bl[0], "0", bundle.bl_rhs[0])
        P1 = profile_arrays(eta, bundle.bl[1], "1", bundle.bl_rhs[1])
        pb1 = pressure_p1(eta, sym_eta, P0, self.mu)
        pb2 = pressure_p2(eta, sym_eta, P0, P1, self.mu)
        for name, arr, Pd in (("p_b1", pb1, P0), ("p_b2", pb2, P1)):
            L["b_" + name] = I(arr)
            L["dx_b_" + name] = I(eta.dx(arr))
            L["deta_b_" + name] = I(eta.deta(arr))

        # second-order profile integrals for the cutoff lines
        for stem in ("u_b2", "h_b2"):
            J = eta.cumint_smooth(bundle.bl[2].u_b if stem == "u_b2" else bundle.bl[2].h_b)
            L[f"J_{stem}"] = I(J)
            L[f"dx_J_{stem}"] = I(eta.dx(J))
            L[f"dxx_J_{stem}"] = I(eta.dx(eta.dx(J)))
        dtu2, dth2 = bundle.bl_rhs[2][1], bundle.bl_rhs[2][2]
        L["dt_J_u_b2"] = I(eta.cumint_smooth(dtu2))
        L["dt_J_h_b2"] = I(eta.cumint_smooth(dth2))

        # wall corrector: analytic in eta, trace-driven in (t, x)
        c = -np.asarray(tr2["h"][1], float)
        c_t = -np.asarray(tr2["dt_h"][1], float)
        ey = self.eta_y
        m0, m1, m2 = (corrector_template(ey, k)[None, :] for k in range(3))
        K = corrector_template_integral(ey)[None, :]
        cx = _dx1(gr, c)
        cxx = _dx1(gr, cx)
        L["phi"] = c[:, None] * m0
        L["dx_phi"] = cx[:, None] * m0
        L["dxx_phi"] = cxx[:, None] * m0
        L["deta_phi"] = c[:, None] * m1
        L["deta_dx_phi"] = cx[:, None] * m1
        L["deta2_phi"] = c[:, None] * m2
        L["dt_phi"] = c_t[:, None] * m0
        L["K_dx_phi"] = cx[:, None] * K          # int_0^eta dx phi
        L["dx_K_dx_phi"] = cxx[:, None] * K
        L["dxx_K_dx_phi"] = _dx1(gr, cxx)[:, None] * K
        L["dt_K_dx_phi"] = _dx1(gr, c_t)[:, None] * K

        self._tilded_entries(L)
        return L

    def _tilded_entries(self, L):
        """Cutoff-completed second-order profiles with their derivatives.

        tld = chi * profile + tail terms; 'deta' entries are sqrt(eps) times
        the full wall-normal ledger derivative, 'deta2' eps times the second
        one, so the fast-variable notation stays uniform across scales.
        """
        sq, e = self.sq, self.eps
        c0, c1, c2, c3 = (self.chi[k] for k in range(4))

        for stem, tag in (("u_b2", "u2"), ("h_b2", "h2")):
            b, bx, bxx = L[f"b_{stem}"], L[f"dx_b_{stem}"], L[f"dxx_b_{stem}"]
            bde, bde2, bdt = L[f"deta_b_{stem}"], L[f"deta2_b_{stem}"], L[f"dt_b_{stem}"]
            J, Jx, Jxx, Jt = (
                L[f"J_{stem}"],
                L[f"dx_J_{stem}"],
                L[f"dxx_J_{stem}"],
                L[f"dt_J_{stem}"],
            )
            T = {
                "": c0 * b + sq * c1 * J,
                "_dx": c0 * bx + sq * c1 * Jx,
                "_deta": c0 * bde + 2.0 * sq * c1 * b + e * c2 * J,
                "_deta2": c0 * bde2 + 3.0 * sq * c1 * bde + 3.0 * e * c2 * b + e * sq * c3 * J,
                "_dt": c0 * bdt + sq * c1 * Jt,
                "_dxx": c0 * bxx + sq * c1 * Jxx,
            }
            if stem == "h_b2":
                T[""] = T[""] + sq * L["phi"]
                T["_dx"] = T["_dx"] + sq * L["dx_phi"]
                T["_deta"] = T["_deta"] + sq * L["deta_phi"]
                T["_deta2"] = T["_deta2"] + sq * L["deta2_phi"]
                T["_dt"] = T["_dt"] + sq * L["dt_phi"]
                T["_dxx"] = T["_dxx"] + sq * L["dxx_phi"]
            for suf, arr in T.items():
                L[f"tld_{tag}{suf}"] = arr
            L[f"tld_{tag}_lap"] = T["_dxx"] + T["_deta2"] / e

        for stem, tag in (("v_b2", "v2"), ("g_b2", "g2")):
            b, bx, bxx = L[f"b_{stem}"], L[f"dx_b_{stem}"], L[f"dxx_b_{stem}"]
            bde, bde2, bdt = L[f"deta_b_{stem}"], L[f"deta2_b_{stem}"], L[f"dt_b_{stem}"]
            T = {
                "": c0 * b,
                "_dx": c0 * bx,
                "_deta": c0 * bde + sq * c1 * b,
                "_deta2": c0 * bde2 + 2.0 * sq * c1 * bde + e * c2 * b,
                "_dt": c0 * bdt,
                "_dxx": c0 * bxx,
            }
            if stem == "g_b2":
                T[""] = T[""] - sq * L["K_dx_phi"]
                T["_dx"] = T["_dx"] - sq * L["dx_K_dx_phi"]
                T["_deta"] = T["_deta"] - sq * L["dx_phi"]
                T["_deta2"] = T["_deta2"] - sq * L["deta_dx_phi"]
                T["_dt"] = T["_dt"] - sq * L["dt_K_dx_phi"]
                T["_dxx"] = T["_dxx"] - sq * L["dxx_K_dx_phi"]
            for suf, arr in T.items():
                L[f"tld_{tag}{suf}"] = arr
            L[f"tld_{tag}_lap"] = T["_dxx"] + T["_deta2"] / e

    # -- composite fields -----------------------------------------------------
    def _slow(self, L, key, w=1.0):
        return _comp(L[key], L["dx_" + key], L["dy_" + key], L["dt_" + key], L["lap_" + key], w)

    def _fast(self, L, key, w=1.0):
        e = self.eps
        return _comp(
            L["b_" + key],
            L["dx_b_" + key],
            L["deta_b_" + key] / self.sq,
            L["dt_b_" + key],
            L["dxx_b_" + key] + L["deta2_b_" + key] / e,
            w,
        )

    def _chi_fast(self, L, key, w=1.0):
        """chi(y) * profile(y/sqrt(eps)) with exact product-rule arrays."""
        c0, c1, c2 = self.chi[0], self.chi[1], self.chi[2]
        v, dx, de, de2, dxx, dt = (
            L["b_" + key],
            L["dx_b_" + key],
            L["deta_b_" + key],
            L["deta2_b_" + key],
            L["dxx_b_" + key],
            L["dt_b_" + key],
        )
        sq, e = self.sq, self.eps
        return _comp(
            c0 * v,
            c0 * dx,
            c1 * v + c0 * de / sq,
            c0 * dt,
            c0 * dxx + c2 * v + 2.0 * c1 * de / sq + c0 * de2 / e,
            w,
        )

    def _chi1_integral(self, L, stem, w):
        """chi'(y) * int_0^{y/sqrt(eps)} profile; appears at weight eps^1.5."""
        c1, c2, c3 = self.chi[1], self.chi[2], self.chi[3]
        J, Jx, Jxx, Jt = L[f"J_{stem}"], L[f"dx_J_{stem}"], L[f"dxx_J_{stem}"], L[f"dt_J_{stem}"]
        v, dv = L[f"b_{stem}"], L[f"deta_b_{stem}"]
        sq, e = self.sq, self.eps
        return _comp(
            c1 * J,
            c1 * Jx,
            c2 * J + c1 * v / sq,
            c1 * Jt,
            c1 * Jxx + c3 * J + 2.0 * c2 * v / sq + c1 * dv / e,
            w,
        )

    def _phi_comp(self, L, w):
        sq, e = self.sq, self.eps
        return _comp(
            L["phi"],
            L["dx_phi"],
            L["deta_phi"] / sq,
            L["dt_phi"],
            L["dxx_phi"] + L["deta2_phi"] / e,
            w,
        )

    def _phi_integral_comp(self, L, w):
        """-int_0^{y/sqrt(eps)} dx phi, the solenoidal partner of phi."""
        sq, e = self.sq, self.eps
        return _comp(
            -L["K_dx_phi"],
            -L["dx_K_dx_phi"],
            -L["dx_phi"] / sq,
            -L["dt_K_dx_phi"],
            -L["dxx_K_dx_phi"] - L["deta_dx_phi"] / e,
            w,
        )

    # -- assembled quintet ------------------------------------------------------
    def components(self, L):
        sq, e, e32 = self.sq, self.eps, self.eps**1.5
        rho = [
            self._slow(L, "rho0"),
            self._fast(L, "rho_b0"),
            self._slow(L, "rho1", sq),
            self._fast(L, "rho_b1", sq),
            self._slow(L, "rho2", e),
            self._fast(L, "rho_b2", e),
        ]
        u = [
            self._slow(L, "u0"),
            self._fast(L, "u_b0"),
            self._slow(L, "u1", sq),
            self._fast(L, "u_b1", sq),
            self._slow(L, "u2", e),
            self._chi_fast(L, "u_b2", e),
            self._chi1_integral(L, "u_b2", e32),
        ]
        h = [
            self._slow(L, "h0"),
            self._fast(L, "h_b0"),
            self._slow(L, "h1", sq),
            self._fast(L, "h_b1", sq),
            self._slow(L, "h2", e),
            self._chi_fast(L, "h_b2", e),
            self._chi1_integral(L, "h_b2", e32),
            self._phi_comp(L, e32),
        ]
        v = [
            self._slow(L, "v0"),
            self._fast(L, "v_b0", sq),
            self._slow(L, "v1", sq),
            self._fast(L, "v_b1", e),
            self._slow(L, "v2", e),
            self._chi_fast(L, "v_b2", e32),
        ]
        g = [
            self._slow(L, "g0"),
            self._fast(L, "g_b0", sq),
            self._slow(L, "g1", sq),
            self._fast(L, "g_b1", e),
            self._slow(L, "g2", e),
            self._chi_fast(L, "g_b2", e32),
            self._phi_integral_comp(L, e32 * sq),
        ]
        p = [
            self._slow_pressure(L, "p0"),
            self._slow_pressure(L, "p1", sq),
            self._slow_pressure(L, "p2", e),
            self._fast_pressure(L, "p_b1", e),
            self._fast_pressure(L, "p_b2", e32),
        ]
        return {"rho": rho, "u": u, "v": v, "h": h, "g": g, "p": p}

    def _slow_pressure(self, L, key, w=1.0):
        z = np.zeros_like(L[key])
        return _comp(L[key], L["dx_" + key], L["dy_" + key], z, z, w)

    def _fast_pressure(self, L, key, w):
        sq = self.sq
        return _comp(
            L["b_" + key],
            L["dx_b_" + key],
            L["deta_b_" + key] / sq,
            np.zeros_like(L["b_" + key]),
            np.zeros_like(L["b_" + key]),
            w,
        )

    def fields(self, L):
        comps = self.components(L)
        return {name: comp_sum(cl) for name, cl in comps.items()}

    # -- defect of the assembled solution in the viscous operator --------------
    def operator_defect(self, L):
        """R̂ = viscous operator applied to the assembled fields.

        All derivatives are the ledger ones; the time derivatives come from
        whatever dt entries the ledger carries (semidiscrete or finite
        difference), which is the knob between the algebraic identity check
        and the stencil-level one.
        """
        F = self.fields(L)
        mu_e = self.mu * self.eps
        ka_e = self.kappa * self.eps
        rho, u, v, h, g, p = (F[k] for k in ("rho", "u", "v", "h", "g", "p"))
        r0 = rho["dt"] + u["val"] * rho["dx"] + v["val"] * rho["dy"]
        r1 = (
            rho["val"] * (u["dt"] + u["val"] * u["dx"] + v["val"] * u["dy"])
            + p["dx"]
            - h["val"] * h["dx"]
            - g["val"] * h["dy"]
            - mu_e * u["lap"]
        )
        r2 = (
            rho["val"] * (v["dt"] + u["val"] * v["dx"] + v["val"] * v["dy"])
            + p["dy"]
            - h["val"] * g["dx"]
            - g["val"] * g["dy"]
            - mu_e * v["lap"]
        )
        r3 = (
            h["dt"]
            + u["val"] * h["dx"]
            + v["val"] * h["dy"]
            - h["val"] * u["dx"]
            - g["val"] * u["dy"]
            - ka_e * h["lap"]
        )
        r4 = (
            g["dt"]
            + u["val"] * g["dx"]
            + v["val"] * g["dy"]
            - h["val"] * v["dx"]
            - g["val"] * v["dy"]
            - ka_e * g["lap"]
        )
        return r0, r1, r2, r3, r4


def _dx1(grid, trace):
    return grid.spec.dx(trace[:, None])[:, 0]
