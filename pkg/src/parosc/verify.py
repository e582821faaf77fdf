"""Invariant suite run by ``parosc verify``.

Each group returns :class:`~parosc.operators.CheckReport` objects; a
scenario passes when every report does. Tolerances default to the values
the closed forms are expected to meet at 2048 grid points and may be
overridden globally.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq

from ._ode import central_difference
from .classical import tanh_step_solution
from .ermakov import a_factor, reconstruct_potential
from .grid import Grid
from .operators import (
    CheckReport,
    build_operator,
    commutator_check,
    eigen_residuals,
    factorization_check,
    hermiticity_check,
    quadrature_reconstruction,
)
from .states import (
    analytic_moments,
    basis,
    coherent_series,
    coherent_wavepacket,
    eigenstate,
    gram_matrix,
    moments,
    poisson_weights,
    varphi,
)
from .tdse import PropagatorConfig, l2_distance, pde_residual, propagate


def thread_count():
    """Worker threads allowed by ``PAROSC_THREADS`` (default: CPU count)."""
    raw = os.environ.get("PAROSC_THREADS", "")
    try:
        n = int(raw) if raw else (os.cpu_count() or 1)
    except ValueError:
        n = 1
    return max(1, n)


def parallel_map(fun, items):
    """Order-preserving map over at most ``thread_count()`` threads."""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1:
        return [fun(i) for i in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fun, items))


@dataclass
class Context:
    scenario: object
    data: object

    @cached_property
    def grid(self):
        return self.scenario.state_grid(self.data, n_max=max(self.scenario.grid.n_max, self.scenario.verify.n_basis))

    @cached_property
    def coherent_grid(self):
        sc = self.scenario
        return sc.state_grid(self.data, n_max=sc.grid.n_max, shift=sc.coherent_shift(self.data))

    @property
    def consts(self):
        return self.data.consts

    def times(self, count=None):
        return self.scenario.check_times(count)

    def span_times(self, n=801):
        lo, hi = self.data.span
        return np.linspace(lo, hi, n)


def _report(name, t, value, tol):
    return CheckReport(name, float(t), float(value), float(tol))


# -- classical-dynamics -----------------------------------------------------

def check_classical(ctx):
    pair, data = ctx.data.pair, ctx.data
    t = ctx.span_times()
    tol = 1e-9 if pair.analytic else 1e-6
    out = [_report("classical.wronskian", np.nan, pair.wronskian_drift(t), tol)]
    om2 = data.profile.omega_sq(t)
    # q'' from a central difference of the exact q', against -Omega^2 q
    inner = t[3:-3]
    for i, name in ((0, "q1"), (2, "q2")):
        ddq = central_difference(lambda u: pair(u)[i + 1], inner, 1e-3)
        q = pair(inner)[i]
        res = np.abs(ddq + om2[3:-3] * q) / np.maximum(1.0, np.abs(om2[3:-3] * q))
        out.append(_report(f"classical.equation_{name}", np.nan, res.max(), 1e-6))
    if data.profile.kind == "tanh_step":
        q, dq = tanh_step_solution(data.profile, t)
        _, gp, _ = data.profile.tanh_constants()
        expect = -2j * data.profile.k * gp
        wr = q * np.conj(dq) - dq * np.conj(q)
        out.append(_report("classical.complex_wronskian", np.nan, np.abs(wr - expect).max() / abs(expect), 1e-8))
        out.append(_report("classical.w0=k*g+", np.nan, abs(pair.w0 - data.profile.k * gp) / abs(pair.w0), 1e-12))
    if not data.force.is_zero or not data.gamma.is_zero:
        g, _ = data.gamma(inner)
        ddg = central_difference(lambda u: data.gamma(u)[1], inner, 1e-3)
        target = data.force(inner) / data.consts.m
        scale = max(1.0, float(np.abs(target).max()))
        res = np.abs(ddg + om2[3:-3] * g - target).max() / scale
        out.append(_report("classical.trajectory_equation", np.nan, res, 1e-6))
    return out


# -- ermakov-transform ------------------------------------------------------

def check_ermakov(ctx):
    data = ctx.data
    t = ctx.span_times()
    inner = t[3:-3]
    s, _ = data.sigma(t)
    tau = data.tau(t)
    out = [
        _report("ermakov.discriminant", np.nan, data.params.discriminant_error(), 1e-12),
        _report("ermakov.residual", np.nan, data.sigma.ermakov_residual(t).max(), 1e-6),
        _report("ermakov.sigma_positive", np.nan, float(s.min() <= 0), 0.0),
        _report("ermakov.tau_monotone", np.nan, float(np.sum(np.diff(tau) <= 0)), 0.0),
    ]
    rate = central_difference(data.tau, inner, 1e-3)
    out.append(_report("ermakov.dtau_dt*sigma^2", np.nan, np.abs(rate * data.sigma(inner)[0] ** 2 - 1).max(), 1e-8))
    if data.params.c > 0:
        dense = np.linspace(t[0], t[-1], 20001)
        diff = data.tau.closed_form(dense) - data.tau(dense)
        out.append(_report("ermakov.tau_closed_form", np.nan, np.ptp(diff), 1e-7))
    x = np.linspace(-5, 5, 41)
    worst = 0.0
    for tk in ctx.times():
        v = reconstruct_potential(x, tk, data)
        target = 0.5 * data.consts.m * data.profile.omega_sq(tk) * x * x + data.force(tk) * x
        worst = max(worst, float((np.abs(v - target) / (1 + np.abs(target))).max()))
    out.append(_report("ermakov.potential", np.nan, worst, 1e-6))
    return out


# -- hilbert-states ---------------------------------------------------------

def check_states(ctx):
    data, grid = ctx.data, ctx.grid
    n_gram = ctx.scenario.verify.n_gram

    def at(tk):
        B = basis(n_gram, grid, tk, data)
        G = gram_matrix(B, grid)
        out = [_report(f"states.gram(n<={n_gram})", tk, np.abs(G - np.eye(n_gram + 1)).max(), 1e-8)]
        explicit = np.stack([varphi(n, grid.x, tk, data) for n in range(min(n_gram, 8) + 1)])
        scale = np.abs(explicit).max()
        out.append(_report("states.transform_identity", tk, np.abs(explicit - B[: explicit.shape[0]]).max() / scale, 1e-10))
        # A phi_n = Phi_n(X) is real up to rounding; count its nodes
        real = (B * a_factor(grid.x, tk, data)).real
        bad = 0
        for n, row in enumerate(real):
            core = np.abs(row) > 1e-8 * np.abs(row).max()
            signs = np.sign(row[core])
            bad += int(np.count_nonzero(signs[1:] != signs[:-1]) != n)
        out.append(_report("states.node_count", tk, bad, 0.0))
        if data.gamma.is_zero:
            mirrored = np.abs(B[:, ::-1]) - np.abs(B)
            out.append(_report("states.parity", tk, np.abs(mirrored).max() / np.abs(B).max(), 1e-10))
        return out

    return [r for chunk in parallel_map(at, ctx.times()) for r in chunk]


# -- operators --------------------------------------------------------------

def check_operators(ctx):
    data, grid, v = ctx.data, ctx.grid, ctx.scenario.verify

    def at(tk):
        res = eigen_residuals(tk, data, grid, v.n_eigen)
        out = [_report(f"operators.eigen(n<={v.n_eigen})", tk, res.max(), 1e-6)]
        out += commutator_check(tk, data, grid, v.n_basis)
        out.append(factorization_check(tk, data, grid, v.n_basis))
        out += quadrature_reconstruction(tk, data, grid, v.n_basis)
        out += hermiticity_check(tk, data, grid, v.n_basis)
        return out

    return [r for chunk in parallel_map(at, ctx.times(3)) for r in chunk]


# -- coherent states --------------------------------------------------------

def _sigma_dot_zeros(data, lo, hi, n=2001):
    t = np.linspace(lo, hi, n)
    ds = data.sigma(t)[1]
    roots = []
    for i in np.flatnonzero(np.sign(ds[:-1]) * np.sign(ds[1:]) < 0):
        roots.append(brentq(lambda u: float(data.sigma(u)[1]), t[i], t[i + 1], xtol=1e-14))
    return np.array(roots)


def check_coherent(ctx):
    sc, data = ctx.scenario, ctx.data
    grid = ctx.coherent_grid
    alpha = sc.alpha
    c = data.consts
    hbar = c.hbar

    def at(tk):
        gauss = coherent_wavepacket(alpha, tk, data, grid)
        series = coherent_series(alpha, tk, sc.coherent.n_trunc, data, grid)
        n_w = min(sc.coherent.n_trunc, 30)
        B = basis(n_w, grid, tk, data)
        weights = np.abs((np.conj(B) * grid.weights) @ gauss.samples) ** 2
        am = analytic_moments(alpha, tk, data)
        gm = moments(gauss, hbar)
        low = build_operator("lower", tk, data, grid).apply(gauss.samples)
        eig = alpha * np.exp(-1j * c.w * data.tau(tk))
        ladder = np.sqrt(grid.integrate(np.abs(low - eig * gauss.samples) ** 2))
        grid_err = max(abs(getattr(gm, k) - getattr(am, k)) for k in ("mean_x", "mean_p", "var_x", "var_p", "cov_xp"))
        return [
            _report("coherent.poisson", tk, np.abs(weights - poisson_weights(alpha, n_w, c)).max(), 1e-8),
            _report("coherent.gaussian_vs_series", tk, l2_distance(gauss, series), 1e-6),
            _report("coherent.norm", tk, abs(gauss.norm() - 1), 1e-8),
            _report("coherent.robertson_analytic", tk, abs(am.robertson - hbar**2 / 4), 1e-10),
            _report("coherent.robertson_grid", tk, abs(gm.robertson - hbar**2 / 4), 1e-6),
            _report("coherent.grid_vs_analytic_moments", tk, grid_err, 1e-6),
            _report("coherent.ladder_eigen", tk, ladder, 1e-6),
        ]

    out = [r for chunk in parallel_map(at, ctx.times()) for r in chunk]
    ts = np.linspace(sc.times.t_start, sc.times.t_end, 41)[1:-1]
    mean_x = lambda u: np.array([analytic_moments(alpha, ui, data).mean_x for ui in np.atleast_1d(u)])
    dxdt = central_difference(mean_x, ts, 1e-3)
    mean_p = np.array([analytic_moments(alpha, ti, data).mean_p for ti in ts])
    out.append(_report("coherent.ehrenfest", np.nan, np.abs(mean_p - c.m * dxdt).max(), 1e-5))
    zeros = _sigma_dot_zeros(data, sc.times.t_start, sc.times.t_end)
    if zeros.size:
        heis = max(abs(analytic_moments(alpha, z, data).heisenberg - hbar**2 / 4) for z in zeros)
        out.append(_report(f"coherent.heisenberg_at_{zeros.size}_sigma_dot_zeros", np.nan, heis, 1e-6))
    return out


# -- tdse-oracle ------------------------------------------------------------

def check_tdse(ctx):
    sc, data = ctx.scenario, ctx.data
    v = sc.verify
    t0 = sc.times.t_start
    t1 = min(sc.times.t_end, t0 + v.oracle_horizon)
    grid = sc.state_grid(data, n_max=3, margin=v.oracle_margin)
    cfg = PropagatorConfig(v.oracle_dt, grid, data.profile, data.force, m=data.consts.m, hbar=data.consts.hbar)
    out = []
    for tk in ctx.times(3):
        out.append(_report("tdse.pde_residual(psi_0)", tk, pde_residual(0, tk, cfg, data), 1e-5))
    start = eigenstate(0, grid, t0, data)
    end = propagate(start, cfg, t1)
    steps = int(np.ceil((t1 - t0) / v.oracle_dt - 1e-9))
    out.append(_report("tdse.cn_vs_closed_form(psi_0)", t1, l2_distance(end, eigenstate(0, grid, t1, data)), 1e-4))
    out.append(_report("tdse.norm_drift_per_1000_steps", t1, abs(end.norm() - start.norm()) * 1000 / max(steps, 1), 1e-8))
    return out


GROUPS = {
    "classical": check_classical,
    "ermakov": check_ermakov,
    "states": check_states,
    "operators": check_operators,
    "coherent": check_coherent,
    "tdse": check_tdse,
}


def run_suite(scenario, data=None, groups=None, tol=None):
    """Run the named check groups (all by default) and return their reports.

    ``tol`` replaces every nonzero tolerance when given.
    """
    data = scenario.build() if data is None else data
    ctx = Context(scenario, data)
    reports = []
    for name in groups or GROUPS:
        reports.extend(GROUPS[name](ctx))
    if tol is not None:
        reports = [
            CheckReport(r.check, r.t, r.norm_residual, r.tolerance if r.tolerance == 0 else tol)
            for r in reports
        ]
    return reports


__all__ = ["GROUPS", "parallel_map", "run_suite", "thread_count"]
