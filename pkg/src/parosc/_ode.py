"""Two-sided dense ODE solutions and piecewise-Chebyshev antiderivatives."""

import numpy as np
from scipy.integrate import solve_ivp

from .errors import AccuracyError, DomainError


class TwoSidedSolution:
    """Dense solution of ``y' = f(t, y)`` on ``span``, anchored at ``t0``.

    Integrates forward and backward from ``t0`` with DOP853 and evaluates
    the appropriate branch. Calling with times outside ``span`` raises
    :class:`DomainError`.
    """

    def __init__(self, fun, t0, y0, span, rtol=1e-10, atol=1e-12):
        lo, hi = float(span[0]), float(span[1])
        if not lo <= t0 <= hi:
            raise DomainError(f"reference time {t0} outside span [{lo}, {hi}]")
        self.t0 = float(t0)
        self.span = (lo, hi)
        self.y0 = np.asarray(y0, dtype=float)
        self._fwd = self._solve(fun, hi, rtol, atol) if hi > t0 else None
        self._bwd = self._solve(fun, lo, rtol, atol) if lo < t0 else None

    def _solve(self, fun, t_end, rtol, atol):
        sol = solve_ivp(
            fun, (self.t0, t_end), self.y0, method="DOP853",
            dense_output=True, rtol=rtol, atol=atol,
        )
        if not sol.success:
            raise AccuracyError(f"integration to t={t_end} failed: {sol.message}")
        return sol.sol

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        flat = np.atleast_1d(t).ravel()
        lo, hi = self.span
        slack = 1e-12 * max(1.0, abs(lo), abs(hi))
        if flat.size and (flat.min() < lo - slack or flat.max() > hi + slack):
            raise DomainError(
                f"time outside integration span [{lo}, {hi}]: "
                f"[{flat.min()}, {flat.max()}]"
            )
        out = np.empty((self.y0.size, flat.size))
        ahead = flat >= self.t0
        if ahead.any():
            out[:, ahead] = self._fwd(flat[ahead]) if self._fwd else self.y0[:, None]
        if (~ahead).any():
            out[:, ~ahead] = self._bwd(flat[~ahead]) if self._bwd else self.y0[:, None]
        return out.reshape((self.y0.size,) + t.shape)


_STENCILS = {
    2: (np.array([1.0]), 2.0),
    4: (np.array([8.0, -1.0]), 12.0),
    6: (np.array([45.0, -9.0, 1.0]), 60.0),
}


def central_difference(fun, t, h, order=6):
    """Central finite-difference derivative of ``fun`` at ``t``."""
    weights, denom = _STENCILS[order]
    t = np.asarray(t, dtype=float)
    acc = 0.0
    for j, wj in enumerate(weights, start=1):
        acc = acc + wj * (fun(t + j * h) - fun(t - j * h))
    return acc / (denom * h)


def _chebyshev_basis(n):
    k = np.arange(n)
    nodes = np.cos(np.pi * (k + 0.5) / n)
    # c_j = (2/n) sum_k f(x_k) T_j(x_k), with c_0 halved
    basis = np.cos(np.outer(np.pi * (k + 0.5) / n, k)) * (2.0 / n)
    basis[:, 0] *= 0.5
    return nodes, basis


def _clenshaw(coef, x):
    # coef (..., npts, deg), x (npts,)
    b1 = np.zeros(coef.shape[:-1])
    b2 = np.zeros_like(b1)
    for j in range(coef.shape[-1] - 1, 0, -1):
        b1, b2 = 2 * x * b1 - b2 + coef[..., j], b1
    return x * b1 - b2 + coef[..., 0]


class PanelIntegral:
    """Antiderivative ``t -> int_{t_ref}^t f`` by adaptive Chebyshev panels.

    ``f`` must be vectorized and return shape ``(n,)`` or ``(k, n)`` for
    ``n`` times. Panels are bisected until the trailing Chebyshev
    coefficients fall below ``tol`` times the largest ``|f|``; each panel's
    interpolant is then integrated exactly. :meth:`rate` evaluates the
    interpolant of ``f`` itself.
    """

    def __init__(self, f, t_ref, span, degree=32, tol=1e-14, width=0.5,
                 max_panels=50_000):
        lo, hi = float(span[0]), float(span[1])
        if not (np.isfinite([lo, hi]).all() and lo <= t_ref <= hi and lo < hi):
            raise DomainError(f"bad span [{lo}, {hi}] for reference time {t_ref}")
        self.span = (lo, hi)
        self.t_ref = float(t_ref)
        nodes, basis = _chebyshev_basis(degree)
        edges = np.linspace(lo, hi, int(np.ceil((hi - lo) / width)) + 1)
        left, right = edges[:-1], edges[1:]
        done_l, done_r, done_c = [], [], []
        scale = 0.0
        while left.size:
            if left.size + sum(map(len, done_l)) > max_panels:
                raise AccuracyError("panel quadrature did not resolve the integrand")
            mid, half = 0.5 * (left + right), 0.5 * (right - left)
            vals = np.asarray(f(mid[:, None] + half[:, None] * nodes), dtype=float)
            scalar = vals.ndim == 2
            vals = vals[None] if scalar else vals
            if not np.isfinite(vals).all():
                raise DomainError("integrand is not finite on the span")
            scale = max(scale, float(np.abs(vals).max()))
            coef = vals @ basis
            tail = np.abs(coef[..., -3:]).max(axis=(0, 2))
            ok = (tail <= tol * max(scale, 1e-300)) | (half < 1e-8 * (hi - lo))
            done_l.append(left[ok]); done_r.append(right[ok]); done_c.append(coef[:, ok])
            mid_bad = mid[~ok]
            left = np.concatenate([left[~ok], mid_bad])
            right = np.concatenate([mid_bad, right[~ok]])
        left = np.concatenate(done_l)
        order = np.argsort(left)
        self._left = left[order]
        self._right = np.concatenate(done_r)[order]
        self._coef = np.concatenate(done_c, axis=1)[:, order]
        self._scalar = scalar
        half = 0.5 * (self._right - self._left)
        anti = np.polynomial.chebyshev.chebint(self._coef, lbnd=-1.0, axis=-1)
        self._anti = anti * half[None, :, None]
        # panel totals: T_j(1) = 1, so the value at x = 1 is the coefficient sum
        totals = self._anti.sum(axis=-1)
        self._offsets = np.concatenate(
            [np.zeros((totals.shape[0], 1)), np.cumsum(totals, axis=1)[:, :-1]], axis=1
        )
        self._shift = self._eval(self._anti, np.array([self.t_ref]), self._offsets)[:, 0]

    def _locate(self, t):
        lo, hi = self.span
        slack = 1e-12 * max(1.0, abs(lo), abs(hi))
        if t.size and (t.min() < lo - slack or t.max() > hi + slack):
            raise DomainError(
                f"time outside integration span [{lo}, {hi}]: [{t.min()}, {t.max()}]"
            )
        idx = np.clip(np.searchsorted(self._left, t, side="right") - 1, 0, self._left.size - 1)
        mid = 0.5 * (self._left[idx] + self._right[idx])
        half = 0.5 * (self._right[idx] - self._left[idx])
        return idx, np.clip((t - mid) / half, -1.0, 1.0)

    def _eval(self, coef, t, offsets=None):
        idx, x = self._locate(t)
        out = _clenshaw(coef[:, idx], x)
        return out if offsets is None else out + offsets[:, idx]

    def _shape(self, out, t):
        return out[0].reshape(t.shape) if self._scalar else out.reshape((-1,) + t.shape)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = self._eval(self._anti, t.ravel(), self._offsets) - self._shift[:, None]
        return self._shape(out, t)

    def rate(self, t):
        t = np.asarray(t, dtype=float)
        return self._shape(self._eval(self._coef, t.ravel()), t)

    @property
    def n_panels(self):
        return self._left.size


def cumulative_integral(f, t_ref, span, tol=1e-14):
    """Evaluator of ``t -> integral of f from t_ref to t`` on ``span``."""
    return PanelIntegral(f, t_ref, span, tol=tol)
