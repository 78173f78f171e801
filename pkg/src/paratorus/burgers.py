"""Pseudospectral solver for the fractional dispersive Burgers equation

    du/dt + u du/dx + |D|^{alpha-1} du/dx = 0   on the torus,

with integrating-factor fourth-order stepping (the dispersive propagator is
applied exactly), 2/3-rule dealiasing of the quadratic flux, Galilean
normalization to zero-mean data, concentrated-bump data generation, and the
gauged transport-residual experiment.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (BadParams, BlowupDetected, CflViolation, NonZeroMean,
                     UnresolvedBump)
from .flow import FlowConfig, FlowOperator
from .grid import PeriodicGrid, SpectralFunction
from .orderfit import OrderFitReport, fit_exponent
from .spectral import smoothstep
from .symbols import (Symbol, default_cutoff, dispersion_symbol, gauge_symbol,
                      operator_matrix, transport_symbol)

BLOWUP_GUARD = 1e6


@dataclass
class SolverConfig:
    alpha: float
    n_points: int
    dt: float
    t_end: float
    dealias: bool = True
    store_stride: int = 0  # 0: keep only the initial and final state

    def __post_init__(self):
        if not 1.0 < self.alpha < 2.0:
            raise BadParams(f"alpha must lie in (1, 2), got {self.alpha}")
        if self.dt <= 0.0 or self.t_end < 0.0:
            raise BadParams("need dt > 0 and t_end >= 0")


@dataclass
class Trajectory:
    """Stored states at selected times plus per-step conserved diagnostics."""

    config: SolverConfig
    times: list[float]
    states: list[SpectralFunction]
    step_times: np.ndarray
    means: np.ndarray
    l2_norms: np.ndarray

    @property
    def final(self) -> SpectralFunction:
        return self.states[-1]

    def mean_drift(self) -> float:
        return float(np.max(np.abs(self.means - self.means[0])))

    def l2_relative_drift(self) -> float:
        ref = self.l2_norms[0]
        return float(np.max(np.abs(self.l2_norms - ref)) / ref)


def dealias_mask(grid: PeriodicGrid) -> np.ndarray:
    xi = grid.frequencies
    return (np.abs(xi) <= grid.n_points // 3).astype(float)


def solve(u0: SpectralFunction, cfg: SolverConfig) -> Trajectory:
    """Integrate the equation from u0 over [0, t_end].

    u0 must be real-valued and, when dealiasing is on, supported inside the
    2/3 band (a spectrally negligible tail is projected away; more is an
    error).  The mean mode is untouched by both flux and dispersion, so it is
    conserved exactly; L^2 is conserved up to the time-stepping error.
    """
    grid = u0.grid
    if grid.n_points != cfg.n_points:
        raise BadParams("initial state and config disagree on grid size")
    if not u0.is_real:
        raise BadParams("initial state must be real-valued")
    c = u0.coeffs.copy()
    c[0] = 0.0
    mask = dealias_mask(grid)
    if cfg.dealias:
        tail = np.linalg.norm(c * (1.0 - mask))
        total = np.linalg.norm(c)
        if total > 0 and tail > 1e-9 * total:
            raise BadParams("initial data has significant mass beyond the 2/3 band")
        c = c * mask

    xi = grid.frequencies.astype(float)
    lin = np.zeros_like(c)
    nz = xi != 0.0
    lin[nz] = -1j * xi[nz] * np.abs(xi[nz]) ** (cfg.alpha - 1.0)
    flux = -0.5j * xi  # -d/dx of (u^2/2) in coefficient space

    def nonlinear(vals: np.ndarray) -> np.ndarray:
        wh = np.fft.fftshift(np.fft.fft(vals * vals)) / grid.n_points
        if cfg.dealias:
            wh = wh * mask
        return flux * wh

    n_round = round(cfg.t_end / cfg.dt)
    if abs(n_round * cfg.dt - cfg.t_end) <= 1e-9 * max(cfg.dt, 1.0):
        steps = [cfg.dt] * n_round
    else:
        n_floor = int(cfg.t_end / cfg.dt)
        steps = [cfg.dt] * n_floor
        steps.append(cfg.t_end - n_floor * cfg.dt)

    times = [0.0]
    states = [SpectralFunction(grid, c.copy(), is_real=True)]
    step_times = [0.0]
    means = [c[grid.zero_index]]
    l2 = [np.linalg.norm(c)]

    t = 0.0
    exp_cache: dict[float, tuple] = {}
    for k, h in enumerate(steps):
        vals = grid.values_from_coeffs(c).real
        amax = float(np.max(np.abs(vals)))
        if amax > BLOWUP_GUARD:
            raise BlowupDetected(f"amplitude {amax:.3g} exceeds guard at t={t:.6g}")
        cfl_limit = 0.5 / max(amax * (grid.n_points / 3.0), 1e-300)
        if h > cfl_limit:
            raise CflViolation(
                f"dt={h:.3g} exceeds transport CFL limit {cfl_limit:.3g} at t={t:.6g}")
        if h not in exp_cache:
            exp_cache[h] = (np.exp(h * lin), np.exp(0.5 * h * lin),
                            np.exp(-h * lin), np.exp(-0.5 * h * lin))
        e1, e2, e1i, e2i = exp_cache[h]

        k1 = nonlinear(vals)
        y = e2 * (c + 0.5 * h * k1)
        k2 = e2i * nonlinear(grid.values_from_coeffs(y).real)
        y = e2 * (c + 0.5 * h * k2)
        k3 = e2i * nonlinear(grid.values_from_coeffs(y).real)
        y = e1 * (c + h * k3)
        k4 = e1i * nonlinear(grid.values_from_coeffs(y).real)
        c = e1 * (c + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
        t += h

        step_times.append(t)
        means.append(c[grid.zero_index])
        l2.append(np.linalg.norm(c))
        last = k == len(steps) - 1
        if last or (cfg.store_stride > 0 and (k + 1) % cfg.store_stride == 0):
            times.append(t)
            states.append(SpectralFunction(grid, c.copy(), is_real=True))

    return Trajectory(cfg, times, states, np.asarray(step_times),
                      np.asarray(means), np.asarray(l2))


def galilean_normalize(u: SpectralFunction, mean0: float, t: float) -> SpectralFunction:
    """Shift x by t*mean0 and subtract mean0:  u(t, x - t*mean0) - mean0."""
    xi = u.grid.frequencies.astype(float)
    coeffs = u.coeffs * np.exp(-1j * xi * t * mean0)
    coeffs[u.grid.zero_index] -= mean0
    return SpectralFunction(u.grid, coeffs, is_real=u.is_real)


# -- concentrated-bump data ---------------------------------------------------


def plateau_bump_values(y) -> np.ndarray:
    """Smooth plateau bump on the real line: 1 on |y| <= 1/2, 0 on |y| >= 1."""
    return smoothstep(2.0 * (1.0 - np.abs(np.asarray(y, dtype=float))))


def bump_mean() -> float:
    """Mean value over one period of the plateau bump placed at the origin.

    The transition profile integrates to exactly half its width, so the
    integral over the line is 3/2.
    """
    return 1.5 / (2.0 * np.pi)


@dataclass
class AnsatzConfig:
    """Concentration/perturbation parameters for the two-bump data family.

    The regime of interest is lam -> infinity, eps -> 0 with lam*eps ->
    infinity; `regime_flags` records which of these the configured values
    point toward (diagnostic only).
    """

    lam: int
    eps: float
    s: float

    def __post_init__(self):
        if self.lam < 1 or self.eps < 0.0:
            raise BadParams("need lam >= 1 and eps >= 0")

    @property
    def regime_flags(self) -> dict:
        return {"lambda_large": self.lam >= 8,
                "eps_small": self.eps <= 0.5,
                "lambda_eps_large": self.lam * self.eps >= 2.0}


def ansatz_pair(cfg: AnsatzConfig, grid: PeriodicGrid) -> tuple[SpectralFunction, SpectralFunction]:
    """Data pair u0 = lam^{1/2-s} * bump(lam x) and v0 = u0 + eps * bump(x).

    The dilation is sampled through the wrapped coordinate, so the bump is a
    single copy per period; lam <= N/8 keeps it resolved on the grid.
    """
    if cfg.lam > grid.n_points // 8:
        raise UnresolvedBump(f"lam={cfg.lam} too fine for N={grid.n_points}")
    x = grid.nodes
    wrapped = ((x + np.pi) % (2.0 * np.pi)) - np.pi
    u0_vals = cfg.lam ** (0.5 - cfg.s) * plateau_bump_values(cfg.lam * wrapped)
    v0_vals = u0_vals + cfg.eps * plateau_bump_values(wrapped)
    return (SpectralFunction.from_values(grid, u0_vals),
            SpectralFunction.from_values(grid, v0_vals))


# -- gauged transport residual ------------------------------------------------


def gauged_transport_residual(v: SpectralFunction, alpha: float,
                              flow_cfg: FlowConfig | None = None,
                              probe_freqs: Sequence[int] = (16, 32, 64, 128)
                              ) -> tuple[OrderFitReport, OrderFitReport]:
    """Frequency order of the gauged transport remainder

        R(v) = -(A T_{v i xi} - [T_{i xi |xi|^{alpha-1}}, A]) A^{-1},

    with A the gauge flow, against the ungauged transport T_{v i xi}.

    The flow direction is tied to the bracket sign: with the gauge generator
    p satisfying alpha |xi|^{alpha-1} d_x p = -v xi, it is A = exp(-i T_p)
    that cancels the order-one transport term and leaves order 2 - alpha
    (the forward flow doubles it instead).  Returns (gauged, ungauged)
    order-fit reports.
    """
    if abs(v.mean) > 1e-12:
        raise NonZeroMean("gauged transport residual needs zero-mean v")
    grid = v.grid
    cfg = flow_cfg if flow_cfg is not None else FlowConfig(tau_target=1.0, n_substeps=128)
    psi = cfg.cutoff_for(grid)
    p = gauge_symbol(v, alpha)
    op = FlowOperator(p, cfg)
    tau = -1.0  # transport cancellation fixes the flow direction; see docstring
    Mt = operator_matrix(transport_symbol(v).scaled_by_i(), psi)
    Mia = operator_matrix(dispersion_symbol(grid, alpha).scaled_by_i(), psi)

    norms_gauged, norms_plain = [], []
    freqs = [int(f) for f in probe_freqs]
    for f in freqs:
        e = SpectralFunction.single_mode(grid, f)
        w = op.apply(-tau, e)  # A^{-1} e
        term1 = op.apply(tau, SpectralFunction(grid, Mt @ w.coeffs))
        comm = SpectralFunction(grid, Mia @ op.apply(tau, w).coeffs) \
            - op.apply(tau, SpectralFunction(grid, Mia @ w.coeffs))
        r = -(term1.coeffs - comm.coeffs)
        norms_gauged.append(float(np.linalg.norm(r)))
        norms_plain.append(float(np.linalg.norm(Mt @ e.coeffs)))

    gauged = OrderFitReport("gauged_transport", freqs, norms_gauged,
                            fit_exponent(freqs, norms_gauged),
                            predicted_exponent=max(2.0 - alpha, 0.0))
    plain = OrderFitReport("ungauged_transport", freqs, norms_plain,
                           fit_exponent(freqs, norms_plain),
                           predicted_exponent=1.0)
    return gauged, plain
