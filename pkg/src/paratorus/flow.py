"""Hyperbolic flows exp(i tau T_p), conjugation, and commutator machinery.

The flow solves d/dtau h = i T_p h in coefficient space with a classical
explicit fourth-order scheme; the x-independent part of the generator (the
matrix diagonal) is propagated exactly by an integrating factor, so
x-independent symbols are integrated to rounding error and real symbols give
an exactly unitary diagonal factor.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BadParams, CancellationViolated, DepthExceeded, StepTooLarge
from .grid import PeriodicGrid, SpectralFunction
from .orderfit import OrderFitReport, fit_exponent
from .symbols import (CutoffFunction, LinearOperatorProbe, Symbol,
                      default_cutoff, operator_matrix)

MAX_LIE_DEPTH = 6
MAX_BCH_TRUNCATION = 4
GAUSS_NODES = 16


@dataclass
class FlowConfig:
    """Flow integration parameters.

    `n_substeps` is the substep count used by each flow application; the
    invariant |tau| * max|p| / n_substeps <= 0.5 keeps the largest lattice
    phase resolved per substep.
    """

    tau_target: float = 1.0
    n_substeps: int = 256
    cutoff: CutoffFunction | None = None

    def cutoff_for(self, grid: PeriodicGrid) -> CutoffFunction:
        if self.cutoff is not None:
            if self.cutoff.grid.n_points != grid.n_points:
                raise BadParams("flow cutoff tabulated on a different grid")
            return self.cutoff
        return default_cutoff(grid)


class FlowOperator:
    """exp(i tau T_p) realized by substepped integration of the generator."""

    def __init__(self, p: Symbol, cfg: FlowConfig):
        self.grid = p.grid
        self.cfg = cfg
        psi = cfg.cutoff_for(p.grid)
        self.generator = operator_matrix(p.scaled_by_i(), psi)
        self._diag = np.diag(self.generator).copy()
        self._rest = self.generator - np.diag(self._diag)
        self.max_abs_symbol = float(np.max(np.abs(p.values)))
        self._keeps_real = p.scaled_by_i().preserves_real()

    @classmethod
    def from_generator(cls, grid: PeriodicGrid, generator: np.ndarray,
                       cfg: FlowConfig, phase_scale: float) -> "FlowOperator":
        """Flow of an explicit generator matrix (used for adjoint flows);
        `phase_scale` plays the role of max|p| in the substep invariant."""
        obj = cls.__new__(cls)
        obj.grid = grid
        obj.cfg = cfg
        obj.generator = generator
        obj._diag = np.diag(generator).copy()
        obj._rest = generator - np.diag(obj._diag)
        obj.max_abs_symbol = phase_scale
        obj._keeps_real = False
        return obj

    def adjoint(self) -> "FlowOperator":
        """Flow generated by the conjugate-transpose generator, so that
        applying it at tau matches (exp(i tau T_p))^* at the same order."""
        return FlowOperator.from_generator(self.grid, self.generator.conj().T,
                                           self.cfg, self.max_abs_symbol)

    def substeps_for(self, tau: float, n_substeps: int | None = None) -> int:
        n = self.cfg.n_substeps if n_substeps is None else n_substeps
        if abs(tau) * self.max_abs_symbol / n > 0.5:
            raise StepTooLarge(
                f"{n} substeps do not resolve phase |tau|*max|p| = "
                f"{abs(tau) * self.max_abs_symbol:.3g}")
        return n

    def apply(self, tau: float, u: SpectralFunction,
              n_substeps: int | None = None) -> SpectralFunction:
        if u.grid.n_points != self.grid.n_points:
            raise BadParams("flow and data on different grids")
        real = u.is_real and self._keeps_real
        if tau == 0.0:
            return SpectralFunction(self.grid, u.coeffs.copy(), is_real=real)
        n = self.substeps_for(tau, n_substeps)
        h = tau / n
        d = self._diag
        R = self._rest
        e_full = np.exp(h * d)
        e_half = np.exp(0.5 * h * d)
        e_full_inv = np.exp(-h * d)
        e_half_inv = np.exp(-0.5 * h * d)
        c = u.coeffs.copy()
        for _ in range(n):
            k1 = R @ c
            k2 = e_half_inv * (R @ (e_half * (c + 0.5 * h * k1)))
            k3 = e_half_inv * (R @ (e_half * (c + 0.5 * h * k2)))
            k4 = e_full_inv * (R @ (e_full * (c + h * k3)))
            c = e_full * (c + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
        return SpectralFunction(self.grid, c, is_real=real)


def flow(p: Symbol, cfg: FlowConfig, h0: SpectralFunction) -> SpectralFunction:
    """Propagate h0 to time cfg.tau_target along d/dtau h = i T_p h."""
    return FlowOperator(p, cfg).apply(cfg.tau_target, h0)


def flow_inverse_residual(p: Symbol, cfg: FlowConfig, h0: SpectralFunction) -> float:
    """Relative defect of running the flow forward then backward."""
    op = FlowOperator(p, cfg)
    tau = cfg.tau_target
    back = op.apply(-tau, op.apply(tau, h0))
    return float(np.linalg.norm(back.coeffs - h0.coeffs) / np.linalg.norm(h0.coeffs))


def lie_derivative(p: Symbol, b: Symbol, k: int,
                   psi: CutoffFunction | None = None) -> LinearOperatorProbe:
    """k-fold nested commutator of i T_p with T_b as a matrix-backed operator."""
    if k < 0:
        raise BadParams("need k >= 0")
    if k > MAX_LIE_DEPTH:
        raise DepthExceeded(f"nested commutator depth {k} exceeds {MAX_LIE_DEPTH}")
    psi = psi if psi is not None else default_cutoff(p.grid)
    Mp = operator_matrix(p.scaled_by_i(), psi)
    L = operator_matrix(b, psi)
    for _ in range(k):
        L = Mp @ L - L @ Mp
    return LinearOperatorProbe.from_matrix(p.grid, L)


def conjugate_apply(p: Symbol, b: Symbol, cfg: FlowConfig,
                    u: SpectralFunction) -> SpectralFunction:
    """exp(i tau T_p) T_b exp(-i tau T_p) u at tau = cfg.tau_target."""
    op = FlowOperator(p, cfg)
    tau = cfg.tau_target
    psi = cfg.cutoff_for(p.grid)
    Mb = operator_matrix(b, psi)
    inner = op.apply(-tau, u)
    mid = SpectralFunction(u.grid, Mb @ inner.coeffs)
    return op.apply(tau, mid)


def commutator_flow_apply(p: Symbol, b: Symbol, cfg: FlowConfig,
                          u: SpectralFunction) -> SpectralFunction:
    """[exp(i tau T_p), T_b] u."""
    op = FlowOperator(p, cfg)
    tau = cfg.tau_target
    psi = cfg.cutoff_for(p.grid)
    Mb = operator_matrix(b, psi)
    first = op.apply(tau, SpectralFunction(u.grid, Mb @ u.coeffs))
    second = Mb @ op.apply(tau, u).coeffs
    return SpectralFunction(u.grid, first.coeffs - second)


def commutator_cross_identity_residual(p: Symbol, b: Symbol, cfg: FlowConfig,
                                       u: SpectralFunction) -> float:
    """Relative gap between [exp(i tau T_p), T_b] u and the factorized form
    exp(i tau T_p) (T_b - exp(-i tau T_p) T_b exp(i tau T_p)) u."""
    op = FlowOperator(p, cfg)
    tau = cfg.tau_target
    psi = cfg.cutoff_for(p.grid)
    Mb = operator_matrix(b, psi)
    direct = commutator_flow_apply(p, b, cfg, u)
    # conjugation at -tau: exp(-i tau T_p) T_b exp(+i tau T_p) u
    conj_minus = op.apply(-tau, SpectralFunction(u.grid, Mb @ op.apply(tau, u).coeffs))
    factored = op.apply(tau, SpectralFunction(u.grid, Mb @ u.coeffs - conj_minus.coeffs))
    scale = max(np.linalg.norm(direct.coeffs), np.linalg.norm(Mb @ u.coeffs), 1e-300)
    return float(np.linalg.norm(direct.coeffs - factored.coeffs) / scale)


def bch_truncation_residual(p: Symbol, b: Symbol, cfg: FlowConfig, n: int,
                            probe_freqs: Sequence[int]) -> OrderFitReport:
    """Frequency scaling of the conjugation minus its n-term commutator sum.

    Applies R_n = exp(i tau T_p) T_b exp(-i tau T_p) - sum_{k<=n} (tau^k/k!) L_k
    to wave packets e^{iNx} and fits the norm growth exponent.  The predicted
    exponent is beta + (n+1) delta - (n+1); for non-integer regularity of p
    the alternative bookkeeping beta + ceil(rho) delta - rho is reported too.
    """
    if n > MAX_BCH_TRUNCATION:
        raise BadParams(f"truncation index {n} exceeds {MAX_BCH_TRUNCATION}")
    psi = cfg.cutoff_for(p.grid)
    tau = cfg.tau_target
    ops = [lie_derivative(p, b, k, psi).matrix for k in range(n + 1)]
    op = FlowOperator(p, cfg)
    Mb = ops[0]
    freqs = [int(f) for f in probe_freqs]
    norms = []
    ref_norms = []
    for f in freqs:
        e = SpectralFunction.single_mode(p.grid, f)
        conj = op.apply(tau, SpectralFunction(p.grid, Mb @ op.apply(-tau, e).coeffs))
        acc = np.zeros_like(e.coeffs)
        kfac = 1.0
        for k in range(n + 1):
            if k > 0:
                kfac *= k
            acc = acc + (tau ** k / kfac) * (ops[k] @ e.coeffs)
        norms.append(float(np.linalg.norm(conj.coeffs - acc)))
        ref_norms.append(float(np.linalg.norm(Mb @ e.coeffs)))
    delta = p.order
    beta = b.order
    predicted = beta + (n + 1) * delta - (n + 1)
    rho = p.regularity if np.isfinite(p.regularity) else float(n + 1)
    predicted_alt = beta + np.ceil(rho) * delta - rho
    fitted = fit_exponent(freqs, norms)
    return OrderFitReport(experiment="bch_truncation", sizes=freqs, norms=norms,
                          fitted_exponent=fitted, predicted_exponent=predicted,
                          predicted_exponent_alt=predicted_alt,
                          reference_norms=ref_norms)


@dataclass
class DuhamelComparison:
    direct: SpectralFunction
    quadrature: SpectralFunction
    relative_gap: float


def duhamel_difference(p: Symbol, p2: Symbol, cfg: FlowConfig,
                       h0: SpectralFunction, rtol: float = 1e-6,
                       check: bool = True) -> DuhamelComparison:
    """Two-path evaluation of the flow difference for generators p and p2.

    Computes (exp(i tau T_p) - exp(i tau T_{p2})) h0 directly and as the
    Gauss-Legendre quadrature of

        int_0^tau exp(i (tau-r) T_p) i T_{p - p2} exp(i r T_{p2}) h0 dr,

    and checks the two agree to `rtol` relative to the larger of the two
    norms (skipped when both vanish, e.g. p = p2).
    """
    op1 = FlowOperator(p, cfg)
    op2 = FlowOperator(p2, cfg)
    tau = cfg.tau_target
    psi = cfg.cutoff_for(p.grid)
    Mdiff = operator_matrix((p - p2).scaled_by_i(), psi)
    direct = op1.apply(tau, h0) - op2.apply(tau, h0)
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_NODES)
    acc = np.zeros_like(h0.coeffs)
    for t, w in zip(nodes, weights):
        r = 0.5 * tau * (t + 1.0)
        wr = 0.5 * tau * w
        inner = op2.apply(r, h0)
        acc = acc + wr * op1.apply(tau - r, SpectralFunction(
            h0.grid, Mdiff @ inner.coeffs)).coeffs
    quad = SpectralFunction(h0.grid, acc)
    scale = max(np.linalg.norm(direct.coeffs), np.linalg.norm(quad.coeffs))
    gap = 0.0 if scale == 0.0 else float(
        np.linalg.norm(direct.coeffs - quad.coeffs) / scale)
    if check and scale > 1e-13 * np.linalg.norm(h0.coeffs) and gap > rtol:
        raise BadParams(f"flow-difference paths disagree: relative gap {gap:.3e}")
    return DuhamelComparison(direct, quad, gap)


def flow_symbol_identity_residual(p: Symbol, cfg: FlowConfig,
                                  h0: SpectralFunction) -> float:
    """Relative residual of the flow-symbol split

        exp(i tau T_p) h = h + T_{exp(i tau p) - 1} h
                           + int_0^tau exp(i (tau-s) T_p)
                             (T_{ip} T_{exp(i s p)} - T_{i p exp(i s p)}) h ds,

    with the integral evaluated by Gauss-Legendre quadrature."""
    op = FlowOperator(p, cfg)
    tau = cfg.tau_target
    psi = cfg.cutoff_for(p.grid)
    Mip = operator_matrix(p.scaled_by_i(), psi)
    left = op.apply(tau, h0)

    def phase_symbol(s: float) -> Symbol:
        return p.pointwise(lambda v: np.exp(1j * s * v), order=0.0)

    leading = operator_matrix(
        phase_symbol(tau).pointwise(lambda v: v - 1.0), psi) @ h0.coeffs
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_NODES)
    acc = np.zeros_like(h0.coeffs)
    for t, w in zip(nodes, weights):
        s = 0.5 * tau * (t + 1.0)
        ws = 0.5 * tau * w
        es = phase_symbol(s)
        inner = Mip @ (operator_matrix(es, psi) @ h0.coeffs) \
            - operator_matrix(Symbol(p.grid, 1j * p.values * es.values,
                                     p.order, p.regularity), psi) @ h0.coeffs
        acc = acc + ws * op.apply(tau - s, SpectralFunction(p.grid, inner)).coeffs
    rhs = h0.coeffs + leading + acc
    return float(np.linalg.norm(left.coeffs - rhs) / np.linalg.norm(left.coeffs))


def adjoint_flow_defect(p: Symbol, cfg: FlowConfig,
                        probe_freqs: Sequence[int]) -> OrderFitReport:
    """Frequency order of (exp(i tau T_p))^* - exp(-i tau T_p): the defect is
    generated by T_p - (T_p)^*, hence smooths by one order more than p."""
    op = FlowOperator(p, cfg)
    adj = op.adjoint()
    tau = cfg.tau_target
    freqs = [int(f) for f in probe_freqs]
    norms = []
    for f in freqs:
        e = SpectralFunction.single_mode(p.grid, f)
        # (exp(i tau T_p))^* is the flow of the conjugate-transpose generator
        gap = adj.apply(tau, e).coeffs - op.apply(-tau, e).coeffs
        norms.append(float(np.linalg.norm(gap)))
    return OrderFitReport("adjoint_flow_defect", freqs, norms,
                          fit_exponent(freqs, norms),
                          predicted_exponent=p.order - 1.0)


def gauge_remainder_apply(a: Symbol, b: Symbol, p: Symbol, cfg: FlowConfig,
                          u: SpectralFunction,
                          a_xi: Symbol | None = None,
                          p_xi: Symbol | None = None) -> SpectralFunction:
    """Apply the conjugated remainder

        R~_tau = tau exp(i tau T_p) i T_b exp(-i tau T_p)
                 + [exp(i tau T_p), T_{ia}] exp(-i tau T_p)

    after verifying the bracket relation b = -d_xi p d_x a + d_x p d_xi a
    pointwise.  `a_xi` and `p_xi` supply closed-form xi-derivative tables;
    without them the lattice forward difference is used, which is only
    adequate for symbols polynomial in xi.
    """
    axi = a_xi if a_xi is not None else a.xi_forward_difference()
    pxi = p_xi if p_xi is not None else p.xi_forward_difference()
    bracket = -pxi.values * a.x_derivative().values + p.x_derivative().values * axi.values
    scale = max(float(np.max(np.abs(bracket))), float(np.max(np.abs(b.values))), 1e-300)
    defect = float(np.max(np.abs(b.values - bracket)))
    if defect > 1e-8 * scale:
        raise CancellationViolated(
            f"bracket relation residual {defect:.3e} exceeds 1e-8 * {scale:.3e}")
    op = FlowOperator(p, cfg)
    tau = cfg.tau_target
    psi = cfg.cutoff_for(p.grid)
    Mib = operator_matrix(b.scaled_by_i(), psi)
    Mia = operator_matrix(a.scaled_by_i(), psi)
    w = op.apply(-tau, u)
    inner = tau * (Mib @ w.coeffs) + Mia @ w.coeffs
    out = op.apply(tau, SpectralFunction(u.grid, inner))
    return SpectralFunction(u.grid, out.coeffs - Mia @ u.coeffs)
