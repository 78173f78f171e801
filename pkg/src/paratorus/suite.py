"""Batch invariant checks driven by the `op-suite` command.

Each check is a named pure function of (grid size, seed) returning a
CheckResult; the registry order is fixed so runs are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .burgers import SolverConfig, solve
from .flow import FlowConfig, FlowOperator, flow_inverse_residual
from .grid import PeriodicGrid, SpectralFunction
from .orderfit import probe_set
from .paracomp import DiffeoMap, paracompose
from .spectral import (antiderivative_zero_mean, derivative, lp_decompose,
                       random_trig_polynomial, sobolev_norm)
from .symbols import (LinearOperatorProbe, Symbol, default_cutoff,
                      extract_symbol, filtered_symbol, gauge_symbol,
                      operator_matrix, quantize)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _grid(n: int) -> PeriodicGrid:
    return PeriodicGrid(n)


def check_parseval_roundtrip(n: int, seed: int) -> CheckResult:
    # sample -> coefficients -> sample on data without the unpaired -N/2 mode
    rng = np.random.default_rng(seed)
    vals = random_trig_polynomial(_grid(n), rng, band=n // 2 - 1).values().real
    u = SpectralFunction.from_values(_grid(n), vals)
    back = u.values()
    err = float(np.max(np.abs(back - vals)) / max(np.max(np.abs(vals)), 1e-300))
    return CheckResult("parseval_roundtrip", err <= 1e-12, f"relative error {err:.2e}")


def check_partition_of_unity(n: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    u = random_trig_polynomial(_grid(n), rng)
    gap = (lp_decompose(u).reconstruct() - u).l2_norm()
    return CheckResult("lp_partition_of_unity", gap <= 1e-12, f"gap {gap:.2e}")


def check_bernstein(n: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst_hi, worst_lo = 0.0, np.inf
    for _ in range(20):
        u = random_trig_polynomial(_grid(n), rng)
        for q, blk in enumerate(lp_decompose(u).blocks):
            norm = blk.l2_norm()
            if norm < 1e-12:
                continue
            ratio = derivative(blk).l2_norm() / (2.0 ** q * norm)
            worst_hi = max(worst_hi, ratio)
            if q >= 1:
                worst_lo = min(worst_lo, ratio)
    ok = worst_hi <= 2.0 and worst_lo >= 0.25
    return CheckResult("bernstein_two_sided", ok,
                       f"C={worst_hi:.3f} (<=2), c={worst_lo:.3f} (>=0.25)")


def check_sobolev_l2(n: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    u = random_trig_polynomial(_grid(n), rng)
    gap = abs(sobolev_norm(u, 0.0) - u.l2_norm())
    return CheckResult("sobolev_zero_is_l2", gap <= 1e-12 * u.l2_norm(),
                       f"gap {gap:.2e}")


def check_antiderivative(n: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    u = random_trig_polynomial(_grid(n), rng)
    u.coeffs[u.grid.zero_index] = 0.0
    gap = (derivative(antiderivative_zero_mean(u)) - u).l2_norm()
    return CheckResult("antiderivative_inverse", gap <= 1e-12 * u.l2_norm(),
                       f"gap {gap:.2e}")


def check_spectral_support(n: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    grid = _grid(n)
    psi = default_cutoff(grid)
    B, b = psi.B, psi.b
    bad = 0
    for _ in range(50):
        band = int(rng.integers(2, n // 8))
        a = Symbol.from_x_function(random_trig_polynomial(grid, rng, band=band))
        radius = int(rng.integers(max(2, b + 1), n // 4))
        u = random_trig_polynomial(grid, rng, band=radius, real=False)
        out = quantize(a, psi, u)
        limit = (1.0 + 1.0 / B) * radius - b / B
        outside = np.abs(grid.frequencies) > limit
        if np.any(out.coeffs[outside] != 0.0):
            bad += 1
    return CheckResult("spectral_support", bad == 0, f"{bad} violations in 50 draws")


def check_quantize_linearity(n: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    grid = _grid(n)
    psi = default_cutoff(grid)
    a = Symbol.from_x_function(random_trig_polynomial(grid, rng, band=n // 8))
    probe = LinearOperatorProbe.from_quantization(a, psi)
    defect = probe.linearity_defect(rng)
    return CheckResult("quantize_linearity", defect <= 1e-10, f"defect {defect:.2e}")


def check_extract_roundtrip(n: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    grid = _grid(n)
    psi = default_cutoff(grid)
    worst = 0.0
    for _ in range(5):
        u = random_trig_polynomial(grid, rng, band=n // 8)
        a = Symbol.from_x_function(u)
        probe = LinearOperatorProbe.from_quantization(a, psi)
        recovered = extract_symbol(probe, grid)
        target = filtered_symbol(a, psi)
        worst = max(worst, float(np.max(np.abs(recovered.values - target.values))))
    return CheckResult("extract_quantize_roundtrip", worst <= 1e-10,
                       f"sup gap {worst:.2e}")


def check_flow_unitary_diagonal(n: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    grid = _grid(n)
    xi = grid.frequencies.astype(float)
    row = np.where(xi != 0.0, np.abs(xi) ** 0.5, 0.0)
    p = Symbol.from_multiplier(grid, row, order=0.5)
    cfg = FlowConfig(tau_target=1.0, n_substeps=max(64, int(4 * np.max(row))))
    h0 = random_trig_polynomial(grid, rng, band=n // 4, real=False)
    out = FlowOperator(p, cfg).apply(1.0, h0)
    ratio = out.l2_norm() / h0.l2_norm()
    return CheckResult("flow_unitary_x_independent", abs(ratio - 1.0) <= 1e-10,
                       f"norm ratio deviation {abs(ratio - 1.0):.2e}")


def check_flow_invertible(n: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    grid = _grid(n)
    x = grid.nodes
    v = SpectralFunction.from_values(grid, np.cos(x))
    p = gauge_symbol(v, 1.5)
    cfg = FlowConfig(tau_target=1.0, n_substeps=256)
    h0 = random_trig_polynomial(grid, rng, band=n // 4, real=False)
    res = flow_inverse_residual(p, cfg, h0)
    return CheckResult("flow_invertible", res <= 1e-6, f"residual {res:.2e}")


def check_burgers_conservation(n: int, seed: int) -> CheckResult:
    grid = _grid(n)
    u0 = SpectralFunction.from_values(grid, np.cos(grid.nodes))
    cfg = SolverConfig(alpha=1.5, n_points=n, dt=1e-3, t_end=0.1)
    traj = solve(u0, cfg)
    ok = traj.mean_drift() <= 1e-13 and traj.l2_relative_drift() <= 1e-8
    return CheckResult("burgers_conservation", ok,
                       f"mean drift {traj.mean_drift():.2e}, "
                       f"L2 drift {traj.l2_relative_drift():.2e}")


def check_paracompose_identity(n: int, seed: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    grid = _grid(n)
    u = random_trig_polynomial(grid, rng, band=n // 4)
    out = paracompose(DiffeoMap.identity(grid), u)
    gap = (out - u).l2_norm() / u.l2_norm()
    return CheckResult("paracompose_identity", gap <= 1e-10, f"gap {gap:.2e}")


REGISTRY: tuple[tuple[str, Callable[[int, int], CheckResult]], ...] = (
    ("parseval_roundtrip", check_parseval_roundtrip),
    ("lp_partition_of_unity", check_partition_of_unity),
    ("bernstein_two_sided", check_bernstein),
    ("sobolev_zero_is_l2", check_sobolev_l2),
    ("antiderivative_inverse", check_antiderivative),
    ("spectral_support", check_spectral_support),
    ("quantize_linearity", check_quantize_linearity),
    ("extract_quantize_roundtrip", check_extract_roundtrip),
    ("flow_unitary_x_independent", check_flow_unitary_diagonal),
    ("flow_invertible", check_flow_invertible),
    ("burgers_conservation", check_burgers_conservation),
    ("paracompose_identity", check_paracompose_identity),
)


def run_suite(n: int = 128, seed: int = 0) -> list[CheckResult]:
    return [fn(n, seed) for _, fn in REGISTRY]
