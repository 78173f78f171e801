"""Deterministic CSV emission for symbols, trajectories, maps, and reports.

All floats are written with a fixed 17-significant-digit format so that
identical runs produce byte-identical files.
"""
from __future__ import annotations

import io
from typing import Iterable, Sequence

import numpy as np

from .grid import PeriodicGrid, SpectralFunction
from .orderfit import OrderFitReport
from .paracomp import DiffeoMap
from .symbols import Symbol


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_rows(path, header: Sequence[str], rows: Iterable[Sequence],
               preamble: str | None = None) -> None:
    buf = io.StringIO()
    if preamble:
        buf.write("# " + preamble + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    with open(path, "w", encoding="ascii") as fh:
        fh.write(buf.getvalue())


def symbol_rows(sym: Symbol):
    n = sym.grid.n_points
    freqs = sym.grid.frequencies
    for j in range(n):
        for k in range(n):
            v = sym.values[j, k]
            yield (j, int(freqs[k]), float(v.real), float(v.imag))


def write_symbol(path, sym: Symbol, note: str | None = None) -> None:
    write_rows(path, ("x_index", "xi", "re", "im"), symbol_rows(sym), preamble=note)


def read_symbol(path, grid: PeriodicGrid, order: float = 0.0,
                regularity: float = 0.0) -> Symbol:
    n = grid.n_points
    vals = np.zeros((n, n), dtype=complex)
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("x_index"):
                continue
            j, xi, re, im = line.split(",")
            vals[int(j), grid.index_of(int(xi))] = float(re) + 1j * float(im)
    return Symbol(grid, vals, order, regularity)


def trajectory_rows(times, states):
    for t, state in zip(times, states):
        for xi, c in zip(state.grid.frequencies, state.coeffs):
            yield (float(t), int(xi), float(c.real), float(c.imag))


def write_trajectory(path, traj, note: str) -> None:
    write_rows(path, ("t", "xi", "re", "im"),
               trajectory_rows(traj.times, traj.states), preamble=note)


def write_diffeo(path, chi: DiffeoMap, note: str | None = None) -> None:
    rows = zip(chi.grid.nodes, chi.chi_values, chi.dchi.values().real)
    write_rows(path, ("x", "chi", "dchi"),
               ((float(a), float(b), float(c)) for a, b, c in rows), preamble=note)


def write_order_fits(path, reports: Sequence[OrderFitReport], note: str | None = None) -> None:
    rows = []
    for rep in reports:
        rows.extend(rep.rows())
    write_rows(path, ("experiment", "N", "norm", "fitted_exponent",
                      "predicted_exponent"), rows, preamble=note)
