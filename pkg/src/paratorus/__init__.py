"""Periodic paradifferential calculus, hyperbolic gauge flows, and a
pseudospectral lab for the fractional dispersive Burgers equation."""

from .burgers import (AnsatzConfig, SolverConfig, Trajectory, ansatz_pair,
                      galilean_normalize, gauged_transport_residual,
                      plateau_bump_values, solve)
from .errors import (BadParams, BlowupDetected, CancellationViolated,
                     CflViolation, DepthExceeded, GridMismatch, NonZeroMean,
                     NotDiffeo, ParatorusError, StepTooLarge, UnresolvedBump)
from .flow import (FlowConfig, FlowOperator, bch_truncation_residual,
                   commutator_flow_apply, conjugate_apply, duhamel_difference,
                   flow, flow_inverse_residual, gauge_remainder_apply,
                   lie_derivative)
from .grid import PeriodicGrid, SpectralFunction
from .orderfit import OrderFitReport, fit_exponent, operator_norm_estimate, probe_set
from .paracomp import (DiffeoMap, build_chi, compose_diffeos, compose_exact,
                       paracompose, paralin_composition_residual)
from .spectral import (DyadicDecomposition, antiderivative_zero_mean,
                       derivative, fractional_derivative, gaussian_mollify,
                       lp_decompose, multiplier, random_trig_polynomial,
                       sobolev_norm, zygmund_norm)
from .symbols import (CutoffFunction, LinearOperatorProbe, Symbol,
                      adjoint_symbol, build_cutoff, compose_symbols,
                      default_cutoff, dispersion_symbol, extract_symbol,
                      gauge_symbol, gauge_triple, operator_matrix, quantize,
                      symbol_seminorm, transport_symbol)
from .water_waves import WaterWaveSymbols, ww_symbols

__version__ = "0.1.0"
