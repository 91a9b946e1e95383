"""Entanglement harvesting observables for Unruh-DeWitt detector pairs in a
quasi-2D dipolar BEC with tunable Lorentz-violating dispersion."""

__version__ = "0.1.0"

from .dispersion import (CONTACT_CROSSOVER_X, DispersionKind, SpectrumReport,
                         analyze_spectrum, bogoliubov_uv, bogoliubov_weight,
                         critical_A, f_factor, omega)
from .harvesting import (COUPLING_UNITS, DetectorPair, HarvestObservables,
                         PairGeometry, concurrence, correlation_c,
                         correlation_x, density_matrix, evaluate_pair,
                         observables, pair_from_geometry,
                         transition_probability, validate_oracles,
                         wightman_oracle_c, wightman_oracle_p,
                         wightman_oracle_x)
from .quadrature import (QuadratureResult, QuadratureSpec,
                         abel_regularized_linear_tail, integrate_bessel_tail,
                         integrate_decaying)
from .specfun import SpecFunResult, bessel_j0, dawson, erfcx, j0_zero
from .sweep import (OptimumReport, SweepAxis, SweepResult, find_optimum,
                    resolve_workers, run_sweep)
from .units import (A_CRITICAL, R_MAX, CondensateParams, DimensionlessModel,
                    nondimensionalize)

__all__ = [
    "A_CRITICAL", "CONTACT_CROSSOVER_X", "COUPLING_UNITS", "CondensateParams",
    "DetectorPair", "DimensionlessModel", "DispersionKind",
    "HarvestObservables", "OptimumReport", "PairGeometry", "QuadratureResult",
    "QuadratureSpec", "R_MAX", "SpecFunResult", "SpectrumReport", "SweepAxis",
    "SweepResult", "abel_regularized_linear_tail", "analyze_spectrum",
    "bessel_j0", "bogoliubov_uv", "bogoliubov_weight", "concurrence",
    "correlation_c", "correlation_x", "critical_A", "dawson",
    "density_matrix", "erfcx", "evaluate_pair", "f_factor", "find_optimum",
    "integrate_bessel_tail", "integrate_decaying", "j0_zero",
    "nondimensionalize", "observables", "omega", "pair_from_geometry",
    "resolve_workers", "run_sweep", "transition_probability",
    "validate_oracles", "wightman_oracle_c", "wightman_oracle_p",
    "wightman_oracle_x",
]
