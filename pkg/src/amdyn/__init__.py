"""Random interval systems of two piecewise linear homeomorphisms (AM-systems)."""
from .core import (AmSystem, ResonantSystem, SystemType, apply, apply_inverse, classify_type,
                   detect_resonance, from_resonance, lyapunov_exponents, new_system,
                   positivity_window, reflect)
from .dynamics import (Orbit, detect_jumps, omega_limit_sample, orbit, orbit_samples,
                       sample_word, synchronization_gap)
from .measure import (EmpiricalMeasure, PiecewiseDensity, empirical_stationary,
                      iterate_to_stationary, kolmogorov_distance, lebesgue_check,
                      local_dimension_estimate, transfer_step)
from .resonant import (AddressedInterval, CantorApprox, IntervalCode, ResonantStructure,
                       SymbolicWeights, box_dimension_estimate, build_intervals, cantor_approx,
                       cylinder_mass, ifs_apply, measure_dimension, pressure,
                       recurrence_residuals, res_full_analysis, solve_eta, solve_eta_pm,
                       solve_pressure_zero, support_dimension, symbolic_weights)
from .conjugacy import Conjugacy, PointCode, evaluate_h, locate, verify_conjugacy

__version__ = "0.1.0"
