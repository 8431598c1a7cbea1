"""Thermodynamic formalism and dimension-spectrum tools for expanding
full-branch interval maps: pressure, Lyapunov exponents, asymptotic
variance, equilibrium entropy, spectrum sampling and concavity
classification with inflection-point location."""

from . import errors
from .concavity import (
    ConcavityReport,
    CorollaryCResult,
    InflectionPoint,
    classify,
    corollary_c_check,
    criterion_G,
    d2L_dalpha2,
    verify_left_concavity,
)
from .cylinders import (
    BranchSpec,
    CylinderTable,
    branch_family,
    build_cylinders,
    convergence_report,
    linear_branches,
    mobius_branches,
    model_from_cylinders,
    pressure_approx,
    sine_branches,
)
from .thermo import (
    LinearCookieCutter,
    LinearPressureModel,
    PressureModel,
    SpectrumCurve,
    SpectrumDomain,
    ThermoPoint,
    bowen_root,
    default_t_grid,
    equilibrium_weights,
    pressure,
    sample_spectrum,
    spectrum_domain,
    t_of_alpha,
    thermo_point,
)
from .twobranch import (
    TheoremAVerdict,
    TwoBranchMap,
    bifurcation_slope,
    critical_ratio,
    entropy_derivative,
    entropy_of_alpha,
    inflection_equation,
    inflection_equation_derivative,
    spectrum_closed_form,
    theorem_a_check,
    transversality_check,
    two_dL_dalpha,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
