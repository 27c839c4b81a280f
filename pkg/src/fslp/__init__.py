"""Finite-volume solver for the compressible Euler equations with gravity.

A flux-splitting Lagrange-projection (FSLP) scheme with a well-balanced gravity
source and an all-regime low-Mach pressure correction, next to its
operator-splitting predecessor (OSLP) and an HLLC baseline, plus the benchmark
cases and verification diagnostics used to validate them.
"""

from .eos import GasParams, pressure, sound_speed, specific_entropy, temperature
from .errors import (
    AdmissibilityError,
    CFLError,
    ConfigError,
    SolverError,
    SubcharacteristicWarning,
)
from .fluxes import (
    InterfaceFlux,
    StarState,
    acoustic_impedance,
    fslp_flux,
    hllc_flux,
    low_mach_theta,
    star_states,
)
from .grid import (
    BoundarySpec,
    ConservativeState,
    Grid,
    PrimitiveState,
    admissibility_scan,
    apply_boundaries,
    cons_to_prim,
    prim_to_cons,
)
from .schemes import (
    SchemeConfig,
    StepReport,
    compute_dt,
    dt_fslp,
    dt_hllc,
    dt_oslp,
    entropy_residual,
    minmod,
    muscl_reconstruct,
    step,
    step_fslp,
    step_hllc,
    step_muscl_fslp,
    step_muscl_hllc,
    step_oslp,
)
from .riemann import RiemannSolution, sample_profile, solve_exact
from .cases import (
    CaseSpec,
    DiagnosticsReport,
    build_hydrostatic_profile,
    convergence_study,
    get_case,
    init_case,
    list_cases,
    run_case,
)
from .config import RunConfig, parse_config
from .output import read_csv, write_fields
from .perf import PerfRecord, perf_compare

__version__ = "0.1.0"
