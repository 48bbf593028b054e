"""Root systems, trigonometric alcove potentials and their normal modes."""

from .equilibrium import (
    EquilibriumResult,
    MinimizeOptions,
    eigenvalues_sym,
    equilibrium_report,
    fit_proportionality,
    hessians_at,
    minimize,
)
from .errors import (
    DomainError,
    InternalClosureError,
    NoConvergence,
    NotSymmetric,
    SingularInput,
    UnsupportedRank,
)
from .rootsys import (
    Coupling,
    RCoefficients,
    RootSystemData,
    RootSystemId,
    RootVec,
    build_root_system,
    coroot,
    fundamental_weights,
    invariants_table,
    reflect,
    rho_and_r,
)
from .verify import (
    SpectrumQuery,
    VerificationReport,
    check_gap_consistency,
    check_identity,
    check_macdonald,
    check_theorem,
    run_all,
    spectrum,
)

__version__ = "0.1.0"
