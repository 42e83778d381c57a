"""tvspec: spectral polynomials, monodromy, and pre-modular forms for
elliptic finite-gap potentials on the torus C / (Z + Z*tau)."""

from .elliptic import (
    LatticeData,
    make_lattice,
    reduce_to_cell,
    wp,
    wp_half_shift,
    wp_prime,
    wp_second,
    zeta_w,
)
from .errors import (
    CheckError,
    NonConvergenceError,
    NotConstructibleError,
    PoleError,
    TvspecError,
)
from .heun import (
    TildeAlpha,
    coeff_sequence,
    heun_from_tuple,
    interlacing_check,
    p_polynomial,
)
from .hill import (
    Band,
    BandStructure,
    GLEProblem,
    MonodromyRecord,
    UnitarityRecord,
    commutator_check,
    delta_circle_mean,
    developing_map_periodicity,
    dual_torus_exclusion,
    floquet_pair,
    make_problem,
    monodromy,
    stability_set_1d,
    trace_on_grid,
    unitarity_grid,
    unitarity_probe,
)
from .poly import ComplexPoly, aberth_roots, coefficient_distance, match_roots
from .premodular import (
    F0Point,
    PreModularParams,
    boundary_nonvanishing_scan,
    boundary_tau_samples,
    classify_f0,
    gamma_weight_check,
    is_half_torsion,
    rs_grid_default,
    s_weight_identity,
    t_shift_identity,
    z_n,
    z_rs,
    zero_find,
    zero_find_multi,
)
from .spectral import (
    MultiplicityTuple,
    RootReport,
    ScanPoint,
    ScanResult,
    SpectralReport,
    condition_class,
    genus_of,
    modular_covariance_check,
    q_via_factorization,
    q_via_phi_ansatz,
    roots_and_classify,
    spectral_report,
    tau_scan,
)

__version__ = "0.1.0"

__all__ = [
    "Band",
    "BandStructure",
    "CheckError",
    "ComplexPoly",
    "F0Point",
    "GLEProblem",
    "LatticeData",
    "MonodromyRecord",
    "MultiplicityTuple",
    "NonConvergenceError",
    "NotConstructibleError",
    "PoleError",
    "PreModularParams",
    "RootReport",
    "ScanPoint",
    "ScanResult",
    "SpectralReport",
    "TildeAlpha",
    "TvspecError",
    "UnitarityRecord",
    "aberth_roots",
    "boundary_nonvanishing_scan",
    "boundary_tau_samples",
    "classify_f0",
    "coeff_sequence",
    "coefficient_distance",
    "commutator_check",
    "condition_class",
    "delta_circle_mean",
    "developing_map_periodicity",
    "dual_torus_exclusion",
    "floquet_pair",
    "gamma_weight_check",
    "genus_of",
    "heun_from_tuple",
    "interlacing_check",
    "is_half_torsion",
    "make_lattice",
    "make_problem",
    "match_roots",
    "modular_covariance_check",
    "monodromy",
    "p_polynomial",
    "q_via_factorization",
    "q_via_phi_ansatz",
    "reduce_to_cell",
    "roots_and_classify",
    "rs_grid_default",
    "s_weight_identity",
    "spectral_report",
    "stability_set_1d",
    "t_shift_identity",
    "tau_scan",
    "trace_on_grid",
    "unitarity_grid",
    "unitarity_probe",
    "wp",
    "wp_half_shift",
    "wp_prime",
    "wp_second",
    "z_n",
    "z_rs",
    "zero_find",
    "zero_find_multi",
    "zeta_w",
    "__version__",
]
