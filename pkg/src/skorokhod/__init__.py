"""Exact analysis of càdlàg step paths under the S, J1 and mJ1 topologies."""

from .core import (
    CMP_TOL,
    CadlagStep,
    IntegratorPath,
    MultiPath,
    PiecewiseLinear,
    eval_path,
    extend_integrator,
    extend_tilde,
    linear_combine,
    restrict,
    sup_distance,
    sup_norm,
    total_variation,
    total_variation_integrator,
)
from .errors import (
    ConfigurationError,
    DomainError,
    HorizonMismatchError,
    ParseError,
    PreconditionError,
    SkorokhodError,
)
from .functionals import (
    Quantization,
    oscillations,
    quantization_bound_check,
    quantize,
    upcrossings,
)
from .reports import CompactnessReport, ConvergenceReport
from .stieltjes import (
    IntegratorBank,
    IntegratorSequence,
    StieltjesMeasure,
    integrate_f_dv,
    integrate_x_dA,
    integration_by_parts_residual,
    primitive_of_density,
    tau_convergence_test,
    weak_star_test,
)
from .metrics import j1_distance_bounds, mj1_compactness_modulus, mj1_distance_bounds
from .witnesses import (
    UpcrossingWitness,
    figure1_spikes,
    figure2_jumps,
    lemma_upcrossing_witness,
    random_step_path,
    sawtooth,
    unboundedness_refuter,
)
from .convergence import (
    InfinitePathFamily,
    PathSequence,
    WitnessFamily,
    distance_convergence,
    infinite_horizon_s_test,
    kvpk_a_posteriori,
    multidim_s_test,
    relative_s_compactness,
    s_dual_test,
    s_witness_check,
    sigma_seminorm,
    uniform_seminorm_convergence,
)

from .config import RunConfig

__version__ = "0.1.0"
