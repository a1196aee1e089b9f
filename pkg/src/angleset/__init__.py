"""Convergence by angle and angle-set in simply connected domains.

Conformal maps and hyperbolic distances, model domains with horodisks,
geodesics, sectors and A-sets, harmonic measure, a convergence classifier
and Koenigs-model semigroups.
"""

__version__ = "0.1.0"

from .geometry import (  # noqa: E402
    BranchError,
    ConformalAtom,
    ConformalChain,
    DomainError,
    apply_chain,
    cayley,
    cayley_chain,
    exp_atom,
    hyperbolic_distance_disk,
    hyperbolic_distance_halfplane,
    log_atom,
    moebius,
    power,
    rotation,
    scaling,
    sector_straightening,
    translation,
)
from .domains import (  # noqa: E402
    BoundaryEnd,
    Horodisk,
    ModelDomain,
    SamplingError,
    SandwichVerdict,
    contains,
    domain_from_dict,
    halfplane_offset,
    horodisk_contains,
    radius_for_offset,
    sandwich_check,
)
from .sectors import (  # noqa: E402
    ASetSpec,
    ExhaustVerdict,
    Geodesic,
    HyperbolicSector,
    amplitude_R,
    aset_case,
    aset_contains,
    beta_from_amplitude,
    distance_to_geodesic,
    exhausts,
    half_component,
    sector_contains,
)
from .harmonic import (  # noqa: E402
    BoundarySet,
    LevelArc,
    MCEstimate,
    WalkRegion,
    exact_measure,
    hm_disk_arc,
    hm_halfplane_interval,
    hm_monte_carlo,
    hm_sector_side,
    level_set_arc,
    monotonicity_check,
    strong_markov_residual,
)
from .classify import (  # noqa: E402
    Classification,
    ClusterInterval,
    SequenceTrace,
    WrongEndError,
    angle_trace,
    angle_via_harmonic_measure,
    classify_convergence,
    cluster_interval,
    theorem_1_1_check,
)
from .semigroups import (  # noqa: E402
    HypothesisError,
    PreconditionError,
    SemigroupModel,
    classify_semigroup,
    corollary_4_1_predict,
    proposition_4_1_scenario,
    slope_cluster,
    trajectory,
    trajectory_record,
)
