"""Hardy-type nonlocality witnesses for three-qubit pure states.

The package classifies canonical-form three-qubit states, constructs
per-class measurement settings that realize (or, for maximally entangled
pairs, provably violate without realizing) the Hardy conditions, evaluates
the associated five-term Bell expression against its local-realism bound,
and computes threshold visibilities under white noise.
"""

__version__ = "0.1.0"

from .bell import (
    BELL_TERMS,
    BellReport,
    LhvAssignment,
    SampleStatistics,
    WHITE_NOISE_BELL_VALUE,
    bell_value,
    hardy_probabilities,
    joint_probability,
    lhv_hardy_pattern_assignments,
    lhv_minimum,
    sample_statistics,
)
from .errors import (
    ClassificationGapError,
    ClassificationOverlapError,
    ConstructionFailureError,
    DimensionError,
    Hardy3QError,
    NormalizationError,
    NoWitnessError,
    SpanError,
    VisibilityUndefinedError,
    WindowViolationError,
)
from .hardy import (
    HardyCertificate,
    WitnessConstruction,
    build_witness,
    construct_bipartite,
    construct_genuine,
    construct_maximal,
    pair_hardy_probability,
    search_hardy_observables,
    state_satisfying_hardy,
    verify_hardy,
)
from .linalg import (
    SchmidtDecomposition,
    orthogonal_complement_pick,
    projector,
    schmidt_decompose,
    tensor,
)
from .observables import (
    DichotomicObservable,
    MeasurementSettings,
    ObservablePair,
    observable_pair,
    settings_from_angles,
    settings_from_plus_kets,
)
from .states import (
    CanonicalState,
    NoisyState,
    StateClass,
    classify,
    classify_batch,
    mix_with_white_noise,
    normalized_canonical,
    random_canonical,
    sample_class,
    to_ket,
)
from .visibility import (
    FAMILIES,
    GridAxis,
    OptimizationResult,
    minimize_bell,
    scan_family,
    threshold_visibility,
    threshold_visibility_bisection,
)

__all__ = [
    "BELL_TERMS",
    "BellReport",
    "CanonicalState",
    "ClassificationGapError",
    "ClassificationOverlapError",
    "ConstructionFailureError",
    "DichotomicObservable",
    "DimensionError",
    "FAMILIES",
    "GridAxis",
    "Hardy3QError",
    "HardyCertificate",
    "LhvAssignment",
    "MeasurementSettings",
    "NoWitnessError",
    "NoisyState",
    "NormalizationError",
    "ObservablePair",
    "OptimizationResult",
    "SampleStatistics",
    "SchmidtDecomposition",
    "SpanError",
    "StateClass",
    "VisibilityUndefinedError",
    "WHITE_NOISE_BELL_VALUE",
    "WindowViolationError",
    "WitnessConstruction",
    "bell_value",
    "build_witness",
    "classify",
    "classify_batch",
    "construct_bipartite",
    "construct_genuine",
    "construct_maximal",
    "hardy_probabilities",
    "joint_probability",
    "lhv_hardy_pattern_assignments",
    "lhv_minimum",
    "minimize_bell",
    "mix_with_white_noise",
    "normalized_canonical",
    "observable_pair",
    "orthogonal_complement_pick",
    "pair_hardy_probability",
    "projector",
    "random_canonical",
    "sample_class",
    "sample_statistics",
    "scan_family",
    "schmidt_decompose",
    "search_hardy_observables",
    "settings_from_angles",
    "settings_from_plus_kets",
    "state_satisfying_hardy",
    "tensor",
    "threshold_visibility",
    "threshold_visibility_bisection",
    "to_ket",
    "verify_hardy",
]
