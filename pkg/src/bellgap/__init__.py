"""Quantum correlations, local-hidden-variable mimicry, and Bell violation
for a pure entangled two-qubit state mixed with aligned product noise.
"""

__version__ = "0.1.0"

from .entanglement import (
    ProductDecomposition,
    PptVerdict,
    SuperpositionClass,
    admixture_entangled,
    admixture_pt_witnesses,
    family_entangled,
    family_pt_min_eigenvalue,
    is_product_pure,
    ppt_verdict,
    superposition_class,
    superposition_ket,
    tilted_product_ket,
    werner_entanglement_boundary,
)
from .lhv import (
    GENERATOR_ID,
    ExtendedStrategy,
    SampleStats,
    SeparableMimic,
    extend_model,
    fibonacci_directions,
    lhv_validity_bound,
    mimic_report,
    mimic_state,
    sample_rounds,
)
from .linalg import (
    BlochVector,
    CorrelationData,
    DensityMatrix,
    NumericalFailure,
    PureState,
    ValidityError,
    X_HAT,
    Y_HAT,
    Z_HAT,
    correlation,
    correlation_data,
    hermitian_eigenvalues,
    local_expectation,
    partial_trace,
    partial_transpose,
    pauli_observable,
    tensor_product,
)
from .polytope import (
    BehaviorTable,
    SettingsSearch,
    SettingsSet,
    TwoSettingResult,
    ViolationThreshold,
    VisibilityResult,
    audit_certificate,
    chsh_value,
    critical_visibility,
    optimize_settings,
    quantum_behavior,
    threshold_branch_crossings,
    two_setting_criterion,
    violation_threshold,
)
from .regions import (
    CSV_HEADER,
    LpSettings,
    RegionPoint,
    ScanConfig,
    ScanResult,
    check_point,
    classify_point,
    parse_csv,
    scan,
    write_csv,
    write_json,
)
from .states import (
    XI_MAX,
    FamilyParams,
    WernerParams,
    aligned_product_ket,
    entangled_ket,
    family_correlation,
    family_local_expectation,
    family_state,
    singlet,
    werner_state,
    werner_thresholds,
)

__all__ = [name for name in dir() if not name.startswith("_")]
