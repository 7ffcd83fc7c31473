"""Local invariants of two-qubit gates and the binding number eta."""

__version__ = "0.1.0"

from .errors import GateBindError, NumericalError, UsageError
from .eta import (
    EtaReport,
    GeneratorBasis,
    WMatrix,
    eta_analytic,
    eta_numeric,
    eta_spectral,
    eta_table,
    gate_count_lower_bound,
    generator_basis,
    w_matrix,
)
from .gates import (
    CanonicalParams,
    GateKind,
    GateMatrix,
    GateSpec,
    LocalGate,
    build_named,
    canonical_gate,
    dress,
    random_local,
    random_su,
    tensor_local,
)
from .invariants import (
    MakhlinInvariants,
    WeylRegion,
    canonical_from_gate,
    classify_region,
    locally_equivalent,
    makhlin_from_canonical,
    makhlin_from_gate,
    weyl_reduce,
)
from .numkernel import DEFAULT_TOLERANCE, TolerancePolicy
