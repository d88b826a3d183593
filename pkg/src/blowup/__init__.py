"""Validated certification of finite-time blow-up for the discretized
exponential reaction-diffusion system, with rigorous blow-up-time enclosures.
"""

from .errors import (
    BlowupError,
    BudgetExhausted,
    DimensionError,
    DomainError,
    InputError,
    InsufficientData,
    ReframeNeeded,
    SingularityError,
    StepFailure,
    ValidationFailure,
)
from .certify import (
    BlowupCertificate,
    CertificationResult,
    CertifyOptions,
    RateFit,
    certify_blowup,
    rate_diagnostic,
    run_certification,
    tail_bound,
    trap_check,
)
from .integrator import (
    AugmentedState,
    EnclosureStep,
    IntegratorOptions,
    StopCondition,
    apriori_enclosure,
    integrate,
    step,
)
from .interval import Interval, IntervalMatrix, IntervalVector
from .lyapunov import (
    CandidateBox,
    LyapunovDomain,
    find_domain,
    lyapunov_value,
    validate_domain,
)
from .model import (
    CompactState,
    PhysState,
    ProblemParams,
    compactify,
    decompactify,
    desingularized_field,
    desingularized_jacobian,
    initial_data,
    original_field,
    time_dilation,
)
from .powexp import PowExpParams, powexp, powexp_deriv

__version__ = "0.1.0"

__all__ = [
    "AugmentedState",
    "BlowupCertificate",
    "BlowupError",
    "BudgetExhausted",
    "CandidateBox",
    "CertificationResult",
    "CertifyOptions",
    "CompactState",
    "DimensionError",
    "DomainError",
    "EnclosureStep",
    "InputError",
    "InsufficientData",
    "IntegratorOptions",
    "Interval",
    "IntervalMatrix",
    "IntervalVector",
    "LyapunovDomain",
    "PhysState",
    "PowExpParams",
    "ProblemParams",
    "RateFit",
    "ReframeNeeded",
    "SingularityError",
    "StepFailure",
    "StopCondition",
    "ValidationFailure",
    "apriori_enclosure",
    "certify_blowup",
    "compactify",
    "decompactify",
    "desingularized_field",
    "desingularized_jacobian",
    "find_domain",
    "initial_data",
    "integrate",
    "lyapunov_value",
    "original_field",
    "powexp",
    "powexp_deriv",
    "rate_diagnostic",
    "run_certification",
    "step",
    "tail_bound",
    "time_dilation",
    "trap_check",
    "validate_domain",
]
