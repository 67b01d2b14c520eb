from stats.permutation import (
    PermutationResult,
    StatsConfig,
    paired_permutation_test,
    unpaired_permutation_test,
)
from stats.agreement import AgreementReport, cohens_kappa, joint_error_rate
from stats.calibration import (
    CorrelationReport,
    confidence_agreement_correlation,
    scaled_margins,
    temperature_scale,
)

__all__ = [
    "PermutationResult",
    "StatsConfig",
    "paired_permutation_test",
    "unpaired_permutation_test",
    "AgreementReport",
    "cohens_kappa",
    "joint_error_rate",
    "CorrelationReport",
    "confidence_agreement_correlation",
    "scaled_margins",
    "temperature_scale",
]
