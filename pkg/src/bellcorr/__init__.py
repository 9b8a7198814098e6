"""Spin-correlation models, CHSH tests and a search for CHSH tests on which a
correlation function is less nonlocal than the quantum singlet."""

from .chsh import (
    AxisQuadruple,
    ChshRecord,
    Family,
    chsh1,
    chsh2,
    chsh_general,
    maximize_chsh,
    scan,
)
from .domination import (
    ContractionCertificate,
    DominationVerdict,
    contraction_certificate,
    find_domination_witness,
    sign_consistency_check,
    theorem_iteration_bound,
    verify_witness,
)
from .errors import (
    BellCorrError,
    ConfigurationError,
    DomainError,
    InconclusiveError,
    InputError,
    ModelIntegrityError,
)
from .models import (
    COSINE,
    CUBIC,
    LINEAR,
    CorrelationModel,
    FlippedSinglet,
    HemisphereStrategy,
    JointDistribution,
    LhvMixture,
    PRBox,
    PRProfile,
    Singlet,
    Tabulated,
    joint_distribution,
    lhv_mixture_correlation,
    pr_correlation,
    singlet_correlation,
    tabulated_from_samples,
)
from .montecarlo import (
    ExperimentConfig,
    ExperimentEstimate,
    estimate_to_model,
    run_experiment,
    sample_axis_pair,
    sample_outcomes,
)

__version__ = "0.1.0"
