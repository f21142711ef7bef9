"""Entanglement and correlation measures for few-qubit pure states.

The package is organized as:

- ``statekit``: states, Haar sampling, partial trace, entropy, measurement;
- ``measures``: concurrence, entanglement of formation, monogamy residuals;
- ``correlations``: classical correlation, discord, entropy identities;
- ``montecarlo``: seeded bulk sweeps, extrema tracking, histogram/CSV export;
- ``catalog``: named reference states;
- ``cli``: the ``monogamy`` command-line tool;
- ``figures``: optional rendering of sweep outputs to image files.
"""

from .catalog import NAMED_STATE_NAMES, named_state
from .correlations import (
    ClassicalCorrelationResult,
    CorrelationBreakdown,
    IdentityReport,
    classical_correlation,
    conservation_residual,
    correlation_breakdown,
    kw_residual,
    mutual_information,
    quantum_discord,
    two_s1_identity_residual,
)
from .measures import (
    MonogamyReport,
    PairMeasures,
    binary_entropy,
    ckw_residual,
    concurrence_pure_bipartition,
    concurrence_two_qubit_mixed,
    ef_from_concurrence,
    monogamy_report,
    squared_ef_residual,
    tau_f,
)
from .montecarlo import (
    Histogram,
    RunConfig,
    RunSummary,
    SampleRecord,
    extremal_search,
    histogram,
    run_sweep,
    scatter_export,
)
from .statekit import (
    ConditionalOutcome,
    DensityMatrix,
    MeasurementBasis,
    NumericalValidityError,
    PureState,
    SeededRng,
    conditional_states,
    density_from_pure,
    haar_random_pure,
    hermitian_eigenvalues,
    load_state,
    partial_trace,
    save_state,
    state_from_json_dict,
    state_to_json_dict,
    von_neumann_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "NAMED_STATE_NAMES",
    "named_state",
    "ClassicalCorrelationResult",
    "CorrelationBreakdown",
    "IdentityReport",
    "classical_correlation",
    "conservation_residual",
    "correlation_breakdown",
    "kw_residual",
    "mutual_information",
    "quantum_discord",
    "two_s1_identity_residual",
    "MonogamyReport",
    "PairMeasures",
    "binary_entropy",
    "ckw_residual",
    "concurrence_pure_bipartition",
    "concurrence_two_qubit_mixed",
    "ef_from_concurrence",
    "monogamy_report",
    "squared_ef_residual",
    "tau_f",
    "Histogram",
    "RunConfig",
    "RunSummary",
    "SampleRecord",
    "extremal_search",
    "histogram",
    "run_sweep",
    "scatter_export",
    "ConditionalOutcome",
    "DensityMatrix",
    "MeasurementBasis",
    "NumericalValidityError",
    "PureState",
    "SeededRng",
    "conditional_states",
    "density_from_pure",
    "haar_random_pure",
    "hermitian_eigenvalues",
    "load_state",
    "partial_trace",
    "save_state",
    "state_from_json_dict",
    "state_to_json_dict",
    "von_neumann_entropy",
    "__version__",
]
