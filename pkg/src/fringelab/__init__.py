"""Few-photon two-mode interferometry: Fock-state engine, linear optics, coherence metrics."""

from .coherence import (
    CoherenceReport,
    InterferencePattern,
    VisibilityEstimate,
    coherence_report,
    coherent_pattern,
    coherent_report,
    first_order_correlation,
    general_intensity_closed_form,
    phi_grid,
    scan_pattern,
    visibility_from_pattern,
)
from .fock import (
    FockState,
    OperatorPolynomial,
    apply_annihilation,
    apply_creation,
    fidelity,
    inner_product,
    normalize,
    normally_ordered_moment,
    project_vacuum,
    state_from_polynomial,
)
from .optics import (
    CircuitSpec,
    CoherentField,
    ModeTransform,
    balanced_splitter,
    coherent_to_fock,
    compose,
    phase_shifter,
    polarization_rotation,
    propagate_coherent,
    propagate_fock,
)
from .scenarios import (
    ScenarioResult,
    classical_channel_model,
    fig2_curve,
    interpolation_scenario,
    phased_interpolation_scenario,
    prepare_interpolation_state,
    young_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "CircuitSpec",
    "CoherenceReport",
    "CoherentField",
    "FockState",
    "InterferencePattern",
    "ModeTransform",
    "OperatorPolynomial",
    "ScenarioResult",
    "VisibilityEstimate",
    "apply_annihilation",
    "apply_creation",
    "balanced_splitter",
    "classical_channel_model",
    "coherence_report",
    "coherent_pattern",
    "coherent_report",
    "coherent_to_fock",
    "compose",
    "fidelity",
    "fig2_curve",
    "first_order_correlation",
    "general_intensity_closed_form",
    "inner_product",
    "interpolation_scenario",
    "normalize",
    "normally_ordered_moment",
    "phase_shifter",
    "phased_interpolation_scenario",
    "phi_grid",
    "polarization_rotation",
    "prepare_interpolation_state",
    "project_vacuum",
    "propagate_coherent",
    "propagate_fock",
    "scan_pattern",
    "state_from_polynomial",
    "visibility_from_pattern",
    "young_scenario",
]
