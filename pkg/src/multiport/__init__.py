"""Exact many-particle interference on multimode scattering setups.

Transition probabilities for distinguishable particles, bosons, and fermions
through an n-mode unitary, and the linear-time suppression-law predicates for
the Fourier (Bell) multiport.
"""

from .arrangements import (
    ArrangementClass,
    ModeOccupation,
    Periodicity,
    as_occupation,
    assignment_to_occupation,
    canonical_class,
    count_arrangements,
    detect_periodicity,
    enumerate_classes,
    enumerate_occupations,
    occupation_to_assignment,
)
from .errors import (
    InvalidArrangementError,
    InvalidFermionStateError,
    InvalidModeError,
    InvalidPeriodError,
    MatrixFileError,
    MultiportError,
    ParticleMismatchError,
    ShapeError,
    SizeError,
    SoundnessViolationError,
)
from .linalg import (
    determinant,
    fourier_matrix,
    is_fourier,
    is_unitary,
    permanent,
    permanent_naive,
    random_unitary,
    submatrix_for_transition,
)
from .scattering import (
    DistributionRow,
    DistributionTable,
    PhaseClassHistogram,
    Species,
    SymmetryCase,
    TransitionRecord,
    average_pauli_probability,
    correlation_boson_fermion,
    enhancement_ratio,
    equiprobable_estimate,
    histogram_boson_probability,
    histogram_fermion_probability,
    mixed_state_distribution,
    output_distribution,
    parse_species,
    phase_class_histogram,
    prob,
    prob_boson,
    prob_distinguishable,
    prob_fermion,
    single_particle_prob,
    symmetry_case_for,
    verify_phase_class_symmetry,
    zero_threshold,
)
from .suppression import (
    Direction,
    FermionCase,
    SuppressionVerdict,
    boson_suppressed,
    classify_transitions,
    fermion_suppressed,
    law_verdict,
    q_value,
)

__version__ = "0.1.0"
