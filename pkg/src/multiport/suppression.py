"""O(N) suppression-law predicates for the Fourier multiport.

A transition from an m-periodic input is strictly suppressed when the shift
Q = mod(m * sum_j d_j(s), n) misses the allowed value: 0 for bosons, and for
fermions 0 (N odd or N/p even) or n/2 (N even and N/p odd).  The predicate
is pure integer arithmetic; the input-output symmetry of the Fourier matrix
allows a second, reverse application with the roles of the arrangements
swapped.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ._parallel import map_slots
from .arrangements import (
    ModeOccupation,
    as_occupation,
    assignment_sum,
    detect_periodicity,
    enumerate_classes,
)
from .errors import (
    InvalidFermionStateError,
    InvalidPeriodError,
    ParticleMismatchError,
    SoundnessViolationError,
)
from .scattering import (
    OutputSet,
    Species,
    TransitionRecord,
    batch_probabilities,
    parse_species,
    zero_threshold,
)


class Direction(enum.Enum):
    FORWARD = "forward"
    REVERSE = "reverse"
    NONE = "none"


class FermionCase(enum.Enum):
    ODD_OR_EVEN_RATIO = "odd_or_even_ratio"  # N odd, or N/p even: suppressed iff Q != 0
    EVEN_ODD_RATIO = "even_odd_ratio"        # N even and N/p odd: suppressed iff Q != n/2
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class SuppressionVerdict:
    """Outcome of the law predicate for one transition.

    q_value, period_m, repetitions_p describe the arrangement the law was
    applied to: the input for a forward verdict, the output for a reverse
    one, and the forward attempt when nothing fired.
    """

    suppressed_by_law: bool
    direction: Direction
    q_value: int
    period_m: int
    repetitions_p: int
    fermion_case: FermionCase = FermionCase.NOT_APPLICABLE

    @property
    def applicable(self) -> bool:
        """False when neither arrangement is periodic (p=1 both ways)."""
        return self.repetitions_p > 1 or self.suppressed_by_law


def q_value(m: int, s, n: int) -> int:
    """mod(m * sum_j d_j(s), n) in exact integer arithmetic."""
    if n < 1 or m < 1 or n % m != 0:
        raise InvalidPeriodError(f"period m={m} does not divide n={n}")
    occ = as_occupation(s, n)
    return (m * assignment_sum(occ)) % n


def _check_pair(r, s, n: int) -> tuple[ModeOccupation, ModeOccupation]:
    occ_r = as_occupation(r, n)
    occ_s = as_occupation(s, n)
    if occ_r.total != occ_s.total:
        raise ParticleMismatchError(
            f"input has {occ_r.total} particles, output has {occ_s.total}")
    return occ_r, occ_s


def _boson_attempt(src: ModeOccupation, dst: ModeOccupation, n: int) -> tuple[bool, int, int, int]:
    per = detect_periodicity(src)
    q = q_value(per.m, dst, n)
    return q != 0, q, per.m, per.p


def boson_suppressed(r, s, n: int) -> SuppressionVerdict:
    """Forward law on the input's period, then the reverse with roles swapped."""
    occ_r, occ_s = _check_pair(r, s, n)
    fires, q, m, p = _boson_attempt(occ_r, occ_s, n)
    if fires:
        return SuppressionVerdict(True, Direction.FORWARD, q, m, p)
    rev_fires, rq, rm, rp = _boson_attempt(occ_s, occ_r, n)
    if rev_fires:
        return SuppressionVerdict(True, Direction.REVERSE, rq, rm, rp)
    return SuppressionVerdict(False, Direction.NONE, q, m, p)


def _fermion_attempt(src: ModeOccupation, dst: ModeOccupation,
                     n: int) -> tuple[bool, int, int, int, FermionCase]:
    per = detect_periodicity(src)
    q = q_value(per.m, dst, n)
    N = src.total
    if N % 2 == 1 or (N // per.p) % 2 == 0:
        return q != 0, q, per.m, per.p, FermionCase.ODD_OR_EVEN_RATIO
    # N even and N/p odd forces n even (p is even, n = m*p).
    return q != n // 2, q, per.m, per.p, FermionCase.EVEN_ODD_RATIO


def fermion_suppressed(r, s, n: int) -> SuppressionVerdict:
    """Parity-split law for Pauli-state pairs, forward then reverse."""
    occ_r, occ_s = _check_pair(r, s, n)
    if not occ_r.is_pauli or not occ_s.is_pauli:
        raise InvalidFermionStateError(
            "fermionic arrangements must have at most one particle per mode")
    fires, q, m, p, case = _fermion_attempt(occ_r, occ_s, n)
    if fires:
        return SuppressionVerdict(True, Direction.FORWARD, q, m, p, case)
    rev_fires, rq, rm, rp, rcase = _fermion_attempt(occ_s, occ_r, n)
    if rev_fires:
        return SuppressionVerdict(True, Direction.REVERSE, rq, rm, rp, rcase)
    return SuppressionVerdict(False, Direction.NONE, q, m, p, case)


def law_verdict(r, s, n: int, species) -> SuppressionVerdict:
    """Species dispatch; distinguishable particles (and N=0) get a none-verdict.

    A multiply-occupied fermionic output is zero by the exclusion principle,
    not by the interference law, so it also gets a none-verdict (the strict
    fermion_suppressed rejects it instead).
    """
    species = parse_species(species)
    occ_r = as_occupation(r, n)
    if species is Species.DISTINGUISHABLE or occ_r.total == 0:
        return SuppressionVerdict(False, Direction.NONE, 0, n, 1)
    if species is Species.BOSON:
        return boson_suppressed(occ_r, s, n)
    occ_s = as_occupation(s, n)
    if not occ_s.is_pauli:
        return SuppressionVerdict(False, Direction.NONE, 0, n, 1)
    return fermion_suppressed(occ_r, occ_s, n)


# ---------------------------------------------------------------------------
# exhaustive classification of inequivalent class pairs
# ---------------------------------------------------------------------------

def classify_grid(u: np.ndarray, n: int, N: int, species, pauli_only: bool = False,
                  threads: int | None = None,
                  ) -> tuple[list[TransitionRecord], list[TransitionRecord]]:
    """Classify every inequivalent (input, output) class pair under u.

    Returns (records, violations); a violation is a record whose exact
    probability stays above the zero threshold although the law predicted
    suppression.  Violations are possible only if u deviates from the exact
    Fourier matrix (or the law were unsound).
    """
    species = parse_species(species)
    if species is Species.FERMION and not pauli_only:
        raise InvalidFermionStateError("fermionic grids need pauli_only=True")
    classes = enumerate_classes(n, N, pauli_only)
    reps = [cls.representative for cls in classes]
    outputs = OutputSet(n, reps)
    thr = zero_threshold(n, N)

    def row(occ_r: ModeOccupation) -> list[TransitionRecord]:
        p_spec = batch_probabilities(u, occ_r, outputs, species)
        p_dist = batch_probabilities(u, occ_r, outputs, Species.DISTINGUISHABLE)
        records = []
        for i, occ_s in enumerate(reps):
            verdict = law_verdict(occ_r, occ_s, n, species)
            p = float(p_spec[i])
            if verdict.suppressed_by_law:
                tag = "predicted_zero" if p < thr else "soundness_violation"
            else:
                tag = "unpredicted_zero" if p < thr else "nonzero"
            enh = None if p_dist[i] < thr else float(p_spec[i] / p_dist[i])
            records.append(TransitionRecord(
                input=occ_r, output=occ_s, species=species, probability=p,
                enhancement=enh, law=verdict.direction.value, tag=tag))
        return records

    rows = map_slots(row, reps, threads)
    records = [rec for row_records in rows for rec in row_records]
    violations = [rec for rec in records if rec.tag == "soundness_violation"]
    return records, violations


def classify_transitions(n: int, N: int, species, pauli_only: bool = False,
                         threads: int | None = None) -> list[TransitionRecord]:
    """Law-vs-exact classification on the Fourier multiport.

    Tags every inequivalent class pair as predicted_zero, unpredicted_zero,
    or nonzero.  A law prediction contradicted by the exact probability
    raises SoundnessViolationError.
    """
    from .linalg import fourier_matrix

    records, violations = classify_grid(fourier_matrix(n), n, N, species, pauli_only, threads)
    if violations:
        worst = max(violations, key=lambda rec: rec.probability)
        raise SoundnessViolationError(
            f"{len(violations)} law-predicted transitions have nonzero probability; "
            f"worst: {worst.input.to_string()} -> {worst.output.to_string()} "
            f"p={worst.probability:.3e}")
    return records
