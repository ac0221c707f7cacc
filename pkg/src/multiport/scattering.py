"""Transition probabilities for distinguishable particles, bosons, and fermions.

Probabilities come from matrix functions of the N x N transition submatrix M:
permanent of the component-wise |M|^2 for distinguishable particles, |perm(M)|^2
for bosons, |det(M)|^2 for fermions, each with the occupation-factorial
prefactors.  The module also provides output distributions, mixed-state
averages, Pauli-pair statistics, and the exact integer phase-class histogram
used to cross-check bosonic/fermionic probabilities on the Fourier multiport.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .arrangements import (
    ArrangementClass,
    ModeOccupation,
    as_occupation,
    assignment_sum,
    count_arrangements,
    detect_periodicity,
    enumerate_classes,
    enumerate_occupations,
    occupation_to_assignment,
    orbit,
)
from .errors import (
    InvalidArrangementError,
    InvalidFermionStateError,
    ParticleMismatchError,
    ShapeError,
    SizeError,
)
from .linalg import is_fourier, submatrix_for_transition

MAX_HISTOGRAM_PARTICLES = 9  # N! path enumeration bound


class Species(enum.Enum):
    DISTINGUISHABLE = "distinguishable"
    BOSON = "boson"
    FERMION = "fermion"

    @property
    def letter(self) -> str:
        return {"distinguishable": "D", "boson": "B", "fermion": "F"}[self.value]


_SPECIES_ALIASES = {
    "d": Species.DISTINGUISHABLE,
    "dist": Species.DISTINGUISHABLE,
    "distinguishable": Species.DISTINGUISHABLE,
    "b": Species.BOSON,
    "boson": Species.BOSON,
    "bosons": Species.BOSON,
    "f": Species.FERMION,
    "fermion": Species.FERMION,
    "fermions": Species.FERMION,
}


def parse_species(value) -> Species:
    if isinstance(value, Species):
        return value
    key = str(value).strip().lower()
    if key not in _SPECIES_ALIASES:
        raise InvalidArrangementError(f"unknown species {value!r}")
    return _SPECIES_ALIASES[key]


def zero_threshold(n: int, N: int) -> float:
    """Scale-aware cutoff below which a probability counts as numerically zero.

    Relative to the uniform distinguishable scale N!/n^N.
    """
    return 1e-9 * float(math.factorial(N)) / float(n) ** N


def _fact_prod(counts: Iterable[int]) -> float:
    return float(math.prod(math.factorial(int(c)) for c in counts))


def single_particle_prob(u: np.ndarray, j: int, k: int) -> float:
    """|u[j,k]|^2 for 1-based mode indices."""
    a = np.asarray(u)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError("need a square matrix")
    n = a.shape[0]
    if not (1 <= j <= n and 1 <= k <= n):
        raise InvalidArrangementError(f"mode indices ({j},{k}) outside 1..{n}")
    return float(abs(a[j - 1, k - 1]) ** 2)


def prob_distinguishable(u: np.ndarray, r, s) -> float:
    """perm(|M|^2) / prod_j s_j!"""
    m = submatrix_for_transition(u, r, s)
    occ_s = as_occupation(s)
    value = kernels.permanent((np.abs(m) ** 2).astype(np.complex128)).real
    return float(value / _fact_prod(occ_s.counts))


def prob_boson(u: np.ndarray, r, s) -> float:
    """|perm(M)|^2 / (prod_j r_j! s_j!)"""
    occ_r, occ_s = as_occupation(r), as_occupation(s)
    m = submatrix_for_transition(u, occ_r, occ_s)
    value = abs(kernels.permanent(m.astype(np.complex128))) ** 2
    return float(value / (_fact_prod(occ_r.counts) * _fact_prod(occ_s.counts)))


def prob_fermion(u: np.ndarray, r, s) -> float:
    """|det(M)|^2; exactly 0 for any multiply-occupied output mode."""
    occ_r, occ_s = as_occupation(r), as_occupation(s)
    if not occ_r.is_pauli:
        raise InvalidFermionStateError(
            "fermionic input must have at most one particle per mode")
    if occ_r.total != occ_s.total:
        raise ParticleMismatchError(
            f"input has {occ_r.total} particles, output has {occ_s.total}")
    if not occ_s.is_pauli:
        return 0.0
    m = submatrix_for_transition(u, occ_r, occ_s)
    return float(abs(kernels.determinant(m.astype(np.complex128))) ** 2)


def prob(u: np.ndarray, r, s, species) -> float:
    species = parse_species(species)
    if species is Species.DISTINGUISHABLE:
        return prob_distinguishable(u, r, s)
    if species is Species.BOSON:
        return prob_boson(u, r, s)
    return prob_fermion(u, r, s)


# ---------------------------------------------------------------------------
# batch evaluation over many outputs (shared by distributions, grids, averages)
# ---------------------------------------------------------------------------

class OutputSet:
    """Precomputed metadata for a fixed list of output occupations."""

    def __init__(self, n: int, occupations: Sequence[ModeOccupation]):
        self.n = n
        self.occupations = list(occupations)
        b = len(self.occupations)
        width = self.occupations[0].total if b else 0
        self.d0 = np.zeros((b, width), dtype=np.int64)
        for i, occ in enumerate(self.occupations):
            self.d0[i] = np.asarray(occupation_to_assignment(occ), dtype=np.int64) - 1
        self.fact = np.array([_fact_prod(o.counts) for o in self.occupations])
        self.pauli = np.array([o.is_pauli for o in self.occupations], dtype=bool)

    @classmethod
    def all_outputs(cls, n: int, N: int, pauli_only: bool = False) -> "OutputSet":
        return cls(n, list(enumerate_occupations(n, N, pauli_only)))


def _batch_submatrices(u: np.ndarray, dr0: np.ndarray, d0: np.ndarray) -> np.ndarray:
    # mats[b, j, k] = u[dr0[j], d0[b, k]]
    picked = u[dr0]  # (N, n)
    return np.ascontiguousarray(np.moveaxis(picked[:, d0], 1, 0))


def batch_probabilities(u: np.ndarray, r, outputs: OutputSet, species) -> np.ndarray:
    """Probabilities from input r to every output in the set, in set order."""
    species = parse_species(species)
    occ_r = as_occupation(r, outputs.n)
    if species is Species.FERMION and not occ_r.is_pauli:
        raise InvalidFermionStateError(
            "fermionic input must have at most one particle per mode")
    b = len(outputs.occupations)
    out = np.zeros(b, dtype=np.float64)
    if b == 0:
        return out
    if outputs.occupations[0].total != occ_r.total:
        raise ParticleMismatchError("particle count differs between input and outputs")
    N = occ_r.total
    dr0 = np.asarray(occupation_to_assignment(occ_r), dtype=np.int64) - 1
    rfact = _fact_prod(occ_r.counts)

    if species is Species.FERMION:
        sel = np.flatnonzero(outputs.pauli)
        if len(sel) == 0:
            return out
        mats = _batch_submatrices(u, dr0, outputs.d0[sel])
        out[sel] = np.abs(kernels.batch_determinant(mats)) ** 2
        return out

    chunk = max(1, (1 << 21) // max(1, N * N))
    for lo in range(0, b, chunk):
        d0 = outputs.d0[lo:lo + chunk]
        mats = _batch_submatrices(u, dr0, d0)
        if species is Species.DISTINGUISHABLE:
            vals = kernels.batch_permanent((np.abs(mats) ** 2).astype(np.complex128)).real
            out[lo:lo + chunk] = vals / outputs.fact[lo:lo + chunk]
        else:
            vals = np.abs(kernels.batch_permanent(mats)) ** 2
            out[lo:lo + chunk] = vals / (rfact * outputs.fact[lo:lo + chunk])
    return out


# ---------------------------------------------------------------------------
# records and distribution tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TransitionRecord:
    """One classified transition of the inequivalent-class grid."""

    input: ModeOccupation
    output: ModeOccupation
    species: Species
    probability: float
    enhancement: float | None
    law: str  # "forward" | "reverse" | "none"
    tag: str  # "predicted_zero" | "unpredicted_zero" | "nonzero"


@dataclass(frozen=True)
class DistributionRow:
    output: ModeOccupation
    class_multiplicity: int
    probability: float
    enhancement: float | None
    law_suppressed: bool


@dataclass(frozen=True)
class DistributionTable:
    matrix_label: str
    species: Species
    input: ModeOccupation | None
    rows: tuple[DistributionRow, ...]

    def total_probability(self) -> float:
        return float(sum(row.probability for row in self.rows))

    def to_json_dict(self) -> dict:
        return {
            "matrix": self.matrix_label,
            "species": self.species.value,
            "input": self.input.to_string() if self.input is not None else None,
            "rows": [
                {
                    "output": row.output.to_string(),
                    "class_multiplicity": row.class_multiplicity,
                    "probability": round_sig(row.probability, 12),
                    "enhancement": None if row.enhancement is None else round_sig(row.enhancement, 6),
                    "law_suppressed": row.law_suppressed,
                }
                for row in self.rows
            ],
        }

    def to_csv_text(self) -> str:
        lines = [
            f"# matrix={self.matrix_label} species={self.species.value} "
            f"input={self.input.to_string() if self.input is not None else 'mixed'}",
            "output,class_multiplicity,probability,enhancement,law_suppressed",
        ]
        for row in self.rows:
            enh = "" if row.enhancement is None else format_sig(row.enhancement, 6)
            lines.append(
                f"\"{row.output.to_string()}\",{row.class_multiplicity},"
                f"{format_sig(row.probability, 12)},{enh},{str(row.law_suppressed).lower()}")
        return "\n".join(lines) + "\n"


def format_sig(x: float, digits: int) -> str:
    return f"{float(x):.{digits}g}"


def round_sig(x: float, digits: int) -> float:
    return float(format_sig(x, digits))


def enhancement_ratio(u: np.ndarray, r, s, species) -> float | None:
    """prob(species) / prob(distinguishable); None when the denominator is ~0."""
    species = parse_species(species)
    p = prob(u, r, s, species)
    p_d = prob_distinguishable(u, r, s)
    occ_r = as_occupation(r)
    if p_d < zero_threshold(as_occupation(s).n, occ_r.total):
        return None
    return float(p / p_d)


def _law_suppressed_flags(n: int, occ_r: ModeOccupation,
                          outs: Sequence[ModeOccupation], species: Species) -> list[bool]:
    from .suppression import law_verdict  # runtime import avoids a module cycle

    return [law_verdict(occ_r, occ_s, n, species).suppressed_by_law for occ_s in outs]


def _matrix_label(u: np.ndarray, label: str | None) -> str:
    if label is not None:
        return label
    n = np.asarray(u).shape[0]
    return f"fourier:{n}" if is_fourier(u) else f"custom:{n}"


def _rows_from_probs(
    n: int,
    N: int,
    outputs: OutputSet,
    p_species: np.ndarray,
    p_dist: np.ndarray,
    law_flags: list[bool] | None,
    group_by_class: bool,
) -> tuple[DistributionRow, ...]:
    thr = zero_threshold(n, N)
    index = {occ.counts: i for i, occ in enumerate(outputs.occupations)}
    rows = []
    if group_by_class:
        for cls in enumerate_classes(n, N, pauli_only=False):
            members = orbit(cls.representative)
            idxs = [index[m] for m in sorted(members) if m in index]
            p = float(sum(p_species[i] for i in idxs))
            pd = float(sum(p_dist[i] for i in idxs))
            enh = None if pd < thr else p / pd
            law = bool(law_flags[index[cls.representative.counts]]) if law_flags else False
            rows.append(DistributionRow(cls.representative, cls.members, p, enh, law))
    else:
        for i, occ in enumerate(outputs.occupations):
            pd = float(p_dist[i])
            enh = None if pd < thr else float(p_species[i]) / pd
            law = bool(law_flags[i]) if law_flags else False
            rows.append(DistributionRow(occ, 1, float(p_species[i]), enh, law))
    return tuple(rows)


def output_distribution(u: np.ndarray, r, species, group_by_class: bool = False,
                        matrix_label: str | None = None) -> DistributionTable:
    """Full output distribution for one input arrangement; sums to 1 over all rows."""
    species = parse_species(species)
    a = np.asarray(u, dtype=np.complex128)
    n = a.shape[0]
    occ_r = as_occupation(r, n)
    N = occ_r.total
    outputs = OutputSet.all_outputs(n, N)
    p_species = batch_probabilities(a, occ_r, outputs, species)
    if species is Species.DISTINGUISHABLE:
        p_dist = p_species
    else:
        p_dist = batch_probabilities(a, occ_r, outputs, Species.DISTINGUISHABLE)
    law_flags = None
    if N >= 1 and species is not Species.DISTINGUISHABLE and is_fourier(a):
        law_flags = _law_suppressed_flags(n, occ_r, outputs.occupations, species)
    rows = _rows_from_probs(n, N, outputs, p_species, p_dist, law_flags, group_by_class)
    return DistributionTable(_matrix_label(a, matrix_label), species, occ_r, rows)


def mixed_state_distribution(u: np.ndarray, N: int, species, pauli_only: bool = False,
                             group_by_class: bool = False,
                             matrix_label: str | None = None) -> DistributionTable:
    """Output distribution averaged over all nonequivalent initial arrangements.

    Class representatives enter with equal weight; for fermions the initial
    arrangements must be Pauli states, so pauli_only is required.
    """
    species = parse_species(species)
    a = np.asarray(u, dtype=np.complex128)
    n = a.shape[0]
    if species is Species.FERMION and not pauli_only:
        raise InvalidFermionStateError("fermionic mixtures need pauli_only=True")
    reps = enumerate_classes(n, N, pauli_only)
    if not reps:
        raise InvalidArrangementError(f"no arrangements for n={n}, N={N}, pauli_only={pauli_only}")
    outputs = OutputSet.all_outputs(n, N)
    acc = np.zeros(len(outputs.occupations))
    acc_d = np.zeros_like(acc)
    for cls in reps:
        acc += batch_probabilities(a, cls.representative, outputs, species)
        acc_d += batch_probabilities(a, cls.representative, outputs, Species.DISTINGUISHABLE)
    acc /= len(reps)
    acc_d /= len(reps)
    rows = _rows_from_probs(n, N, outputs, acc, acc_d, None, group_by_class)
    return DistributionTable(_matrix_label(a, matrix_label), species, None, rows)


def equiprobable_estimate(n: int, N: int, species) -> float:
    """1 / (number of accessible arrangements) for the species."""
    species = parse_species(species)
    tag = "F" if species is Species.FERMION else "B"
    count = count_arrangements(n, N, tag)
    if count == 0:
        raise InvalidArrangementError(f"no fermionic arrangements for n={n}, N={N}")
    return 1.0 / count


def average_pauli_probability(u: np.ndarray, N: int, species, by_class: bool = False) -> float:
    """Mean transition probability over ordered pairs of Pauli arrangements.

    By default every raw arrangement pair enters with equal weight; with
    by_class=True the mean runs over inequivalent class-representative pairs
    instead (one sample per class, ignoring orbit sizes).
    """
    species = parse_species(species)
    a = np.asarray(u, dtype=np.complex128)
    n = a.shape[0]
    if N > n:
        raise InvalidArrangementError(f"Pauli states need N <= n, got N={N}, n={n}")
    if by_class:
        pool = [cls.representative for cls in enumerate_classes(n, N, pauli_only=True)]
        outputs = OutputSet(n, pool)
    else:
        outputs = OutputSet.all_outputs(n, N, pauli_only=True)
        pool = outputs.occupations
    total = 0.0
    for occ_r in pool:
        total += float(batch_probabilities(a, occ_r, outputs, species).sum())
    return total / len(pool) ** 2


def correlation_boson_fermion(u: np.ndarray, N: int) -> float:
    """Pearson correlation of boson vs fermion enhancement over Pauli class pairs."""
    a = np.asarray(u, dtype=np.complex128)
    n = a.shape[0]
    reps = [cls.representative for cls in enumerate_classes(n, N, pauli_only=True)]
    outputs = OutputSet(n, reps)
    thr = zero_threshold(n, N)
    xs, ys = [], []
    for occ_r in reps:
        pb = batch_probabilities(a, occ_r, outputs, Species.BOSON)
        pf = batch_probabilities(a, occ_r, outputs, Species.FERMION)
        pd = batch_probabilities(a, occ_r, outputs, Species.DISTINGUISHABLE)
        ok = pd >= thr
        xs.append(pb[ok] / pd[ok])
        ys.append(pf[ok] / pd[ok])
    x = np.concatenate(xs)
    y = np.concatenate(ys)
    xm = x - x.mean()
    ym = y - y.mean()
    denom = math.sqrt(float((xm ** 2).sum()) * float((ym ** 2).sum()))
    if denom == 0.0:
        return float("nan")
    return float((xm * ym).sum() / denom)


# ---------------------------------------------------------------------------
# phase-class histogram (exact integer diagnostics on the Fourier multiport)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseClassHistogram:
    """Integer counts of many-particle paths per total-phase class mod n.

    c[k] counts permutations whose phase sum lands in class k; c_even/c_odd
    split by permutation parity; q is the law shift mod(m * sum d(s), n) with
    m the minimal period of the input.
    """

    n: int
    particles: int
    c: tuple[int, ...]
    c_even: tuple[int, ...]
    c_odd: tuple[int, ...]
    q: int

    def __post_init__(self) -> None:
        if tuple(ce + co for ce, co in zip(self.c_even, self.c_odd)) != self.c:
            raise InvalidArrangementError("parity split does not sum to the total counts")
        if sum(self.c) != math.factorial(self.particles):
            raise InvalidArrangementError("path counts must partition all N! permutations")


class SymmetryCase(enum.Enum):
    """Which exact bijection identity applies to a periodic-input histogram."""

    PARITY_KEPT = "parity_kept"      # bosons; fermions with N odd or N/p even
    PARITY_SWAPPED = "parity_swapped"  # fermions with N even and N/p odd


def symmetry_case_for(N: int, p: int) -> SymmetryCase:
    if N % 2 == 1 or (N // p) % 2 == 0:
        return SymmetryCase.PARITY_KEPT
    return SymmetryCase.PARITY_SWAPPED


def phase_class_histogram(n: int, r, s) -> PhaseClassHistogram:
    """Exact path counts by phase class for a Fourier-multiport transition."""
    occ_r = as_occupation(r, n)
    occ_s = as_occupation(s, n)
    if occ_r.total != occ_s.total:
        raise ParticleMismatchError("particle count differs")
    N = occ_r.total
    if N > MAX_HISTOGRAM_PARTICLES:
        raise SizeError(f"histogram enumeration capped at N={MAX_HISTOGRAM_PARTICLES}")
    dr = np.asarray(occupation_to_assignment(occ_r), dtype=np.int64)
    ds = np.asarray(occupation_to_assignment(occ_s), dtype=np.int64)
    counts = kernels.phase_counts(dr, ds, n)
    if N >= 1:
        m = detect_periodicity(occ_r).m
        q = (m * assignment_sum(occ_s)) % n
    else:
        q = 0
    c_even = tuple(int(x) for x in counts[0])
    c_odd = tuple(int(x) for x in counts[1])
    c = tuple(e + o for e, o in zip(c_even, c_odd))
    return PhaseClassHistogram(n=n, particles=N, c=c, c_even=c_even, c_odd=c_odd, q=q)


def histogram_boson_probability(hist: PhaseClassHistogram, r, s) -> float:
    """Reconstruct the bosonic probability from path counts alone."""
    occ_r, occ_s = as_occupation(r, hist.n), as_occupation(s, hist.n)
    omega = np.exp(2j * np.pi * np.arange(hist.n) / hist.n)
    amp = complex(np.dot(np.asarray(hist.c, dtype=np.float64), omega))
    norm = float(hist.n) ** hist.particles * _fact_prod(occ_r.counts) * _fact_prod(occ_s.counts)
    return float(abs(amp) ** 2 / norm)


def histogram_fermion_probability(hist: PhaseClassHistogram) -> float:
    """Reconstruct the fermionic probability (Pauli states) from path counts."""
    omega = np.exp(2j * np.pi * np.arange(hist.n) / hist.n)
    diff = np.asarray(hist.c_even, dtype=np.float64) - np.asarray(hist.c_odd, dtype=np.float64)
    amp = complex(np.dot(diff, omega))
    return float(abs(amp) ** 2 / float(hist.n) ** hist.particles)


def verify_phase_class_symmetry(hist: PhaseClassHistogram, case: SymmetryCase) -> bool:
    """Exact integer check of the class-shift identities for a periodic input."""
    q = hist.q % hist.n
    c = np.asarray(hist.c, dtype=np.int64)
    ce = np.asarray(hist.c_even, dtype=np.int64)
    co = np.asarray(hist.c_odd, dtype=np.int64)
    if case is SymmetryCase.PARITY_KEPT:
        return (
            np.array_equal(np.roll(c, -q), c)
            and np.array_equal(np.roll(ce, -q), ce)
            and np.array_equal(np.roll(co, -q), co)
        )
    return np.array_equal(np.roll(ce, -q), co) and np.array_equal(np.roll(co, -q), ce)
