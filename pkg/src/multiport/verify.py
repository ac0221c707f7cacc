"""Verification suites behind the ``verify`` CLI command.

Each check recomputes a known identity (normalization, symmetry, oracle
agreement, law soundness, closed-form averages) and reports pass/fail with a
measured deviation.  ``perturb_phase`` injects a phase error into the Fourier
matrix as a negative control: a nonzero value must make the suite fail.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import linalg
from .arrangements import (
    ModeOccupation,
    count_arrangements,
    detect_periodicity,
    enumerate_classes,
    enumerate_occupations,
)
from .scattering import (
    OutputSet,
    Species,
    batch_probabilities,
    equiprobable_estimate,
    histogram_boson_probability,
    histogram_fermion_probability,
    phase_class_histogram,
    symmetry_case_for,
    verify_phase_class_symmetry,
    zero_threshold,
)
from .suppression import boson_suppressed, fermion_suppressed, law_verdict


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


class _Context:
    def __init__(self, seed: int, perturb_phase: float, threads: int | None):
        self.seed = seed
        self.perturb_phase = perturb_phase
        self.threads = threads

    def fourier(self, n: int) -> np.ndarray:
        u = linalg.fourier_matrix(n)
        if self.perturb_phase:
            u = u.copy()
            j = 1 if n >= 2 else 0  # a genuinely phase-carrying entry
            u[j, j] *= np.exp(1j * self.perturb_phase)
        return u


def _result(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), detail=detail)


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------

def check_class_counts(ctx: _Context) -> CheckResult:
    got6 = len(enumerate_classes(6, 6))
    got12 = len(enumerate_classes(12, 4, pauli_only=True))
    ok = got6 == 50 and got12 == 29
    return _result("inequivalent_class_counts",
                   ok, f"n=6,N=6: {got6} (want 50); n=12,N=4 Pauli: {got12} (want 29)")


def check_two_mode_pair(ctx: _Context) -> CheckResult:
    u = ctx.fourier(2)
    vals = {
        "B(1,1->1,1)": (batch_probabilities(u, (1, 1), OutputSet(2, [ModeOccupation((1, 1))]), "B")[0], 0.0),
        "B(1,1->2,0)": (batch_probabilities(u, (1, 1), OutputSet(2, [ModeOccupation((2, 0))]), "B")[0], 0.5),
        "B(1,1->0,2)": (batch_probabilities(u, (1, 1), OutputSet(2, [ModeOccupation((0, 2))]), "B")[0], 0.5),
        "F(1,1->1,1)": (batch_probabilities(u, (1, 1), OutputSet(2, [ModeOccupation((1, 1))]), "F")[0], 1.0),
    }
    dev = max(abs(got - want) for got, want in vals.values())
    return _result("two_particle_two_mode_pair", dev <= 1e-12, f"max deviation {dev:.3e} (tol 1e-12)")


def check_fourier_unitarity(ctx: _Context, nmax: int = 8) -> CheckResult:
    worst = 0.0
    for n in range(1, nmax + 1):
        u = ctx.fourier(n)
        worst = max(worst, float(np.abs(u @ u.conj().T - np.eye(n)).max()))
        # inverse equals the entrywise conjugate for this matrix family
        worst = max(worst, float(np.abs(u @ u.conj() - np.eye(n)).max()))
    return _result("fourier_unitarity_and_conjugate_inverse", worst <= 1e-12,
                   f"max deviation {worst:.3e} (tol 1e-12)")


def check_multinomial(ctx: _Context, nmax: int, Nmax: int) -> CheckResult:
    worst = 0.0
    for n in range(1, nmax + 1):
        u = ctx.fourier(n)
        for N in range(0, Nmax + 1):
            occs = list(enumerate_occupations(n, N))
            outs = OutputSet(n, occs)
            expected = np.array([
                math.factorial(N) / (float(n) ** N * outs.fact[i])
                for i in range(len(occs))
            ])
            for r in occs:
                got = batch_probabilities(u, r, outs, Species.DISTINGUISHABLE)
                worst = max(worst, float(np.abs(got - expected).max()))
    return _result("multinomial_identity", worst <= 1e-12,
                   f"max deviation {worst:.3e} (tol 1e-12), n<={nmax}, N<={Nmax}")


def check_input_output_symmetry(ctx: _Context, nmax: int, Nmax: int) -> CheckResult:
    worst = 0.0
    for n in range(1, nmax + 1):
        u = ctx.fourier(n)
        for N in range(1, Nmax + 1):
            occs = list(enumerate_occupations(n, N))
            outs = OutputSet(n, occs)
            pb = np.array([batch_probabilities(u, r, outs, Species.BOSON) for r in occs])
            worst = max(worst, float(np.abs(pb - pb.T).max()))
            pauli = [r for r in occs if r.is_pauli]
            if pauli:
                pouts = OutputSet(n, pauli)
                pf = np.array([batch_probabilities(u, r, pouts, Species.FERMION) for r in pauli])
                worst = max(worst, float(np.abs(pf - pf.T).max()))
    return _result("input_output_symmetry", worst <= 1e-10,
                   f"max deviation {worst:.3e} (tol 1e-10), n<={nmax}, N<={Nmax}")


def check_normalization(ctx: _Context, nmax: int, Nmax: int, random_count: int) -> CheckResult:
    worst = 0.0
    for n in range(1, nmax + 1):
        matrices = [ctx.fourier(n)]
        matrices += [linalg.random_unitary(n, ctx.seed + i) for i in range(random_count)]
        for N in range(0, Nmax + 1):
            occs = list(enumerate_occupations(n, N))
            outs = OutputSet(n, occs)
            for u in matrices:
                for r in occs:
                    for sp in (Species.DISTINGUISHABLE, Species.BOSON):
                        worst = max(worst, abs(float(batch_probabilities(u, r, outs, sp).sum()) - 1.0))
                    if r.is_pauli:
                        worst = max(worst, abs(float(batch_probabilities(u, r, outs, Species.FERMION).sum()) - 1.0))
    return _result("output_normalization", worst <= 1e-9,
                   f"max |sum-1| {worst:.3e} (tol 1e-9), n<={nmax}, N<={Nmax}, "
                   f"fourier + {random_count} random unitaries")


def check_permanent_oracle(ctx: _Context, sizes: Sequence[int], count: int) -> CheckResult:
    rng = np.random.default_rng(ctx.seed)
    worst = 0.0
    for n in sizes:
        for _ in range(count):
            radius = np.sqrt(rng.uniform(0.0, 1.0, (n, n)))
            angle = rng.uniform(0.0, 2.0 * np.pi, (n, n))
            m = radius * np.exp(1j * angle)  # entries in the unit disk
            worst = max(worst, abs(linalg.permanent(m) - linalg.permanent_naive(m)))
    return _result("permanent_vs_naive_oracle", worst <= 1e-10,
                   f"max |difference| {worst:.3e} (tol 1e-10), sizes {list(sizes)}, {count} each")


def check_histogram_reconstruction(ctx: _Context, nmax: int, Nmax: int) -> CheckResult:
    worst = 0.0
    for n in range(2, nmax + 1):
        u = ctx.fourier(n)
        for N in range(1, Nmax + 1):
            reps = [cls.representative for cls in enumerate_classes(n, N)]
            outs = OutputSet(n, reps)
            for r in reps:
                pb = batch_probabilities(u, r, outs, Species.BOSON)
                pf = (batch_probabilities(u, r, outs, Species.FERMION)
                      if r.is_pauli else None)
                for i, s in enumerate(reps):
                    hist = phase_class_histogram(n, r, s)
                    worst = max(worst, abs(histogram_boson_probability(hist, r, s) - float(pb[i])))
                    if pf is not None and s.is_pauli:
                        worst = max(worst, abs(histogram_fermion_probability(hist) - float(pf[i])))
    return _result("histogram_reconstruction", worst <= 1e-10,
                   f"max |difference| {worst:.3e} (tol 1e-10), n<={nmax}, N<={Nmax}")


def check_bijection_identities(ctx: _Context, nmax: int, Nmax: int) -> CheckResult:
    failures = 0
    checked = 0
    for n in range(2, nmax + 1):
        for N in range(1, Nmax + 1):
            occs = list(enumerate_occupations(n, N))
            periodic = [r for r in occs if detect_periodicity(r).p > 1]
            for r in periodic:
                p = detect_periodicity(r).p
                case = symmetry_case_for(N, p)
                for s in occs:
                    hist = phase_class_histogram(n, r, s)
                    checked += 1
                    if not verify_phase_class_symmetry(hist, case):
                        failures += 1
    return _result("phase_class_bijection_identities", failures == 0,
                   f"{checked} periodic-input transitions checked exactly, {failures} failures")


def check_law_soundness_boson(ctx: _Context, nmax: int, Nmax: int) -> CheckResult:
    violations = 0
    predicted = 0
    for n in range(1, nmax + 1):
        u = ctx.fourier(n)
        for N in range(1, Nmax + 1):
            occs = list(enumerate_occupations(n, N))
            periodic = [r for r in occs if detect_periodicity(r).p > 1]
            if not periodic:
                continue
            outs = OutputSet(n, occs)
            thr = zero_threshold(n, N)
            for r in periodic:
                pb = batch_probabilities(u, r, outs, Species.BOSON)
                for i, s in enumerate(occs):
                    if boson_suppressed(r, s, n).suppressed_by_law:
                        predicted += 1
                        if pb[i] >= thr:
                            violations += 1
    return _result("law_soundness_boson", violations == 0,
                   f"{predicted} predicted suppressions, {violations} violations, n<={nmax}, N<={Nmax}")


def check_law_soundness_fermion(ctx: _Context, nmax: int, Nmax: int) -> CheckResult:
    violations = 0
    predicted = 0
    for n in range(1, nmax + 1):
        u = ctx.fourier(n)
        for N in range(1, min(Nmax, n) + 1):
            occs = list(enumerate_occupations(n, N, pauli_only=True))
            if not occs:
                continue
            outs = OutputSet(n, occs)
            thr = zero_threshold(n, N)
            for r in occs:
                pf = batch_probabilities(u, r, outs, Species.FERMION)
                for i, s in enumerate(occs):
                    if fermion_suppressed(r, s, n).suppressed_by_law:
                        predicted += 1
                        if pf[i] >= thr:
                            violations += 1
    return _result("law_soundness_fermion", violations == 0,
                   f"{predicted} predicted suppressions, {violations} violations, n<={nmax}, N<={Nmax}")


def check_reverse_law_case(ctx: _Context) -> CheckResult:
    n = 6
    u = ctx.fourier(n)
    r1, r2 = ModeOccupation((0, 1, 2, 0, 1, 2)), ModeOccupation((0, 0, 3, 0, 0, 3))
    s = ModeOccupation((0, 2, 0, 2, 0, 2))
    v1 = boson_suppressed(r1, s, n)
    v2 = boson_suppressed(r2, s, n)
    outs = OutputSet(n, [s])
    p1 = float(batch_probabilities(u, r1, outs, Species.BOSON)[0])
    p2 = float(batch_probabilities(u, r2, outs, Species.BOSON)[0])
    thr = zero_threshold(n, 6)
    all_outs = list(enumerate_occupations(n, 6))
    m1, m2 = detect_periodicity(r1).m, detect_periodicity(r2).m

    def forward_set(m):
        return frozenset(o.counts for o in all_outs
                         if (m * sum((j + 1) * c for j, c in enumerate(o.counts))) % n != 0)

    ok = (
        v1.suppressed_by_law and v1.direction.value == "reverse" and v1.q_value == 2
        and p1 < thr
        and not v2.suppressed_by_law and p2 > thr
        and forward_set(m1) == forward_set(m2)
    )
    return _result("reverse_direction_case_n6", ok,
                   f"reverse verdict q={v1.q_value}, p1={p1:.2e}, p2={p2:.4f}, "
                   f"forward sets equal: {forward_set(m1) == forward_set(m2)}")


def check_pauli_average_distinguishable(ctx: _Context) -> CheckResult:
    from .scattering import average_pauli_probability

    got = average_pauli_probability(ctx.fourier(12), 4, Species.DISTINGUISHABLE)
    dev = abs(got - 1.0 / 864.0)
    return _result("pauli_average_distinguishable", dev <= 1e-12,
                   f"{got:.12e} vs 1/864, deviation {dev:.3e} (tol 1e-12)")


def check_pauli_average_fermion(ctx: _Context) -> CheckResult:
    from .scattering import average_pauli_probability

    got = average_pauli_probability(ctx.fourier(12), 4, Species.FERMION)
    dev = abs(got - 1.0 / 495.0)
    return _result("pauli_average_fermion", dev <= 1e-9,
                   f"{got:.12e} vs 1/495, deviation {dev:.3e} (tol 1e-9)")


def check_pauli_average_boson(ctx: _Context) -> CheckResult:
    from .scattering import average_pauli_probability

    by_class = average_pauli_probability(ctx.fourier(12), 4, Species.BOSON, by_class=True)
    raw = average_pauli_probability(ctx.fourier(12), 4, Species.BOSON)
    dev = abs(by_class - 7.50e-4)
    return _result("pauli_average_boson", dev <= 0.05e-4,
                   f"class-pair mean {by_class:.6e} (want 7.50e-4 +- 0.05e-4); raw-pair mean {raw:.6e}")


def check_enhancement_correlation(ctx: _Context) -> CheckResult:
    from .scattering import correlation_boson_fermion

    got = correlation_boson_fermion(ctx.fourier(12), 4)
    ok = abs(got - (-0.05)) <= 0.02
    return _result("enhancement_correlation", ok, f"{got:.4f} (want -0.05 +- 0.02)")


def check_mixed_convergence(ctx: _Context) -> CheckResult:
    from .scattering import mixed_state_distribution, output_distribution

    details = []
    ok = True
    cases = [(6, 6, Species.BOSON, False), (12, 4, Species.BOSON, True), (12, 4, Species.FERMION, True)]
    for n, N, sp, pauli in cases:
        u = ctx.fourier(n)
        mix = mixed_state_distribution(u, N, sp, pauli_only=pauli)
        pe = equiprobable_estimate(n, N, sp)
        if sp is Species.FERMION:
            pe_vec = np.array([pe if row.output.is_pauli else 0.0 for row in mix.rows])
        else:
            pe_vec = np.full(len(mix.rows), pe)
        uniform_in = next(iter(enumerate_occupations(n, N, pauli_only=True)))
        dist = output_distribution(u, uniform_in, Species.DISTINGUISHABLE)
        mixp = np.array([row.probability for row in mix.rows])
        dp = np.array([row.probability for row in dist.rows])
        tvd_mix = 0.5 * float(np.abs(mixp - pe_vec).sum())
        tvd_d = 0.5 * float(np.abs(dp - pe_vec).sum())
        ok = ok and tvd_mix < tvd_d
        details.append(f"n={n},N={N},{sp.letter}: TVD(mix)={tvd_mix:.4f} < TVD(D)={tvd_d:.4f}: {tvd_mix < tvd_d}")
    return _result("mixed_state_convergence", ok, "; ".join(details))


def check_performance(ctx: _Context) -> CheckResult:
    rng = np.random.default_rng(ctx.seed)
    a = (rng.standard_normal((20, 20)) + 1j * rng.standard_normal((20, 20))) / math.sqrt(2)
    linalg.permanent(a[:2, :2])  # warm the kernel
    t0 = time.perf_counter()
    linalg.permanent(a)
    perm_s = time.perf_counter() - t0

    n = 100_000
    r = ModeOccupation((1,) * n)
    counts = np.zeros(n, dtype=np.int64)
    idx = np.random.default_rng(ctx.seed + 1).integers(0, n, size=n)
    np.add.at(counts, idx, 1)
    s = ModeOccupation(tuple(int(c) for c in counts))
    boson_suppressed(r, s, n)  # warm caches outside the timed call
    t0 = time.perf_counter()
    boson_suppressed(r, s, n)
    law_ms = (time.perf_counter() - t0) * 1e3
    ok = perm_s < 5.0 and law_ms < 10.0
    return _result("performance_bounds", ok,
                   f"20x20 permanent {perm_s:.2f}s (<5s); law predicate N=1e5 {law_ms:.2f}ms (<10ms)")


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

SUITES = ("quick", "full", "paper-numbers")


def _suite_checks(suite: str) -> list[Callable[[_Context], CheckResult]]:
    numbers = [
        check_class_counts,
        check_pauli_average_distinguishable,
        check_pauli_average_fermion,
        check_pauli_average_boson,
        check_enhancement_correlation,
    ]
    if suite == "paper-numbers":
        return numbers
    if suite == "quick":
        return [
            check_class_counts,
            check_two_mode_pair,
            check_fourier_unitarity,
            check_reverse_law_case,
            lambda ctx: check_multinomial(ctx, 4, 3),
            lambda ctx: check_input_output_symmetry(ctx, 4, 3),
            lambda ctx: check_normalization(ctx, 4, 3, 2),
            lambda ctx: check_permanent_oracle(ctx, (2, 3, 4, 5), 20),
            lambda ctx: check_histogram_reconstruction(ctx, 4, 4),
            lambda ctx: check_bijection_identities(ctx, 5, 4),
            lambda ctx: check_law_soundness_boson(ctx, 6, 4),
            lambda ctx: check_law_soundness_fermion(ctx, 6, 4),
        ]
    if suite == "full":
        return [
            check_class_counts,
            check_two_mode_pair,
            check_fourier_unitarity,
            check_reverse_law_case,
            lambda ctx: check_multinomial(ctx, 6, 6),
            lambda ctx: check_input_output_symmetry(ctx, 6, 5),
            lambda ctx: check_normalization(ctx, 6, 5, 5),
            lambda ctx: check_permanent_oracle(ctx, (2, 3, 4, 5, 6, 7), 100),
            lambda ctx: check_histogram_reconstruction(ctx, 6, 6),
            lambda ctx: check_bijection_identities(ctx, 6, 6),
            lambda ctx: check_law_soundness_boson(ctx, 8, 6),
            lambda ctx: check_law_soundness_fermion(ctx, 10, 5),
            check_mixed_convergence,
            check_performance,
        ] + numbers[1:]
    raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")


def run_suite(suite: str, seed: int = 1, perturb_phase: float = 0.0,
              threads: int | None = None) -> list[CheckResult]:
    ctx = _Context(seed=seed, perturb_phase=perturb_phase, threads=threads)
    return [check(ctx) for check in _suite_checks(suite)]
