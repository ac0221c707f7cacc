"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s``.  Tolerances are fixed
here: nothing is calibrated at runtime.
"""

import math
import time

import numpy as np
import pytest

from multiport.arrangements import (
    ModeOccupation,
    assignment_sum,
    count_arrangements,
    detect_periodicity,
    enumerate_classes,
    enumerate_occupations,
)
from multiport.linalg import (
    fourier_matrix,
    permanent,
    permanent_naive,
    random_unitary,
)
from multiport.scattering import (
    OutputSet,
    Species,
    average_pauli_probability,
    batch_probabilities,
    correlation_boson_fermion,
    equiprobable_estimate,
    histogram_boson_probability,
    mixed_state_distribution,
    output_distribution,
    phase_class_histogram,
    prob_boson,
    prob_fermion,
    symmetry_case_for,
    verify_phase_class_symmetry,
    zero_threshold,
)
from multiport.suppression import boson_suppressed, fermion_suppressed

RANDOM_SEEDS = (101, 102, 103, 104, 105)


def _report(num: int, name: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {num:02d} {name}: {'PASS' if ok else 'FAIL'} - {detail}", flush=True)
    assert ok, f"criterion {num} ({name}): {detail}"


def test_criterion_01_law_soundness_bosons():
    """Every law-predicted boson suppression is exactly suppressed, n<=8, N<=6."""
    violations = 0
    predicted = 0
    for n in range(1, 9):
        u = fourier_matrix(n)
        for N in range(1, 7):
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
    _report(1, "law-soundness-bosons", violations == 0,
            f"{predicted} predicted suppressions over all periodic inputs "
            f"(n<=8, N<=6), {violations} above threshold")


def test_criterion_02_law_soundness_fermions():
    """Every law-predicted fermion suppression is exactly suppressed, n<=10, N<=5."""
    violations = 0
    predicted = 0
    for n in range(1, 11):
        u = fourier_matrix(n)
        for N in range(1, min(5, n) + 1):
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
    _report(2, "law-soundness-fermions", violations == 0,
            f"{predicted} predicted suppressions over all Pauli pairs "
            f"(n<=10, N<=5), {violations} above threshold")


def test_criterion_03_multinomial_identity():
    """P_D equals N!/(n^N prod s_j!) within 1e-12 for all pairs, n<=6, N<=6."""
    worst = 0.0
    pairs = 0
    for n in range(1, 7):
        u = fourier_matrix(n)
        for N in range(0, 7):
            occs = list(enumerate_occupations(n, N))
            outs = OutputSet(n, occs)
            expected = math.factorial(N) / (float(n) ** N * outs.fact)
            for r in occs:
                got = batch_probabilities(u, r, outs, Species.DISTINGUISHABLE)
                worst = max(worst, float(np.abs(got - expected).max()))
                pairs += len(occs)
    _report(3, "multinomial-identity", worst <= 1e-12,
            f"max deviation {worst:.3e} over {pairs} pairs (tol 1e-12)")


def test_criterion_04_input_output_symmetry():
    """P(r,s) = P(s,r) on the Fourier matrix within 1e-10, n<=6, N<=5."""
    worst = 0.0
    for n in range(1, 7):
        u = fourier_matrix(n)
        for N in range(1, 6):
            occs = list(enumerate_occupations(n, N))
            outs = OutputSet(n, occs)
            grid = np.array([batch_probabilities(u, r, outs, Species.BOSON) for r in occs])
            worst = max(worst, float(np.abs(grid - grid.T).max()))
            pauli = [r for r in occs if r.is_pauli]
            if pauli:
                pouts = OutputSet(n, pauli)
                fgrid = np.array([batch_probabilities(u, r, pouts, Species.FERMION) for r in pauli])
                worst = max(worst, float(np.abs(fgrid - fgrid.T).max()))
    _report(4, "input-output-symmetry", worst <= 1e-10,
            f"max |P(r,s)-P(s,r)| = {worst:.3e} (tol 1e-10)")


def test_criterion_05_normalization():
    """Output distributions sum to 1 within 1e-9 for fourier and 5 random unitaries."""
    worst = 0.0
    for n in range(1, 7):
        matrices = [fourier_matrix(n)] + [random_unitary(n, s) for s in RANDOM_SEEDS]
        for N in range(0, 6):
            occs = list(enumerate_occupations(n, N))
            outs = OutputSet(n, occs)
            for u in matrices:
                for r in occs:
                    for sp in (Species.DISTINGUISHABLE, Species.BOSON):
                        worst = max(worst, abs(float(batch_probabilities(u, r, outs, sp).sum()) - 1.0))
                    if r.is_pauli:
                        worst = max(worst, abs(float(batch_probabilities(u, r, outs, Species.FERMION).sum()) - 1.0))
    _report(5, "normalization", worst <= 1e-9,
            f"max |sum - 1| = {worst:.3e} (tol 1e-9), n<=6, N<=5, 6 matrices per n")


def test_criterion_06_paper_numbers():
    """n=12, N=4 Fourier statistics reproduce the published values."""
    u = fourier_matrix(12)
    avg_d = average_pauli_probability(u, 4, Species.DISTINGUISHABLE)
    avg_f = average_pauli_probability(u, 4, Species.FERMION)
    avg_b_class = average_pauli_probability(u, 4, Species.BOSON, by_class=True)
    avg_b_raw = average_pauli_probability(u, 4, Species.BOSON)
    corr = correlation_boson_fermion(u, 4)
    ok_d = abs(avg_d - 1 / 864) <= 1e-12
    ok_f = abs(avg_f - 1 / 495) <= 1e-9
    ok_b = abs(avg_b_class - 7.50e-4) <= 0.05e-4
    ok_c = abs(corr - (-0.05)) <= 0.02
    _report(6, "pauli-averages-and-correlation", ok_d and ok_f and ok_b and ok_c,
            f"D {avg_d:.6e} (1/864, tol 1e-12); F {avg_f:.6e} (1/495, tol 1e-9); "
            f"B class-mean {avg_b_class:.6e} (7.50e-4 +- 0.05e-4, raw-mean {avg_b_raw:.6e}); "
            f"corr {corr:+.4f} (-0.05 +- 0.02)")


def test_criterion_07_class_counts():
    got6 = len(enumerate_classes(6, 6))
    got12 = len(enumerate_classes(12, 4, pauli_only=True))
    _report(7, "inequivalent-class-counts", got6 == 50 and got12 == 29,
            f"n=6,N=6: {got6} (want 50); n=12,N=4 Pauli: {got12} (want 29)")


def test_criterion_08_six_mode_reverse_law_triple():
    n = 6
    u = fourier_matrix(n)
    r1 = ModeOccupation((0, 1, 2, 0, 1, 2))
    r2 = ModeOccupation((0, 0, 3, 0, 0, 3))
    s = ModeOccupation((0, 2, 0, 2, 0, 2))
    v1 = boson_suppressed(r1, s, n)
    v2 = boson_suppressed(r2, s, n)
    p1 = prob_boson(u, r1, s)
    p2 = prob_boson(u, r2, s)
    thr = zero_threshold(n, 6)
    m1 = detect_periodicity(r1).m
    m2 = detect_periodicity(r2).m
    outs = list(enumerate_occupations(n, 6))
    set1 = {o.counts for o in outs if (m1 * assignment_sum(o)) % n != 0}
    set2 = {o.counts for o in outs if (m2 * assignment_sum(o)) % n != 0}
    ok = (v1.suppressed_by_law and v1.direction.value == "reverse" and v1.q_value == 2
          and p1 < thr
          and not v2.suppressed_by_law and p2 > thr
          and set1 == set2)
    _report(8, "six-mode-reverse-law-triple", ok,
            f"(0,1,2,0,1,2)->(0,2,0,2,0,2): {v1.direction.value}, Q={v1.q_value}, P={p1:.2e}; "
          f"(0,0,3,0,0,3): suppressed={v2.suppressed_by_law}, P={p2:.4f}; "
            f"forward sets equal: {set1 == set2}")


def test_criterion_09_two_mode_micro_suite():
    u = fourier_matrix(2)
    vals = [
        (prob_boson(u, (1, 1), (1, 1)), 0.0),
        (prob_boson(u, (1, 1), (2, 0)), 0.5),
        (prob_boson(u, (1, 1), (0, 2)), 0.5),
        (prob_fermion(u, (1, 1), (1, 1)), 1.0),
    ]
    worst = max(abs(got - want) for got, want in vals)
    _report(9, "two-mode-micro-suite", worst <= 1e-12,
            f"max deviation {worst:.3e} (tol 1e-12)")


def test_criterion_10_oracle_equivalence():
    rng = np.random.default_rng(2024)
    worst_perm = 0.0
    for n in range(2, 8):
        for _ in range(100):
            radius = np.sqrt(rng.uniform(0, 1, (n, n)))
            angle = rng.uniform(0, 2 * np.pi, (n, n))
            m = radius * np.exp(1j * angle)
            worst_perm = max(worst_perm, abs(permanent(m) - permanent_naive(m)))
    worst_hist = 0.0
    for n in range(2, 7):
        u = fourier_matrix(n)
        for N in range(1, 7):
            reps = [c.representative for c in enumerate_classes(n, N)]
            outs = OutputSet(n, reps)
            for r in reps:
                pb = batch_probabilities(u, r, outs, Species.BOSON)
                for i, s in enumerate(reps):
                    hist = phase_class_histogram(n, r, s)
                    worst_hist = max(worst_hist, abs(histogram_boson_probability(hist, r, s) - float(pb[i])))
    ok = worst_perm <= 1e-10 and worst_hist <= 1e-10
    _report(10, "oracle-equivalence", ok,
            f"permanent vs naive max dev {worst_perm:.3e}; "
            f"histogram reconstruction max dev {worst_hist:.3e} (tol 1e-10 each)")


def test_criterion_11_bijection_identities():
    checked = 0
    failures = 0
    for n in range(2, 7):
        for N in range(1, 7):
            occs = list(enumerate_occupations(n, N))
            for r in occs:
                per = detect_periodicity(r)
                if per.p == 1:
                    continue
                case = symmetry_case_for(N, per.p)
                for s in occs:
                    hist = phase_class_histogram(n, r, s)
                    checked += 1
                    if not verify_phase_class_symmetry(hist, case):
                        failures += 1
    _report(11, "phase-class-bijection-identities", failures == 0,
            f"{checked} periodic-input transitions checked with exact integers, {failures} failures")


def test_criterion_12_mixed_state_convergence():
    details = []
    ok = True
    for n, N, sp, pauli in [(6, 6, Species.BOSON, False),
                            (12, 4, Species.BOSON, True),
                            (12, 4, Species.FERMION, True)]:
        u = fourier_matrix(n)
        mix = mixed_state_distribution(u, N, sp, pauli_only=pauli)
        pe = equiprobable_estimate(n, N, sp)
        if sp is Species.FERMION:
            pe_vec = np.array([pe if row.output.is_pauli else 0.0 for row in mix.rows])
        else:
            pe_vec = np.full(len(mix.rows), pe)
        first_pauli = next(iter(enumerate_occupations(n, N, pauli_only=True)))
        dist = output_distribution(u, first_pauli, Species.DISTINGUISHABLE)
        mixp = np.array([row.probability for row in mix.rows])
        dp = np.array([row.probability for row in dist.rows])
        tvd_mix = 0.5 * float(np.abs(mixp - pe_vec).sum())
        tvd_d = 0.5 * float(np.abs(dp - pe_vec).sum())
        ok = ok and (tvd_mix < tvd_d)
        details.append(f"n={n},N={N},{sp.letter}: {tvd_mix:.4f} < {tvd_d:.4f}")
    _report(12, "mixed-state-convergence", ok, "; ".join(details))


def test_criterion_13_performance():
    rng = np.random.default_rng(99)
    a = (rng.standard_normal((20, 20)) + 1j * rng.standard_normal((20, 20))) / math.sqrt(2)
    permanent(a[:2, :2])  # warm the kernel path
    t0 = time.perf_counter()
    permanent(a)
    perm_s = time.perf_counter() - t0

    n = 100_000
    r = ModeOccupation((1,) * n)
    counts = np.zeros(n, dtype=np.int64)
    np.add.at(counts, np.random.default_rng(5).integers(0, n, size=n), 1)
    s = ModeOccupation(tuple(int(c) for c in counts))
    boson_suppressed(r, s, n)  # warm occupation caches
    t0 = time.perf_counter()
    boson_suppressed(r, s, n)
    law_ms = (time.perf_counter() - t0) * 1e3
    ok = perm_s < 5.0 and law_ms < 10.0
    _report(13, "performance", ok,
            f"20x20 permanent {perm_s:.2f}s (<5s); law predicate N=1e5 {law_ms:.2f}ms (<10ms)")
