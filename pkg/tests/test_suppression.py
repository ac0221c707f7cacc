import time

import numpy as np
import pytest

from multiport.arrangements import (
    ModeOccupation,
    assignment_sum,
    detect_periodicity,
    enumerate_occupations,
)
from multiport.errors import InvalidFermionStateError, InvalidPeriodError
from multiport.linalg import fourier_matrix
from multiport.scattering import OutputSet, batch_probabilities, zero_threshold
from multiport.suppression import (
    Direction,
    FermionCase,
    boson_suppressed,
    classify_grid,
    classify_transitions,
    fermion_suppressed,
    law_verdict,
    q_value,
)


def test_q_value_examples():
    assert q_value(2, (0, 1, 2, 0, 1, 2), 6) == 2  # 2 * 25 = 50 = 2 mod 6
    assert q_value(1, (1, 1), 2) == 1
    assert q_value(6, (0, 1, 2, 0, 1, 2), 6) == 0
    with pytest.raises(InvalidPeriodError):
        q_value(4, (1, 1, 1, 1, 1, 1), 6)


def test_boson_law_two_modes():
    v = boson_suppressed((1, 1), (1, 1), 2)
    assert v.suppressed_by_law and v.direction is Direction.FORWARD
    assert (v.q_value, v.period_m, v.repetitions_p) == (1, 1, 2)


def test_boson_law_six_mode_triple():
    v = boson_suppressed((0, 1, 2, 0, 1, 2), (0, 2, 0, 2, 0, 2), 6)
    assert v.suppressed_by_law and v.direction is Direction.REVERSE
    assert v.q_value == 2 and v.period_m == 2 and v.repetitions_p == 3

    v = boson_suppressed((0, 0, 3, 0, 0, 3), (0, 2, 0, 2, 0, 2), 6)
    assert not v.suppressed_by_law and v.direction is Direction.NONE

    # same forward verdicts for both inputs: the law sees only the period
    outs = list(enumerate_occupations(6, 6))
    m1 = detect_periodicity((0, 1, 2, 0, 1, 2)).m
    m2 = detect_periodicity((0, 0, 3, 0, 0, 3)).m
    set1 = {s.counts for s in outs if q_value(m1, s, 6) != 0}
    set2 = {s.counts for s in outs if q_value(m2, s, 6) != 0}
    assert m1 == m2 == 3 and set1 == set2


def test_boson_law_aperiodic_never_fires_forward():
    r = (2, 1, 0, 5, 0, 2)
    assert detect_periodicity(r).p == 1
    for s in list(enumerate_occupations(6, 10))[:50]:
        v = boson_suppressed(r, s, 6)
        if v.suppressed_by_law:
            assert v.direction is Direction.REVERSE
    # aperiodic both ways: not applicable
    v = boson_suppressed((2, 1, 0, 5, 0, 2), (2, 1, 0, 5, 0, 2), 6)
    assert not v.suppressed_by_law and not v.applicable


def test_fermion_law_two_modes():
    # N=2 even, p=2, N/p=1 odd: suppressed iff Q != n/2; Q=1=n/2, so not suppressed
    v = fermion_suppressed((1, 1), (1, 1), 2)
    assert not v.suppressed_by_law
    assert v.fermion_case is FermionCase.EVEN_ODD_RATIO
    with pytest.raises(InvalidFermionStateError):
        fermion_suppressed((1, 1), (2, 0), 2)
    with pytest.raises(InvalidFermionStateError):
        fermion_suppressed((2, 0), (1, 1), 2)


def test_fermion_law_case_split_twelve_modes():
    # input built from pattern (0,0,1): m=3, p=4, N=4 even, N/p=1 odd -> n/2 rule
    r = (0, 0, 1) * 4
    v = fermion_suppressed(r, (1, 1, 1, 1) + (0,) * 8, 12)
    assert v.fermion_case is FermionCase.EVEN_ODD_RATIO
    # patterns of length 6 give m=6, p=2, N/p=2 even -> shared rule with bosons
    r = (0, 0, 0, 0, 1, 1) * 2
    v = fermion_suppressed(r, (1, 1, 1, 1) + (0,) * 8, 12)
    assert v.fermion_case is FermionCase.ODD_OR_EVEN_RATIO


def test_boson_fermion_coincide_for_odd_particle_numbers():
    n, N = 9, 3
    occs = list(enumerate_occupations(n, N, pauli_only=True))
    for r in occs:
        if detect_periodicity(r).p == 1:
            continue
        for s in occs:
            vb = boson_suppressed(r, s, n)
            vf = fermion_suppressed(r, s, n)
            assert vb.suppressed_by_law == vf.suppressed_by_law


def test_two_particle_dichotomy():
    """Cyclic two-particle inputs have m=n/2, so Q hits only {0, n/2} and the
    forward boson/fermion predicates are exactly opposite on every output."""
    for n in (4, 6, 8):
        r = tuple(1 if j % (n // 2) == 0 else 0 for j in range(n))
        per = detect_periodicity(r)
        assert (per.m, per.p) == (n // 2, 2)
        for s in enumerate_occupations(n, 2, pauli_only=True):
            q = q_value(per.m, s, n)
            assert q in (0, n // 2)
            boson_fires = q != 0
            fermion_fires = q != n // 2
            assert boson_fires != fermion_fires


def test_law_verdict_dispatch():
    v = law_verdict((1, 1), (1, 1), 2, "D")
    assert not v.suppressed_by_law and v.direction is Direction.NONE
    assert law_verdict((1, 1), (1, 1), 2, "B").suppressed_by_law
    assert not law_verdict((1, 1), (1, 1), 2, "F").suppressed_by_law
    v = law_verdict((0, 0), (0, 0), 2, "B")  # no particles: nothing to suppress
    assert not v.suppressed_by_law


def test_verdict_shift_consistency():
    """Shifting the output changes sum(d) by N mod n; the verdict follows the formula."""
    n = 6
    r = (0, 1, 2, 0, 1, 2)
    m = detect_periodicity(r).m
    for s in enumerate_occupations(n, 6):
        s1 = s.shifted(1)
        q0 = q_value(m, s, n)
        q1 = q_value(m, s1, n)
        assert q1 == (q0 + m * s.total) % n
        assert boson_suppressed(r, s, n).suppressed_by_law == (
            boson_suppressed(r, s1, n).suppressed_by_law)


def test_law_is_linear_time():
    n = 200_000
    r = ModeOccupation((1,) * n)
    counts = np.zeros(n, dtype=np.int64)
    rng = np.random.default_rng(0)
    np.add.at(counts, rng.integers(0, n, size=n), 1)
    s = ModeOccupation(tuple(int(c) for c in counts))
    boson_suppressed(r, s, n)  # warm occupation caches
    t0 = time.perf_counter()
    v = boson_suppressed(r, s, n)
    elapsed = time.perf_counter() - t0
    assert elapsed < 0.05
    assert v.q_value == (1 * assignment_sum(s)) % n


def test_classify_transitions_tags():
    records = classify_transitions(6, 6, "B")
    assert len(records) == 50 * 50
    tags = {rec.tag for rec in records}
    assert "predicted_zero" in tags
    assert "unpredicted_zero" in tags  # suppression the law does not see
    assert "nonzero" in tags
    thr = zero_threshold(6, 6)
    for rec in records:
        if rec.law != "none":
            assert rec.probability < thr
    # rows for the single-path input show no interference at all
    flat = [rec for rec in records if rec.input.counts == (0, 0, 0, 0, 0, 6)]
    assert flat and all(abs(rec.enhancement - 1) < 1e-9 for rec in flat)


def test_classify_transitions_fermion_grid():
    records = classify_transitions(12, 4, "F", pauli_only=True)
    assert len(records) == 29 * 29
    with pytest.raises(InvalidFermionStateError):
        classify_transitions(6, 4, "F", pauli_only=False)


def test_classify_grid_flags_perturbed_matrix():
    u = fourier_matrix(6).copy()
    u[1, 1] *= np.exp(0.002j)
    records, violations = classify_grid(u, 6, 6, "B")
    assert violations  # broken symmetry must surface as soundness violations


@pytest.mark.parametrize("n,N", [(4, 2), (6, 3), (6, 4), (8, 4)])
def test_exhaustive_soundness_small(n, N):
    u = fourier_matrix(n)
    occs = list(enumerate_occupations(n, N))
    outs = OutputSet(n, occs)
    thr = zero_threshold(n, N)
    for r in occs:
        pb = batch_probabilities(u, r, outs, "B")
        for i, s in enumerate(occs):
            if boson_suppressed(r, s, n).suppressed_by_law:
                assert pb[i] < thr, (r.counts, s.counts)
