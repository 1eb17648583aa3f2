"""Acceptance criteria 1-10, each at its stated tolerance and time budget.

Every test prints one ``criterion k: PASS/FAIL`` line; the lines are also
collected into an "acceptance criteria" section of the pytest summary.
"""

import hashlib
import subprocess
import sys
import time

import pytest

from renyicap import verify

SEED = 7


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def summary(props, elapsed, budget=None):
    parts = [f"{p.name} {p.passing}/{p.samples} worst_slack={p.worst:.3g}" for p in props]
    parts.append(f"{elapsed:.1f}s" + (f" of {budget:.0f}s" if budget else ""))
    return "; ".join(parts)


def check(record_criterion, number, props, elapsed, budget=None):
    ok = all(p.passed for p in props) and (budget is None or elapsed < budget)
    record_criterion(number, ok, summary(props, elapsed, budget))
    for p in props:
        assert p.passed, p.report()
    if budget is not None:
        assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget}s"


def test_criterion_1_monotonicity(record_criterion):
    prop, dt = timed(verify.monotonicity, SEED, samples=200, alphas=(1.1, 1.5, 2.0), slack=1e-7)
    assert prop.samples == 600
    check(record_criterion, 1, [prop], dt, 30)


def test_criterion_2_ordering(record_criterion):
    props, dt = timed(verify.ordering, SEED, samples=100)
    check(record_criterion, 2, list(props), dt, 10)


def test_criterion_3_limit(record_criterion):
    (acc, dec), dt = timed(verify.limit_to_relative_entropy, SEED, samples=50, min_passing=48)
    assert acc.samples == 50 and dec.min_passing == 48
    check(record_criterion, 3, [acc, dec], dt, 10)


@pytest.mark.slow
def test_criterion_4_lemma_equality(record_criterion):
    prop, dt = timed(verify.lemma_equality, SEED, channels=20, alphas=(1.3, 2.0), tol=1e-3)
    assert prop.samples == 40
    check(record_criterion, 4, [prop], dt, 300)


@pytest.mark.slow
def test_criterion_5_subadditivity(record_criterion):
    prop, dt = timed(verify.subadditivity, SEED, channels=10, alphas=(1.5, 2.0), tol=1e-4, restarts=50)
    assert prop.samples == 20
    check(record_criterion, 5, [prop], dt, 600)


def test_criterion_6_nu_multiplicativity(record_criterion):
    props, dt = timed(verify.nu_multiplicativity, SEED, pairs=5, alpha=2.0, tol=1e-3)
    check(record_criterion, 6, list(props), dt, 300)


def test_criterion_7_converse_chain(record_criterion):
    props, dt = timed(verify.converse_chain, SEED, count=5, offsets=(0.1, 0.5))
    assert props[0].samples == 10
    check(record_criterion, 7, props, dt)


def test_criterion_8_simulation_dominance(record_criterion):
    (prop, mono), dt = timed(verify.simulation_dominance, SEED, trials=20, ns=(2, 3, 4), offsets=(0.2, 0.5))
    # 2 channels x 2 rates x 3 lengths x 2 orders x 20 codebooks
    assert prop.samples == 480
    check(record_criterion, 8, [prop, mono], dt, 300)


def test_criterion_9_equality_conditions(record_criterion):
    t0 = time.perf_counter()
    _, _, eq = verify.positivity_and_equality(SEED, samples=100)
    ic = verify.ic_povm_separation(SEED, samples=100, min_td=0.01)
    check(record_criterion, 9, [eq, ic], time.perf_counter() - t0)


@pytest.mark.slow
def test_criterion_10_determinism(record_criterion):
    cmd = [sys.executable, "-m", "renyicap", "verify", "all", "--seed", str(SEED)]
    runs = []
    for _ in range(2):
        t0 = time.perf_counter()
        proc = subprocess.run(cmd, capture_output=True)
        runs.append((proc, time.perf_counter() - t0))
    (a, ta), (b, tb) = runs
    same = a.stdout == b.stdout and len(a.stdout) > 0
    ok = same and a.returncode == 0 and b.returncode == 0 and max(ta, tb) < 1800
    digest = hashlib.sha256(a.stdout).hexdigest()[:12]
    record_criterion(10, ok, f"identical={same} sha256={digest} exit={a.returncode},{b.returncode} "
                             f"runs {ta:.0f}s and {tb:.0f}s of 1800s")
    assert a.returncode == 0, a.stderr.decode()[-2000:]
    assert same
    assert max(ta, tb) < 1800
