import math

import numpy as np
import pytest

from renyicap import capacity as cap
from renyicap import channels as chn
from renyicap._optimize import OptimizerConfig
from renyicap.errors import DomainError, InvalidStateError

CFG = OptimizerConfig(restarts=3, seed=0)


def h(p):
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def test_identity_radius_is_log_dimension():
    for d in (2, 3):
        r = cap.info_radius(chn.identity_channel(d), 1.5, CFG)
        assert r.value == pytest.approx(math.log2(d), abs=1e-6)
        assert np.allclose(r.sigma_star, np.eye(d) / d, atol=1e-4)


def test_depolarizing_radius_matches_covariant_formula():
    ch = chn.depolarizing(2, 0.5)
    expected = 1 + math.log2(0.75**2 + 0.25**2)  # 1 - H_2 of the output spectrum (3/4, 1/4)
    assert cap.info_radius(ch, 2.0, CFG).value == pytest.approx(expected, abs=1e-6)
    assert cap.covariant_radius_bound(ch, 2.0, CFG) == pytest.approx(expected, abs=1e-8)
    assert cap.alpha_holevo(ch, 2.0, CFG) == pytest.approx(expected, abs=1e-5)


def test_radius_equals_alpha_holevo_on_random_channel():
    ch = chn.random_channel(2, 2, 2, seed=3)
    r = cap.info_radius(ch, 1.5, CFG)
    k = cap.alpha_holevo(ch, 1.5, CFG)
    assert r.value == pytest.approx(k, abs=1e-4)
    assert r.converged


def test_radius_around_fixed_sigma_dominates_optimum():
    ch = chn.random_channel(2, 2, 2, seed=4)
    opt = cap.info_radius(ch, 2.0, CFG).value
    around = cap.info_radius_around(ch, np.eye(2) / 2, 2.0, CFG)
    assert around.value >= opt - 1e-7


def test_holevo_capacity_closed_forms():
    assert cap.holevo_capacity(chn.depolarizing(2, 0.5), CFG).value == pytest.approx(1 - h(0.25), abs=1e-6)
    assert cap.holevo_capacity(chn.dephasing(2, 0.3), CFG).value == pytest.approx(1.0, abs=1e-6)
    assert cap.holevo_capacity(chn.completely_depolarizing(2), CFG).value == pytest.approx(0.0, abs=1e-8)


def test_radius_approaches_holevo_capacity_as_alpha_tends_to_one():
    ch = chn.depolarizing(2, 0.5)
    chi = cap.holevo_capacity(ch, CFG).value
    gaps = [abs(cap.info_radius(ch, a, CFG).value - chi) for a in (1.3, 1.1, 1.01)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-2


def test_traditional_holevo_dominates_sandwiched():
    ch = chn.random_channel(2, 2, 2, seed=7)
    sw = cap.generalized_holevo(ch, "sandwiched", CFG, alpha=1.5)
    tr = cap.generalized_holevo(ch, "traditional", CFG, alpha=1.5)
    assert sw <= tr + 1e-6


def test_alpha_holevo_of_fixed_ensemble_is_below_optimum():
    ch = chn.random_channel(2, 2, 2, seed=8)
    ens = chn.Ensemble(np.array([0.5, 0.5]), (np.diag([1.0, 0.0]), np.diag([0.0, 1.0])))
    assert cap.alpha_holevo_of_ensemble(ens, ch, 1.5, CFG) <= cap.alpha_holevo(ch, 1.5, CFG) + 1e-7


def test_full_output_objects():
    res = cap.alpha_holevo(chn.identity_channel(2), 1.5, CFG, full_output=True)
    assert isinstance(res, cap.EnsembleOptimum)
    assert res.value == pytest.approx(1.0, abs=1e-6)
    assert np.trace(res.sigma_star).real == pytest.approx(1.0)


def test_c_constant_examples():
    assert cap.c_constant(chn.pinching(np.eye(2)), CFG) == pytest.approx(2**0.5 + 2, abs=1e-5)
    assert cap.c_constant(chn.completely_depolarizing(2), CFG) == pytest.approx(3.0, abs=1e-8)


def test_c_constant_unbounded_when_support_leaks():
    assert cap.c_constant(chn.identity_channel(2), CFG, sigma=np.diag([1.0, 0.0])) == math.inf


def test_subadditivity_for_measure_prepare():
    eb = chn.random_measure_prepare(2, 2, outcomes=2, seed=1)
    other = chn.random_channel(2, 2, 2, seed=2)
    gap = cap.subadditivity_gap(eb, other, 1.5, CFG, restarts=6)
    assert gap <= 1e-4


def test_fixed_sigma_gap_for_hadamard_channel():
    ch = chn.dephasing(2, 0.3)
    out = cap.fixed_sigma_subadditivity_gap(ch, np.eye(2) / 2, 2.0, cfg=CFG, restarts=4, full_output=True)
    assert out["hadamard"] == "yes"
    assert abs(out["gap"]) <= 1e-4


def test_validation():
    with pytest.raises(DomainError):
        cap.info_radius(chn.identity_channel(2), 2.5, CFG)
    with pytest.raises(DomainError):
        cap.generalized_holevo(chn.identity_channel(2), "bogus", CFG)
    non_tp = chn.conjugate_map(chn.identity_channel(2), np.diag([1.0, 0.5]))
    with pytest.raises(InvalidStateError):
        cap.holevo_capacity(non_tp, CFG)
