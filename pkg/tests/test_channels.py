import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renyicap import channels as chn
from renyicap import linalg
from renyicap.errors import DimensionError, DomainError, InvalidStateError


def basis_ops(d):
    for a in range(d):
        for b in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[a, b] = 1
            yield E


def same_action(ch1, ch2, tol=1e-8):
    return all(np.allclose(chn.apply_map(ch1, E), chn.apply_map(ch2, E), atol=tol) for E in basis_ops(ch1.dim_in))


def test_density_matrix_validation():
    with pytest.raises(InvalidStateError):
        chn.density_matrix(np.diag([1.2, -0.2]))
    with pytest.raises(InvalidStateError):
        chn.density_matrix(np.eye(2))
    rho = chn.density_matrix(np.diag([0.25, 0.75]))
    assert np.trace(rho).real == pytest.approx(1)


def test_random_pure_is_pure():
    rho = chn.random_pure(3, seed=1)
    assert np.trace(rho @ rho).real == pytest.approx(1, abs=1e-10)


def test_random_density_rank():
    rho = chn.random_density(4, rank=2, seed=3)
    w = np.linalg.eigvalsh(rho)
    assert np.sum(w > 1e-10 * w[-1]) == 2


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), d_in=st.integers(1, 4), d_out=st.integers(1, 4), k=st.integers(1, 4))
def test_random_channel_trace_preserving(seed, d_in, d_out, k):
    if k * d_out < d_in:
        with pytest.raises(DimensionError):
            chn.random_channel(d_in, d_out, k, seed=seed)
        return
    ch = chn.random_channel(d_in, d_out, k, seed=seed)
    S = sum(A.conj().T @ A for A in ch.kraus)
    assert np.max(np.abs(S - np.eye(d_in))) <= 1e-9
    assert ch.trace_preserving


def test_random_sampling_is_deterministic():
    a = chn.random_channel(2, 3, 2, seed=9)
    b = chn.random_channel(2, 3, 2, seed=9)
    assert all(np.array_equal(x, y) for x, y in zip(a.kraus, b.kraus))


def test_apply_requires_state_and_tp():
    ch = chn.depolarizing(2, 0.3)
    with pytest.raises(InvalidStateError):
        chn.apply(ch, np.eye(2))
    non_tp = chn.conjugate_map(ch, np.diag([1.0, 0.5]))
    assert not non_tp.trace_preserving
    with pytest.raises(InvalidStateError):
        chn.apply(non_tp, np.eye(2) / 2)


def test_depolarizing_action():
    rho = chn.random_density(3, seed=2)
    out = chn.apply(chn.depolarizing(3, 0.4), rho)
    assert np.allclose(out, 0.6 * rho + 0.4 * np.eye(3) / 3)
    with pytest.raises(DomainError):
        chn.depolarizing(2, 1.5)


def test_pinching_kills_coherences():
    rho = chn.random_density(3, seed=4)
    out = chn.apply(chn.pinching(np.eye(3)), rho)
    assert np.allclose(out, np.diag(np.diag(rho)))


def test_choi_of_identity_is_unnormalized_max_entangled():
    C = chn.choi(chn.identity_channel(2))
    assert np.trace(C).real == pytest.approx(2)
    assert np.allclose(np.linalg.eigvalsh(C), [0, 0, 0, 2])


def test_dual_map_is_adjoint():
    ch = chn.random_channel(2, 3, 2, seed=5)
    X = chn.random_density(2, seed=6)
    Y = linalg.hermitian(chn.random_density(3, seed=7))
    lhs = np.trace(chn.apply_map(ch, X) @ Y)
    rhs = np.trace(X @ chn.adjoint_map(ch, Y))
    assert lhs == pytest.approx(rhs)


def test_stinespring_is_isometry_and_dilates():
    ch = chn.random_channel(2, 2, 3, seed=8)
    V = chn.stinespring(ch)
    assert np.allclose(V.matrix.conj().T @ V.matrix, np.eye(2))
    rho = chn.random_density(2, seed=9)
    big = V.apply(rho)
    assert np.allclose(linalg.partial_trace(big, [V.dim_b, V.dim_e], [0]), chn.apply(ch, rho))
    assert np.allclose(linalg.partial_trace(big, [V.dim_b, V.dim_e], [1]), chn.apply(chn.complementary(ch), rho))


def test_complement_duality():
    ch = chn.random_channel(2, 3, 2, seed=10)
    back = chn.complementary(chn.complementary(ch))
    assert np.allclose(np.sort(np.linalg.eigvalsh(chn.choi(ch))), np.sort(np.linalg.eigvalsh(chn.choi(back))), atol=1e-8)


def test_pure_output_spectra_of_channel_and_complement_agree():
    ch = chn.random_channel(2, 2, 2, seed=11)
    psi = chn.random_pure(2, seed=12)
    w1 = np.linalg.eigvalsh(chn.apply(ch, psi))
    w2 = np.linalg.eigvalsh(chn.apply(chn.complementary(ch), psi))
    assert np.allclose(np.sort(w1)[-2:], np.sort(w2)[-2:], atol=1e-10)


def test_conjugate_map_recovery():
    ch = chn.random_channel(2, 2, 2, seed=13)
    X = chn.random_density(2, seed=14)
    back = chn.conjugate_map(chn.conjugate_map(ch, X), linalg.fractional_power(X, -1))
    assert same_action(ch, back)


def test_eb_verdicts():
    assert chn.is_eb_small(chn.identity_channel(2)) == "no"
    assert chn.is_eb_small(chn.pinching(np.eye(2))) == "yes"
    assert chn.is_eb_small(chn.depolarizing(2, 2 / 3)) == "yes"
    assert chn.is_eb_small(chn.depolarizing(2, 0.5)) == "no"
    assert chn.is_eb_small(chn.completely_depolarizing(3)) == "inconclusive"


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10**6), outcomes=st.integers(1, 5))
def test_measure_prepare_outputs_are_ppt(seed, outcomes):
    ch = chn.random_measure_prepare(2, 2, outcomes=outcomes, seed=seed)
    assert chn.is_eb_small(ch) == "yes"
    rho = chn.random_density(4, seed=seed + 1)
    out = chn.apply_map(chn.tensor_channel(ch, chn.identity_channel(2)), rho)
    assert np.linalg.eigvalsh(linalg.partial_transpose(out, [2, 2], 1))[0] >= -1e-9


def test_eb_from_measure_prepare_action():
    povm = chn.Povm((np.diag([1.0, 0.0]), np.diag([0.0, 1.0])))
    outs = [np.eye(2) / 2, np.diag([1.0, 0.0])]
    ch = chn.eb_from_measure_prepare(povm, outs)
    rho = chn.random_density(2, seed=3)
    assert np.allclose(chn.apply(ch, rho), rho[0, 0].real * outs[0] + rho[1, 1].real * outs[1])


def test_povm_validation():
    with pytest.raises(InvalidStateError):
        chn.Povm((np.diag([1.0, 0.0]),))


def test_ic_povm_is_informationally_complete():
    povm = chn.ic_povm(3, seed=0)
    assert len(povm) == 9
    M = np.array([E.reshape(-1) for E in povm.elements])
    assert np.linalg.matrix_rank(M, tol=1e-10) == 9


def test_smooth_hadamard_properties():
    nh = chn.dephasing(2, 0.3)
    assert chn.is_eb_small(chn.complementary(nh)) == "yes"
    for p in (0.0, 0.1, 1.0):
        m = chn.smooth_hadamard(nh, p)
        assert m.trace_preserving
        e = len(nh.kraus)
        assert same_action(chn.partial_trace_output(m, [nh.dim_out, e * e], [0]), nh)
    assert chn.eb_interior_verdict(chn.complementary(chn.smooth_hadamard(nh, 0.0))) == "no"
    assert chn.eb_interior_verdict(chn.complementary(chn.smooth_hadamard(nh, 0.1))) == "yes"


def test_hadamard_from_eb_rejects_non_eb():
    with pytest.raises(InvalidStateError):
        chn.hadamard_from_eb(chn.identity_channel(2))


def test_channel_json_roundtrip_and_validation():
    ch = chn.random_channel(2, 3, 2, seed=1)
    obj = ch.to_json()
    back = chn.KrausChannel.from_json(obj)
    assert back.to_json() == obj
    obj_bad = dict(obj, dim_out=2)
    with pytest.raises(DimensionError):
        chn.KrausChannel.from_json(obj_bad)
    obj_flag = dict(obj, trace_preserving=False)
    with pytest.raises(InvalidStateError):
        chn.KrausChannel.from_json(obj_flag)


def test_ensemble_and_cq_state():
    ens = chn.Ensemble(np.array([0.25, 0.75]), (np.diag([1.0, 0.0]), np.eye(2) / 2))
    assert np.allclose(ens.average(), np.diag([0.625, 0.375]))
    assert chn.Ensemble.from_json(ens.to_json()).to_json() == ens.to_json()
    cq = chn.cq_state(ens, chn.identity_channel(2))
    M = cq.matrix()
    assert np.trace(M).real == pytest.approx(1)
    assert np.allclose(linalg.partial_trace(M, [2, 2], [0]), cq.marginal_x())
    with pytest.raises(InvalidStateError):
        chn.Ensemble(np.array([0.5, 0.6]), (np.eye(2) / 2, np.eye(2) / 2))
