"""Scalar information quantities, all in bits.

The sandwiched quantities follow

    Q~_a(A||B) = Tr[(B^{(1-a)/2a} A B^{(1-a)/2a})^a]     if supp A <= supp B
    D~_a(A||B) = log2 Q~_a(A||B) / (a - 1)

and are infinite when the support condition fails. The traditional
(Petz) Renyi divergence uses ``Tr[A^a B^{1-a}]``; for ``a > 1`` it gets the
same support clause so that ``D~_a <= D_a`` holds as stated for every input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from ._optimize import OptimizerConfig, maximize_pure
from .channels import KrausChannel
from .errors import DomainError

LN2 = math.log(2.0)
# eigenvalue floor used by the log-based objectives (rank-deficient outputs)
_LOG_FLOOR = 1e-300


@dataclass(frozen=True)
class DivergenceValue:
    """A divergence in bits, ``inf`` exactly when the support condition fails."""

    value: float
    support_ok: bool

    def __post_init__(self):
        if (self.value == math.inf) == self.support_ok:
            raise ValueError("DivergenceValue: value is +inf iff support_ok is False")

    def __float__(self) -> float:
        return float(self.value)

    @classmethod
    def infinite(cls) -> "DivergenceValue":
        return cls(math.inf, False)


def _check_alpha_gt1(alpha: float) -> None:
    if not alpha > 1:
        raise DomainError(f"alpha must exceed 1, got {alpha}")


def _pos_power_trace(M: np.ndarray, alpha: float) -> float:
    w = np.linalg.eigvalsh(0.5 * (M + M.conj().T))
    w = np.clip(w, 0.0, None)
    return float(np.sum(w**alpha))


def sandwiched_q(A, B, alpha: float) -> DivergenceValue:
    """Sandwiched quasi-relative entropy ``Q~_alpha(A||B)`` (dimensionless)."""
    _check_alpha_gt1(alpha)
    A = linalg.hermitian(A)
    B = linalg.hermitian(B)
    if not linalg.support_contained(A, B):
        return DivergenceValue.infinite()
    X = linalg.fractional_power(B, (1 - alpha) / (2 * alpha))
    return DivergenceValue(_pos_power_trace(X @ A @ X, alpha), True)


def sandwiched_d(A, B, alpha: float) -> DivergenceValue:
    """Sandwiched Renyi relative entropy ``D~_alpha(A||B)``."""
    q = sandwiched_q(A, B, alpha)
    if not q.support_ok:
        return q
    if q.value <= 0:
        return DivergenceValue(-math.inf, True)
    return DivergenceValue(math.log2(q.value) / (alpha - 1), True)


def _renyi_trace(A: np.ndarray, B: np.ndarray, alpha: float) -> float:
    Aa = linalg.fractional_power(A, alpha)
    Bb = linalg.fractional_power(B, 1 - alpha)
    return float(np.trace(Aa @ Bb).real)


def renyi_d(A, B, alpha: float) -> DivergenceValue:
    """Traditional Renyi relative entropy ``log2 Tr[A^a B^{1-a}] / (a-1)`` for ``a > 1``."""
    _check_alpha_gt1(alpha)
    return renyi_d_general(A, B, alpha)


def renyi_d_general(A, B, alpha: float) -> DivergenceValue:
    """Traditional Renyi relative entropy for any ``alpha`` in ``(0,1) U (1,inf)``.

    For ``alpha < 1`` the value is infinite only when ``Tr[A^a B^{1-a}]``
    vanishes (orthogonal supports).
    """
    if not alpha > 0 or alpha == 1:
        raise DomainError(f"alpha must lie in (0,1) U (1,inf), got {alpha}")
    A = linalg.hermitian(A)
    B = linalg.hermitian(B)
    if alpha > 1 and not linalg.support_contained(A, B):
        return DivergenceValue.infinite()
    tr = _renyi_trace(A, B, alpha)
    if tr <= 0:
        if alpha < 1:
            return DivergenceValue.infinite()
        return DivergenceValue(-math.inf, True)
    return DivergenceValue(math.log2(tr) / (alpha - 1), True)


def vn_relative_entropy(A, B) -> DivergenceValue:
    """Umegaki relative entropy ``Tr[A log2 A] - Tr[A log2 B]``."""
    A = linalg.hermitian(A)
    B = linalg.hermitian(B)
    if not linalg.support_contained(A, B):
        return DivergenceValue.infinite()
    val = np.trace(A @ (linalg.psd_log2(A) - linalg.psd_log2(B))).real
    return DivergenceValue(float(val), True)


def von_neumann_entropy(rho) -> float:
    w = np.linalg.eigvalsh(linalg.hermitian(rho))
    w = w[w > 1e-15]
    return float(-np.sum(w * np.log2(w)) + 0.0)


def classical_renyi(p, q, alpha: float) -> DivergenceValue:
    """Classical Renyi divergence ``log2 sum p^a q^{1-a} / (a-1)``; ``alpha=1`` gives KL."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("distributions must have equal length")
    if np.any(p < 0) or np.any(q < 0):
        raise ValueError("distributions must be non-negative")
    mask = p > 0
    if alpha >= 1 and np.any(q[mask] == 0):
        return DivergenceValue.infinite()
    both = mask & (q > 0)
    if alpha == 1:
        return DivergenceValue(float(np.sum(p[both] * np.log2(p[both] / q[both]))), True)
    s = float(np.sum(p[both] ** alpha * q[both] ** (1 - alpha)))
    if s == 0:
        return DivergenceValue.infinite()
    return DivergenceValue(math.log2(s) / (alpha - 1), True)


def binary_cq_divergence(eps: float, n: int, R: float, alpha: float) -> float:
    """Classical sandwiched divergence of ``(eps, 1-eps)`` from ``(1-2^{-nR}, 2^{-nR})``."""
    _check_alpha_gt1(alpha)
    nR = n * R
    q = -math.expm1(-nR * LN2)  # 1 - 2^{-nR}
    if not 0 <= eps <= q + 1e-15:
        raise DomainError(f"eps must lie in [0, 1 - 2^(-nR)] = [0, {q}], got {eps}")
    with np.errstate(divide="ignore"):
        a = alpha * np.log2(eps) + (1 - alpha) * np.log2(q)
        b = alpha * np.log2(1 - eps) + (1 - alpha) * (-nR)
    return float(np.logaddexp2(a, b)) / (alpha - 1)


def sandwiched_alpha_norm(A, X, alpha: float) -> float:
    """``||X^{1/2} A X^{1/2}||_alpha`` for PSD weight ``X``."""
    A = linalg.hermitian(A)
    Xh = linalg.fractional_power(X, 0.5)
    return linalg.schatten_norm(Xh @ A @ Xh, alpha)


def renyi_entropy(rho, alpha: float) -> float:
    """Renyi entropy ``log2 Tr[rho^a] / (1-a)``; ``alpha=1`` is von Neumann entropy."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if alpha == 1:
        return von_neumann_entropy(rho)
    w = np.clip(np.linalg.eigvalsh(linalg.hermitian(rho)), 0, None)
    return math.log2(float(np.sum(w[w > 0] ** alpha))) / (1 - alpha)


# ---------------------------------------------------------------------------
# objectives on channel outputs: omega -> (value, gradient)


def sandwiched_objective(sigma, alpha: float):
    """``omega -> D~_alpha(omega||sigma)`` with its gradient; ``sigma`` must be full rank on outputs."""
    X = linalg.fractional_power(sigma, (1 - alpha) / (2 * alpha))

    def objective(omega):
        M = X @ omega @ X
        w, v = np.linalg.eigh(0.5 * (M + M.conj().T))
        w = np.clip(w, 0.0, None)
        Q = float(np.sum(w**alpha))
        if Q <= 0:
            return -math.inf, np.zeros_like(omega)
        Mp = (v * w ** (alpha - 1)) @ v.conj().T
        grad = (alpha / ((alpha - 1) * Q * LN2)) * (X @ Mp @ X)
        return math.log2(Q) / (alpha - 1), grad

    return objective


def traditional_objective(sigma, alpha: float):
    """``omega -> D_alpha(omega||sigma)`` (Petz) with its gradient."""
    Sb = linalg.fractional_power(sigma, 1 - alpha)

    def objective(omega):
        w, v = np.linalg.eigh(0.5 * (omega + omega.conj().T))
        w = np.clip(w, 0.0, None)
        Aa = (v * w**alpha) @ v.conj().T
        T = float(np.trace(Aa @ Sb).real)
        if T <= 0:
            return -math.inf, np.zeros_like(omega)
        g = linalg.frechet_adjoint(w, v, lambda t: t**alpha, lambda t: alpha * np.clip(t, 0, None) ** (alpha - 1), Sb)
        return math.log2(T) / (alpha - 1), g / ((alpha - 1) * T * LN2)

    return objective


def vn_objective(sigma):
    """``omega -> D(omega||sigma)`` with its gradient (log clipped on the kernel)."""
    log_sigma = linalg.psd_log2(sigma)

    def objective(omega):
        w, v = np.linalg.eigh(0.5 * (omega + omega.conj().T))
        lw = np.log2(np.maximum(w, _LOG_FLOOR))
        pos = w > 1e-15
        ent = float(np.sum(w[pos] * lw[pos]))
        val = ent - float(np.trace(omega @ log_sigma).real)
        grad = (v * (lw + 1 / LN2)) @ v.conj().T - log_sigma
        return val, grad

    return objective


def alpha_norm_objective(alpha: float):
    def objective(omega):
        w, v = np.linalg.eigh(0.5 * (omega + omega.conj().T))
        w = np.clip(w, 0.0, None)
        s = float(np.sum(w**alpha))
        if s <= 0:
            return 0.0, np.zeros_like(omega)
        nrm = s ** (1 / alpha)
        grad = nrm ** (1 - alpha) * ((v * w ** (alpha - 1)) @ v.conj().T)
        return nrm, grad

    return objective


def neg_renyi_entropy_objective(alpha: float):
    """``omega -> -H_alpha(omega)`` for trace-one outputs."""
    if alpha == 1:
        def objective(omega):
            w, v = np.linalg.eigh(0.5 * (omega + omega.conj().T))
            lw = np.log2(np.maximum(w, _LOG_FLOOR))
            pos = w > 1e-15
            return float(np.sum(w[pos] * lw[pos])), (v * (lw + 1 / LN2)) @ v.conj().T

        return objective

    def objective(omega):
        w, v = np.linalg.eigh(0.5 * (omega + omega.conj().T))
        w = np.clip(w, 0.0, None)
        s = float(np.sum(w**alpha))
        grad = (alpha / ((alpha - 1) * s * LN2)) * ((v * w ** (alpha - 1)) @ v.conj().T)
        return math.log2(s) / (alpha - 1), grad

    return objective


# ---------------------------------------------------------------------------
# channel output optimizations


def max_output_alpha_norm(ch: KrausChannel, alpha: float, cfg: OptimizerConfig | None = None, full_output: bool = False,
                          starts=None):
    """Maximum output ``alpha``-norm ``nu_alpha`` of a CP map over pure inputs.

    The norm of ``M(rho)`` is convex in ``rho``, so its maximum over states
    is attained at a pure input. With ``full_output=True`` the
    :class:`~renyicap._optimize.PureOptimum` (value, maximizer, convergence
    flag, restarts used) is returned instead of the float. ``starts`` are
    input vectors tried before the random restarts.
    """
    if not alpha >= 1:
        raise DomainError(f"alpha must be >= 1, got {alpha}")
    cfg = cfg or OptimizerConfig()
    opt = maximize_pure(ch.stacked(), alpha_norm_objective(alpha), cfg, cfg.rng(11), starts=starts)
    return opt if full_output else opt.value


def min_output_renyi(ch: KrausChannel, alpha: float, cfg: OptimizerConfig | None = None, full_output: bool = False):
    """Minimum output Renyi entropy ``H_alpha^min`` over pure inputs."""
    if not alpha >= 1:
        raise DomainError(f"alpha must be >= 1, got {alpha}")
    if not ch.trace_preserving:
        raise DomainError("minimum output entropy needs a trace-preserving channel")
    cfg = cfg or OptimizerConfig()
    opt = maximize_pure(ch.stacked(), neg_renyi_entropy_objective(alpha), cfg, cfg.rng(12))
    opt.value = -opt.value + 0.0
    return opt if full_output else opt.value
