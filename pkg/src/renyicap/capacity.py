"""Channel information radii and Holevo-type capacities.

Two independent routes compute the same sandwiched quantity:

* :func:`info_radius` solves ``min_sigma max_psi D~_a(N(psi)||sigma)`` with
  an exchange method: the inner maximum over pure inputs is replaced by a
  growing pool of worst-case inputs, the resulting finite minimax is solved
  as a smooth epigraph problem (SLSQP), and the true inner maximum at the
  new ``sigma`` decides which inputs join the pool.
* :func:`alpha_holevo` maximizes over ensembles of at most ``d**2`` pure
  states, each ensemble value being a smooth convex minimization over
  ``sigma``.

The reported radius is always the inner maximum evaluated at the returned
``sigma_star``, so it is an upper estimate of the true radius; the ensemble
route gives a lower estimate.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from . import channels as chn
from . import divergences as dv
from . import linalg
from ._optimize import (
    OptimizerConfig,
    maximize_pure,
    params_to_factor,
    random_sigma_params,
    sigma_from_params,
    sigma_param_grad,
    sigma_to_params,
)
from .channels import Ensemble, KrausChannel
from .errors import DomainError, InvalidStateError

log = logging.getLogger(__name__)

LN2 = math.log(2.0)
SUPPORT_LEAK_TOL = 1e-10

__all__ = [
    "OptimizerConfig",
    "RadiusResult",
    "EnsembleOptimum",
    "info_radius_around",
    "info_radius",
    "alpha_holevo_of_ensemble",
    "alpha_holevo",
    "generalized_holevo",
    "holevo_capacity",
    "c_constant",
    "covariant_radius_bound",
    "subadditivity_gap",
    "fixed_sigma_subadditivity_gap",
]


@dataclass
class RadiusResult:
    """Value of a minimax radius with its optimizers and diagnostics.

    ``value`` is the inner maximum evaluated at ``sigma_star``; ``gap_estimate``
    bounds how far it sits above the best lower certificate found by the
    outer loop.
    """

    value: float
    sigma_star: np.ndarray
    worst_input: np.ndarray
    restarts_used: int
    converged: bool
    gap_estimate: float


@dataclass
class EnsembleOptimum:
    value: float
    ensemble: Ensemble
    sigma_star: np.ndarray
    converged: bool
    restarts_used: int


def _check_alpha(alpha: float) -> None:
    if not 1 < alpha <= 2:
        raise DomainError(f"alpha must lie in (1, 2], got {alpha}")


def _check_tp(ch: KrausChannel) -> None:
    if not ch.trace_preserving:
        raise InvalidStateError("channel must be trace-preserving")


def _output_support(ch: KrausChannel) -> np.ndarray:
    """Orthonormal basis (columns) of the span of all channel outputs."""
    avg = chn.apply_map(ch, np.eye(ch.dim_in) / ch.dim_in)
    w, v = np.linalg.eigh(0.5 * (avg + avg.conj().T))
    keep = w > 1e-12 * w[-1]
    return v[:, keep]


def _compress(ch: KrausChannel) -> tuple[KrausChannel, np.ndarray]:
    V = _output_support(ch)
    if V.shape[1] == ch.dim_out:
        return ch, np.eye(ch.dim_out, dtype=complex)
    return chn.KrausChannel(tuple(V.conj().T @ A for A in ch.kraus)), V


def _leak_check(ch: KrausChannel, sigma: np.ndarray):
    """Largest output weight outside ``supp(sigma)`` and the input achieving it."""
    Q = np.eye(ch.dim_out) - linalg.support_projector(sigma)
    w, v = np.linalg.eigh(chn.adjoint_map(ch, Q))
    return float(w[-1]), v[:, -1]


# ---------------------------------------------------------------------------
# sandwiched quantities as smooth functions of sigma


def _sandwich_sigma_terms(omegas_half: Sequence[np.ndarray], sigma: np.ndarray, alpha: float):
    """``Q~_a(omega_k||sigma)`` and its gradient in ``sigma`` for every ``k``."""
    gamma = (1 - alpha) / alpha
    w, v = np.linalg.eigh(0.5 * (sigma + sigma.conj().T))
    # floor keeps t**(gamma-1) finite for gamma - 1 >= -1.5
    w = np.maximum(w, 1e-150)
    Sg = (v * w**gamma) @ v.conj().T
    dd = linalg.divided_differences(w, lambda t: t**gamma, lambda t: gamma * t ** (gamma - 1))
    vals, grads = [], []
    for oh in omegas_half:
        M = oh @ Sg @ oh
        mw, mv = np.linalg.eigh(0.5 * (M + M.conj().T))
        mw = np.clip(mw, 0.0, None)
        vals.append(float(np.sum(mw**alpha)))
        G = alpha * (oh @ ((mv * mw ** (alpha - 1)) @ mv.conj().T) @ oh)
        Gt = v.conj().T @ G @ v
        grads.append(v @ (dd * Gt) @ v.conj().T)
    return np.array(vals), grads


def _sqrt_psd(omega: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (omega + omega.conj().T))
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def _min_sigma_ensemble(omegas, probs, alpha: float, cfg: OptimizerConfig, x0=None):
    """``min_sigma log2(sum_x p_x Q~_a(omega_x||sigma)) / (a-1)`` over full-rank ``sigma``."""
    d = omegas[0].shape[0]
    halves = [_sqrt_psd(o) for o in omegas]
    probs = np.asarray(probs, dtype=float)

    def fun(x):
        sigma, L, t = sigma_from_params(x, d)
        q, gq = _sandwich_sigma_terms(halves, sigma, alpha)
        S = float(probs @ q)
        gs = sum(p * g for p, g in zip(probs, gq))
        c = 1.0 / ((alpha - 1) * S * LN2)
        return math.log2(S) / (alpha - 1), c * sigma_param_grad(gs, sigma, L, t)

    if x0 is None:
        avg = sum(p * o for p, o in zip(probs, omegas))
        x0 = sigma_to_params(avg + 1e-6 * np.eye(d) / d)
    res = minimize(fun, x0, jac=True, method="L-BFGS-B",
                   options={"maxiter": 10 * cfg.max_iters, "gtol": 1e-12, "ftol": 1e-15})
    sigma, _, _ = sigma_from_params(res.x, d)
    return float(res.fun), sigma, res.x, bool(res.success)


# ---------------------------------------------------------------------------
# information radius


def info_radius_around(ch: KrausChannel, sigma, alpha: float, cfg: OptimizerConfig | None = None,
                       starts: Sequence[np.ndarray] | None = None, restarts: int | None = None) -> RadiusResult:
    """``max_psi D~_alpha(N(psi)||sigma)`` over pure inputs.

    Pure inputs suffice by joint quasi-convexity. If some output leaves the
    support of ``sigma`` the value is ``inf`` and ``worst_input`` is the input
    with the largest leak.
    """
    _check_alpha(alpha)
    _check_tp(ch)
    cfg = cfg or OptimizerConfig()
    sigma = chn.density_matrix(sigma)
    if sigma.shape[0] != ch.dim_out:
        raise DomainError("sigma must act on the channel output")
    leak, psi = _leak_check(ch, sigma)
    if leak > SUPPORT_LEAK_TOL:
        return RadiusResult(math.inf, sigma, chn.pure_state(psi), 0, True, 0.0)
    opt = maximize_pure(ch.stacked(), dv.sandwiched_objective(sigma, alpha), cfg, cfg.rng(21),
                        starts=list(starts or []), restarts=restarts)
    return RadiusResult(opt.value, sigma, chn.pure_state(opt.psi), opt.restarts_used, opt.converged, 0.0)


def _solve_pool_minimax(pool_halves, alpha, d, x0, cfg):
    """``min_sigma max_k D~_a(omega_k||sigma)`` for a finite pool via the epigraph form."""

    def pool_values(x):
        sigma, L, t = sigma_from_params(x, d)
        q, gq = _sandwich_sigma_terms(pool_halves, sigma, alpha)
        vals = np.log2(q) / (alpha - 1)
        jac = np.array([sigma_param_grad(g, sigma, L, t) / ((alpha - 1) * qk * LN2) for qk, g in zip(q, gq)])
        return vals, jac

    v0, _ = pool_values(x0)
    z0 = np.concatenate([x0, [float(np.max(v0))]])
    n = len(x0)

    def cons(z):
        vals, _ = pool_values(z[:n])
        return z[n] - vals

    def cons_jac(z):
        _, jac = pool_values(z[:n])
        return np.hstack([-jac, np.ones((len(jac), 1))])

    res = minimize(
        lambda z: z[n],
        z0,
        jac=lambda z: np.concatenate([np.zeros(n), [1.0]]),
        method="SLSQP",
        constraints=[{"type": "ineq", "fun": cons, "jac": cons_jac}],
        options={"maxiter": cfg.max_iters, "ftol": 1e-14},
    )
    x = res.x[:n]
    # renormalize the factor so the parametrization stays well scaled
    L = params_to_factor(x, d)
    x = x / math.sqrt(float(np.trace(L @ L.conj().T).real))
    vals, _ = pool_values(x)
    return x, float(np.max(vals))


def info_radius(ch: KrausChannel, alpha: float, cfg: OptimizerConfig | None = None) -> RadiusResult:
    """Sandwiched ``alpha``-information radius ``min_sigma max_rho D~_alpha(N(rho)||sigma)``."""
    _check_alpha(alpha)
    _check_tp(ch)
    cfg = cfg or OptimizerConfig()
    sub, V = _compress(ch)
    d = sub.dim_out
    K = sub.stacked()
    rng = cfg.rng(31)

    def embed(s):
        return V @ s @ V.conj().T

    if d == 1:
        psi = np.zeros(ch.dim_in, dtype=complex)
        psi[0] = 1
        return RadiusResult(0.0, embed(np.ones((1, 1))), chn.pure_state(psi), 0, True, 0.0)

    def output_half(psi):
        phi = K @ psi
        return _sqrt_psd(phi.T @ phi.conj())

    best = None
    n_outer = max(1, min(2, cfg.restarts))
    restarts_used = 0
    for start in range(n_outer):
        x = sigma_to_params(np.eye(d) / d) if start == 0 else random_sigma_params(d, rng)
        sigma, _, _ = sigma_from_params(x, d)
        opt = maximize_pure(K, dv.sandwiched_objective(sigma, alpha), cfg, rng)
        restarts_used += opt.restarts_used
        pool = [psi for _, psi in sorted(opt.optima, key=lambda t: -t[0])[:4]]
        lower, upper, worst = -math.inf, opt.value, opt.psi
        upper_sigma = sigma
        converged = False
        for _ in range(40):
            x, lower = _solve_pool_minimax([output_half(p) for p in pool], alpha, d, x, cfg)
            sigma, _, _ = sigma_from_params(x, d)
            leak, psi = _leak_check(sub, sigma)
            if leak > SUPPORT_LEAK_TOL:
                # sigma collapsed onto a face; the leaking input is infinitely bad
                pool.append(psi)
                continue
            opt = maximize_pure(K, dv.sandwiched_objective(sigma, alpha), cfg, rng,
                                starts=pool[-8:], restarts=cfg.restarts)
            restarts_used += opt.restarts_used
            log.debug("exchange: lower=%r inner=%r pool=%d", lower, opt.value, len(pool))
            if opt.value < upper:
                upper, worst, upper_sigma = opt.value, opt.psi, sigma
            if opt.value - lower <= cfg.outer_tol:
                converged = opt.converged
                break
            new = sorted((t for t in opt.optima if t[0] > lower + cfg.outer_tol), key=lambda t: -t[0])
            for _, psi in new[:3]:
                if all(abs(np.vdot(psi, q)) < 1 - 1e-9 for q in pool):
                    pool.append(psi)
        gap = max(upper - lower, 0.0)
        cand = RadiusResult(upper, embed(upper_sigma), chn.pure_state(worst), restarts_used, converged, gap)
        if best is None or cand.value < best.value:
            best = cand
    best.restarts_used = restarts_used
    return best


def _out(K: np.ndarray, psi: np.ndarray) -> np.ndarray:
    phi = K @ psi
    return phi.T @ phi.conj()


# ---------------------------------------------------------------------------
# ensembles


def alpha_holevo_of_ensemble(ens: Ensemble, ch: KrausChannel, alpha: float, cfg: OptimizerConfig | None = None) -> float:
    """Sandwiched ``alpha``-Holevo information of one input ensemble."""
    _check_alpha(alpha)
    _check_tp(ch)
    cfg = cfg or OptimizerConfig()
    outs = [chn.apply(ch, rho) for rho in ens.states]
    return _ensemble_value_sandwiched(outs, ens.probs, alpha, cfg)[0]


def _restrict_to_support(outs, probs):
    avg = sum(p * o for p, o in zip(probs, outs))
    w, v = np.linalg.eigh(0.5 * (avg + avg.conj().T))
    V = v[:, w > 1e-12 * w[-1]]
    return [V.conj().T @ o @ V for o in outs], V


def _ensemble_value_sandwiched(outs, probs, alpha, cfg, x0=None):
    small, V = _restrict_to_support(outs, probs)
    if V.shape[1] == 1:
        return 0.0, V @ V.conj().T, None
    val, sigma, x, _ = _min_sigma_ensemble(small, probs, alpha, cfg, x0=x0)
    return val, V @ sigma @ V.conj().T, x


def _softmax(w):
    e = np.exp(w - np.max(w))
    return e / e.sum()


class _EnsembleProblem:
    """Ensemble of ``k`` pure inputs parametrized by softmax weights and complex vectors."""

    def __init__(self, ch: KrausChannel, k: int):
        self.K = ch.stacked()
        self.Kc = self.K.conj()
        self.k = k
        self.d = ch.dim_in

    def unpack(self, x):
        w = x[: self.k]
        Z = x[self.k:].reshape(2, self.k, self.d)
        Z = Z[0] + 1j * Z[1]
        norms = np.linalg.norm(Z, axis=1)
        return _softmax(w), Z / norms[:, None], norms

    def outputs(self, psis):
        phis = np.einsum("kij,xj->xki", self.K, psis)
        return phis, [p.T @ p.conj() for p in phis]

    def chain(self, probs, psis, norms, phis, dval_dp, dval_domega):
        gw = probs * (dval_dp - probs @ dval_dp)
        gz = np.zeros((self.k, self.d), dtype=complex)
        for x in range(self.k):
            Gpsi = np.einsum("kji,jl,kl->i", self.Kc, dval_domega[x], phis[x], optimize=True)
            g = Gpsi - np.vdot(psis[x], Gpsi).real * psis[x]
            gz[x] = (2.0 / norms[x]) * g
        return np.concatenate([gw, gz.real.ravel(), gz.imag.ravel()])

    def random_start(self, rng):
        w = rng.normal(scale=0.1, size=self.k)
        Z = rng.normal(size=(self.k, self.d)) + 1j * rng.normal(size=(self.k, self.d))
        return np.concatenate([w, Z.real.ravel(), Z.imag.ravel()])


def _sandwiched_ensemble_grads(outs, probs, sigma, alpha):
    """Value and Danskin gradients of the ensemble quantity at optimal ``sigma``."""
    X = linalg.fractional_power(sigma, (1 - alpha) / (2 * alpha))
    q = np.empty(len(outs))
    H = []
    for i, o in enumerate(outs):
        M = X @ o @ X
        w, v = np.linalg.eigh(0.5 * (M + M.conj().T))
        w = np.clip(w, 0, None)
        q[i] = np.sum(w**alpha)
        H.append(alpha * (X @ ((v * w ** (alpha - 1)) @ v.conj().T) @ X))
    S = float(probs @ q)
    c = 1.0 / ((alpha - 1) * S * LN2)
    return math.log2(S) / (alpha - 1), c * q, [c * p * h for p, h in zip(probs, H)]


def _traditional_ensemble_grads(outs, probs, alpha):
    """Closed form ``(a/(a-1)) log2 Tr(sum_x p_x omega_x^a)^{1/a}`` and its gradients."""
    eigs = [np.linalg.eigh(0.5 * (o + o.conj().T)) for o in outs]
    pows = [(v * np.clip(w, 0, None) ** alpha) @ v.conj().T for w, v in eigs]
    A = sum(p * P for p, P in zip(probs, pows))
    aw, av = np.linalg.eigh(0.5 * (A + A.conj().T))
    on = aw > 1e-14 * aw[-1]
    T = float(np.sum(aw[on] ** (1 / alpha)))
    Apow = (av[:, on] * aw[on] ** ((1 - alpha) / alpha)) @ av[:, on].conj().T
    c = 1.0 / ((alpha - 1) * T * LN2)
    dp = c * np.array([np.trace(Apow @ P).real for P in pows])
    f = lambda t: np.clip(t, 0, None) ** alpha
    fp = lambda t: alpha * np.clip(t, 0, None) ** (alpha - 1)
    domega = [c * p * linalg.frechet_adjoint(w, v, f, fp, Apow) for p, (w, v) in zip(probs, eigs)]
    return alpha / (alpha - 1) * math.log2(T), dp, domega, A


def _holevo_ensemble_grads(outs, probs):
    """Holevo quantity ``S(avg) - sum_x p_x S(omega_x)`` and its gradients."""
    avg = sum(p * o for p, o in zip(probs, outs))
    log_avg = linalg.psd_log2(avg, support_tol=1e-14)
    s_avg = dv.von_neumann_entropy(avg)
    ents, dom = [], []
    for p, o in zip(probs, outs):
        w, v = np.linalg.eigh(0.5 * (o + o.conj().T))
        lw = np.where(w > 1e-15, np.log2(np.maximum(w, 1e-300)), 0.0)
        ents.append(-float(np.sum(np.where(w > 1e-15, w * lw, 0.0))))
        dom.append(p * ((v * lw) @ v.conj().T - log_avg))
    ents = np.array(ents)
    dp = np.array([-np.trace(o @ log_avg).real for o in outs]) - ents
    return s_avg - float(probs @ ents), dp, dom, avg


def _maximize_ensemble(ch: KrausChannel, value_and_grads, cfg: OptimizerConfig, stream: int, restarts: int | None = None):
    """Multistart L-BFGS over ensembles of ``dim_in**2`` pure states."""
    k = ch.dim_in**2
    prob = _EnsembleProblem(ch, k)
    rng = cfg.rng(stream)
    state = {}

    def fun(x):
        probs, psis, norms = prob.unpack(x)
        phis, outs = prob.outputs(psis)
        val, dp, dom, extra = value_and_grads(outs, probs, state)
        return -val, -prob.chain(probs, psis, norms, phis, dp, dom)

    n = restarts if restarts is not None else max(2, cfg.restarts // 2)
    best = None
    for _ in range(n):
        state.clear()
        res = minimize(fun, prob.random_start(rng), jac=True, method="L-BFGS-B",
                       options={"maxiter": 5 * cfg.max_iters, "gtol": 1e-10, "ftol": 1e-14})
        if best is None or -res.fun > -best.fun:
            best = res
    probs, psis, _ = prob.unpack(best.x)
    ens = Ensemble(probs, tuple(chn.pure_state(p) for p in psis))
    return -float(best.fun), ens, bool(best.success), n


def alpha_holevo(ch: KrausChannel, alpha: float, cfg: OptimizerConfig | None = None, full_output: bool = False):
    """Sandwiched ``alpha``-Holevo information, maximized over ensembles of ``d**2`` pure states."""
    _check_alpha(alpha)
    _check_tp(ch)
    cfg = cfg or OptimizerConfig()

    def value_and_grads(outs, probs, state):
        val, sigma, x = _ensemble_value_sandwiched(outs, probs, alpha, cfg, x0=state.get("x"))
        if x is not None and sigma.shape[0] == outs[0].shape[0]:
            state["x"] = x  # warm start for the next evaluation
        val, dp, dom = _sandwiched_ensemble_grads(outs, probs, sigma, alpha)
        return val, dp, dom, sigma

    value, ens, ok, n = _maximize_ensemble(ch, value_and_grads, cfg, stream=41)
    if not full_output:
        return value
    outs = [chn.apply(ch, r) for r in ens.states]
    _, sigma, _ = _ensemble_value_sandwiched(outs, ens.probs, alpha, cfg)
    return EnsembleOptimum(value, ens, sigma, ok, n)


def generalized_holevo(ch: KrausChannel, selector: str, cfg: OptimizerConfig | None = None,
                       alpha: float | None = None, full_output: bool = False):
    """Holevo information induced by a divergence.

    ``selector`` is ``"sandwiched"`` or ``"traditional"`` (both need ``alpha``)
    or ``"vn"`` for the von Neumann relative entropy, which gives the Holevo
    capacity ``chi``.
    """
    _check_tp(ch)
    cfg = cfg or OptimizerConfig()
    if selector == "sandwiched":
        return alpha_holevo(ch, alpha, cfg, full_output=full_output)
    if selector == "traditional":
        _check_alpha(alpha)
        fn = lambda outs, probs, state: _traditional_ensemble_grads(outs, probs, alpha)
        stream = 42
    elif selector in ("vn", "von_neumann"):
        fn = lambda outs, probs, state: _holevo_ensemble_grads(outs, probs)
        stream = 43
    else:
        raise DomainError(f"unknown divergence selector {selector!r}")
    value, ens, ok, n = _maximize_ensemble(ch, fn, cfg, stream=stream)
    if not full_output:
        return value
    outs = [chn.apply(ch, r) for r in ens.states]
    if selector == "traditional":
        A = _traditional_ensemble_grads(outs, ens.probs, alpha)[3]
        sigma = linalg.fractional_power(A, 1 / alpha)
        sigma = sigma / np.trace(sigma).real
    else:
        sigma = ens.average()
        sigma = sum(p * o for p, o in zip(ens.probs, outs))
    return EnsembleOptimum(value, ens, sigma, ok, n)


def holevo_capacity(ch: KrausChannel, cfg: OptimizerConfig | None = None) -> RadiusResult:
    """Holevo capacity ``chi`` as a von Neumann information radius.

    The optimal ensemble fixes ``sigma_star`` as its average output; the
    reported value is ``max_psi D(N(psi)||sigma_star)``, and ``gap_estimate``
    is its distance to the ensemble's Holevo quantity.
    """
    _check_tp(ch)
    cfg = cfg or OptimizerConfig()
    ens_opt = generalized_holevo(ch, "vn", cfg, full_output=True)
    sigma = ens_opt.sigma_star
    sigma = 0.5 * (sigma + sigma.conj().T)
    sigma = sigma / np.trace(sigma).real
    leak, psi = _leak_check(ch, sigma)
    if leak > SUPPORT_LEAK_TOL:
        log.warning("holevo_capacity: output escapes the support of sigma* (leak %.2e)", leak)
        return RadiusResult(math.inf, sigma, chn.pure_state(psi), ens_opt.restarts_used, False, math.inf)
    starts = [np.linalg.eigh(r)[1][:, -1] for r in ens_opt.ensemble.states]
    opt = maximize_pure(ch.stacked(), dv.vn_objective(sigma), cfg, cfg.rng(51), starts=starts)
    gap = max(opt.value - ens_opt.value, 0.0)
    converged = opt.converged and gap <= 1e-5
    return RadiusResult(opt.value, sigma, chn.pure_state(opt.psi), ens_opt.restarts_used + opt.restarts_used,
                        converged, gap)


def c_constant(ch: KrausChannel, cfg: OptimizerConfig | None = None, sigma=None, full_output: bool = False):
    """Channel constant ``c = max_rho 2^{D_{3/2}(N(rho)||sigma*)/2} + 2``.

    ``sigma`` defaults to the optimal output state of :func:`holevo_capacity`.
    Returns ``inf`` (with a logged diagnostic) if an output escapes its support.
    """
    _check_tp(ch)
    cfg = cfg or OptimizerConfig()
    if sigma is None:
        sigma = holevo_capacity(ch, cfg).sigma_star
    leak, psi = _leak_check(ch, sigma)
    if leak > SUPPORT_LEAK_TOL:
        log.warning("c_constant: output escapes supp(sigma*) (leak %.2e); c is unbounded", leak)
        return (math.inf, psi) if full_output else math.inf
    opt = maximize_pure(ch.stacked(), dv.traditional_objective(sigma, 1.5), cfg, cfg.rng(61))
    c = 2.0 ** (0.5 * opt.value) + 2.0
    return (c, opt.psi) if full_output else c


def covariant_radius_bound(ch: KrausChannel, alpha: float, cfg: OptimizerConfig | None = None) -> float:
    """``log2 d - H_alpha^min(N)``: the radius around the maximally mixed output."""
    _check_tp(ch)
    return math.log2(ch.dim_out) - dv.min_output_renyi(ch, alpha, cfg)


@dataclass
class SubadditivityReport:
    gap: float
    joint_max: float
    radius_1: RadiusResult
    radius_2: RadiusResult
    restarts_used: int


def subadditivity_gap(ch1: KrausChannel, ch2: KrausChannel, alpha: float, cfg: OptimizerConfig | None = None,
                      restarts: int = 50, full_output: bool = False):
    """Excess of the joint radius around ``sigma_1* (x) sigma_2*`` over ``K~(N_1) + K~(N_2)``.

    The joint maximum runs over pure, generally entangled, inputs of the
    product channel. A value clearly above zero would contradict
    subadditivity for an entanglement-breaking ``ch1``.
    """
    _check_alpha(alpha)
    cfg = cfg or OptimizerConfig()
    r1 = info_radius(ch1, alpha, cfg)
    r2 = info_radius(ch2, alpha, cfg)
    joint = chn.tensor_channel(ch1, ch2)
    sigma = linalg.tensor_product(r1.sigma_star, r2.sigma_star)
    w1 = np.linalg.eigh(r1.worst_input)[1][:, -1]
    w2 = np.linalg.eigh(r2.worst_input)[1][:, -1]
    around = info_radius_around(joint, sigma, alpha, cfg, starts=[np.kron(w1, w2)], restarts=restarts)
    gap = around.value - (r1.value + r2.value)
    if not full_output:
        return gap
    return SubadditivityReport(gap, around.value, r1, r2, around.restarts_used)


def fixed_sigma_subadditivity_gap(ch: KrausChannel, sigma, alpha: float, n: int = 2,
                                  cfg: OptimizerConfig | None = None, restarts: int = 50,
                                  full_output: bool = False):
    """``K~^[sigma^n](N^n) - n K~^[sigma](N)`` for a Hadamard channel.

    A channel whose complement is not certified entanglement-breaking is
    still evaluated; the report's ``hadamard`` field records the verdict.
    """
    _check_alpha(alpha)
    cfg = cfg or OptimizerConfig()
    verdict = chn.is_eb_small(chn.complementary(ch))
    if verdict != "yes":
        log.warning("fixed_sigma_subadditivity_gap: complement EB verdict is %r", verdict)
    single = info_radius_around(ch, sigma, alpha, cfg)
    psi1 = np.linalg.eigh(single.worst_input)[1][:, -1]
    start = psi1
    for _ in range(n - 1):
        start = np.kron(start, psi1)
    multi = info_radius_around(chn.tensor_channel(*[ch] * n), linalg.tensor_product(*[sigma] * n), alpha, cfg,
                               starts=[start], restarts=restarts)
    gap = multi.value - n * single.value
    if not full_output:
        return gap
    return {"gap": gap, "single": single, "multi": multi, "hadamard": verdict}
