"""Multistart local search over pure input states and density matrices.

Both searches use L-BFGS with analytic gradients. A pure state is
parametrized by an unnormalized complex vector ``z`` (``psi = z/|z|``) and a
density matrix by a lower-triangular complex factor ``L``
(``sigma = L L^dag / Tr L L^dag``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from .errors import DomainError

# objective(omega) -> (value, d value / d omega) with the gradient Hermitian
OmegaObjective = Callable[[np.ndarray], tuple[float, np.ndarray]]


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs shared by every multistart optimization.

    ``restarts`` counts random starts of each local search, ``inner_tol`` is
    the agreement needed between starts to call an inner maximum converged,
    ``outer_tol`` the duality gap at which the minimax outer loop stops.
    """

    restarts: int = 8
    inner_tol: float = 1e-9
    outer_tol: float = 1e-7
    max_iters: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise DomainError("restarts must be >= 1")
        if self.inner_tol <= 0 or self.outer_tol <= 0:
            raise DomainError("tolerances must be positive")
        if self.max_iters < 1:
            raise DomainError("max_iters must be >= 1")

    def rng(self, stream: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, stream])


@dataclass
class PureOptimum:
    value: float
    psi: np.ndarray
    converged: bool
    restarts_used: int
    optima: list = field(default_factory=list)  # (value, psi) of every local search


def _vec_to_complex(x: np.ndarray) -> np.ndarray:
    h = x.size // 2
    return x[:h] + 1j * x[h:]


def _complex_to_vec(z: np.ndarray) -> np.ndarray:
    return np.concatenate([z.real, z.imag])


def maximize_pure(
    kraus: np.ndarray,
    objective: OmegaObjective,
    cfg: OptimizerConfig,
    rng: np.random.Generator,
    starts: list[np.ndarray] | None = None,
    restarts: int | None = None,
) -> PureOptimum:
    """Maximize ``objective(N(|psi><psi|))`` over unit vectors ``psi``.

    ``kraus`` has shape ``(k, d_out, d_in)``. Random starts are drawn from
    ``rng`` after any explicit ``starts``; ties keep the first found.
    """
    d_in = kraus.shape[2]
    Kc = kraus.conj()

    def fun(x):
        z = _vec_to_complex(x)
        nz = np.linalg.norm(z)
        psi = z / nz
        phi = kraus @ psi  # (k, d_out)
        omega = phi.T @ phi.conj()
        val, H = objective(omega)
        if not np.isfinite(val):
            return -val, np.zeros_like(x)
        # N^dag(H) applied to psi without forming N^dag(H)
        Gpsi = np.einsum("kji,jl,kl->i", Kc, H, phi, optimize=True)
        g = Gpsi - np.vdot(psi, Gpsi).real * psi
        return -val, -(2.0 / nz) * _complex_to_vec(g)

    n = restarts if restarts is not None else cfg.restarts
    inits = [np.asarray(s, dtype=complex).reshape(-1) for s in (starts or [])]
    inits += [rng.normal(size=d_in) + 1j * rng.normal(size=d_in) for _ in range(n)]

    best_val, best_psi, best_ok = -np.inf, None, False
    values, optima = [], []
    for z0 in inits:
        res = minimize(
            fun,
            _complex_to_vec(z0 / np.linalg.norm(z0)),
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": cfg.max_iters, "gtol": 1e-11, "ftol": 1e-15},
        )
        val = -float(res.fun)
        z = _vec_to_complex(res.x)
        psi = z / np.linalg.norm(z)
        values.append(val)
        optima.append((val, psi))
        if val > best_val:
            best_val, best_psi, best_ok = val, psi, bool(res.success)
    if not np.isfinite(best_val):
        return PureOptimum(best_val, best_psi, True, len(inits), optima)
    scale = max(1.0, abs(best_val))
    agree = sum(v >= best_val - 1e-6 * scale for v in values)
    converged = best_ok or agree >= 2
    return PureOptimum(best_val, best_psi, converged, len(inits), optima)


def params_to_factor(x: np.ndarray, d: int) -> np.ndarray:
    """Lower-triangular complex factor from ``d*d`` reals (real diagonal)."""
    L = np.zeros((d, d), dtype=complex)
    il = np.tril_indices(d, -1)
    L[np.diag_indices(d)] = x[:d]
    m = len(il[0])
    L[il] = x[d:d + m] + 1j * x[d + m:]
    return L


def factor_to_params(L: np.ndarray) -> np.ndarray:
    d = L.shape[0]
    il = np.tril_indices(d, -1)
    return np.concatenate([L[np.diag_indices(d)].real, L[il].real, L[il].imag])


def sigma_from_params(x: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray, float]:
    L = params_to_factor(x, d)
    S = L @ L.conj().T
    t = float(np.trace(S).real)
    return S / t, L, t


def sigma_param_grad(grad_sigma: np.ndarray, sigma: np.ndarray, L: np.ndarray, t: float) -> np.ndarray:
    """Chain rule from ``d f / d sigma`` (Hermitian) to the factor parameters."""
    d = L.shape[0]
    B = L.conj().T @ (grad_sigma - np.trace(grad_sigma @ sigma).real * np.eye(d))
    Gc = (2.0 / t) * B.conj().T  # gradient w.r.t. Re L is Re Gc, w.r.t. Im L is Im Gc
    il = np.tril_indices(d, -1)
    return np.concatenate([Gc[np.diag_indices(d)].real, Gc[il].real, Gc[il].imag])


def sigma_to_params(sigma: np.ndarray) -> np.ndarray:
    d = sigma.shape[0]
    w, v = np.linalg.eigh(0.5 * (sigma + sigma.conj().T))
    w = np.maximum(w, 1e-12 * max(w[-1], 1e-300))
    S = (v * w) @ v.conj().T
    L = np.linalg.cholesky(S + 1e-15 * np.eye(d))
    return factor_to_params(L)


def random_sigma_params(d: int, rng: np.random.Generator) -> np.ndarray:
    G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    S = G @ G.conj().T + 0.5 * np.eye(d)
    return sigma_to_params(S / np.trace(S).real)
