"""Dense Hermitian matrix algebra.

Everything here works on plain ``numpy`` arrays. Matrix functions are
computed through a full Hermitian eigendecomposition; dimensions in this
package stay small (at most a few dozen), so exactness is cheap.

Powers of positive semidefinite operators are *pseudo-powers*: eigenvalues
at or below ``support_tol * lambda_max`` are treated as exact zeros and
mapped to zero for every exponent, negative ones included.
"""

from __future__ import annotations

from functools import reduce
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConvergenceError, DimensionError, DomainError, NotPSDError

HERMITICITY_TOL = 1e-10
SUPPORT_TOL = 1e-10


class Spectrum(NamedTuple):
    """Eigenvalues in ascending order and the unitary of eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(X, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Return ``X`` as a finite 2-d complex array, checking the shape if given."""
    M = np.asarray(X, dtype=complex)
    if M.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {M.shape}")
    if rows is not None and M.shape[0] != rows:
        raise DimensionError(f"expected {rows} rows, got {M.shape[0]}")
    if cols is not None and M.shape[1] != cols:
        raise DimensionError(f"expected {cols} columns, got {M.shape[1]}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def hermitian(H, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate ``H`` as Hermitian and return its symmetrized copy ``(H + H^dag)/2``."""
    M = as_matrix(H)
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"Hermitian operator must be square, got shape {M.shape}")
    err = np.max(np.abs(M - M.conj().T)) if M.size else 0.0
    if err > tol:
        raise ValueError(f"matrix is not Hermitian (max asymmetry {err:.3e} > {tol:.1e})")
    return 0.5 * (M + M.conj().T)


def herm_eigendecompose(H) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    M = hermitian(H)
    try:
        w, v = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"Hermitian eigensolver did not converge: {exc}") from exc
    return Spectrum(w, v)


def _eigh(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # hot path: no validation, symmetrize only
    A = 0.5 * (A + A.conj().swapaxes(-1, -2))
    try:
        return np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"Hermitian eigensolver did not converge: {exc}") from exc


def _psd_spectrum(A: np.ndarray, support_tol: float, check: bool = True):
    w, v = _eigh(A)
    top = max(float(w[-1]), 0.0) if w.size else 0.0
    if check and w.size and w[0] < -support_tol * top - 1e-14:
        raise NotPSDError(f"operator has negative eigenvalue {w[0]:.3e}")
    on_support = w > support_tol * top
    return w, v, on_support


def spectral_apply(A, func, support_tol: float = SUPPORT_TOL, check: bool = True) -> np.ndarray:
    """Apply ``func`` to the eigenvalues of PSD ``A`` on its support; zero elsewhere."""
    w, v, on = _psd_spectrum(np.asarray(A, dtype=complex), support_tol, check)
    fw = np.zeros_like(w)
    fw[on] = func(w[on])
    return (v * fw) @ v.conj().T


def fractional_power(A, t: float, support_tol: float = SUPPORT_TOL) -> np.ndarray:
    """Pseudo-power ``A^t`` of a positive semidefinite operator.

    Eigenvalues above ``support_tol * lambda_max`` are raised to ``t``; the
    rest are mapped to zero, so negative ``t`` gives the inverse power on the
    support.

    Raises:
        NotPSDError: if ``A`` has an eigenvalue below ``-support_tol * lambda_max``.
    """
    A = hermitian(A)
    return spectral_apply(A, lambda w: w**t, support_tol)


def psd_log2(A, support_tol: float = SUPPORT_TOL) -> np.ndarray:
    """Base-2 logarithm of ``A`` on its support (zero on the kernel)."""
    return spectral_apply(A, np.log2, support_tol)


def schatten_norm(X, alpha: float) -> float:
    """Schatten ``alpha``-norm from singular values; ``alpha=np.inf`` gives the operator norm."""
    if not alpha >= 1:
        raise DomainError(f"Schatten norm needs alpha >= 1, got {alpha}")
    s = np.linalg.svd(as_matrix(X), compute_uv=False)
    if s.size == 0:
        return 0.0
    if np.isinf(alpha):
        return float(s[0])
    top = s[0]
    if top == 0:
        return 0.0
    # scale by the largest singular value to keep s**alpha in range
    return float(top * np.sum((s / top) ** alpha) ** (1.0 / alpha))


def tensor_product(*ops) -> np.ndarray:
    """Kronecker product with row-major (first factor slowest) index convention."""
    if not ops:
        raise ValueError("tensor_product needs at least one operand")
    return reduce(np.kron, (np.asarray(op, dtype=complex) for op in ops))


def _check_dims(M: np.ndarray, dims: Sequence[int]) -> list[int]:
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or M.shape != (int(np.prod(dims)),) * 2:
        raise DimensionError(f"matrix shape {M.shape} does not match subsystem dims {dims}")
    return dims


def partial_trace(M, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    ``dims`` lists subsystem dimensions in tensor order; the kept subsystems
    stay in their original order.
    """
    M = np.asarray(M, dtype=complex)
    dims = _check_dims(M, dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise DimensionError(f"keep indices {keep} out of range for {n} subsystems")
    drop = [k for k in range(n) if k not in keep]
    T = M.reshape(dims + dims)
    # contract each dropped row index with its column index, last first
    for k in sorted(drop, reverse=True):
        m = T.ndim // 2
        T = np.trace(T, axis1=k, axis2=k + m)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return T.reshape(d_keep, d_keep)


def partial_transpose(M, dims: Sequence[int], sys: int) -> np.ndarray:
    """Transpose subsystem ``sys`` of a multipartite operator."""
    M = np.asarray(M, dtype=complex)
    dims = _check_dims(M, dims)
    n = len(dims)
    T = M.reshape(dims + dims)
    axes = list(range(2 * n))
    axes[sys], axes[sys + n] = axes[sys + n], axes[sys]
    return T.transpose(axes).reshape(M.shape)


def support_projector(A, tol: float = SUPPORT_TOL) -> np.ndarray:
    """Orthogonal projector onto eigenvectors of PSD ``A`` with ``lambda > tol * lambda_max``."""
    return spectral_apply(hermitian(A), np.ones_like, tol, check=False)


def support_contained(A, B, tol: float = SUPPORT_TOL) -> bool:
    """Whether ``supp(A)`` lies in ``supp(B)``, up to ``tol`` relative to ``||A||``."""
    A = hermitian(A)
    B = hermitian(B)
    if A.shape != B.shape:
        raise DimensionError(f"shape mismatch {A.shape} vs {B.shape}")
    Q = np.eye(A.shape[0]) - support_projector(B, tol)
    leak = np.linalg.norm(Q @ A @ Q, 2)
    scale = np.linalg.norm(A, 2)
    return bool(leak <= tol * scale)


def divided_differences(w: np.ndarray, f, fprime) -> np.ndarray:
    """First divided-difference matrix ``(f(w_i)-f(w_j))/(w_i-w_j)``, ``f'(w_i)`` on ties."""
    fw = f(w)
    dw = w[:, None] - w[None, :]
    df = fw[:, None] - fw[None, :]
    close = np.abs(dw) <= 1e-12 * np.maximum(1.0, np.abs(w)[:, None])
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(close, 0.0, df / np.where(close, 1.0, dw))
    mid = 0.5 * (w[:, None] + w[None, :])
    return np.where(close, fprime(mid), out)


def frechet_adjoint(w: np.ndarray, v: np.ndarray, f, fprime, G: np.ndarray) -> np.ndarray:
    """Gradient of ``X -> Tr[G f(X)]`` at ``X = v diag(w) v^dag`` (Daleckii-Krein)."""
    gamma = divided_differences(w, f, fprime)
    Gt = v.conj().T @ G @ v
    return v @ (gamma * Gt) @ v.conj().T


def matrix_to_json(X) -> dict:
    """Encode a complex matrix as ``{"rows", "cols", "data": [[re, im], ...]}`` row-major."""
    M = as_matrix(X)
    flat = M.reshape(-1)
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from exc
    if len(data) != rows * cols:
        raise DimensionError(f"matrix JSON has {len(data)} entries, expected {rows * cols}")
    arr = np.array([complex(float(re), float(im)) for re, im in data], dtype=complex)
    return as_matrix(arr.reshape(rows, cols))
