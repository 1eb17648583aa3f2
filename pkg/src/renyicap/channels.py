"""Quantum states, ensembles, measurements and channels in Kraus form.

States and operators are plain complex ``numpy`` arrays; the container types
below validate their invariants once, at construction.

Conventions:

* Choi matrices live on ``output (x) input`` and use the unnormalized
  maximally entangled vector ``sum_i |i>|i>``.
* A Stinespring isometry maps ``A -> B (x) E`` with the environment last.
* Random objects take an explicit ``seed`` (int or ``numpy.random.Generator``);
  nothing touches global RNG state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .errors import DimensionError, DomainError, InvalidStateError, NotPSDError

STATE_TOL = 1e-10
TP_TOL = 1e-9
POVM_TOL = 1e-9
PPT_TOL = 1e-9
INTERIOR_MARGIN = 1e-3


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def is_psd(A, tol: float = STATE_TOL) -> bool:
    w = np.linalg.eigvalsh(linalg.hermitian(A))
    return bool(w[0] >= -tol * max(1.0, abs(w[-1])))


def density_matrix(rho, tol: float = STATE_TOL) -> np.ndarray:
    """Validate ``rho`` as a density matrix (PSD, unit trace) and return it symmetrized."""
    try:
        R = linalg.hermitian(rho)
    except ValueError as exc:
        raise InvalidStateError(f"density matrix: {exc}") from exc
    w = np.linalg.eigvalsh(R)
    if w[0] < -tol:
        raise InvalidStateError(f"density matrix is not PSD (min eigenvalue {w[0]:.3e})")
    tr = np.trace(R).real
    if abs(tr - 1) > tol:
        raise InvalidStateError(f"density matrix trace is {tr!r}, not 1")
    return R


def pure_state(psi) -> np.ndarray:
    """Projector onto the normalized vector ``psi``."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def trace_distance(rho, sigma) -> float:
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(np.asarray(rho) - np.asarray(sigma)))))


# ---------------------------------------------------------------------------
# container types


@dataclass(frozen=True)
class Ensemble:
    """Input ensemble ``{p(x), rho_x}``."""

    probs: np.ndarray
    states: tuple

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).reshape(-1)
        if len(p) != len(self.states) or len(p) == 0:
            raise InvalidStateError("ensemble needs one probability per state")
        if np.any(p < 0) or abs(p.sum() - 1) > STATE_TOL:
            raise InvalidStateError(f"ensemble probabilities must be >= 0 and sum to 1, got {p}")
        states = tuple(density_matrix(s) for s in self.states)
        if len({s.shape for s in states}) != 1:
            raise DimensionError("ensemble states must share a dimension")
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "states", states)

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    def __len__(self):
        return len(self.probs)

    def average(self) -> np.ndarray:
        return sum(p * s for p, s in zip(self.probs, self.states))

    def to_json(self) -> dict:
        return {
            "probs": [float(p) for p in self.probs],
            "states": [linalg.matrix_to_json(s) for s in self.states],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Ensemble":
        try:
            return cls(obj["probs"], tuple(linalg.matrix_from_json(m) for m in obj["states"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed ensemble JSON: {exc}") from exc


@dataclass(frozen=True)
class CqState:
    """Classical-quantum state ``sum_x p(x) |x><x| (x) rho_x`` kept in block form."""

    labels: tuple
    probs: np.ndarray
    conditionals: tuple

    def __post_init__(self):
        Ensemble(self.probs, self.conditionals)  # same invariants
        object.__setattr__(self, "probs", np.asarray(self.probs, dtype=float))
        object.__setattr__(self, "conditionals", tuple(np.asarray(c) for c in self.conditionals))

    def matrix(self) -> np.ndarray:
        """Block-diagonal flattening on ``X (x) B``."""
        k = len(self.probs)
        d = self.conditionals[0].shape[0]
        out = np.zeros((k * d, k * d), dtype=complex)
        for i, (p, c) in enumerate(zip(self.probs, self.conditionals)):
            out[i * d:(i + 1) * d, i * d:(i + 1) * d] = p * c
        return out

    def marginal_x(self) -> np.ndarray:
        return np.diag(self.probs).astype(complex)


@dataclass(frozen=True)
class Povm:
    elements: tuple

    def __post_init__(self):
        els = tuple(linalg.hermitian(E) for E in self.elements)
        if not els:
            raise InvalidStateError("POVM needs at least one element")
        d = els[0].shape[0]
        for E in els:
            if E.shape != (d, d):
                raise DimensionError("POVM elements must share a dimension")
            if not is_psd(E):
                raise InvalidStateError("POVM element is not PSD")
        err = np.max(np.abs(sum(els) - np.eye(d)))
        if err > POVM_TOL:
            raise InvalidStateError(f"POVM elements do not sum to identity (error {err:.2e})")
        object.__setattr__(self, "elements", els)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self):
        return len(self.elements)

    def probabilities(self, rho) -> np.ndarray:
        return np.array([np.trace(E @ rho).real for E in self.elements])


@dataclass(frozen=True)
class KrausChannel:
    """Completely positive map ``X -> sum_k A_k X A_k^dag``.

    ``trace_preserving`` is derived from the Kraus operators, so conjugated
    (non trace-preserving) maps travel through the same type.
    """

    kraus: tuple
    trace_preserving: bool = field(init=False)

    def __post_init__(self):
        ops = tuple(linalg.as_matrix(A) for A in self.kraus)
        if not ops:
            raise InvalidStateError("channel needs at least one Kraus operator")
        if len({A.shape for A in ops}) != 1:
            raise DimensionError("Kraus operators must share a shape")
        object.__setattr__(self, "kraus", ops)
        d_in = ops[0].shape[1]
        gram = sum(A.conj().T @ A for A in ops)
        tp = float(np.max(np.abs(gram - np.eye(d_in)))) <= TP_TOL
        object.__setattr__(self, "trace_preserving", tp)

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    def stacked(self) -> np.ndarray:
        """Kraus operators as an array of shape ``(k, dim_out, dim_in)``."""
        return np.stack(self.kraus)

    def __call__(self, X) -> np.ndarray:
        return apply_map(self, X)

    def to_json(self) -> dict:
        return {
            "dim_in": self.dim_in,
            "dim_out": self.dim_out,
            "kraus": [linalg.matrix_to_json(A) for A in self.kraus],
            "trace_preserving": self.trace_preserving,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "KrausChannel":
        try:
            ch = cls(tuple(linalg.matrix_from_json(m) for m in obj["kraus"]))
            dims = (int(obj["dim_in"]), int(obj["dim_out"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed channel JSON: {exc}") from exc
        if dims != (ch.dim_in, ch.dim_out):
            raise DimensionError(f"declared dims {dims} disagree with Kraus shape")
        if "trace_preserving" in obj and bool(obj["trace_preserving"]) != ch.trace_preserving:
            raise InvalidStateError("declared trace_preserving flag disagrees with Kraus operators")
        return ch


@dataclass(frozen=True)
class Isometry:
    """Stinespring isometry ``A -> B (x) E`` stored as a ``(dim_b*dim_e, dim_a)`` matrix."""

    matrix: np.ndarray
    dim_b: int
    dim_e: int

    @property
    def dim_a(self) -> int:
        return self.matrix.shape[1]

    def apply(self, rho) -> np.ndarray:
        return self.matrix @ rho @ self.matrix.conj().T


# ---------------------------------------------------------------------------
# channel actions


def apply_map(ch: KrausChannel, X) -> np.ndarray:
    """Action of the CP map on any operator, without state validation."""
    K = ch.stacked()
    X = np.asarray(X, dtype=complex)
    if X.shape != (ch.dim_in, ch.dim_in):
        raise DimensionError(f"input shape {X.shape} does not match channel input dim {ch.dim_in}")
    return np.einsum("kij,jl,kml->im", K, X, K.conj(), optimize=True)


def adjoint_map(ch: KrausChannel, Y) -> np.ndarray:
    """Heisenberg-picture map ``Y -> sum_k A_k^dag Y A_k``."""
    K = ch.stacked()
    return np.einsum("kji,jl,klm->im", K.conj(), np.asarray(Y, dtype=complex), K, optimize=True)


def apply(ch: KrausChannel, rho) -> np.ndarray:
    """Apply a trace-preserving channel to a density matrix."""
    if not ch.trace_preserving:
        raise InvalidStateError("channel is not trace-preserving; use apply_map for CP maps")
    rho = density_matrix(rho)
    if rho.shape[0] != ch.dim_in:
        raise DimensionError(f"state dim {rho.shape[0]} does not match channel input dim {ch.dim_in}")
    out = apply_map(ch, rho)
    return 0.5 * (out + out.conj().T)


def choi(ch: KrausChannel) -> np.ndarray:
    """Choi matrix ``(N (x) id)(|gamma><gamma|)`` on ``output (x) input``."""
    d = ch.dim_in
    out = np.zeros((ch.dim_out * d, ch.dim_out * d), dtype=complex)
    for A in ch.kraus:
        # (A (x) I)|gamma> = sum_i A|i> (x) |i>, i.e. vec of A in row-major order
        v = A.reshape(-1)
        out += np.outer(v, v.conj())
    return out


def choi_spectrum(ch: KrausChannel) -> np.ndarray:
    return np.linalg.eigvalsh(choi(ch))


def tensor_channel(*channels: KrausChannel) -> KrausChannel:
    """Parallel composition ``N_1 (x) N_2 (x) ...``."""
    ops = [np.ones((1, 1), dtype=complex)]
    for ch in channels:
        ops = [np.kron(A, B) for A in ops for B in ch.kraus]
    return KrausChannel(tuple(ops))


def compose(outer: KrausChannel, inner: KrausChannel) -> KrausChannel:
    """Sequential composition ``outer o inner``."""
    if outer.dim_in != inner.dim_out:
        raise DimensionError("composition dimension mismatch")
    return KrausChannel(tuple(B @ A for B in outer.kraus for A in inner.kraus))


def partial_trace_output(ch: KrausChannel, dims: Sequence[int], keep: Sequence[int]) -> KrausChannel:
    """Compose ``ch`` with a partial trace on its (multipartite) output."""
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != ch.dim_out:
        raise DimensionError("output dims do not multiply to channel output dimension")
    keep = sorted(keep)
    drop = [k for k in range(len(dims)) if k not in keep]
    ops = []
    for A in ch.kraus:
        T = A.reshape(dims + [ch.dim_in])
        T = np.moveaxis(T, drop, list(range(len(drop))))
        n_drop = int(np.prod([dims[k] for k in drop])) if drop else 1
        d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
        T = T.reshape(n_drop, d_keep, ch.dim_in)
        ops.extend(T[j] for j in range(n_drop))
    return KrausChannel(tuple(ops))


# ---------------------------------------------------------------------------
# constructions


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel((np.eye(d, dtype=complex),))


def unitary_channel(U) -> KrausChannel:
    U = linalg.as_matrix(U)
    if np.max(np.abs(U.conj().T @ U - np.eye(U.shape[1]))) > TP_TOL:
        raise InvalidStateError("matrix is not unitary")
    return KrausChannel((U,))


def _weyl_operators(d: int) -> list[np.ndarray]:
    X = np.roll(np.eye(d), 1, axis=0).astype(complex)
    Z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return [np.linalg.matrix_power(X, a) @ np.linalg.matrix_power(Z, b) for a in range(d) for b in range(d)]


def depolarizing(d: int, p: float) -> KrausChannel:
    """``rho -> (1-p) rho + p Tr(rho) I/d`` with ``d**2`` Weyl-operator Kraus terms."""
    if not 0 <= p <= 1:
        raise DomainError(f"depolarizing parameter must lie in [0, 1], got {p}")
    W = _weyl_operators(d)
    weights = np.full(d * d, p / d**2)
    weights[0] += 1 - p  # W[0] is the identity
    return KrausChannel(tuple(np.sqrt(w) * U for w, U in zip(weights, W)))


def completely_depolarizing(d: int) -> KrausChannel:
    return depolarizing(d, 1.0)


def dephasing(d: int, q: float) -> KrausChannel:
    """Generalized dephasing ``rho -> (1-q) rho + q Z rho Z^dag`` with the clock matrix ``Z``."""
    if not 0 <= q <= 1:
        raise DomainError(f"dephasing parameter must lie in [0, 1], got {q}")
    Z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return KrausChannel((np.sqrt(1 - q) * np.eye(d, dtype=complex), np.sqrt(q) * Z))


def pinching(basis, dim: int | None = None) -> KrausChannel:
    """Pinching in the orthonormal basis given by the columns of ``basis``."""
    U = linalg.as_matrix(basis)
    if dim is not None and U.shape != (dim, dim):
        raise DimensionError(f"basis must be {dim}x{dim}")
    if np.max(np.abs(U.conj().T @ U - np.eye(U.shape[1]))) > TP_TOL:
        raise InvalidStateError("pinching basis is not unitary")
    return KrausChannel(tuple(np.outer(U[:, x], U[:, x].conj()) for x in range(U.shape[1])))


def eb_from_measure_prepare(povm: Povm, outputs: Sequence) -> KrausChannel:
    """Entanglement-breaking channel ``X -> sum_x N_x Tr(M_x X)`` with rank-one Kraus operators.

    Each pair of eigenvectors ``|n>`` of ``N_x`` and ``|m>`` of ``M_x`` gives a
    Kraus operator ``sqrt(nu * mu) |n><m|``.
    """
    if not isinstance(povm, Povm):
        povm = Povm(tuple(povm))
    if len(outputs) != len(povm):
        raise DimensionError("need one output state per POVM element")
    outs = [density_matrix(N) for N in outputs]
    ops = []
    for M, N in zip(povm.elements, outs):
        mw, mv = np.linalg.eigh(M)
        nw, nv = np.linalg.eigh(N)
        for i in np.flatnonzero(mw > STATE_TOL * max(mw[-1], 1e-300)):
            for j in np.flatnonzero(nw > STATE_TOL * max(nw[-1], 1e-300)):
                ops.append(np.sqrt(mw[i] * nw[j]) * np.outer(nv[:, j], mv[:, i].conj()))
    return KrausChannel(tuple(ops))


def stinespring(ch: KrausChannel) -> Isometry:
    """Isometry ``V = sum_x A_x (x) |x>_E``."""
    if not ch.trace_preserving:
        raise InvalidStateError("Stinespring isometry requires a trace-preserving channel")
    k = len(ch.kraus)
    V = sum(np.kron(A, np.eye(k, dtype=complex)[:, [x]]) for x, A in enumerate(ch.kraus))
    return Isometry(V, ch.dim_out, k)


def complementary(ch: KrausChannel) -> KrausChannel:
    """Map to the environment, ``X -> Tr_B(V X V^dag)``.

    Kraus operator ``b`` has rows ``<b| A_x`` for each environment index ``x``.
    """
    K = ch.stacked()  # (e, d_out, d_in)
    return KrausChannel(tuple(K[:, b, :] for b in range(ch.dim_out)))


def conjugate_map(ch: KrausChannel, X) -> KrausChannel:
    """The CP map ``rho -> X N(rho) X`` for PSD ``X``."""
    X = linalg.hermitian(X)
    if X.shape[0] != ch.dim_out:
        raise DimensionError("conjugating operator must act on the channel output")
    if not is_psd(X):
        raise NotPSDError("conjugating operator must be PSD")
    return KrausChannel(tuple(X @ A for A in ch.kraus))


def choi_ppt_min_eig(ch: KrausChannel) -> float:
    C = choi(ch)
    PT = linalg.partial_transpose(C, [ch.dim_out, ch.dim_in], 1)
    return float(np.linalg.eigvalsh(0.5 * (PT + PT.conj().T))[0])


def is_eb_small(ch: KrausChannel) -> str:
    """PPT test on the Choi matrix: ``"yes"``, ``"no"`` or ``"inconclusive"``.

    PPT is equivalent to separability only when ``dim_in * dim_out <= 6``; a
    PPT Choi matrix on a larger space returns ``"inconclusive"``.
    """
    scale = max(1.0, float(np.trace(choi(ch)).real))
    m = choi_ppt_min_eig(ch)
    if m < -PPT_TOL * scale:
        return "no"
    return "yes" if ch.dim_in * ch.dim_out <= 6 else "inconclusive"


def eb_interior_verdict(ch: KrausChannel, margin: float = INTERIOR_MARGIN) -> str:
    """Heuristic test that ``ch`` sits inside the entanglement-breaking set.

    Requires a full-rank Choi matrix whose partial transpose has minimum
    eigenvalue above ``margin``. Only decisive at 2 (x) 2.
    """
    C = choi(ch)
    full_rank = np.linalg.eigvalsh(C)[0] > margin
    interior = full_rank and choi_ppt_min_eig(ch) > margin
    if not interior:
        return "no"
    return "yes" if ch.dim_in * ch.dim_out <= 4 else "inconclusive"


def hadamard_from_eb(eb: KrausChannel) -> KrausChannel:
    """Hadamard channel as the complement of an entanglement-breaking channel."""
    if is_eb_small(eb) == "no":
        raise InvalidStateError("channel is not entanglement-breaking")
    return complementary(eb)


def smooth_hadamard(nh: KrausChannel, p: float) -> KrausChannel:
    """Smoothed Hadamard map ``M_p : A -> B (x) F``.

    The environment of ``nh`` is passed through a depolarizing channel ``D_p``
    realized by the isometry ``W_p : E -> E (x) F`` with ``|F| = |E|**2``;
    ``M_p`` keeps ``B (x) F``. ``Tr_F o M_p = nh`` for every ``p`` and the
    complement of ``M_p`` is ``D_p o nh^c``.
    """
    if not nh.trace_preserving:
        raise InvalidStateError("smoothing needs a trace-preserving channel")
    if not 0 <= p <= 1:
        raise DomainError(f"smoothing parameter must lie in [0, 1], got {p}")
    e = len(nh.kraus)
    dep = depolarizing(e, p)  # Kraus index f runs over |F| = e**2 slots
    K = nh.stacked()  # (e, d_b, d_a)
    ops = []
    for k in range(e):
        # <k|_E W_p |x>_E summed against A_x: sum_x (D_f)[k, x] A_x (x) |f>
        cols = [np.tensordot(D[k, :], K, axes=(0, 0)) for D in dep.kraus]
        ops.append(sum(np.kron(C, np.eye(e * e)[:, [f]]) for f, C in enumerate(cols)))
    return KrausChannel(tuple(ops))


def ic_povm(d: int, seed=None, attempts: int = 10) -> Povm:
    """Random rank-one informationally complete POVM with ``d**2`` elements."""
    if d < 2:
        raise DomainError("informationally complete POVM needs d >= 2")
    rng = _rng(seed)
    for _ in range(attempts):
        V = rng.normal(size=(d * d, d)) + 1j * rng.normal(size=(d * d, d))
        S = V.T @ V.conj()  # sum_k |v_k><v_k|
        S_inv_half = linalg.fractional_power(S, -0.5)
        els = []
        for v in V:
            u = S_inv_half @ v
            els.append(np.outer(u, u.conj()))
        gram = np.array([[np.vdot(a, b) for b in els] for a in els])
        if np.linalg.matrix_rank(gram, tol=1e-10) == d * d:
            return Povm(tuple(els))
    raise InvalidStateError(f"failed to draw an informationally complete POVM in {attempts} attempts")


def cq_state(ens: Ensemble, ch: KrausChannel) -> CqState:
    if ens.dim != ch.dim_in:
        raise DimensionError("ensemble dimension does not match channel input")
    outs = tuple(apply(ch, rho) for rho in ens.states)
    return CqState(tuple(range(len(ens))), ens.probs, outs)


# ---------------------------------------------------------------------------
# random sampling


def _ginibre(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_vector(d: int, seed=None) -> np.ndarray:
    v = _ginibre(_rng(seed), d)
    return v / np.linalg.norm(v)


def random_pure(d: int, seed=None) -> np.ndarray:
    """Haar-random pure state from a normalized complex Gaussian vector."""
    return pure_state(random_vector(d, seed))


def random_density(d: int, rank: int | None = None, seed=None) -> np.ndarray:
    """Normalized Gram matrix ``G G^dag`` of a ``d x rank`` complex Gaussian factor."""
    rank = d if rank is None else rank
    G = _ginibre(_rng(seed), (d, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def random_unitary(d: int, seed=None) -> np.ndarray:
    Q, R = np.linalg.qr(_ginibre(_rng(seed), (d, d)))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_channel(d_in: int, d_out: int | None = None, kraus_count: int = 2, seed=None) -> KrausChannel:
    """Channel from a column-orthonormalized Gaussian ``(k*d_out) x d_in`` block."""
    d_out = d_in if d_out is None else d_out
    if kraus_count < 1:
        raise DomainError("kraus_count must be >= 1")
    if kraus_count * d_out < d_in:
        raise DimensionError("kraus_count * d_out must be at least d_in for an isometry")
    Q, R = np.linalg.qr(_ginibre(_rng(seed), (kraus_count * d_out, d_in)))
    Q = Q * (np.diag(R) / np.abs(np.diag(R)))
    return KrausChannel(tuple(Q.reshape(kraus_count, d_out, d_in)))


def random_measure_prepare(d_in: int, d_out: int | None = None, outcomes: int = 2, seed=None) -> KrausChannel:
    """Entanglement-breaking channel from a random POVM and random output states."""
    d_out = d_in if d_out is None else d_out
    rng = _rng(seed)
    G = [_ginibre(rng, (d_in, d_in)) for _ in range(outcomes)]
    raw = [g @ g.conj().T for g in G]
    S_inv_half = linalg.fractional_power(sum(raw), -0.5)
    elements = tuple(S_inv_half @ r @ S_inv_half for r in raw)
    outputs = [random_density(d_out, seed=rng) for _ in range(outcomes)]
    return eb_from_measure_prepare(Povm(elements), outputs)
