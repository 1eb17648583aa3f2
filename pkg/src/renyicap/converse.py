"""Strong and weak converse bounds on the success probability of classical codes.

Exponents are carried per channel use and in bits: a report with exponent
``e`` bounds the success probability of ``n`` uses by ``2^(-n e)``. Working
with exponents instead of probabilities keeps long block lengths from
underflowing and makes ``bound(2n) = bound(n)**2`` exact.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import capacity as cap
from . import channels as chn
from . import divergences as dv
from . import linalg
from .channels import Ensemble, KrausChannel, Povm
from .errors import DomainError, InvariantViolation, RegimeError

log = logging.getLogger(__name__)

LOG2_3 = math.log2(3.0)
SIM_DIM_LIMIT = 256
LEMMA_TOL = 1e-3  # agreement demanded between the two sandwiched optimizers
GAP_TOL = 1e-3  # numerical slack on the radius gap bound
ALGEBRA_TOL = 1e-12


@dataclass(frozen=True)
class CodeSpec:
    """Block length, rate and codeword source of a random product code."""

    n: int
    R: float
    ensemble: Ensemble
    seed: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        if not self.R > 0:
            raise DomainError(f"rate must be positive, got {self.R}")

    @property
    def message_count(self) -> int:
        """``round(2^{nR})``, raised to 2 when the rate is too small for two messages."""
        return max(2, int(round(2.0 ** (self.n * self.R))))

    @property
    def effective_rate(self) -> float:
        """``log2(message_count)/n``, the rate the rounded codebook actually has."""
        return math.log2(self.message_count) / self.n

    def to_json(self) -> dict:
        return {"n": int(self.n), "R": float(self.R), "ensemble": self.ensemble.to_json(), "seed": int(self.seed)}

    @classmethod
    def from_json(cls, obj: dict) -> "CodeSpec":
        try:
            return cls(int(obj["n"]), float(obj["R"]), Ensemble.from_json(obj["ensemble"]), int(obj.get("seed", 0)))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed code spec JSON: {exc}") from exc


@dataclass
class BoundReport:
    """Upper bound ``p_succ_bound = 2^(-n exponent)`` with every intermediate used."""

    n: int
    p_succ_bound: float
    alpha_used: float
    exponent: float
    components: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)

    def __post_init__(self):
        expected = 2.0 ** (-self.exponent * self.n)
        if abs(self.p_succ_bound - expected) > 1e-12 * max(1.0, expected):
            raise InvariantViolation("p_succ_bound must equal 2^(-n*exponent)")

    def to_json(self) -> dict:
        return {
            "n": int(self.n),
            "p_succ_bound": _num(self.p_succ_bound),
            "alpha_used": _num(self.alpha_used),
            "exponent": _num(self.exponent),
            "components": {k: _num(v) for k, v in self.components.items()},
            "flags": list(self.flags),
        }


def _num(x):
    if isinstance(x, (bool, str)) or x is None:
        return x
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _report(n: int, exponent: float, alpha: float, components: dict, flags: list) -> BoundReport:
    """Clamp a non-positive exponent to the trivial bound 1 and flag it."""
    if exponent <= 0:
        components = dict(components, raw_exponent=exponent)
        flags = flags + ["vacuous"]
        exponent = 0.0
    return BoundReport(n, 2.0 ** (-n * exponent), alpha, exponent, components, flags)


def _check_n(n) -> int:
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    return int(n)


def generic_bound(n: int, R: float, chi_alpha_total: float, alpha: float) -> BoundReport:
    """``p_succ <= 2^(-n ((a-1)/a) (R - chi_alpha_total/n))``.

    ``chi_alpha_total`` is the sandwiched Holevo information of ``n`` uses or
    any upper bound on it, such as ``n`` times the single-use value for an
    entanglement-breaking channel.
    """
    n = _check_n(n)
    if not 1 < alpha <= 2:
        raise DomainError(f"alpha must lie in (1, 2], got {alpha}")
    exponent = (alpha - 1) / alpha * (R - chi_alpha_total / n)
    return _report(n, exponent, alpha, {"R": R, "chi_alpha_total": chi_alpha_total}, [])


def h2(eps: float) -> float:
    """Binary entropy in bits with ``h2(0) = h2(1) = 0``."""
    if eps <= 0 or eps >= 1:
        return 0.0
    return -eps * math.log2(eps) - (1 - eps) * math.log2(1 - eps)


def weak_converse_rate(n: int, eps: float, chi_total: float) -> float:
    """Largest rate compatible with error ``eps``: ``(chi_total + h2(eps)) / (n (1 - eps))``."""
    n = _check_n(n)
    if not 0 <= eps < 1:
        raise DomainError(f"eps must lie in [0, 1), got {eps}")
    return (chi_total + h2(eps)) / (n * (1 - eps))


def gap_inequality_check(rho, sigma, alpha: float) -> dict:
    """Both sides of ``D_a(rho||sigma) <= D(rho||sigma) + 4(a-1) log2(nu)^2``.

    ``nu = 2^{D_{3/2}/2} + 2^{-D_{1/2}/2} + 1``; the inequality is only
    claimed for ``1 < a < 1 + log2(3)/(4 log2 nu)``, reported as
    ``alpha_window_ok``. The sandwiched divergence is reported alongside
    since it sits below the traditional one.
    """
    if not 1 < alpha <= 2:
        raise DomainError(f"alpha must lie in (1, 2], got {alpha}")
    rho = chn.density_matrix(rho)
    sigma = chn.density_matrix(sigma)
    d32 = dv.renyi_d_general(rho, sigma, 1.5).value
    if math.isinf(d32):
        log.warning("gap_inequality_check: supp(rho) not inside supp(sigma)")
        return {"lhs": math.inf, "lhs_sandwiched": math.inf, "rhs": math.inf, "nu": math.inf,
                "relative_entropy": math.inf, "alpha_window_ok": False, "holds": False, "support_ok": False}
    d12 = dv.renyi_d_general(rho, sigma, 0.5).value
    nu = 2.0 ** (0.5 * d32) + 2.0 ** (-0.5 * d12) + 1.0
    log_nu = math.log2(nu)
    rel = dv.vn_relative_entropy(rho, sigma).value
    lhs = dv.renyi_d(rho, sigma, alpha).value
    lhs_sw = dv.sandwiched_d(rho, sigma, alpha).value
    rhs = rel + 4 * (alpha - 1) * log_nu**2
    window = alpha < 1 + LOG2_3 / (4 * log_nu)
    return {"lhs": lhs, "lhs_sandwiched": lhs_sw, "rhs": rhs, "nu": nu, "relative_entropy": rel,
            "alpha_window_ok": bool(window), "holds": bool(lhs <= rhs + 1e-9), "support_ok": True}


def choose_alpha(R: float, chi: float, c: float) -> float:
    """``1 + min{log2 3/(4 log2 c), (R-chi)/(8 log2(c)^2), 1}`` for rates above ``chi``."""
    if not R > chi:
        raise RegimeError(f"rate R={R} must exceed chi={chi}")
    if not (c > 1 and math.isfinite(c)):
        raise DomainError(f"c must be finite and > 1, got {c}")
    L = math.log2(c)
    alpha = 1 + min(LOG2_3 / (4 * L), (R - chi) / (8 * L * L), 1.0)
    if chi + (alpha - 1) * L * L > 0.5 * (R + chi) + ALGEBRA_TOL:
        raise InvariantViolation("choose_alpha: chi + (a-1) log2(c)^2 <= (R+chi)/2 violated")
    return alpha


def _channel_constants(ch: KrausChannel, cfg, chi=None, c=None):
    hc = None
    if chi is None or c is None:
        hc = cap.holevo_capacity(ch, cfg)
    if chi is None:
        chi = hc.value
    if c is None:
        c = cap.c_constant(ch, cfg, sigma=hc.sigma_star)
    if math.isinf(c):
        raise DomainError("c_constant is unbounded: an output leaves the support of sigma*")
    return chi, c


def eb_exponent_bound(ch: KrausChannel, n: int, R: float, cfg=None, chi: float | None = None,
                      c: float | None = None, check_chain: bool = True) -> BoundReport:
    """Strong converse bound ``2^(-n (R-chi)^2 / (32 log2(c)^2))`` for an entanglement-breaking channel.

    Every inequality of the derivation is re-checked on the computed numbers
    and an :class:`InvariantViolation` names the first one that fails. The
    quadratic final form needs ``alpha - 1 = (R-chi)/(8 log2(c)^2)``; when
    another term of :func:`choose_alpha` is active the linear form
    ``2^(-n (a-1)(R-chi)/4)`` is returned instead and flagged.

    ``chi`` and ``c`` may be supplied to skip their optimizations.
    """
    n = _check_n(n)
    cfg = cfg or cap.OptimizerConfig()
    if chn.is_eb_small(ch) == "no":
        log.warning("eb_exponent_bound: channel is not entanglement-breaking (PPT test)")
    chi, c = _channel_constants(ch, cfg, chi, c)
    if not R > chi:
        raise RegimeError(f"rate R={R} must exceed the Holevo capacity chi={chi}")
    alpha = choose_alpha(R, chi, c)
    L2 = math.log2(c) ** 2
    second_active = (R - chi) / (8 * L2) <= min(LOG2_3 / (4 * math.log2(c)), 1.0)
    comps = {"chi": chi, "c": c, "R": R, "log2_c": math.log2(c)}
    flags = []

    e3 = (alpha - 1) / alpha * (R - (chi + 4 * (alpha - 1) * L2))
    e4 = (alpha - 1) / 2 * (R - 0.5 * (R + chi))
    e5 = (alpha - 1) / 4 * (R - chi)
    e6 = (R - chi) ** 2 / (32 * L2)
    if check_chain:
        chi_t = cap.alpha_holevo(ch, alpha, cfg)
        k_t = cap.info_radius(ch, alpha, cfg).value
        e1 = (alpha - 1) / alpha * (R - chi_t)
        e2 = (alpha - 1) / alpha * (R - k_t)
        comps.update(chi_alpha=chi_t, K_alpha=k_t, exponent_step1=e1, exponent_step2=e2)
        if abs(chi_t - k_t) > LEMMA_TOL:
            raise InvariantViolation(f"chain step 2: |chi~_a - K~_a| = {abs(chi_t - k_t):.3e} > {LEMMA_TOL}")
        if k_t > chi + 4 * (alpha - 1) * L2 + GAP_TOL:
            raise InvariantViolation("chain step 3: K~_a <= chi + 4(a-1) log2(c)^2 violated")
    if e3 < e4 - ALGEBRA_TOL:
        raise InvariantViolation("chain step 4: exponent with (R+chi)/2 exceeds the gap-bound exponent")
    if abs(e4 - e5) > ALGEBRA_TOL:
        raise InvariantViolation("chain step 5: (a-1)/2 [R-(R+chi)/2] != (a-1)/4 (R-chi)")
    comps.update(exponent_step3=e3, exponent_step4=e4, exponent_step5=e5, exponent_step6=e6)
    if second_active:
        if e5 < e6 - ALGEBRA_TOL:
            raise InvariantViolation("chain step 6: (a-1)(R-chi)/4 < (R-chi)^2/(32 log2(c)^2)")
        exponent = e6
    else:
        flags.append("quadratic_form_not_claimed")
        exponent = e5
    return _report(n, exponent, alpha, comps, flags)


def sqrt_n_threshold(R: float, chi: float, c: float) -> float:
    """Block length beyond which the ``alpha = 1 + 1/sqrt(n)`` exponent is positive."""
    if R <= chi:
        return math.inf
    return (4 * math.log2(c) ** 2 / (R - chi)) ** 2


def sqrt_n_bound(ch: KrausChannel | None, n: int, R: float, cfg=None, chi: float | None = None,
                 c: float | None = None) -> BoundReport:
    """``p_succ <= 2^(-sqrt(n)/(1+1/sqrt(n)) [R - chi - 4 log2(c)^2/sqrt(n)])``.

    Valid for any rate; the exponent turns positive once ``n`` exceeds
    ``components["threshold_n"]`` when ``R > chi``.
    """
    n = _check_n(n)
    if chi is None or c is None:
        if ch is None:
            raise DomainError("a channel is needed unless chi and c are given")
        chi, c = _channel_constants(ch, cfg or cap.OptimizerConfig(), chi, c)
    rn = math.sqrt(n)
    alpha = 1 + 1 / rn
    L2 = math.log2(c) ** 2
    total = rn / (1 + 1 / rn) * (R - (chi + 4 * L2 / rn))
    flags = []
    if alpha - 1 >= LOG2_3 / (4 * math.log2(c)):
        flags.append("alpha_outside_gap_window")
    comps = {"chi": chi, "c": c, "R": R, "threshold_n": sqrt_n_threshold(R, chi, c), "sqrt_n_exponent": total}
    return _report(n, total / n, alpha, comps, flags)


def pgm_decoder(outputs: Sequence, priors: Sequence[float]) -> Povm:
    """Pretty-good measurement ``S^{-1/2} p_m rho_m S^{-1/2}`` plus an abort element.

    The last element is ``I`` minus the rest; it vanishes when the outputs
    span the whole space.
    """
    priors = np.asarray(priors, dtype=float)
    if len(priors) != len(outputs):
        raise DomainError("need one prior per output")
    if np.any(priors < 0) or abs(priors.sum() - 1) > 1e-9:
        raise DomainError("priors must be a probability vector")
    S = sum(p * np.asarray(r, dtype=complex) for p, r in zip(priors, outputs))
    Sih = linalg.fractional_power(S, -0.5)
    els = [Sih @ (p * np.asarray(r, dtype=complex)) @ Sih for p, r in zip(priors, outputs)]
    els = [0.5 * (E + E.conj().T) for E in els]
    d = S.shape[0]
    abort = np.eye(d) - sum(els)
    abort = 0.5 * (abort + abort.conj().T)
    return Povm(tuple(els) + (abort,))


def _pgm_success(outputs: Sequence[np.ndarray]) -> float:
    """Exact average success probability of the PGM for equiprobable ``outputs``."""
    m = len(outputs)
    S = sum(outputs) / m
    Sih = linalg.spectral_apply(S, lambda w: w**-0.5, check=False)
    return float(sum(np.trace(Sih @ r @ Sih @ r).real for r in outputs)) / m**2


def simulate_code(ch: KrausChannel, spec: CodeSpec, trials: int) -> dict:
    """Exact PGM success probabilities of ``trials`` random product codebooks.

    Codebook ``t`` draws ``spec.message_count`` codewords of ``spec.n``
    i.i.d. letters from the ensemble using the stream ``(spec.seed, t)``.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    if ch.dim_out**spec.n > SIM_DIM_LIMIT:
        raise DomainError(f"output dimension {ch.dim_out}^{spec.n} exceeds the limit {SIM_DIM_LIMIT}")
    letters = [chn.apply(ch, r) for r in spec.ensemble.states]
    probs = np.asarray(spec.ensemble.probs, dtype=float)
    m = spec.message_count
    cache: dict = {}

    def word_output(word):
        key = tuple(word)
        if key not in cache:
            cache[key] = linalg.tensor_product(*(letters[i] for i in key))
        return cache[key]

    values = []
    for t in range(trials):
        rng = np.random.default_rng([spec.seed, t])
        words = rng.choice(len(probs), size=(m, spec.n), p=probs)
        values.append(_pgm_success([word_output(w) for w in words]))
    values = np.array(values)
    stderr = float(values.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return {
        "p_succ_hat": float(values.mean()),
        "stderr": stderr,
        "p_succ": values.tolist(),
        "message_count": m,
        "effective_rate": spec.effective_rate,
    }
