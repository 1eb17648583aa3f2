"""Seeded property corpora with deterministic JSON reports.

Each property records its sample count, the smallest slack observed (how
far the worst sample sits inside the allowed region; negative means a
violation) and, on failure, the instance seed needed to replay it. Reports
contain no timings, so the same seed always yields the same bytes.
"""

from __future__ import annotations

import json
import math
from typing import Callable

import numpy as np

from . import capacity as cap
from . import channels as chn
from . import converse as cv
from . import divergences as dv
from . import linalg
from .errors import DomainError

SUITES = ("divergence-props", "channel-props", "lemma-equality", "subadditivity", "converse-chain")
ALPHAS = (1.1, 1.5, 2.0)


def _round(x: float) -> float | str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.10g}")


class Property:
    """Accumulates slacks for one property; ``slack >= 0`` means the sample passes."""

    def __init__(self, name: str, min_passing: int | None = None):
        self.name = name
        self.samples = 0
        self.passing = 0
        self.worst = math.inf
        self.violation = None
        self.min_passing = min_passing  # None: every sample must pass

    def add(self, slack: float, instance) -> None:
        self.samples += 1
        if slack >= 0:
            self.passing += 1
        elif self.violation is None:
            self.violation = {"instance": instance, "slack": _round(slack)}
        self.worst = min(self.worst, slack)

    @property
    def passed(self) -> bool:
        need = self.samples if self.min_passing is None else self.min_passing
        return self.samples > 0 and self.passing >= need

    def report(self) -> dict:
        out = {"name": self.name, "samples": self.samples, "passing": self.passing,
               "worst_slack": _round(self.worst), "passed": self.passed}
        if self.min_passing is not None:
            out["required_passing"] = self.min_passing
        if not self.passed:
            out["violation"] = self.violation
        return out


def _rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.default_rng([seed, *stream])


def _cfg(seed: int, restarts: int = 8) -> cap.OptimizerConfig:
    return cap.OptimizerConfig(restarts=restarts, seed=seed)


# ---------------------------------------------------------------------------
# divergences


def _triple(seed: int, i: int):
    """Random (rho, sigma, channel) with dims in 2..4; rho may be rank-deficient."""
    rng = _rng(seed, 1, i)
    d = int(rng.integers(2, 5))
    d_out = int(rng.integers(2, 5))
    rho = chn.random_density(d, rank=int(rng.integers(1, d + 1)), seed=rng)
    sigma = chn.random_density(d, seed=rng)
    kmin = -(-d // d_out)
    ch = chn.random_channel(d, d_out, kraus_count=int(rng.integers(kmin, kmin + 3)), seed=rng)
    return rho, sigma, ch


def monotonicity(seed: int, samples: int = 200, alphas=ALPHAS, slack: float = 1e-7) -> Property:
    prop = Property("monotonicity")
    for i in range(samples):
        rho, sigma, ch = _triple(seed, i)
        out_r, out_s = chn.apply(ch, rho), chn.apply(ch, sigma)
        for a in alphas:
            before = dv.sandwiched_d(rho, sigma, a).value
            after = dv.sandwiched_d(out_r, out_s, a).value
            prop.add(before + slack - after, {"seed": [seed, 1, i], "alpha": a})
    return prop


def ordering(seed: int, samples: int = 100, alphas=ALPHAS) -> tuple[Property, Property]:
    """Sandwiched below traditional, and the raw Lieb-Thirring trace inequality."""
    order = Property("ordering")
    lt = Property("lieb_thirring")
    for i in range(samples):
        rho, sigma, _ = _triple(seed, i)
        rng = _rng(seed, 2, i)
        d = rho.shape[0]
        C = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        B = chn.random_density(d, seed=rng) * float(rng.uniform(0.5, 2.0))
        for a in alphas:
            inst = {"seed": [seed, 1, i], "alpha": a}
            order.add(dv.renyi_d(rho, sigma, a).value + 1e-8 - dv.sandwiched_d(rho, sigma, a).value, inst)
            lhs = float(np.sum(np.clip(np.linalg.eigvalsh(linalg.hermitian(C @ B @ C.conj().T, tol=1e-8)), 0, None) ** a))
            rhs = float(np.trace(linalg.spectral_apply(C.conj().T @ C, lambda w: w**a)
                                 @ linalg.spectral_apply(B, lambda w: w**a)).real)
            lt.add(rhs - lhs + 1e-8 * max(1.0, abs(rhs)), {"seed": [seed, 2, i], "alpha": a})
    return order, lt


def positivity_and_equality(seed: int, samples: int = 100) -> tuple[Property, ...]:
    """Positivity, ``D~(rho||rho) = 0`` and small divergence forcing small trace distance.

    Half of the corpus pairs ``rho`` with a slight perturbation of itself so
    the implication is exercised near equality.
    """
    pos = Property("positivity")
    self_zero = Property("self_divergence_zero")
    eq = Property("equality_condition")
    for i in range(samples):
        rng = _rng(seed, 3, i)
        d = int(rng.integers(2, 5))
        rho = chn.random_density(d, seed=rng)
        if i % 2:
            t = 10.0 ** rng.uniform(-6, -1)
            sigma = (1 - t) * rho + t * chn.random_density(d, seed=rng)
        else:
            sigma = chn.random_density(d, seed=rng)
        td = chn.trace_distance(rho, sigma)
        for a in ALPHAS:
            inst = {"seed": [seed, 3, i], "alpha": a}
            val = dv.sandwiched_d(rho, sigma, a).value
            pos.add(val + 1e-9, inst)
            self_zero.add(1e-10 - abs(dv.sandwiched_d(rho, rho, a).value), inst)
            if val <= 1e-6:
                eq.add(1e-3 - td, inst)
    if eq.samples == 0:
        eq.add(0.0, None)
    return pos, self_zero, eq


def ic_povm_separation(seed: int, samples: int = 100, min_td: float = 0.01) -> Property:
    """An informationally complete POVM gives different statistics for unequal states."""
    prop = Property("ic_povm_distinguishes")
    for i in range(samples):
        rng = _rng(seed, 4, i)
        d = int(rng.integers(2, 5))
        povm = chn.ic_povm(d, seed=rng)
        rho = chn.random_density(d, seed=rng)
        t = float(rng.uniform(0.02, 1.0))
        sigma = (1 - t) * rho + t * chn.random_density(d, seed=rng)
        if chn.trace_distance(rho, sigma) < min_td:
            continue
        gap = 0.5 * float(np.sum(np.abs(povm.probabilities(rho) - povm.probabilities(sigma))))
        prop.add(gap - 1e-9, {"seed": [seed, 4, i]})
    return prop


def limit_to_relative_entropy(seed: int, samples: int = 50, min_passing: int = 48) -> tuple[Property, Property]:
    """``D~_{1+h} -> D`` for full-rank qubit pairs: accuracy at h=1e-4 and decrease from 1e-2."""
    acc = Property("limit_accuracy")
    dec = Property("limit_decreasing", min_passing=min_passing)
    for i in range(samples):
        rng = _rng(seed, 5, i)
        rho = chn.random_density(2, seed=rng)
        sigma = chn.random_density(2, seed=rng)
        D = dv.vn_relative_entropy(rho, sigma).value
        e4 = abs(dv.sandwiched_d(rho, sigma, 1 + 1e-4).value - D)
        e2 = abs(dv.sandwiched_d(rho, sigma, 1 + 1e-2).value - D)
        inst = {"seed": [seed, 5, i]}
        acc.add(1e-3 * (1 + abs(D)) - e4, inst)
        dec.add(e2 - e4 - 1e-15, inst)
    return acc, dec


def joint_convexity(seed: int, samples: int = 50) -> tuple[Property, Property]:
    conv = Property("joint_convexity_q")
    quasi = Property("joint_quasi_convexity_d")
    for i in range(samples):
        rng = _rng(seed, 6, i)
        d = int(rng.integers(2, 4))
        k = int(rng.integers(2, 4))
        p = rng.dirichlet(np.ones(k))
        As = [chn.random_density(d, seed=rng) for _ in range(k)]
        Bs = [chn.random_density(d, seed=rng) for _ in range(k)]
        A = sum(w * X for w, X in zip(p, As))
        B = sum(w * X for w, X in zip(p, Bs))
        for a in ALPHAS:
            inst = {"seed": [seed, 6, i], "alpha": a}
            mix = sum(w * dv.sandwiched_q(X, Y, a).value for w, X, Y in zip(p, As, Bs))
            conv.add(mix - dv.sandwiched_q(A, B, a).value + 1e-8, inst)
            worst = max(dv.sandwiched_d(X, Y, a).value for X, Y in zip(As, Bs))
            quasi.add(worst + 1e-7 - dv.sandwiched_d(A, B, a).value, inst)
    return conv, quasi


def invariances(seed: int, samples: int = 50) -> tuple[Property, Property]:
    uni = Property("unitary_invariance_q")
    tens = Property("tensor_multiplicativity_q")
    for i in range(samples):
        rng = _rng(seed, 7, i)
        d = int(rng.integers(2, 4))
        rho, sigma = chn.random_density(d, seed=rng), chn.random_density(d, seed=rng)
        U = chn.random_unitary(d, seed=rng)
        r2, s2 = chn.random_density(2, seed=rng), chn.random_density(2, seed=rng)
        for a in ALPHAS:
            inst = {"seed": [seed, 7, i], "alpha": a}
            q = dv.sandwiched_q(rho, sigma, a).value
            qu = dv.sandwiched_q(U @ rho @ U.conj().T, U @ sigma @ U.conj().T, a).value
            uni.add(1e-9 * max(1.0, q) - abs(q - qu), inst)
            joint = dv.sandwiched_q(np.kron(rho, r2), np.kron(sigma, s2), a).value
            prod = q * dv.sandwiched_q(r2, s2, a).value
            tens.add(1e-9 * max(1.0, prod) - abs(joint - prod), inst)
    return uni, tens


def binary_divergence_bound(seed: int, samples: int = 1000) -> Property:
    """``delta~(eps||1-2^{-nR}) >= (a/(a-1)) log2(1-eps) + nR``."""
    prop = Property("binary_divergence_lower_bound")
    rng = _rng(seed, 8)
    for i in range(samples):
        n = int(rng.integers(1, 50))
        R = float(rng.uniform(0.05, 3.0))
        a = float(rng.uniform(1.01, 2.0))
        q = 1 - 2.0 ** (-n * R)
        eps = float(rng.uniform(0, q))
        val = dv.binary_cq_divergence(eps, n, R, a)
        rhs = a / (a - 1) * math.log2(1 - eps) + n * R
        prop.add(val - rhs + 1e-9 * max(1.0, abs(rhs)), {"seed": [seed, 8], "index": i})
    return prop


def divergence_props(seed: int) -> list[Property]:
    props = [monotonicity(seed)]
    props += ordering(seed)
    props += positivity_and_equality(seed)
    props.append(ic_povm_separation(seed))
    props += limit_to_relative_entropy(seed)
    props += joint_convexity(seed)
    props += invariances(seed)
    props.append(binary_divergence_bound(seed))
    return props


# ---------------------------------------------------------------------------
# channels


def _product_start(opt1, opt2) -> np.ndarray:
    return np.kron(opt1.psi, opt2.psi)


def _nu_pair(ch1, ch2, alpha, cfg, restarts=24):
    o1 = dv.max_output_alpha_norm(ch1, alpha, cfg, full_output=True)
    o2 = dv.max_output_alpha_norm(ch2, alpha, cfg, full_output=True)
    joint_cfg = cap.OptimizerConfig(restarts=restarts, seed=cfg.seed)
    oj = dv.max_output_alpha_norm(chn.tensor_channel(ch1, ch2), alpha, joint_cfg, full_output=True,
                                  starts=[_product_start(o1, o2)])
    prod = o1.value * o2.value
    return abs(oj.value - prod) / prod


def nu_multiplicativity(seed: int, pairs: int = 5, alpha: float = 2.0, tol: float = 1e-3) -> tuple[Property, Property]:
    """``nu_a(M1 (x) M2) = nu_a(M1) nu_a(M2)`` for EB ``M1`` and for Hadamard ``M1``.

    The entanglement-breaking factor is conjugated by a random positive
    operator, which keeps it entanglement-breaking but not trace-preserving,
    and the partner is an arbitrary qubit channel.
    """
    eb_prop = Property("nu_multiplicative_eb")
    had_prop = Property("nu_multiplicative_hadamard")
    for i in range(pairs):
        rng = _rng(seed, 20, i)
        cfg = _cfg(seed)
        eb = chn.random_measure_prepare(2, 2, outcomes=int(rng.integers(2, 5)), seed=rng)
        X = chn.random_density(2, seed=rng) * 2
        eb_x = chn.conjugate_map(eb, X)
        other = chn.random_channel(2, 2, kraus_count=2, seed=rng)
        eb_prop.add(tol - _nu_pair(eb_x, other, alpha, cfg), {"seed": [seed, 20, i]})
        had = chn.hadamard_from_eb(chn.random_measure_prepare(2, 2, outcomes=2, seed=rng))
        other = chn.random_channel(2, 2, kraus_count=2, seed=rng)
        had_prop.add(tol - _nu_pair(had, other, alpha, cfg), {"seed": [seed, 20, i]})
    return eb_prop, had_prop


def channel_structure(seed: int, samples: int = 20) -> list[Property]:
    tp = Property("random_channel_trace_preserving")
    ppt = Property("measure_prepare_output_ppt")
    dual = Property("complement_duality")
    conj = Property("conjugate_map_recovery")
    smooth = Property("smooth_hadamard_marginal")
    for i in range(samples):
        rng = _rng(seed, 21, i)
        inst = {"seed": [seed, 21, i]}
        d_in, d_out = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        ch = chn.random_channel(d_in, d_out, int(rng.integers(-(-d_in // d_out), 4)), seed=rng)
        S = sum(A.conj().T @ A for A in ch.kraus)
        tp.add(1e-9 - float(np.max(np.abs(S - np.eye(ch.dim_in)))), inst)

        mp = chn.random_measure_prepare(2, 2, outcomes=int(rng.integers(2, 5)), seed=rng)
        rho12 = chn.random_density(4, seed=rng)
        out = chn.apply_map(chn.tensor_channel(mp, chn.identity_channel(2)), rho12)
        pt = linalg.partial_transpose(out, [2, 2], 1)
        ppt.add(float(np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))[0]) + 1e-9, inst)

        w1 = np.sort(np.linalg.eigvalsh(chn.choi(ch)))
        w2 = np.sort(np.linalg.eigvalsh(chn.choi(chn.complementary(chn.complementary(ch)))))
        dual.add(1e-8 - float(np.max(np.abs(w1 - w2))), inst)

        X = chn.random_density(ch.dim_out, seed=rng)
        back = chn.conjugate_map(chn.conjugate_map(ch, X), linalg.fractional_power(X, -1))
        err = 0.0
        for a in range(ch.dim_in):
            for b in range(ch.dim_in):
                E = np.zeros((ch.dim_in, ch.dim_in), dtype=complex)
                E[a, b] = 1
                err = max(err, float(np.max(np.abs(chn.apply_map(back, E) - chn.apply_map(ch, E)))))
        conj.add(1e-8 - err, inst)

    for i in range(max(1, samples // 4)):
        rng = _rng(seed, 22, i)
        nh = chn.hadamard_from_eb(chn.random_measure_prepare(2, 2, outcomes=2, seed=rng))
        p = 0.0 if i == 0 else float(rng.uniform(0, 1))
        m = chn.smooth_hadamard(nh, p)
        f = len(nh.kraus) ** 2
        marg = chn.partial_trace_output(m, [nh.dim_out, f], [0])
        err = 0.0
        for a in range(nh.dim_in):
            for b in range(nh.dim_in):
                E = np.zeros((nh.dim_in, nh.dim_in), dtype=complex)
                E[a, b] = 1
                err = max(err, float(np.max(np.abs(chn.apply_map(marg, E) - chn.apply_map(nh, E)))))
        smooth.add(1e-8 - err, {"seed": [seed, 22, i], "p": p})
    return [tp, ppt, dual, conj, smooth]


def channel_props(seed: int) -> list[Property]:
    return channel_structure(seed) + list(nu_multiplicativity(seed))


# ---------------------------------------------------------------------------
# optimizers


def lemma_equality(seed: int, channels: int = 20, alphas=(1.3, 2.0), tol: float = 1e-3) -> Property:
    """Ensemble route and minimax route agree on the sandwiched Holevo quantity."""
    prop = Property("lemma_equality")
    for i in range(channels):
        ch = chn.random_channel(2, 2, kraus_count=2 + i % 3, seed=_rng(seed, 30, i))
        cfg = _cfg(seed, restarts=4)
        for a in alphas:
            chi = cap.alpha_holevo(ch, a, cfg)
            k = cap.info_radius(ch, a, cfg).value
            prop.add(tol - abs(chi - k), {"seed": [seed, 30, i], "alpha": a})
    return prop


def subadditivity(seed: int, channels: int = 10, alphas=(1.5, 2.0), tol: float = 1e-4,
                  restarts: int = 50) -> Property:
    """Entangled inputs never beat the sum of radii when one factor is entanglement-breaking."""
    prop = Property("eb_subadditivity")
    for i in range(channels):
        rng = _rng(seed, 40, i)
        mp = chn.random_measure_prepare(2, 2, outcomes=int(rng.integers(2, 5)), seed=rng)
        other = chn.random_channel(2, 2, kraus_count=2, seed=rng)
        cfg = _cfg(seed, restarts=4)
        for a in alphas:
            gap = cap.subadditivity_gap(mp, other, a, cfg, restarts=restarts)
            prop.add(tol - gap, {"seed": [seed, 40, i], "alpha": a})
    return prop


# ---------------------------------------------------------------------------
# converse


def eb_channel_corpus(seed: int, count: int = 5) -> list:
    """Pinching, an entanglement-breaking depolarizing channel and random measure-prepare channels."""
    chans = [chn.pinching(np.eye(2)), chn.depolarizing(2, 0.8)]
    i = 0
    while len(chans) < count:
        chans.append(chn.random_measure_prepare(2, 2, outcomes=3, seed=_rng(seed, 50, i)))
        i += 1
    return chans[:count]


def converse_chain(seed: int, count: int = 5, offsets=(0.1, 0.5), n: int = 10) -> list[Property]:
    chain = Property("eb_chain_assertions")
    doubling = Property("bound_doubling")
    thresh = Property("sqrt_n_threshold")
    for i, ch in enumerate(eb_channel_corpus(seed, count)):
        cfg = _cfg(seed, restarts=4)
        hc = cap.holevo_capacity(ch, cfg)
        c = cap.c_constant(ch, cfg, sigma=hc.sigma_star)
        for off in offsets:
            inst = {"channel": i, "seed": seed, "offset": off}
            R = hc.value + off
            try:
                rep = cv.eb_exponent_bound(ch, n, R, cfg, chi=hc.value, c=c)
                chain.add(0.0, inst)
            except Exception as exc:  # record which step failed
                chain.add(-1.0, dict(inst, error=str(exc)))
                continue
            rep2 = cv.eb_exponent_bound(ch, 2 * n, R, cfg, chi=hc.value, c=c, check_chain=False)
            doubling.add(1e-12 - abs(rep2.p_succ_bound - rep.p_succ_bound**2), inst)
            nstar = cv.sqrt_n_threshold(R, hc.value, c)
            # the sqrt-n exponent vanishes exactly at the threshold
            L2 = math.log2(c) ** 2
            resid = R - (hc.value + 4 * L2 / math.sqrt(nstar))
            thresh.add(1e-12 - abs(resid), inst)
    return [chain, doubling, thresh]


def choose_alpha_guarantee(seed: int, samples: int = 1000) -> Property:
    prop = Property("choose_alpha_guarantee")
    rng = _rng(seed, 51)
    for i in range(samples):
        chi = float(rng.uniform(0, 2))
        R = chi + float(10.0 ** rng.uniform(-4, 1))
        c = float(1 + 10.0 ** rng.uniform(-2, 2))
        a = cv.choose_alpha(R, chi, c)
        prop.add(0.5 * (R + chi) - (chi + (a - 1) * math.log2(c) ** 2) + 1e-12, {"seed": [seed, 51], "index": i})
    return prop


def simulation_dominance(seed: int, trials: int = 20, ns=(2, 3, 4), offsets=(0.2, 0.5),
                         alphas=(1.5, 2.0)) -> tuple[Property, Property]:
    """Exact PGM success of random product codebooks never exceeds the generic bound.

    The bound uses ``n`` times the single-use sandwiched Holevo quantity and
    the rate of the rounded codebook.
    """
    prop = Property("simulation_dominance")
    mono = Property("bound_nonincreasing_in_n")
    ens = chn.Ensemble(np.array([0.5, 0.5]), (np.diag([1.0, 0.0]), np.diag([0.0, 1.0])))
    channels = {"pinching": chn.pinching(np.eye(2)), "depolarizing_eb": chn.depolarizing(2, 0.8)}
    for name, ch in channels.items():
        cfg = _cfg(seed, restarts=4)
        chi = cap.holevo_capacity(ch, cfg).value
        chi_a = {a: cap.alpha_holevo(ch, a, cfg) for a in alphas}
        for off in offsets:
            prev = {a: math.inf for a in alphas}
            for n in ns:
                spec = cv.CodeSpec(n, chi + off, ens, seed=seed)
                sim = cv.simulate_code(ch, spec, trials)
                for a in alphas:
                    b = cv.generic_bound(n, spec.effective_rate, n * chi_a[a], a).p_succ_bound
                    inst = {"channel": name, "n": n, "offset": off, "alpha": a, "seed": seed}
                    for t, p_succ in enumerate(sim["p_succ"]):
                        prop.add(b + 1e-9 - p_succ, dict(inst, codebook=t))
                    fixed = cv.generic_bound(n, chi + off, n * chi_a[a], a).p_succ_bound
                    mono.add(prev[a] - fixed + 1e-15, inst)
                    prev[a] = fixed
    return prop, mono


def converse_props(seed: int) -> list[Property]:
    return converse_chain(seed) + [choose_alpha_guarantee(seed)] + list(simulation_dominance(seed))


# ---------------------------------------------------------------------------


RUNNERS: dict[str, Callable[[int], list[Property]]] = {
    "divergence-props": divergence_props,
    "channel-props": channel_props,
    "lemma-equality": lambda s: [lemma_equality(s)],
    "subadditivity": lambda s: [subadditivity(s)],
    "converse-chain": converse_props,
}


def run_suite(suite: str, seed: int) -> dict:
    """Run one named corpus (or ``"all"``) and return its report."""
    names = SUITES if suite == "all" else (suite,)
    for name in names:
        if name not in RUNNERS:
            raise DomainError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    sections = []
    for name in names:
        props = RUNNERS[name](seed)
        sections.append({"suite": name, "passed": all(p.passed for p in props),
                         "properties": [p.report() for p in props]})
    return {"suite": suite, "seed": int(seed), "passed": all(s["passed"] for s in sections), "sections": sections}


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
