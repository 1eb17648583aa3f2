"""Command-line front end.

Every verb reads JSON inputs, prints JSON (or CSV for sweeps) to stdout or
``--out``, and maps failures onto exit codes: 2 for unparseable input, 3
for a violated invariant, 4 for a call outside an operation's regime and 1
for a failed property suite.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys

import numpy as np

from . import capacity as cap
from . import channels as chn
from . import converse as cv
from . import divergences as dv
from . import linalg
from . import verify
from .channels import Ensemble, KrausChannel
from .errors import DimensionError, DomainError, RegimeError, RenyiCapError

EXIT_OK, EXIT_PROPERTY, EXIT_PARSE, EXIT_INVARIANT, EXIT_REGIME = 0, 1, 2, 3, 4

DEFAULTS = {
    "alpha": 1.5,
    "n": 10,
    "rate": None,
    "p": 0.0,
    "trials": 20,
    "restarts": 8,
    "seed": 0,
}


class InputError(Exception):
    """An input file could not be read or parsed."""


def _num(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return linalg.matrix_to_json(obj)
    if isinstance(obj, (np.floating, float)):
        return _num(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_channel(path: str) -> KrausChannel:
    obj = _read_json(path)
    try:
        return KrausChannel.from_json(obj)
    except RenyiCapError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed channel JSON: {exc}") from exc


def load_state(path: str) -> np.ndarray:
    obj = _read_json(path)
    try:
        M = linalg.matrix_from_json(obj)
    except RenyiCapError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed matrix JSON: {exc}") from exc
    return chn.density_matrix(M)


def load_ensemble(path: str) -> Ensemble:
    obj = _read_json(path)
    try:
        return Ensemble.from_json(obj)
    except RenyiCapError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed ensemble JSON: {exc}") from exc


def _cfg(args) -> cap.OptimizerConfig:
    return cap.OptimizerConfig(restarts=args.restarts, seed=args.seed)


def _radius_record(r: cap.RadiusResult) -> dict:
    return {
        "value_bits": r.value,
        "sigma_star": r.sigma_star,
        "worst_input": r.worst_input,
        "converged": r.converged,
        "restarts_used": r.restarts_used,
        "gap_estimate": r.gap_estimate,
    }


# ---------------------------------------------------------------------------
# verbs


def run_divergence(args) -> dict:
    A, B = load_state(args.state_a), load_state(args.state_b)
    if A.shape != B.shape:
        raise DimensionError("states act on spaces of different dimension")
    if args.kind == "sandwiched":
        res = dv.sandwiched_d(A, B, args.alpha)
    elif args.kind == "traditional":
        res = dv.renyi_d(A, B, args.alpha)
    else:
        res = dv.vn_relative_entropy(A, B)
    return {"value_bits": res.value, "support_ok": res.support_ok, "kind": args.kind,
            "alpha": None if args.kind == "vn" else args.alpha}


def run_radius(args) -> dict:
    ch = load_channel(args.channel)
    if args.sigma:
        r = cap.info_radius_around(ch, load_state(args.sigma), args.alpha, _cfg(args))
    else:
        r = cap.info_radius(ch, args.alpha, _cfg(args))
    return dict(_radius_record(r), alpha=args.alpha)


def run_capacity(args) -> dict:
    ch = load_channel(args.channel)
    cfg = _cfg(args)
    if args.kind == "holevo":
        r = cap.holevo_capacity(ch, cfg)
        return dict(_radius_record(r), kind="holevo", c_constant=cap.c_constant(ch, cfg, sigma=r.sigma_star))
    opt = cap.generalized_holevo(ch, args.kind, cfg, alpha=args.alpha, full_output=True)
    return {"value_bits": opt.value, "kind": args.kind, "alpha": args.alpha, "sigma_star": opt.sigma_star,
            "converged": opt.converged, "restarts_used": opt.restarts_used,
            "ensemble": opt.ensemble.to_json()}


def run_bound(args) -> dict:
    ch = load_channel(args.channel)
    cfg = _cfg(args)
    n = args.n
    if args.variant == "weak":
        # the channel file stands for the whole n-use channel, so its chi is chi_total
        chi = cap.holevo_capacity(ch, cfg).value
        return {"variant": "weak", "n": n, "eps": args.p, "chi_total": chi,
                "rate_max": cv.weak_converse_rate(n, args.p, chi)}
    if args.rate is None:
        raise RegimeError("--rate is required for this bound variant")
    if args.variant == "generic":
        chi_a = cap.alpha_holevo(ch, args.alpha, cfg)
        rep = cv.generic_bound(n, args.rate, n * chi_a, args.alpha)
        if chn.is_eb_small(ch) != "yes":
            rep.flags.append("single_letter_chi_alpha_not_certified")
    elif args.variant == "eb":
        rep = cv.eb_exponent_bound(ch, n, args.rate, cfg)
    else:
        rep = cv.sqrt_n_bound(ch, n, args.rate, cfg)
    return dict(rep.to_json(), variant=args.variant)


def run_simulate(args) -> dict:
    ch = load_channel(args.channel)
    ens = load_ensemble(args.ensemble)
    if args.rate is None:
        raise RegimeError("--rate is required for simulate")
    if ens.dim != ch.dim_in:
        raise DimensionError("ensemble dimension does not match the channel input")
    spec = cv.CodeSpec(args.n, args.rate, ens, seed=args.seed)
    res = cv.simulate_code(ch, spec, args.trials)
    return dict(res, n=args.n, R=args.rate, seed=args.seed)


def run_sweep(args) -> list[dict]:
    ch = load_channel(args.channel)
    cfg = _cfg(args)
    rows = []
    for a in args.alphas:
        if args.quantity == "radius":
            r = cap.info_radius(ch, a, cfg)
            rows.append({"alpha": a, "value_bits": r.value, "converged": r.converged, "restarts_used": r.restarts_used})
        elif args.quantity == "holevo":
            opt = cap.alpha_holevo(ch, a, cfg, full_output=True)
            rows.append({"alpha": a, "value_bits": opt.value, "converged": opt.converged,
                         "restarts_used": opt.restarts_used})
        else:
            opt = dv.min_output_renyi(ch, a, cfg, full_output=True)
            rows.append({"alpha": a, "value_bits": opt.value, "converged": opt.converged,
                         "restarts_used": opt.restarts_used})
    return rows


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["alpha", "value_bits", "converged", "restarts_used"])
    for r in rows:
        w.writerow([repr(float(r["alpha"])), _num(float(r["value_bits"])), str(bool(r["converged"])).lower(),
                    int(r["restarts_used"])])
    return buf.getvalue()


def run_verify(args) -> dict:
    # validate every supplied file before any property runs
    for path in args.inputs:
        load_channel(path)
    return verify.run_suite(args.suite, args.seed)


# ---------------------------------------------------------------------------


def _alpha_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad alpha list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, default=DEFAULTS["alpha"], help="Renyi order (default %(default)s)")
    common.add_argument("--n", type=int, default=DEFAULTS["n"], help="channel uses (default %(default)s)")
    common.add_argument("--rate", type=float, default=DEFAULTS["rate"], help="rate R in bits per use")
    common.add_argument("--p", type=float, default=DEFAULTS["p"],
                        help="error probability for the weak converse (default %(default)s)")
    common.add_argument("--trials", type=int, default=DEFAULTS["trials"],
                        help="random codebooks to simulate (default %(default)s)")
    common.add_argument("--seed", type=int, default=None,
                        help="random seed (default: $RENYICAP_SEED, else 0)")
    common.add_argument("--restarts", type=int, default=DEFAULTS["restarts"],
                        help="optimizer restarts (default %(default)s)")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--format", choices=["json", "csv"], default=None,
                        help="output format (default: csv for sweep, json otherwise)")
    common.add_argument("-v", "--verbose", action="store_true", help="log optimizer diagnostics")

    p = argparse.ArgumentParser(prog="renyicap", description="Sandwiched Renyi divergences, channel radii and converse bounds.")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("divergence", parents=[common], help="divergence between two states")
    s.add_argument("state_a")
    s.add_argument("state_b")
    s.add_argument("--kind", choices=["sandwiched", "traditional", "vn"], default="sandwiched")
    s.set_defaults(func=run_divergence)

    s = sub.add_parser("radius", parents=[common], help="sandwiched information radius of a channel")
    s.add_argument("channel")
    s.add_argument("--sigma", default=None, help="fix the output state instead of minimizing over it")
    s.set_defaults(func=run_radius)

    s = sub.add_parser("capacity", parents=[common], help="Holevo capacity or an alpha-Holevo information")
    s.add_argument("channel")
    s.add_argument("--kind", choices=["holevo", "sandwiched", "traditional"], default="holevo")
    s.set_defaults(func=run_capacity)

    s = sub.add_parser("bound", parents=[common], help="converse bound on the success probability")
    s.add_argument("channel")
    s.add_argument("--variant", choices=["generic", "eb", "sqrtn", "weak"], default="eb",
                   help="weak reads the channel file as the full n-use channel (default %(default)s)")
    s.set_defaults(func=run_bound)

    s = sub.add_parser("simulate", parents=[common], help="exact success of random codebooks under the PGM")
    s.add_argument("channel")
    s.add_argument("ensemble")
    s.set_defaults(func=run_simulate)

    s = sub.add_parser("sweep", parents=[common], help="a channel quantity over a list of alphas (CSV)")
    s.add_argument("channel")
    s.add_argument("--alphas", type=_alpha_list, default=[1.1, 1.5, 2.0], help="comma-separated (default 1.1,1.5,2.0)")
    s.add_argument("--quantity", choices=["radius", "holevo", "min_output_entropy"], default="radius")
    s.set_defaults(func=run_sweep)

    s = sub.add_parser("verify", parents=[common], help="run a property corpus")
    s.add_argument("suite", choices=list(verify.SUITES) + ["all"])
    s.add_argument("inputs", nargs="*", help="channel files validated before the corpus runs")
    s.set_defaults(func=run_verify)
    return p


def _resolve_seed(args) -> None:
    if args.seed is None:
        env = os.environ.get("RENYICAP_SEED")
        try:
            args.seed = int(env) if env not in (None, "") else DEFAULTS["seed"]
        except ValueError:
            raise InputError(f"RENYICAP_SEED must be an integer, got {env!r}")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with code 2 on bad flags
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        _resolve_seed(args)
        result = args.func(args)
        fmt = args.format or ("csv" if args.verb == "sweep" else "json")
        if args.verb == "sweep" and fmt == "csv":
            text = sweep_csv(result)
        elif fmt == "csv":
            raise InputError(f"csv output is only available for sweep, not {args.verb}")
        elif args.verb == "verify":
            text = verify.report_json(result)
        else:
            text = dumps(result)
        _emit(text, args.out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (RegimeError, DomainError) as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except RenyiCapError as exc:
        print(f"invariant violated ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    if args.verb == "verify" and not result["passed"]:
        return EXIT_PROPERTY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
