"""Batch command-line interface.

Every command is file-driven and reproducible: grids go to CSV, scalar and
structured reports to JSON, and any command that draws random numbers
requires an explicit --seed.  Exit codes: 0 success, 1 verification
failure, 2 configuration error, 3 numerical or domain error.  The
environment variable BILGAMMA_THREADS caps internal parallelism; results
never depend on the worker count.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .bilateral import BilateralGamma
from .combo import build_mixture, load_model
from .errors import BilgammaError, KappaUndefinedError, ModelFileError
from .pricing import (
    PricingInputs,
    martingale_diagnostics,
    price_call_atm,
    price_call_gamma_series,
    price_call_integral,
    price_call_monte_carlo,
)
from .quadrature import QuadratureSpec
from .sampling import RandomStream, sample_compound_poisson, sample_direct, sample_path
from .stein import (
    DEFAULT_CONSTANTS,
    bound_compound_poisson_k,
    bound_d3_bg,
    bound_d3_normal,
    bound_two_sums,
    d3_bg_terms,
    d3_normal_terms,
    empirical_kolmogorov,
    kappa_inputs,
)
from .verify import run_suite

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(Exception):
    pass


def _load_model(path: str):
    if not Path(path).is_file():
        raise ConfigError(f"model file not found: {path}")
    return load_model(path)


def _load_json(path: str, what: str) -> dict:
    if not Path(path).is_file():
        raise ConfigError(f"{what} file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {what} file {path}: {exc}") from exc


def _write_csv(path: str | None, header, rows):
    out = open(path, "w", newline="", encoding="utf-8") if path else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(header)
        writer.writerows(rows)
    finally:
        if path:
            out.close()


def _write_json(path: str | None, payload: dict):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path:
        Path(path).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _spec_from_args(args) -> QuadratureSpec:
    return QuadratureSpec(abs_tol=args.abs_tol, rel_tol=args.rel_tol,
                          max_subdivisions=args.max_subdivisions)


def _thread_cap() -> int:
    raw = os.environ.get("BILGAMMA_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"BILGAMMA_THREADS must be an integer, got {raw!r}")


def _parse_tgrid(text: str) -> np.ndarray:
    try:
        start, step, stop = (float(v) for v in text.split(":"))
    except ValueError:
        raise ConfigError(f"--tgrid must be start:step:stop, got {text!r}")
    if step <= 0 or stop <= start:
        raise ConfigError("--tgrid needs step > 0 and stop > start")
    n = int(round((stop - start) / step))
    return start + step * np.arange(n + 1)


# -- commands ----------------------------------------------------------------


def cmd_pdf(args) -> int:
    model = _load_model(args.model)
    spec = _spec_from_args(args)
    rep = build_mixture(model, tail_tol=args.tail_tol)
    xs = np.linspace(args.xmin, args.xmax, args.points)
    rows = []
    for x in xs:
        fourier = model.pdf_fourier(float(x), spec)
        series = rep.pdf_series(float(x), spec) if x != 0.0 else math.nan
        diff = abs(series - fourier) if x != 0.0 else math.nan
        rows.append([f"{x:.12g}", f"{fourier:.12e}", f"{series:.12e}",
                     f"{diff:.3e}"])
    _write_csv(args.out, ["x", "pdf_fourier", "pdf_series", "abs_diff"], rows)
    return EXIT_OK


def cmd_cf(args) -> int:
    model = _load_model(args.model)
    rep = build_mixture(model, tail_tol=args.tail_tol)
    zs = np.linspace(-args.zmax, args.zmax, args.points)
    prod = model.cf(zs)
    mix = rep.cf(zs)
    rows = [[f"{z:.12g}", f"{p.real:.12e}", f"{p.imag:.12e}",
             f"{m.real:.12e}", f"{m.imag:.12e}", f"{abs(p - m):.3e}"]
            for z, p, m in zip(zs, prod, mix)]
    _write_csv(args.out, ["z", "cf_product_re", "cf_product_im",
                          "cf_mixture_re", "cf_mixture_im", "abs_diff"], rows)
    return EXIT_OK


def cmd_moments(args) -> int:
    model = _load_model(args.model)
    rep = build_mixture(model, tail_tol=args.tail_tol)
    payload = {
        "moments": {str(k): rep.moment(k) for k in range(1, args.kmax + 1)},
        "cumulants": {str(k): model.cumulant(k) for k in range(1, args.kmax + 1)},
        "mean": model.mean,
        "variance": model.variance,
    }
    _write_json(args.out, payload)
    return EXIT_OK


def cmd_sample(args) -> int:
    model = _load_model(args.model)
    streams = max(1, args.streams)
    counts = [args.n // streams + (1 if i < args.n % streams else 0)
              for i in range(streams)]
    workers = min(_thread_cap(), streams)

    def draw(i: int) -> np.ndarray:
        return sample_direct(model, counts[i], RandomStream(args.seed, i))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(draw, range(streams)))
    else:
        chunks = [draw(i) for i in range(streams)]
    values = np.concatenate(chunks)
    _write_csv(args.out, ["value"], ([f"{v:.17g}"] for v in values))
    return EXIT_OK


def cmd_bounds(args) -> int:
    model = _load_model(args.model)
    payload: dict = {"constants_default": DEFAULT_CONSTANTS.defaults_used}
    try:
        kap = kappa_inputs(model)
        payload["kappa"] = {"g_n": kap.g_n, "h_n": kap.h_n,
                            "kappa_n": kap.kappa_n}
    except KappaUndefinedError as exc:
        _write_json(args.out, {"error": "kappa_undefined",
                               "g_n": exc.g_n, "h_n": exc.h_n})
        return EXIT_NUMERICAL
    if args.target:
        obj = _load_json(args.target, "target")
        try:
            target = BilateralGamma(obj["alpha"], obj["p"], obj["beta"], obj["q"])
        except KeyError as exc:
            raise ConfigError(f"target file missing field {exc}") from exc
        payload["d3_bg"] = {"value": bound_d3_bg(model, target),
                            "terms": d3_bg_terms(model, target)}
    if args.sigma is not None:
        payload["d3_normal"] = {"value": bound_d3_normal(model, args.sigma),
                                "terms": d3_normal_terms(model, args.sigma)}
    if args.other:
        other = _load_model(args.other)
        payload["two_sums"] = {"value": bound_two_sums(model, other)}
    _write_json(args.out, payload)
    return EXIT_OK


def cmd_cp_sweep(args) -> int:
    model = _load_model(args.model)
    try:
        orders = [int(v) for v in args.m.split(",")]
    except ValueError:
        raise ConfigError(f"--m must be a comma-separated integer list, got {args.m!r}")
    if not orders or min(orders) < 1:
        raise ConfigError("compound-Poisson orders must be >= 1")
    reference = sample_direct(model, args.n, RandomStream(args.seed, 0))
    rows = []
    dks = []
    for i, m in enumerate(orders):
        z = sample_compound_poisson(model, m, args.n, RandomStream(args.seed, i + 1))
        dks.append(empirical_kolmogorov(z, reference))
    c_fit = dks[0] / bound_compound_poisson_k(model, orders[0])
    for m, dk in zip(orders, dks):
        bound = c_fit * bound_compound_poisson_k(model, m)
        rows.append([m, f"{dk:.6f}", f"{bound:.6f}"])
    _write_csv(args.out, ["m", "d_k", "bound_fitted"], rows)
    return EXIT_OK


def cmd_price(args) -> int:
    model = _load_model(args.model)
    obj = _load_json(args.pricing, "pricing")
    try:
        inputs = PricingInputs(
            s0=float(obj["s0"]), strike=float(obj["strike"]),
            rate=float(obj["rate"]), maturity=float(obj["maturity"]),
            dividend=float(obj.get("dividend", 0.0)),
            t_now=float(obj.get("t_now", 0.0)),
            spot_at_t=(float(obj["spot_at_t"]) if "spot_at_t" in obj else None))
    except KeyError as exc:
        raise ConfigError(f"pricing file missing field {exc}") from exc
    spec = _spec_from_args(args)
    method = args.method
    if method == "auto":
        method = "integral"
        if inputs.spot_at_t == inputs.strike:
            rep = build_mixture(model, tail_tol=args.tail_tol)
            growth = (rep.eta / (rep.eta - 1.0)) ** inputs.t_remaining \
                if rep.eta > 1.0 else math.inf
            if rep.eta > 1.0 and rep.theta_pos_max * growth < 1.0:
                method = "atm"
    diagnostics: dict = {}
    if method == "integral":
        price = price_call_integral(model, inputs, spec)
        tolerance = 1e-8
    elif method == "series":
        rep = build_mixture(model, tail_tol=args.tail_tol)
        price = price_call_gamma_series(rep, inputs, diagnostics=diagnostics)
        tolerance = diagnostics.get("series_tail_bound", args.tail_tol)
    elif method == "atm":
        rep = build_mixture(model, tail_tol=args.tail_tol)
        price = price_call_atm(rep, inputs, diagnostics=diagnostics)
        tolerance = diagnostics.get("series_tail_bound", args.tail_tol)
    else:  # monte-carlo
        if args.seed is None:
            raise ConfigError("--seed is required for the monte-carlo method")
        price, se = price_call_monte_carlo(model, inputs, args.n,
                                           RandomStream(args.seed, 0))
        tolerance = 4.0 * se
    payload = {
        "price": price,
        "method": method,
        "tolerance_achieved": tolerance,
        "martingale_gap": martingale_diagnostics(
            model, inputs.rate, inputs.dividend)["gap"],
    }
    _write_json(args.out, payload)
    return EXIT_OK


def cmd_simulate(args) -> int:
    model = _load_model(args.model)
    grid = _parse_tgrid(args.tgrid)
    workers = min(_thread_cap(), args.paths)

    def one(i: int) -> np.ndarray:
        return sample_path(model, grid, RandomStream(args.seed, i))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            paths = list(pool.map(one, range(args.paths)))
    else:
        paths = [one(i) for i in range(args.paths)]
    header = ["t"] + [f"path_{i}" for i in range(args.paths)]
    rows = [[f"{t:.12g}"] + [f"{p[k]:.12g}" for p in paths]
            for k, t in enumerate(grid)]
    _write_csv(args.out, header, rows)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_suite(suite=args.suite, seed=args.seed,
                       corrupt_gamma=args.corrupt_gamma)
    _write_json(args.out, report)
    return EXIT_OK if report["passed"] else EXIT_VERIFY_FAILED


# -- parser ------------------------------------------------------------------


def _add_quad_args(p):
    p.add_argument("--abs-tol", type=float, default=1e-10, dest="abs_tol")
    p.add_argument("--rel-tol", type=float, default=1e-10, dest="rel_tol")
    p.add_argument("--max-subdivisions", type=int, default=2000,
                   dest="max_subdivisions")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bilgamma",
        description="Linear combinations of bilateral-gamma laws: densities, "
                    "transforms, bounds, simulation, and option pricing.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pdf", help="density grid (Fourier and series routes)")
    p.add_argument("--model", required=True)
    p.add_argument("--xmin", type=float, required=True)
    p.add_argument("--xmax", type=float, required=True)
    p.add_argument("--points", type=int, default=401)
    p.add_argument("--tail-tol", type=float, default=1e-10, dest="tail_tol")
    p.add_argument("--out")
    _add_quad_args(p)
    p.set_defaults(func=cmd_pdf)

    p = sub.add_parser("cf", help="characteristic-function grid (both routes)")
    p.add_argument("--model", required=True)
    p.add_argument("--zmax", type=float, default=20.0)
    p.add_argument("--points", type=int, default=401)
    p.add_argument("--tail-tol", type=float, default=1e-12, dest="tail_tol")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cf)

    p = sub.add_parser("moments", help="moments and cumulants up to kmax")
    p.add_argument("--model", required=True)
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--tail-tol", type=float, default=1e-12, dest="tail_tol")
    p.add_argument("--out")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("sample", help="i.i.d. draws of the combination")
    p.add_argument("--model", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--streams", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("bounds", help="approximation-bound report")
    p.add_argument("--model", required=True)
    p.add_argument("--target", help="bilateral-gamma target JSON")
    p.add_argument("--sigma", type=float, help="normal target std dev")
    p.add_argument("--other", help="second model (weights-only difference)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("cp-sweep",
                       help="compound-Poisson Kolmogorov-distance sweep")
    p.add_argument("--model", required=True)
    p.add_argument("--m", default="1,2,4,8,16,32,64")
    p.add_argument("--n", type=int, default=100000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cp_sweep)

    p = sub.add_parser("price", help="European call price")
    p.add_argument("--model", required=True)
    p.add_argument("--pricing", required=True)
    p.add_argument("--method", default="auto",
                   choices=["auto", "integral", "series", "atm", "monte-carlo"])
    p.add_argument("--n", type=int, default=1000000)
    p.add_argument("--seed", type=int)
    p.add_argument("--tail-tol", type=float, default=1e-12, dest="tail_tol")
    p.add_argument("--out")
    _add_quad_args(p)
    p.set_defaults(func=cmd_price)

    p = sub.add_parser("simulate", help="process paths on a time grid")
    p.add_argument("--model", required=True)
    p.add_argument("--tgrid", required=True, help="start:step:stop")
    p.add_argument("--paths", type=int, default=1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--suite", default="full", choices=["full", "quick"])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--corrupt-gamma", action="store_true",
                   help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ModelFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KappaUndefinedError as exc:
        print(f"error: {exc} (g_n={exc.g_n:.6g}, h_n={exc.h_n:.6g})",
              file=sys.stderr)
        return EXIT_NUMERICAL
    except BilgammaError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
