"""Command-line front end.

Every subcommand writes JSON (and CSV where tabular) either to stdout or,
with ``--out DIR``, into files under ``DIR``.  Floats carry 12 significant
digits and each JSON document embeds the run configuration and version.

Exit codes: 0 ok, 2 bad flags or parameters, 3 size/complexity guard,
4 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, bounds, freeprob, kernels
from .errors import (
    ComplexityRefusal,
    DimensionError,
    GuardError,
    NonInvertibleGram,
    NumericalFailure,
)

EXIT_FLAGS, EXIT_GUARD, EXIT_NUMERIC = 2, 3, 4
THEORY_MODELS = ("cgamma", "c", "ccgamma", "mgamma-limit")
SAMPLE_MODELS = ("cgamma", "c", "ccgamma", "mgamma")
SIG = 12


class UsageError(Exception):
    pass


def fmt(x) -> str:
    return f"{float(x):.{SIG}g}"


def clean(obj):
    """Round floats to 12 significant digits, recursively, for JSON output."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return float(fmt(x))
    return obj


def _provenance(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func",)}
    return {"version": __version__, "backend": kernels.BACKEND, "config": cfg}


class Sink:
    """Collects named outputs; dumps them to ``--out`` or stdout."""

    def __init__(self, args):
        self.out = Path(args.out) if args.out else None
        self.items: list[tuple[str, str]] = []

    def json(self, name: str, payload: dict) -> None:
        self.items.append((name + ".json", json.dumps(clean(payload), indent=2, sort_keys=False) + "\n"))

    def csv(self, name: str, header, rows) -> None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else
                        int(v) if isinstance(v, (bool, np.bool_)) else v for v in r])
        self.items.append((name + ".csv", buf.getvalue()))

    def flush(self, stdout=None) -> None:
        stdout = stdout or sys.stdout
        if self.out is None:
            for _, text in self.items:
                stdout.write(text)
            return
        self.out.mkdir(parents=True, exist_ok=True)
        for name, text in self.items:
            (self.out / name).write_text(text, encoding="utf-8")
            print(f"wrote {self.out / name}", file=sys.stderr)


# -- flag parsing ------------------------------------------------------------

def parse_p(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid p value {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError("p must be >= 0")
    return v


def parse_p_list(text: str) -> list[int]:
    try:
        vals = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid moment list {text!r}")
    if not vals or min(vals) < 1:
        raise argparse.ArgumentTypeError("moment orders must be positive integers")
    return vals


def parse_range(text: str) -> tuple[int, int]:
    try:
        a, b = (int(s) for s in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b, got {text!r}")
    if a < 2 or b < a:
        raise argparse.ArgumentTypeError("need 2 <= a <= b")
    return a, b


def unit_interval(text: str) -> float:
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("t must lie in (0, 1)")
    return v


def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--k", type=int, default=2, help="output dimension")
    c.add_argument("--t", type=unit_interval, default=None, help="input ratio d/(nk)")
    c.add_argument("--n", type=int, default=None, help="environment dimension")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--trials", type=int, default=10)
    c.add_argument("--bins", type=int, default=100)
    c.add_argument("--out", default=None, help="output directory (default: stdout)")
    c.add_argument("--bits", action="store_true", help="report entropies in bits")
    c.add_argument("--threads", type=int, default=None)
    c.add_argument("--force", action="store_true", help="override size guards")
    return c


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="randchan", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    common = _common()

    s = sub.add_parser("theory", parents=[common], help="limit-law descriptor and density table")
    s.add_argument("--model", choices=THEORY_MODELS, default="cgamma")
    s.add_argument("--p", type=parse_p_list, default=[1, 2, 3, 4])
    s.set_defaults(func=cmd_theory)

    s = sub.add_parser("sample", parents=[common], help="Monte Carlo eigenvalue histogram")
    s.add_argument("--model", choices=SAMPLE_MODELS, default="cgamma")
    s.add_argument("--d", type=int, default=None, help="input dimension (instead of --t)")
    s.add_argument("--drop-kernel", action="store_true")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("moments-exact", parents=[common], help="exact Weingarten moments")
    s.add_argument("--model", choices=SAMPLE_MODELS, default="cgamma")
    s.add_argument("--d", type=int, default=None)
    s.add_argument("--p", type=parse_p_list, default=[1, 2, 3])
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("bounds", parents=[common], help="entropy and rate bound report")
    s.add_argument("--p", type=parse_p, default=1.0)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("ppt", parents=[common], help="PPT threshold and violation scans")
    s.add_argument("--scan-k", type=parse_range, default=None, metavar="A:B")
    s.add_argument("--p-threshold", action="store_true")
    s.add_argument("--p-finite", action="store_true", help="finite-k minimal p at --k")
    s.set_defaults(func=cmd_ppt)

    s = sub.add_parser("report", parents=[common], help="theory + sample + bounds in one JSON")
    s.add_argument("--p", type=parse_p, default=1.0)
    s.add_argument("--model", choices=("cgamma", "c"), action="append", default=None)
    s.set_defaults(func=cmd_report)
    return ap


# -- commands ----------------------------------------------------------------

def _need_t(args) -> float:
    if args.t is None:
        raise UsageError("--t is required")
    return args.t


def theory_measure(model: str, k: int, t: float) -> tuple[freeprob.SpectralMeasure, float]:
    if model == "cgamma":
        return freeprob.mu_c_gamma(k, t), freeprob.norm_mu_c_gamma(k, t)
    if model == "c":
        return freeprob.mu_c(k, t), freeprob.norm_mu_c(k, t)
    if model == "ccgamma":
        return freeprob.mu_cc_gamma(t), freeprob.norm_mu_cc_gamma(t)
    return freeprob.mu_m_gamma_limit(t), freeprob.norm_mu_m_gamma_limit(t)


def theory_payload(model: str, k: int, t: float, orders) -> tuple[dict, freeprob.SpectralMeasure]:
    mu, nrm = theory_measure(model, k, t)
    payload = {
        "model": model, "k": k, "t": t, "norm": nrm,
        "support": list(mu.support),
        "atoms": [{"position": x, "mass": w} for x, w in mu.atoms],
        "ac_mass": mu.ac_mass(), "total_mass": mu.total_mass(),
        "moments": {str(p): mu.moment(p) for p in orders},
    }
    return payload, mu


def cmd_theory(args, sink: Sink) -> None:
    t = _need_t(args)
    payload, mu = theory_payload(args.model, args.k, t, args.p)
    sink.json("theory", {**_provenance(args), "measure": payload})
    ac = mu.ac_support
    rows = []
    if ac is not None:
        a, b = ac
        for i in range(args.bins):
            x = a + (b - a) * (i + 0.5) / args.bins
            rows.append((x, float(mu.density(x))))
    sink.csv("theory_density", ("x", "density"), rows)


def _sample(args, model: str, t: float | None, d: int | None):
    from .rmt import monte_carlo_spectrum

    if args.n is None:
        raise UsageError("--n is required for sampling")
    return monte_carlo_spectrum(model, args.n, args.k, t=t, d=d, trials=args.trials,
                                seed=args.seed, bins=args.bins, threads=args.threads,
                                force=args.force, drop_kernel=getattr(args, "drop_kernel", False))


def sample_stats(res) -> dict:
    return {
        "model": res.model, "n": res.n, "k": res.k, "d": res.d, "t_effective": res.t,
        "trials": res.trials, "seed": res.seed,
        "median_norm": res.median_norm, "norms": res.norms,
        "lambda_min": res.lambda_min, "lambda_max": res.lambda_max,
        "outside_range": res.outside, "dropped_kernel": res.dropped_kernel,
    }


def cmd_sample(args, sink: Sink) -> None:
    if (args.t is None) == (args.d is None):
        raise UsageError("give exactly one of --t and --d")
    res = _sample(args, args.model, args.t, args.d)
    sink.json("sample", {**_provenance(args), "stats": sample_stats(res)})
    e = res.edges
    sink.csv("sample_histogram", ("left", "right", "count"),
             [(float(e[i]), float(e[i + 1]), int(c)) for i, c in enumerate(res.counts)])


def cmd_moments(args, sink: Sink) -> None:
    from .weingarten import exact_moment

    if args.n is None or args.d is None:
        raise UsageError("--n and --d are required")
    rows = []
    for p in args.p:
        m = exact_moment(args.model, args.n, args.k, args.d, p)
        rows.append({"p": p, "exact": m, "float": float(m)})
    sink.json("moments", {**_provenance(args), "model": args.model, "moments": rows})


def bounds_payload(args) -> dict:
    t = _need_t(args)
    rep = bounds.bound_report(args.p, args.k, t, base="bits" if args.bits else "e")
    return {**rep.as_dict(), "log_base": "2" if args.bits else "e"}


def cmd_bounds(args, sink: Sink) -> None:
    sink.json("bounds", {**_provenance(args), "report": bounds_payload(args)})


def cmd_ppt(args, sink: Sink) -> None:
    if not (args.scan_k or args.p_threshold or args.p_finite):
        t_ = bounds.t_ppt(args.k)
        sink.json("ppt", {**_provenance(args), "k": args.k, "t_ppt": t_,
                          "t_ppt_induced": bounds.t_ppt_induced(args.k)})
        return
    if args.scan_k:
        a, b = args.scan_k
        scan = bounds.ppt_violation_k_scan(range(a, b + 1))
        sink.csv("ppt_scan", ("k", "t", "tensor_value", "single_value_sq", "violated"),
                 [(r.k, r.t, r.tensor_value, r.single_value_sq, r.violated) for r in scan.rows])
        sink.json("ppt_scan_summary", {**_provenance(args), "minimal_k": scan.minimal_k,
                                       "k_range": [a, b]})
    if args.p_threshold or args.p_finite:
        payload = {**_provenance(args)}
        if args.p_threshold:
            payload["p_threshold"] = bounds.ppt_violation_p_threshold()
        if args.p_finite:
            payload["k"] = args.k
            payload["p_finite"] = bounds.ppt_violation_p_finite(args.k)
        sink.json("ppt_threshold", payload)


def cmd_report(args, sink: Sink) -> None:
    t = _need_t(args)
    models = args.model or ["cgamma", "c"]
    theory, samples, comparison = {}, {}, {}
    for m in models:
        theory[m], _ = theory_payload(m, args.k, t, [1, 2])
        res = _sample(args, m, t, None)
        samples[m] = sample_stats(res)
        comparison[m] = {"theory_norm": theory[m]["norm"], "sampled_median_norm": res.median_norm,
                         "abs_deviation": abs(res.median_norm - theory[m]["norm"])}
    sink.json("report", {**_provenance(args), "theory": theory, "sample": samples,
                         "bounds": bounds_payload(args), "comparison": comparison})


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None and args.threads < 1:
        parser.error("--threads must be >= 1")
    sink = Sink(args)
    try:
        args.func(args, sink)
    except (UsageError, DimensionError, NonInvertibleGram) as exc:
        print(f"randchan: error: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except (GuardError, ComplexityRefusal) as exc:
        print(f"randchan: guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (NumericalFailure, ArithmeticError) as exc:
        print(f"randchan: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    sink.flush()
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
