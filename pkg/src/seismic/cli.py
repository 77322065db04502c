"""Command-line interface.

Subcommands: ``predict``, ``simulate``, ``calibrate``, ``fit-kernel``,
``evaluate``, ``import-snap``. Times given on the command line are in
minutes. Failures print one line ``error: <CODE>: <message>`` to stderr and
exit with 2 (usage/config), 3 (parse/I-O) or 4 (numeric/fit).
"""
import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .calibration import calibrate, fit_memory_kernel
from .config import RunConfig, dumps_config, load_config
from .errors import ConfigError, NoPredictionError, ParseError, SeismicError
from .evaluation import METHODS, run_benchmark
from .estimator import Cascade
from .io import import_snap, load_corpus, parse_cascade, write_cascade
from .predictor import MINUTE, PredictionParams, predict
from .simulator import (DAY, ConstantInfectiousness, DecayingInfectiousness, DegreeDistribution,
                        PiecewiseInfectiousness, SimConfig, simulate_cascade)

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_NUMERIC = 0, 2, 3, 4


def _minutes_list(text):
    try:
        values = [float(v) * MINUTE for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated minutes, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty time list")
    return values


def _degree_spec(text):
    kind, _, rest = text.partition(":")
    args = rest.split(":") if rest else []
    try:
        if kind == "constant" and len(args) == 1:
            return DegreeDistribution.constant(int(args[0]))
        if kind == "poisson" and len(args) == 1:
            return DegreeDistribution.poisson(float(args[0]))
        if kind == "zipf" and len(args) == 2:
            return DegreeDistribution.zipf(float(args[0]), int(args[1]))
    except (ValueError, SeismicError) as err:
        raise argparse.ArgumentTypeError(str(err))
    raise argparse.ArgumentTypeError(
        f"bad distribution {text!r}; use constant:N, poisson:MEAN or zipf:EXPONENT:CAP")


def _p_spec(text):
    kind, _, rest = text.partition(":")
    args = rest.split(":") if rest else []
    try:
        if kind == "constant" and len(args) == 1:
            return ConstantInfectiousness(float(args[0]))
        if kind == "decay" and len(args) == 2:
            return DecayingInfectiousness(float(args[0]), float(args[1]) * MINUTE)
        if kind == "piecewise" and len(args) == 2:
            breaks = tuple(float(b) * MINUTE for b in args[0].split("/") if b)
            values = tuple(float(v) for v in args[1].split("/"))
            return PiecewiseInfectiousness(breaks, values)
    except (ValueError, SeismicError) as err:
        raise argparse.ArgumentTypeError(str(err))
    raise argparse.ArgumentTypeError(
        f"bad infectiousness {text!r}; use constant:P, decay:P0:TAU_MIN or "
        "piecewise:B1/B2:V0/V1/V2 (breaks in minutes)")


def _describe(obj):
    if isinstance(obj, DegreeDistribution):
        return {"kind": obj.kind, "args": list(obj.args)}
    return {"kind": type(obj).__name__, **{k: (list(v) if isinstance(v, tuple) else v)
                                           for k, v in vars(obj).items()}}


def _config(args):
    return load_config(args.config) if args.config else RunConfig()


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


# -- commands ----------------------------------------------------------------

def _fmt6(x):
    return f"{x:.6g}"


def cmd_predict(args):
    cfg = _config(args)
    times = args.times or list(cfg.eval_times)
    cascades = [parse_cascade(p) for p in args.cascades]
    out, close = _open_out(args.out)
    try:
        if args.format == "csv":
            out.write("id,time_seconds,R_t,p_hat,state,r_inf_hat\n")
        for cascade in cascades:
            for t in times:
                rec = _predict_record(cascade, t, cfg)
                if args.format == "jsonl":
                    out.write(json.dumps(rec, sort_keys=True) + "\n")
                else:
                    p = "" if rec["p_hat"] is None else _fmt6(rec["p_hat"])
                    r = "" if rec["r_inf_hat"] is None else _fmt6(rec["r_inf_hat"])
                    out.write(f"{rec['id']},{_fmt6(t)},{rec['R_t']},{p},{rec['state']},{r}\n")
    finally:
        if close:
            out.close()
    return EXIT_OK


def _predict_record(cascade, t, cfg):
    r_t = cascade.reshare_count(t)
    rec = {"id": cascade.id, "time_seconds": t, "R_t": r_t, "p_hat": None,
           "state": "GATED", "r_inf_hat": None}
    if r_t < max(cfg.min_reshares, 1):
        return rec
    try:
        pred = predict(cascade, t, cfg.kernel, cfg.prediction)
    except NoPredictionError:
        rec["state"] = "NO_PREDICTION"
        return rec
    rec["p_hat"] = pred.p_hat
    if pred.is_supercritical:
        rec["state"] = "SUPERCRITICAL"
    else:
        rec["state"] = "OK"
        rec["r_inf_hat"] = pred.r_inf_hat
    return rec


def cmd_simulate(args):
    if args.out is None:
        raise ConfigError("simulate needs --out DIR")
    cfg = _config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    horizon = args.horizon_days * DAY if args.horizon_days is not None else cfg.horizon_seconds
    seeds = np.random.SeedSequence(args.seed).generate_state(args.count, dtype=np.uint64)
    root_rng = np.random.default_rng(np.random.SeedSequence([args.seed, 1]))
    roots = args.root_degree.sample(root_rng, args.count)
    manifest = {
        "seed": args.seed, "count": args.count, "horizon_seconds": horizon,
        "infectiousness": _describe(args.p), "degree_dist": _describe(args.degree),
        "root_degree_dist": _describe(args.root_degree), "max_events": args.max_events,
        "method": args.method,
        "kernel": {"s0_seconds": cfg.kernel.s0, "theta": cfg.kernel.theta},
        "cascades": [],
    }
    width = len(str(args.count - 1))
    for i in range(args.count):
        sim = simulate_cascade(SimConfig(
            p_trajectory=args.p, degree_dist=args.degree, root_degree=int(roots[i]),
            horizon=horizon, seed=int(seeds[i]), max_events=args.max_events,
            kernel=cfg.kernel, method=args.method))
        name = f"sim-{i:0{width}d}"
        c = sim.cascade
        write_cascade(Cascade(c.times, c.degrees, id=name), out / f"{name}.csv")
        manifest["cascades"].append({"id": name, "seed": int(seeds[i]), "root_degree": int(roots[i]),
                                     "final_size": c.final_size, "truncated": sim.truncated})
    with open(out / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return EXIT_OK


def cmd_calibrate(args):
    cfg = _config(args)
    training = load_corpus(args.corpus, cfg.horizon_seconds)
    times = args.times or list(cfg.eval_times)
    sample = _read_delays(args.reaction_sample) if args.reaction_sample else None
    gamma = args.gamma_n_star if args.gamma_n_star is not None else cfg.prediction.gamma_n_star
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        report = calibrate(training, times, kernel=cfg.kernel, reaction_sample=sample,
                           s0=cfg.kernel.s0, gamma_n_star=gamma, min_reshares=cfg.min_reshares)
    new = cfg.with_(kernel=report.kernel, prediction=PredictionParams(
        n_star=report.n_star, gamma_n_star=gamma, alpha_schedule=tuple(report.alpha_schedule)))
    _write_text(args.out, dumps_config(new))
    return EXIT_OK


def _read_delays(path):
    try:
        return np.loadtxt(path, dtype=float, comments="#", delimiter=",", ndmin=1).reshape(-1)
    except ValueError as err:
        raise ParseError(f"bad reaction-time file: {err}", None, str(path)) from None


def cmd_fit_kernel(args):
    cfg = _config(args)
    s0 = args.s0 if args.s0 is not None else cfg.kernel.s0
    kernel = fit_memory_kernel(_read_delays(args.delays), s0)
    _write_text(args.out, dumps_config(cfg.with_(kernel=kernel)))
    return EXIT_OK


def cmd_evaluate(args):
    cfg = _config(args)
    if args.out is None:
        raise ConfigError("evaluate needs --out PREFIX")
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"method {m!r} is not available; choose from {', '.join(METHODS)}")
    corpus = load_corpus(args.corpus, cfg.horizon_seconds)
    training = load_corpus(args.train, cfg.horizon_seconds) if args.train else None
    report = run_benchmark(corpus, methods, args.times, cfg, training=training)
    _write_text(f"{args.out}.csv", report.to_csv())
    _write_text(f"{args.out}.json", report.to_json())
    return EXIT_OK


def cmd_import_snap(args):
    if args.out is None:
        raise ConfigError("import-snap needs --out DIR")
    n = import_snap(args.source, args.out, args.min_reshares)
    print(f"wrote {n} cascades to {args.out}", file=sys.stderr)
    return EXIT_OK


def _write_text(path, text):
    out, close = _open_out(path)
    try:
        out.write(text)
    finally:
        if close:
            out.close()


# -- parser --------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="seismic", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="run configuration (TOML)")
        p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
        p.add_argument("--out", help="output path ('-' or omitted: stdout where allowed)")
        return p

    p = common(sub.add_parser("predict", help="predict final sizes of cascade files"))
    p.add_argument("cascades", nargs="+", help="cascade files")
    p.add_argument("--times", type=_minutes_list, help="comma-separated prediction times, minutes")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.set_defaults(func=cmd_predict)

    p = common(sub.add_parser("simulate", help="write synthetic cascades and a manifest"))
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--p", type=_p_spec, default=ConstantInfectiousness(0.01),
                   help="infectiousness: constant:P | decay:P0:TAU_MIN | piecewise:B/..:V/..")
    p.add_argument("--degree", type=_degree_spec, default=DegreeDistribution.poisson(50),
                   help="resharer degree law (default poisson:50)")
    p.add_argument("--root-degree", type=_degree_spec, default=DegreeDistribution.constant(1000),
                   help="originator degree law (default constant:1000)")
    p.add_argument("--horizon-days", type=float, help="default: config horizon_days")
    p.add_argument("--max-events", type=int, default=100_000)
    p.add_argument("--method", choices=("cluster", "thinning"), default="cluster")
    p.set_defaults(func=cmd_simulate)

    p = common(sub.add_parser("calibrate", help="fit n_star and the alpha schedule"))
    p.add_argument("corpus", help="directory of training cascade files")
    p.add_argument("--times", type=_minutes_list, help="calibration times, minutes")
    p.add_argument("--reaction-sample", help="file of reaction delays in seconds")
    p.add_argument("--gamma-n-star", type=float)
    p.set_defaults(func=cmd_calibrate)

    p = common(sub.add_parser("fit-kernel", help="fit the memory-kernel tail exponent"))
    p.add_argument("delays", help="file of reaction delays in seconds")
    p.add_argument("--s0", type=float, help="plateau length in seconds (default: config)")
    p.set_defaults(func=cmd_fit_kernel)

    p = common(sub.add_parser("evaluate", help="benchmark predictors on a labelled corpus"))
    p.add_argument("corpus", help="directory of test cascade files")
    p.add_argument("--train", help="directory of training cascades (for lr, lr_d)")
    p.add_argument("--methods", default="seismic,lr,observed",
                   help=f"comma-separated subset of {','.join(METHODS)}")
    p.add_argument("--times", type=_minutes_list, help="evaluation times, minutes")
    p.set_defaults(func=cmd_evaluate)

    p = common(sub.add_parser("import-snap", help="convert the published tweet dataset"))
    p.add_argument("source", help="directory holding index.csv and data.csv")
    p.add_argument("--min-reshares", type=int, default=0)
    p.set_defaults(func=cmd_import_snap)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SeismicError as err:
        print(f"error: {err.code}: {err}", file=sys.stderr)
        return err.exit_status
    except NotImplementedError as err:
        print(f"error: NOT_IMPLEMENTED: {err}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        print(f"error: IO: {err}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
