"""
Command line interface.

Exit codes: 0 success, 1 usage error, 2 data or domain error, 3 numeric
error.  Errors go to stderr as ``ERROR(<category>): <message>``; stdout
carries only the JSON or CSV payload.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .copula_gen import make_experiment, read_data_csv, read_labels_csv, write_dataset
from .detectors import DEFAULT_BETA_GRID, hosvd_c4_detect, roc_curve, rx_detect, rx_scores
from .errors import C4Error, DomainError
from .experiment import ExperimentConfig, parse_grid, report_json, run_experiment, sweep_c4, sweep_rx
from .ingest import ingest_prices, write_increments_csv
from .stats_dist import chi2_quantile, mutual_information
from .sym_tensor import cumulants_upto_4

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _grid(text):
    try:
        return parse_grid(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="base random seed")
    common.add_argument("--out", default=None, help="output path or prefix (default stdout)")
    common.add_argument("--threads", type=int, default=1, help="worker processes")

    parser = _Parser(prog="c4detect", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", parents=[common], help="generate a labelled dataset")
    p.add_argument("--t", type=int, default=1000)
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--tau", type=int, default=100)
    p.add_argument("--nu-c", type=int, default=6)
    p.add_argument("--nu-u", type=float, default=6.0)

    p = sub.add_parser("detect", parents=[common], help="run a detector on a data CSV")
    p.add_argument("detector", choices=["c4", "rx"])
    p.add_argument("data")
    p.add_argument("--beta", type=float, default=2.5)
    p.add_argument("--r", type=int, default=3)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--percentile", type=float)
    g.add_argument("--threshold", type=float)

    p = sub.add_parser("roc", parents=[common], help="ROC sweep against labels")
    p.add_argument("data")
    p.add_argument("labels")
    p.add_argument("--detector", choices=["c4", "rx"], default="c4")
    p.add_argument("--beta-grid", type=_grid, default=DEFAULT_BETA_GRID)
    p.add_argument("--r", type=int, default=3)

    p = sub.add_parser("experiment", parents=[common], help="seeded ROC replications")
    p.add_argument("--config", help="JSON file mirroring ExperimentConfig")
    p.add_argument("--t", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--tau", type=int)
    p.add_argument("--nu-c", type=int)
    p.add_argument("--nu-u", type=float)
    p.add_argument("--r", type=int)
    p.add_argument("--beta-grid", type=_grid)
    p.add_argument("--seeds", type=int, help="number of seeds, counted from --seed")
    p.add_argument("--seed-list", type=lambda s: [int(v) for v in s.split(",")])
    p.add_argument("--detector", choices=["c4", "rx", "both"])

    p = sub.add_parser("cumulants", parents=[common], help="cumulant tensor as JSON")
    p.add_argument("data")
    p.add_argument("--order", type=int, choices=[2, 3, 4], default=4)

    p = sub.add_parser("mi", parents=[common], help="t-Student copula mutual information")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--sigma", help="correlation matrix: JSON (list or meta file) or CSV")

    p = sub.add_parser("ingest", parents=[common], help="prices CSV to log increments CSV")
    p.add_argument("prices")
    return parser


def _emit(text: str, out):
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_gen(a):
    ds = make_experiment(a.t, a.tau, a.n, a.nu_c, a.nu_u, a.seed)
    paths = write_dataset(ds, a.out or "dataset")
    print(json.dumps(dict(zip(("data", "labels", "meta"), map(str, paths)))))


def _cmd_detect(a):
    X = read_data_csv(a.data)
    if a.detector == "c4":
        _emit(hosvd_c4_detect(X, a.beta, a.r).to_json(), a.out)
        return
    if a.threshold is not None:
        threshold, pct = a.threshold, None
    else:
        pct = 0.99 if a.percentile is None else a.percentile
        threshold = chi2_quantile(pct, X.shape[1])
    flagged = rx_detect(X, threshold=threshold)
    doc = {"flagged": flagged.tolist(), "threshold": float(threshold), "percentile": pct}
    _emit(json.dumps(doc), a.out)


def _cmd_roc(a):
    X = read_data_csv(a.data)
    labels = read_labels_csv(a.labels)
    if labels.size != X.shape[0]:
        raise DomainError(f"{labels.size} labels for {X.shape[0]} rows")
    grid = tuple(a.beta_grid)
    if a.detector == "c4":
        flags = sweep_c4(X, grid, a.r)
    else:
        flags = sweep_rx(X, len(grid))
    roc = roc_curve(flags, labels, grid)
    lines = ["beta,fpr,tpr"]
    lines += [f"{b!r},{f!r},{t!r}" for b, f, t in zip(grid, roc.fpr.tolist(), roc.tpr.tolist())]
    lines.append(f"# auc,{roc.auc!r}")
    _emit("\n".join(lines), a.out)


def _cmd_experiment(a):
    doc = {}
    if a.config:
        doc = json.loads(Path(a.config).read_text())
    flags = {"t": a.t, "n": a.n, "tau": a.tau, "nu_c": a.nu_c, "nu_u": a.nu_u,
             "r": a.r, "beta_grid": a.beta_grid, "detectors": a.detector}
    doc.update({k: v for k, v in flags.items() if v is not None})
    if a.seed_list is not None:
        doc["seeds"] = a.seed_list
    elif a.seeds is not None:
        base = a.seed or 0
        doc["seeds"] = list(range(base, base + a.seeds))
    config = ExperimentConfig.from_dict(doc)

    def progress(seed):
        print(f"seed {seed} done", file=sys.stderr)

    report = run_experiment(config, threads=a.threads, progress=progress)
    _emit(report_json(report), a.out)


def _cmd_cumulants(a):
    X = read_data_csv(a.data)
    tensor = cumulants_upto_4(X)[a.order - 2]
    _emit(tensor.to_json(), a.out)


def _read_sigma(path):
    path = Path(path)
    if path.suffix == ".json":
        doc = json.loads(path.read_text())
        return np.array(doc["sigma"] if isinstance(doc, dict) else doc, dtype=float)
    return np.loadtxt(path, delimiter=",", ndmin=2)


def _cmd_mi(a):
    if a.sigma:
        sigma = _read_sigma(a.sigma)
        if a.n is not None and a.n != sigma.shape[0]:
            raise DomainError(f"--n {a.n} disagrees with sigma of size {sigma.shape[0]}")
    elif a.n is not None:
        sigma = np.eye(a.n)
    else:
        raise UsageError("give --n or --sigma")
    _emit(json.dumps(mutual_information(sigma, a.nu).to_dict()), a.out)


def _cmd_ingest(a):
    series = ingest_prices(a.prices)
    if a.out:
        write_increments_csv(a.out, series)
    else:
        write_increments_csv(sys.stdout, series)


COMMANDS = {
    "gen": _cmd_gen,
    "detect": _cmd_detect,
    "roc": _cmd_roc,
    "experiment": _cmd_experiment,
    "cumulants": _cmd_cumulants,
    "mi": _cmd_mi,
    "ingest": _cmd_ingest,
}


def _fail(category, message, code):
    print(f"ERROR({category}): {' '.join(str(message).split())}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail("usage", exc, EXIT_USAGE)
    except C4Error as exc:
        code = EXIT_NUMERIC if exc.category == "numeric" else EXIT_DATA
        return _fail(exc.category, exc, code)
    except (OSError, ValueError, KeyError) as exc:
        return _fail("data", exc, EXIT_DATA)
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        return _fail("numeric", exc, EXIT_NUMERIC)
    return 0
