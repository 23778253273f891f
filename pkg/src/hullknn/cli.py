"""Benchmark command line: load a dataset, run classifiers, emit a table.

Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime error.
Given identical flags (including --seed) the emitted artifact is
byte-identical across invocations; nothing time- or host-dependent is
written.
"""

import argparse
import json
import sys

from .benchmark import ClassifierSpec, EvalReport, run_benchmark
from .dataset import DataError, load_dataset
from .svm import DEFAULT_C

_ALGOS = ("hull-knn", "knn", "svm")
_DISPLAY = {"hull-knn": "Proposed k-NN", "knn": "Classic k-NN", "svm": "Classic SVM"}

# Per-dataset parameter presets: the tuned values and the deliberately poor
# threshold choices (same k and gamma) used to show the failure mode.
PRESETS = {
    "haberman-optimal": {
        "dataset": "data/haberman.data",
        "format": "haberman",
        "k": 15,
        "threshold": 1.75,
        "gamma": 1e-3,
    },
    "banknote-optimal": {
        "dataset": "data/data_banknote_authentication.txt",
        "format": "banknote",
        "k": 1,
        "threshold": 23.0,
        "gamma": 1e-3,
    },
    "iris-optimal": {
        "dataset": "data/iris.data",
        "format": "iris",
        "k": 10,
        "threshold": 21.0,
        "gamma": 0.25,
    },
    "seeds-optimal": {
        "dataset": "data/seeds_dataset.txt",
        "format": "seeds",
        "k": 5,
        "threshold": 35.0,
        "gamma": 0.143,
    },
}
PRESETS["haberman-poor"] = {**PRESETS["haberman-optimal"], "threshold": 2.5}
PRESETS["banknote-poor"] = {**PRESETS["banknote-optimal"], "threshold": 12.0}
PRESETS["iris-poor"] = {**PRESETS["iris-optimal"], "threshold": 15.0}
PRESETS["seeds-poor"] = {**PRESETS["seeds-optimal"], "threshold": 20.0}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; this harness reserves 2 for data errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="hullknn",
        description="Benchmark hull-gated k-NN against classic k-NN and an RBF SVM.",
    )
    p.add_argument("--dataset", help="path to the dataset file")
    p.add_argument(
        "--format",
        dest="fmt",
        choices=["haberman", "banknote", "iris", "seeds", "generic-csv"],
        help="dataset file format",
    )
    p.add_argument(
        "--algo",
        help="comma-separated classifiers to run: any of hull-knn, knn, svm",
    )
    p.add_argument("--k", type=int, help="neighbor count for the k-NN classifiers")
    p.add_argument("--threshold", type=float, help="box expansion for hull-knn")
    p.add_argument("--gamma", type=float, help="RBF kernel gamma for svm")
    p.add_argument("--c", type=float, default=DEFAULT_C, help="SVM box constraint (default 1.0)")
    p.add_argument("--points", type=int, help="hyperstructure point count (default 4n-1)")
    p.add_argument("--seed", type=int, default=0, help="benchmark seed (default 0)")
    p.add_argument(
        "--test-fraction", type=float, default=0.1, help="held-out fraction (default 0.1)"
    )
    p.add_argument("--trials", type=int, default=1, help="number of seeded splits (default 1)")
    p.add_argument(
        "--ensure-enclosure",
        action="store_true",
        help="resample each hyperstructure until its hull contains the test instance",
    )
    p.add_argument(
        "--hull-only",
        action="store_true",
        help="never let out-of-hull training points vote; fall back to classic "
        "k-NN only when the hull admits nobody",
    )
    p.add_argument(
        "--scale", action="store_true", help="min-max rescale features (fit on train)"
    )
    p.add_argument(
        "--preset",
        choices=sorted(PRESETS),
        help="parameter preset; explicit flags override preset values",
    )
    p.add_argument(
        "--output",
        choices=["markdown", "csv", "json"],
        default="markdown",
        help="artifact format (default markdown)",
    )
    p.add_argument("--out", help="also write the artifact to this path")
    p.add_argument("--workers", type=int, default=1, help="trial thread count (default 1)")
    return p


def _resolve(args) -> dict:
    """Merge preset values under explicit flags and validate the combination."""
    cfg = {
        "dataset": args.dataset,
        "format": args.fmt,
        "algo": args.algo,
        "k": args.k,
        "threshold": args.threshold,
        "gamma": args.gamma,
    }
    if args.preset:
        for key, value in PRESETS[args.preset].items():
            if cfg.get(key) is None:
                cfg[key] = value
        if cfg["algo"] is None:
            cfg["algo"] = "hull-knn,knn,svm"

    if cfg["dataset"] is None or cfg["format"] is None:
        raise _UsageError("--dataset and --format are required (or use --preset)")
    if cfg["algo"] is None:
        raise _UsageError("--algo is required (or use --preset)")
    algos = [a.strip() for a in cfg["algo"].split(",") if a.strip()]
    if not algos or any(a not in _ALGOS for a in algos):
        raise _UsageError(f"--algo must be a comma-separated subset of {', '.join(_ALGOS)}")
    cfg["algo"] = algos

    if any(a in ("knn", "hull-knn") for a in algos) and cfg["k"] is None:
        raise _UsageError("--k is required for knn and hull-knn")
    if "hull-knn" in algos and cfg["threshold"] is None:
        raise _UsageError("--threshold is required for hull-knn")
    if "svm" in algos and cfg["gamma"] is None:
        raise _UsageError("--gamma is required for svm")

    if args.trials < 1:
        raise _UsageError("--trials must be >= 1")
    if not 0.0 < args.test_fraction < 1.0:
        raise _UsageError("--test-fraction must be in (0, 1)")
    if args.workers < 1:
        raise _UsageError("--workers must be >= 1")
    return cfg


def _fmt_num(value) -> str:
    if value is None:
        return "-"
    if float(value) == int(value):
        return str(int(value))
    return str(value)


def _row(report: EvalReport) -> list[str]:
    p = report.params
    return [
        _DISPLAY[report.classifier_id],
        _fmt_num(p.get("k")),
        _fmt_num(p.get("threshold")),
        _fmt_num(p.get("gamma")),
        f"{report.accuracy * 100:.2f}%",
    ]


_HEADER = ["classifier", "k", "threshold", "gamma", "accuracy"]


def emit_table(reports: list[EvalReport], fmt: str, metadata: dict) -> str:
    """Render reports as markdown, csv (with # metadata comments), or json."""
    if not reports:
        raise ValueError("need at least one report")

    if fmt == "json":
        payload = {"metadata": metadata, "reports": [r.to_dict() for r in reports]}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    meta_lines = [f"{key}: {metadata[key]}" for key in sorted(metadata)]
    if fmt == "csv":
        lines = [f"# {line}" for line in meta_lines]
        lines.append(",".join(_HEADER))
        lines.extend(",".join(_row(r)) for r in reports)
        return "\n".join(lines) + "\n"

    lines = meta_lines + [""]
    lines.append("| " + " | ".join(_HEADER) + " |")
    lines.append("|" + "|".join([" --- "] * len(_HEADER)) + "|")
    lines.extend("| " + " | ".join(_row(r)) + " |" for r in reports)
    stats = []
    for r in reports:
        if len(r.trials) > 1:
            stats.append(
                f"{_DISPLAY[r.classifier_id]}: mean {r.mean_accuracy * 100:.2f}% "
                f"min {r.min_accuracy * 100:.2f}% max {r.max_accuracy * 100:.2f}%"
            )
        if r.in_hull_neighbor_deficit is not None:
            stats.append(
                f"{_DISPLAY[r.classifier_id]}: in-hull neighbor deficit "
                f"{r.in_hull_neighbor_deficit:.4f}"
            )
    if stats:
        lines.append("")
        lines.extend(stats)
    return "\n".join(lines) + "\n"


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        cfg = _resolve(args)
    except _UsageError as exc:
        print(f"hullknn: error: {exc}", file=sys.stderr)
        return 1

    try:
        ds = load_dataset(cfg["dataset"], cfg["format"])
    except (DataError, OSError) as exc:
        print(f"hullknn: data error: {exc}", file=sys.stderr)
        return 2

    specs = []
    for algo in cfg["algo"]:
        if algo == "svm":
            specs.append(ClassifierSpec(kind="svm", gamma=cfg["gamma"], C=args.c))
        else:
            specs.append(
                ClassifierSpec(
                    kind=algo,
                    k=cfg["k"],
                    threshold=cfg["threshold"] if algo == "hull-knn" else None,
                    point_count=args.points if algo == "hull-knn" else None,
                    hull_only=args.hull_only,
                    ensure_enclosure=args.ensure_enclosure,
                )
            )

    metadata = {
        "dataset": str(cfg["dataset"]),
        "format": cfg["format"],
        "algos": ",".join(cfg["algo"]),
        "seed": args.seed,
        "test_fraction": args.test_fraction,
        "trials": args.trials,
        "scale": args.scale,
        "hull_only": args.hull_only,
        "ensure_enclosure": args.ensure_enclosure,
    }
    if cfg["k"] is not None:
        metadata["k"] = cfg["k"]
    if cfg["threshold"] is not None and "hull-knn" in cfg["algo"]:
        metadata["threshold"] = cfg["threshold"]
    if args.points is not None:
        metadata["point_count"] = args.points
    if "svm" in cfg["algo"]:
        metadata["gamma"] = cfg["gamma"]
        metadata["svm_assumptions"] = f"kernel=rbf (assumed), C={args.c} (assumed)"

    try:
        reports = run_benchmark(
            ds,
            specs,
            trials=args.trials,
            test_fraction=args.test_fraction,
            base_seed=args.seed,
            workers=args.workers,
            scale=args.scale,
        )
        artifact = emit_table(reports, args.output, metadata)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(artifact)
        sys.stdout.write(artifact)
    except (DataError, OSError) as exc:
        print(f"hullknn: data error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"hullknn: runtime error: {exc}", file=sys.stderr)
        return 3
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
