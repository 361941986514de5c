"""Command-line interface: data generation, clustering, training,
prediction, benchmarking, and rule export.

Exit codes: 0 success, 1 usage/parameter error, 2 data error, 3 internal
error.
"""
from __future__ import annotations

import argparse
import csv
import sys
from datetime import datetime, timezone

import numpy as np

from .dataset import (
    GENERATORS,
    NormalizationParams,
    SplitSpec,
    fit_normalizer,
    load_csv,
    load_features_csv,
    normalize_dataset,
    save_csv,
    split,
)
from .errors import ConfigError, DataError, InternalError
from .evaluation import ExperimentConfig, accuracy, confusion_matrix, emit_report, run_experiment
from .inference import classify_batch
from .rulebase import Fuzzifiers, build_rulebase, export_rules_text, load_rulebase, save_rulebase
from .subclust import SubclustParams, subtractive_cluster


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _print_config(items: dict[str, str]) -> None:
    print("configuration:")
    for key, val in items.items():
        print(f"  {key}: {val}")


def _subclust_from_args(args) -> SubclustParams | None:
    if getattr(args, "no_sc", False):
        return None
    return SubclustParams(
        r_a=args.ra,
        rb_ratio=args.rb_ratio,
        accept_ratio=args.accept,
        reject_ratio=args.reject,
        max_centers=args.max_centers,
    )


def _add_subclust_flags(p: argparse.ArgumentParser, require_choice: bool) -> None:
    if require_choice:
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--ra", type=float, help="subtractive-clustering radius")
        group.add_argument("--no-sc", action="store_true",
                           help="single prototype per class (per-class mean)")
    else:
        p.add_argument("--ra", type=float, required=True, help="subtractive-clustering radius")
    p.add_argument("--rb-ratio", type=float, default=1.25, help="r_b = rb_ratio * r_a")
    p.add_argument("--accept", type=float, default=0.5, help="accept ratio")
    p.add_argument("--reject", type=float, default=0.15, help="reject ratio")
    p.add_argument("--max-centers", type=int, default=None, help="safety cap on centers")


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m1", type=float, default=1.5, help="lower fuzzifier")
    p.add_argument("--m2", type=float, default=2.5, help="upper fuzzifier")
    p.add_argument("--p", type=float, default=2.0, help="aggregation exponent")


def build_parser() -> _Parser:
    parser = _Parser(prog="it2frbc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-data", help="write a synthetic benchmark dataset as CSV")
    g.add_argument("--which", choices=sorted(GENERATORS), required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen_data)

    c = sub.add_parser("cluster", help="subtractive clustering of a point set")
    c.add_argument("--in", dest="input", required=True, help="CSV of points (all columns numeric)")
    _add_subclust_flags(c, require_choice=False)
    c.add_argument("--out", required=True, help="CSV file for the centers (original units)")
    c.set_defaults(func=cmd_cluster)

    t = sub.add_parser("train", help="train a classifier and save the model")
    t.add_argument("--in", dest="input", required=True)
    t.add_argument("--label-col", type=int, default=-1)
    t.add_argument("--missing-policy", choices=("drop_row", "error"), default="drop_row")
    _add_subclust_flags(t, require_choice=True)
    _add_model_flags(t)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--train-frac", type=float, default=0.5)
    t.add_argument("--stratified", action="store_true")
    t.add_argument("--model", required=True, help="output model file (JSON)")
    t.set_defaults(func=cmd_train)

    pr = sub.add_parser("predict", help="classify a CSV with a saved model")
    pr.add_argument("--model", required=True)
    pr.add_argument("--in", dest="input", required=True)
    pr.add_argument("--out", required=True)
    pr.add_argument("--label-col", type=int, default=None,
                    help="label column to score against (default: auto-detect a "
                         "trailing label when the file has one extra column)")
    pr.set_defaults(func=cmd_predict)

    e = sub.add_parser("eval", help="repeated-split benchmark (the experiment protocol)",
                       epilog="IT2FRBC_THREADS caps run parallelism (0 = auto, default 1).")
    src = e.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="input", help="labeled CSV dataset")
    src.add_argument("--gen", choices=sorted(GENERATORS), help="synthetic dataset")
    e.add_argument("--label-col", type=int, default=-1)
    e.add_argument("--missing-policy", choices=("drop_row", "error"), default="drop_row")
    e.add_argument("--runs", type=int, default=32)
    _add_subclust_flags(e, require_choice=True)
    _add_model_flags(e)
    e.add_argument("--seed", type=int, default=0, help="master seed")
    e.add_argument("--train-frac", type=float, default=0.5)
    e.add_argument("--stratified", action="store_true")
    e.add_argument("--format", choices=("table", "csv", "json"), default="table")
    e.add_argument("--out", default=None, help="write the report here instead of stdout")
    e.add_argument("--no-timestamp", action="store_true",
                   help="omit the generated-at header line")
    e.set_defaults(func=cmd_eval)

    x = sub.add_parser("export-rules", help="print the rules of a saved model")
    x.add_argument("--model", required=True)
    x.set_defaults(func=cmd_export_rules)
    return parser


def cmd_gen_data(args) -> int:
    ds = GENERATORS[args.which](args.seed)
    save_csv(ds, args.out)
    _print_config({"which": args.which, "seed": str(args.seed), "out": args.out})
    counts = ", ".join(
        f"{name}: {cnt}" for name, cnt in zip(ds.class_names, ds.class_counts())
    )
    print(f"wrote {len(ds)} patterns ({counts}) to {args.out}")
    return 0


def cmd_cluster(args) -> int:
    params = _subclust_from_args(args)
    points = load_features_csv(args.input)
    norm = NormalizationParams(points.min(axis=0), points.max(axis=0))
    centers = norm.invert(subtractive_cluster(norm.apply(points), params))
    _print_config(
        {
            "in": args.input,
            "points": str(points.shape[0]),
            "r_a": repr(params.r_a),
            "rb_ratio": repr(params.rb_ratio),
            "accept_ratio": repr(params.accept_ratio),
            "reject_ratio": repr(params.reject_ratio),
            "out": args.out,
        }
    )
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{i + 1}" for i in range(centers.shape[1])])
        for row in centers:
            writer.writerow([repr(float(v)) for v in row])
    print(f"found {centers.shape[0]} centers, wrote {args.out}")
    return 0


def cmd_train(args) -> int:
    params = _subclust_from_args(args)
    fz = Fuzzifiers(args.m1, args.m2)
    ds = load_csv(args.input, args.label_col, args.missing_policy)
    train, test = split(ds, SplitSpec(args.train_frac, args.seed, args.stratified))
    norm = fit_normalizer(train)
    rb = build_rulebase(normalize_dataset(norm, train), params, fz, args.p, norm)
    save_rulebase(rb, args.model)

    _print_config(
        {
            "in": args.input,
            "label_col": str(args.label_col),
            "missing_policy": args.missing_policy,
            "r_a": "none" if params is None else repr(params.r_a),
            "m1": repr(fz.m1),
            "m2": repr(fz.m2),
            "aggregation_p": repr(args.p),
            "seed": str(args.seed),
            "train_fraction": repr(args.train_frac),
            "stratified": str(args.stratified).lower(),
            "model": args.model,
        }
    )
    train_pred, _ = classify_batch(train.features, rb)
    train_acc = accuracy(confusion_matrix(train.labels, train_pred, ds.num_classes))
    test_pred, _ = classify_batch(test.features, rb)
    test_acc = accuracy(confusion_matrix(test.labels, test_pred, ds.num_classes))
    print(f"rules: {rb.num_rules}")
    print(f"train accuracy: {train_acc:.2f}")
    print(f"held-out accuracy: {test_acc:.2f}")
    print(f"model written to {args.model}")
    return 0


def cmd_predict(args) -> int:
    rb = load_rulebase(args.model)
    raw = _read_rows(args.input)
    width = len(raw[0])

    label_col = args.label_col
    if label_col is None:
        if width == rb.num_features:
            label_col = None
        elif width == rb.num_features + 1:
            label_col = width - 1
        else:
            raise DataError(
                f"input has {width} columns but model expects {rb.num_features} features "
                f"(or {rb.num_features + 1} columns with a label)"
            )
    elif label_col < 0:
        label_col += width

    feature_cols = [i for i in range(width) if i != label_col]
    if len(feature_cols) != rb.num_features:
        raise DataError(
            f"input has {len(feature_cols)} features but model expects {rb.num_features}"
        )
    try:
        X = np.array([[float(row[i]) for i in feature_cols] for row in raw], dtype=float)
    except ValueError as exc:
        raise DataError(f"non-numeric feature value in {args.input}: {exc}") from exc

    predictions, scores = classify_batch(X, rb)

    _print_config(
        {
            "model": args.model,
            "in": args.input,
            "rows": str(len(raw)),
            "label_col": "none" if label_col is None else str(label_col),
            "out": args.out,
        }
    )
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [f"f{i + 1}" for i in range(rb.num_features)]
            + ["predicted"]
            + [f"score_{name}" for name in rb.class_names]
        )
        for x, pred, score in zip(X, predictions, scores):
            writer.writerow(
                [repr(float(v)) for v in x]
                + [rb.class_names[pred]]
                + [repr(float(s)) for s in score]
            )
    print(f"wrote predictions for {len(raw)} rows to {args.out}")

    if label_col is not None:
        name_to_idx = {name: i for i, name in enumerate(rb.class_names)}
        known = [(i, name_to_idx[raw[i][label_col].strip()])
                 for i in range(len(raw)) if raw[i][label_col].strip() in name_to_idx]
        if known:
            idx = [i for i, _ in known]
            truth = np.array([t for _, t in known])
            acc = 100.0 * float((predictions[idx] == truth).mean())
            print(f"accuracy against provided labels: {acc:.2f} ({len(known)} labeled rows)")
    return 0


def _read_rows(path) -> list[list[str]]:
    try:
        with open(path, newline="") as fh:
            rows = [row for row in csv.reader(fh) if row]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataError("empty dataset")

    def numeric(cell: str) -> bool:
        try:
            float(cell)
            return True
        except ValueError:
            return False

    # Header row: every cell non-numeric (a data row keeps numeric features
    # even when its label cell is a string).
    if all(not numeric(c) for c in rows[0]):
        rows = rows[1:]
    if not rows:
        raise DataError("empty dataset")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise DataError(f"inconsistent column counts in {path}: {sorted(widths)}")
    return rows


def cmd_eval(args) -> int:
    cfg = ExperimentConfig(
        generator=args.gen,
        data_path=args.input,
        label_column=args.label_col,
        missing_policy=args.missing_policy,
        runs=args.runs,
        train_fraction=args.train_frac,
        stratified=args.stratified,
        master_seed=args.seed,
        subclust=_subclust_from_args(args),
        fuzzifiers=Fuzzifiers(args.m1, args.m2),
        aggregation_p=args.p,
    )
    report = run_experiment(cfg)
    fmt = {"table": "text_table", "csv": "csv", "json": "json"}[args.format]
    stamp = None if args.no_timestamp else datetime.now(timezone.utc).isoformat()
    text = emit_report(report, fmt, timestamp=stamp)
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"report written to {args.out}")
    return 0


def cmd_export_rules(args) -> int:
    rb = load_rulebase(args.model)
    sys.stdout.write(export_rules_text(rb))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - last-resort guard
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
