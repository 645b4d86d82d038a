"""Command-line entry point: generate | train | evaluate | ablate | sweep.

Exit codes: 0 success, 1 validation failure, 2 input-data failure,
3 training divergence. Failures print one JSON object to stderr.
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import ablation, data as D, pipeline, synth
from .bundle import ModelBundle
from .config import RunConfig
from .errors import DataError, FakePoiError, ValidationError
from .features import encode_dataset
from .metrics import evaluate

THREADS_ENV = "FAKEPOI_THREADS"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(f"usage: {message}")


def _load_config(args):
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    train = cfg.train
    env_threads = os.environ.get(THREADS_ENV)
    if env_threads:
        try:
            train = replace(train, nodes=1, cores_per_node=int(env_threads))
        except ValueError:
            raise ValidationError(f"{THREADS_ENV} must be an integer, got {env_threads!r}") from None
    overrides = {}
    for name in ("epochs", "hidden_size", "dropout_ratio", "l1", "l2", "nodes",
                 "samples_per_iteration", "seed", "optimizer"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if getattr(args, "cores", None) is not None:
        overrides["cores_per_node"] = args.cores
    if getattr(args, "threads", None) is not None:
        overrides["nodes"] = 1
        overrides["cores_per_node"] = args.threads
    if overrides:
        train = replace(train, **overrides)
    return replace(cfg, train=train)


def _real_and_fake(args, cfg):
    real_path = args.real or cfg.paths.get("real_csv") or synth.bundled_path()
    real = D.load_csv(real_path, provenance="bundled")
    fake_path = args.fake or cfg.paths.get("fake_csv")
    if fake_path:
        fake = D.load_csv(fake_path, provenance="generated")
    else:
        fake = synth.generate_fake(cfg.fake_count, cfg.fake_profile, cfg.fake_seed)
    return synth.merge_labeled(real, fake)


def cmd_generate(args):
    cfg = _load_config(args)
    n = args.n if args.n is not None else cfg.fake_count
    seed = args.seed if args.seed is not None else cfg.fake_seed
    ds = synth.generate_fake(n, cfg.fake_profile, seed)
    try:
        D.write_csv(ds, args.out)
    except OSError as exc:
        raise DataError(f"cannot write {args.out}: {exc}") from None
    print(json.dumps({"written": str(args.out), "rows": len(ds), "seed": seed}))
    return 0


def cmd_train(args):
    cfg = _load_config(args)
    merged = _real_and_fake(args, cfg)
    result = pipeline.run(merged, cfg)
    prepared = result.data
    model_out = Path(args.model_out)
    model_out.parent.mkdir(parents=True, exist_ok=True)
    ModelBundle(result.model.net_, prepared.encoder.spec_, prepared.coordinate_medians,
                result.seed, replace(cfg.train, seed=result.seed).to_dict()).save(model_out)
    log_out = Path(args.log_out) if args.log_out else model_out.with_suffix(".runlog.csv")
    result.run_log.to_csv(log_out)
    if args.split_dir:
        split_dir = Path(args.split_dir)
        split_dir.mkdir(parents=True, exist_ok=True)
        for name, idx in (("train", prepared.split.train), ("validation", prepared.split.validation),
                          ("test", prepared.split.test)):
            D.write_csv(prepared.records.subset(idx), split_dir / f"{name}.csv")
        prepared.cleaning_log.to_jsonl(split_dir / "cleaning_log.jsonl")
    summary = {
        "model": str(model_out),
        "run_log": str(log_out),
        "seed": result.seed,
        "trainer": "hogwild" if cfg.train.parallel else "sequential",
        "validation": result.val_report.to_dict(),
        "test": result.test_report.to_dict(),
    }
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def cmd_evaluate(args):
    bundle = ModelBundle.load(args.model)
    ds = D.load_csv(args.data, provenance="merged")
    cleaned, _ = D.clean(ds, D.CleaningPolicy(coordinate_medians=bundle.coordinate_medians))
    report = evaluate(bundle.network, encode_dataset(cleaned, bundle.spec))
    if args.json_out:
        report.to_json(args.json_out)
    if args.json:
        sys.stdout.write(report.to_json())
    else:
        print(report.render())
    return 0


def _variants(args):
    variants = []
    if args.preset == "table6":
        variants += ablation.table6_variants()
    for name in args.variant or ():
        variants.append(ablation.AblationVariant.parse(name))
    for spec in args.remove or ():
        variants.append(ablation.AblationVariant.of([a.strip() for a in spec.split(",") if a.strip()]))
    if not variants:
        raise ValidationError("usage: give --preset, --variant or --remove")
    return variants


def _write_reports(report, prefix):
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    report.to_csv(prefix.with_suffix(".csv"))
    report.to_json(prefix.with_suffix(".json"))
    return [str(prefix.with_suffix(".csv")), str(prefix.with_suffix(".json"))]


def cmd_ablate(args):
    cfg = _load_config(args)
    variants = _variants(args)
    if args.preset == "table6":
        # the preset includes an LM_ID removal, so the id must be active
        cfg = replace(cfg, features=replace(cfg.features, active_attributes=D.ATTRIBUTES))
    merged = _real_and_fake(args, cfg)
    report = ablation.run_ablation(merged, variants, cfg, args.seeds, n_jobs=args.n_jobs)
    files = _write_reports(report, args.out_prefix)
    for row in report.rows:
        print(f"{row.variant:45s} {row.mean:.4f} +/- {row.sd:.4f}")
    print(json.dumps({"written": files}))
    return 0


def cmd_sweep(args):
    cfg = _load_config(args)
    merged = _real_and_fake(args, cfg)
    report = ablation.sweep_regularization(merged, cfg, args.axis, args.values, args.seeds,
                                           n_jobs=args.n_jobs)
    files = _write_reports(report, args.out_prefix)
    for value, mean, sd in report.rows():
        print(f"{args.axis.upper()}={value:<10g} {mean:.4f} +/- {sd:.4f}")
    print(json.dumps({"written": files}))
    return 0


def _add_common(p, data=True):
    p.add_argument("--config", help="run configuration JSON")
    if data:
        p.add_argument("--real", help="real POI CSV (default: bundled sample)")
        p.add_argument("--fake", help="fake POI CSV (default: generated from the config)")


def _add_train_overrides(p):
    p.add_argument("--seed", type=int)
    p.add_argument("--epochs", type=int)
    p.add_argument("--hidden-size", dest="hidden_size", type=int)
    p.add_argument("--dropout", dest="dropout_ratio", type=float)
    p.add_argument("--l1", type=float)
    p.add_argument("--l2", type=float)
    p.add_argument("--optimizer", choices=("adadelta", "sgd"))
    p.add_argument("--nodes", type=int)
    p.add_argument("--cores", type=int, help="cores per node")
    p.add_argument("--threads", type=int, help="shorthand for --nodes 1 --cores N")
    p.add_argument("--samples-per-iteration", dest="samples_per_iteration", type=int)


def build_parser():
    parser = _Parser(prog="fakepoi", description="Fake point-of-interest detection toolkit.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write fabricated POI records as CSV")
    _add_common(p, data=False)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("train", help="run the pipeline and save a model")
    _add_common(p)
    _add_train_overrides(p)
    p.add_argument("--model-out", required=True)
    p.add_argument("--log-out")
    p.add_argument("--split-dir", help="also write train/validation/test CSVs here")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="score a labeled CSV with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--json-out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("ablate", help="attribute-removal study")
    _add_common(p)
    _add_train_overrides(p)
    p.add_argument("--preset", choices=("table6",))
    p.add_argument("--variant", action="append", help='e.g. "FDM (MUN -, PC -)"')
    p.add_argument("--remove", action="append", help="comma-separated attributes, e.g. MUN,PC")
    p.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2, 3, 4])
    p.add_argument("--n-jobs", dest="n_jobs", type=int, default=1)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("sweep", help="RMSE as a function of L1 or L2")
    _add_common(p)
    _add_train_overrides(p)
    p.add_argument("--axis", required=True, type=str.upper, choices=("L1", "L2"))
    p.add_argument("--values", required=True, type=float, nargs="+")
    p.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2, 3, 4])
    p.add_argument("--n-jobs", dest="n_jobs", type=int, default=1)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def _error_payload(exc):
    payload = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("row", "column", "epoch"):
        value = getattr(exc, attr, None)
        if value is not None:
            payload[attr] = value
    return payload


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except FakePoiError as exc:
        sys.stderr.write(json.dumps(_error_payload(exc), sort_keys=True) + "\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
