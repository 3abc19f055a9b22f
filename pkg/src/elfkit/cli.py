"""Operator command line.

Subcommands mirror the experiment workflow: ``synth`` fabricates demo
data, ``ingest`` turns a golden copy into per-jurisdiction datasets,
``train``/``evaluate``/``predict`` run the bag-of-words pipelines,
``folds`` exports split assignments for external trainers, ``compare``
builds the model-comparison table (external transformer predictions
included), ``challenge`` emits suggested label corrections, ``explain``
shows per-token contributions.

Every command accepts ``--config FILE`` (key = value lines, keys named
like the long flags) so an experiment is reproducible from a manifest.
Exit codes: 0 ok, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import datetime as _dt
import json
import sys
from pathlib import Path

import click

from .classifiers import CLASSIFIER_KINDS, ClassifierSpec
from .config import read_kv_config
from .evaluation import (
    EvalReport,
    build_report,
    compare_models,
    cross_validate,
    score_external,
    stratified_folds,
    write_exchange_file,
    write_folds_file,
)
from .ingest import (
    IngestStats,
    build_datasets,
    dataset_stats,
    filter_in_scope,
    infer_snapshot_id,
    ingest,
    load_dataset,
    save_dataset,
)
from .model_store import load as load_model
from .model_store import save as save_model
from .pipeline import explain_tokens, train_pipeline
from .preprocessing import PreprocessMode
from .registry import load_registry
from .synthetic import write_synthetic_world

_PREP_CHOICES = click.Choice(["lower", "extended"])
_MODEL_CHOICES = click.Choice(list(CLASSIFIER_KINDS))


def _load_config(ctx, param, value):
    if value is None:
        return None
    overrides = read_kv_config(value)
    ctx.default_map = {**(ctx.default_map or {}), **overrides}
    return value


_CONFIG_OPTION = click.option(
    "--config",
    type=click.Path(exists=True, dir_okay=False),
    callback=_load_config,
    is_eager=True,
    expose_value=False,
    help="key = value file mirroring the flags of this command",
)


def _hyperparams(alpha, trees, epochs, regularization) -> dict:
    params = {}
    if alpha is not None:
        params["alpha"] = alpha
    if trees is not None:
        params["n_trees"] = trees
    if epochs is not None:
        params["epochs"] = epochs
    if regularization is not None:
        params["regularization"] = regularization
    return params


def _spec(model: str, seed: int, alpha, trees, epochs, regularization) -> ClassifierSpec:
    raw = _hyperparams(alpha, trees, epochs, regularization)
    allowed = {
        "cnb": {"alpha"},
        "dt": set(),
        "rf": {"n_trees"},
        "linear-svm": {"epochs", "regularization"},
    }[model]
    return ClassifierSpec(
        kind=model,
        hyperparams={k: v for k, v in raw.items() if k in allowed},
        seed=seed,
    )


def _mtime_stamp(path: Path) -> str:
    # Deterministic "created at": the training data's modification time,
    # so retraining from identical inputs writes identical bytes.
    ts = _dt.datetime.fromtimestamp(path.stat().st_mtime, tz=_dt.timezone.utc)
    return ts.strftime("%Y-%m-%dT%H:%M:%SZ")


@click.group()
@click.version_option(package_name="elfkit")
def main():
    """Entity legal form classification toolkit."""


@main.command("synth")
@_CONFIG_OPTION
@click.argument("out_dir", type=click.Path(file_okay=False))
@click.option("--seed", type=int, default=20220914, show_default=True)
@click.option("--profile", type=click.Choice(["demo", "wide"]), default="demo", show_default=True)
@click.option("--scale", type=float, default=1.0, show_default=True,
              help="size multiplier for the demo datasets")
@click.option("--snapshot-id", default="2022-09-14", show_default=True)
def cmd_synth(out_dir, seed, profile, scale, snapshot_id):
    """Write a synthetic golden copy + code list for demos and tests."""
    paths = write_synthetic_world(
        out_dir, seed=seed, profile=profile, scale=scale, snapshot_id=snapshot_id
    )
    for kind, path in paths.items():
        click.echo(f"{kind}: {path}")


@main.command("ingest")
@_CONFIG_OPTION
@click.argument("golden_copy", type=click.Path(exists=True, dir_okay=False))
@click.argument("elf_list", type=click.Path(exists=True, dir_okay=False))
@click.argument("out_dir", type=click.Path(file_okay=False))
@click.option("--top", "top_n", type=int, default=30, show_default=True,
              help="keep the N largest jurisdictions")
@click.option("--exclude", "exclusions", multiple=True, default=("CN", "CA"),
              show_default=True, help="jurisdictions to drop (country code covers sub-jurisdictions)")
@click.option("--column-map", type=click.Path(exists=True, dir_okay=False),
              help="key = value remapping of golden-copy column names")
@click.option("--elf-column-map", type=click.Path(exists=True, dir_okay=False),
              help="key = value remapping of code-list column names")
@click.option("--snapshot-id", default=None, help="defaults to the date in the file name")
def cmd_ingest(golden_copy, elf_list, out_dir, top_n, exclusions, column_map,
               elf_column_map, snapshot_id):
    """Build per-jurisdiction datasets from a golden-copy CSV."""
    registry = load_registry(elf_list, column_map=elf_column_map)
    snapshot = snapshot_id if snapshot_id is not None else infer_snapshot_id(golden_copy)
    stats = IngestStats()
    records = filter_in_scope(
        ingest(golden_copy, registry=registry, column_map=column_map, stats=stats)
    )
    datasets = build_datasets(records, top_n=top_n, exclusions=exclusions, snapshot_id=snapshot)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = {"snapshot_id": snapshot, "ingest": stats.as_dict(), "datasets": {}}
    for jurisdiction, dataset in sorted(datasets.items()):
        save_dataset(dataset, out / f"{jurisdiction}.tsv")
        summary["datasets"][jurisdiction] = {
            "n_samples": len(dataset.samples),
            "n_classes": len(dataset.class_histogram),
        }
    (out / "stats.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    click.echo(f"wrote {len(datasets)} dataset files to {out}")
    for jurisdiction, info in summary["datasets"].items():
        click.echo(f"  {jurisdiction}: {info['n_samples']} samples, {info['n_classes']} classes")


@main.command("train")
@_CONFIG_OPTION
@click.argument("dataset_path", metavar="DATASET", type=click.Path(exists=True, dir_okay=False))
@click.option("--model", type=_MODEL_CHOICES, default="rf", show_default=True)
@click.option("--prep", type=_PREP_CHOICES, default="extended", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.option("--alpha", type=float, default=None, help="cnb smoothing")
@click.option("--trees", type=int, default=None, help="rf tree count")
@click.option("--epochs", type=int, default=None, help="linear-svm epochs")
@click.option("--regularization", type=float, default=None, help="linear-svm L2 penalty")
@click.option("--jobs", type=int, default=1, show_default=True)
def cmd_train(dataset_path, model, prep, seed, out_path, alpha, trees, epochs,
              regularization, jobs):
    """Train on a full dataset and persist the pipeline."""
    dataset = load_dataset(dataset_path)
    spec = _spec(model, seed, alpha, trees, epochs, regularization)
    try:
        pipeline = train_pipeline(
            dataset, spec, mode=prep, n_jobs=jobs,
            created_at=_mtime_stamp(Path(dataset_path)),
        )
    except ValueError as exc:
        raise click.ClickException(str(exc))
    save_model(pipeline, out_path)
    click.echo(
        f"trained {spec.model_id(prep == 'extended')} on {dataset.jurisdiction} "
        f"({len(dataset.samples)} samples, {len(dataset.class_histogram)} classes) -> {out_path}"
    )


@main.command("evaluate")
@_CONFIG_OPTION
@click.argument("dataset_path", metavar="DATASET", type=click.Path(exists=True, dir_okay=False))
@click.option("--model", type=_MODEL_CHOICES, default="rf", show_default=True)
@click.option("--prep", type=_PREP_CHOICES, default="extended", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-dir", type=click.Path(file_okay=False), default=None,
              help="write report.json + predictions.csv here")
@click.option("--alpha", type=float, default=None)
@click.option("--trees", type=int, default=None)
@click.option("--epochs", type=int, default=None)
@click.option("--regularization", type=float, default=None)
@click.option("--jobs", type=int, default=1, show_default=True)
def cmd_evaluate(dataset_path, model, prep, seed, out_dir, alpha, trees, epochs,
                 regularization, jobs):
    """Cross-validate one model on one dataset and report F1 scores."""
    dataset = load_dataset(dataset_path)
    spec = _spec(model, seed, alpha, trees, epochs, regularization)
    try:
        rows = cross_validate(dataset, spec, mode=prep, seed=seed, n_jobs=jobs)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    notes = {}
    if model == "linear-svm":
        notes["probability_calibration"] = "softmax over margins (uncalibrated)"
    report = build_report(
        rows, jurisdiction=dataset.jurisdiction, seed=seed, preprocess_mode=prep,
        snapshot_id=dataset.snapshot_id, notes=notes,
    )
    click.echo(
        f"{report.jurisdiction} {report.model_id}: micro F1 {report.micro_f1:.4f}, "
        f"macro F1 {report.macro_f1:.4f} ({report.n_samples} samples, "
        f"{report.n_classes} classes)"
    )
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = f"{report.jurisdiction}_{report.model_id.replace('+', '_')}_seed{seed}"
        (out / f"{stem}.report.json").write_text(report.to_json(), encoding="utf-8")
        write_exchange_file(out / f"{stem}.predictions.csv", rows)
        click.echo(f"report + predictions written to {out}")


@main.command("folds")
@_CONFIG_OPTION
@click.argument("dataset_path", metavar="DATASET", type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
def cmd_folds(dataset_path, seed, out_path):
    """Export the stratified fold assignment as a lei,fold CSV."""
    dataset = load_dataset(dataset_path)
    folds = stratified_folds([s.elf_code for s in dataset.samples], seed=seed)
    write_folds_file(out_path, [s.lei for s in dataset.samples], folds)
    click.echo(f"wrote {len(dataset.samples)} fold assignments to {out_path}")


@main.command("predict")
@_CONFIG_OPTION
@click.argument("model_path", metavar="MODEL", type=click.Path(exists=True, dir_okay=False))
@click.option("--name", "names", multiple=True, help="legal name to classify (repeatable)")
@click.option("--input", "input_file", type=click.Path(exists=True, dir_okay=False),
              help="file with one legal name per line")
@click.option("--topk", type=int, default=3, show_default=True)
@click.option("--elf-list", type=click.Path(exists=True, dir_okay=False),
              help="code list used to show the legal form's local name")
def cmd_predict(model_path, names, input_file, topk, elf_list):
    """Classify legal names with a trained model."""
    queries = [n for n in names if n.strip()]
    if input_file:
        queries += [
            line.strip()
            for line in Path(input_file).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
    if not queries:
        raise click.UsageError("provide --name or --input with at least one non-empty name")
    pipeline = load_model(model_path)
    registry = load_registry(elf_list) if elf_list else None
    for query in queries:
        ranking = pipeline.classify_topk(query, k=topk)
        code, probability = ranking[0]
        local = ""
        if registry is not None and code in registry:
            local = f" ({registry.resolve(code).local_name})"
        click.echo(f"{query!r} -> {code}{local} p={probability:.4f}")
        for alt_code, alt_p in ranking[1:]:
            alt_local = ""
            if registry is not None and alt_code in registry:
                alt_local = f" ({registry.resolve(alt_code).local_name})"
            click.echo(f"    alt: {alt_code}{alt_local} p={alt_p:.4f}")


@main.command("challenge")
@_CONFIG_OPTION
@click.argument("model_path", metavar="MODEL", type=click.Path(exists=True, dir_okay=False))
@click.argument("dataset_path", metavar="DATASET", type=click.Path(exists=True, dir_okay=False))
@click.option("--min-prob", type=float, default=0.9, show_default=True,
              help="only disagreements at or above this confidence")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
def cmd_challenge(model_path, dataset_path, min_prob, out_path):
    """List records where the model confidently disagrees with the data."""
    pipeline = load_model(model_path)
    dataset = load_dataset(dataset_path)
    model_id = pipeline.classifier_kind + (
        "+prep" if pipeline.preprocess_mode is PreprocessMode.EXTENDED else ""
    )
    rows = []
    for sample in dataset.samples:
        code, probability = pipeline.classify(sample.legal_name)
        if code != sample.elf_code and probability >= min_prob:
            rows.append(
                [sample.lei, sample.legal_name, dataset.jurisdiction,
                 sample.elf_code, code, f"{probability:.6f}", model_id]
            )
    import csv as _csv

    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# min_prob={min_prob} model={model_id} jurisdiction={dataset.jurisdiction}\n")
        writer = _csv.writer(fh)
        writer.writerow(
            ["lei", "legal_name", "jurisdiction", "recorded_elf", "suggested_elf",
             "probability", "model_id"]
        )
        writer.writerows(rows)
    click.echo(f"{len(rows)} suggested updates -> {out_path}")


@main.command("compare")
@_CONFIG_OPTION
@click.option("--report", "report_files", multiple=True,
              type=click.Path(exists=True, dir_okay=False),
              help="report JSON produced by `evaluate` (repeatable)")
@click.option("--predictions", "prediction_files", multiple=True,
              type=click.Path(exists=True, dir_okay=False),
              help="external exchange-format predictions CSV (repeatable)")
@click.option("--dataset", "dataset_path", type=click.Path(exists=True, dir_okay=False),
              help="dataset the external predictions refer to")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="also write the comparison as JSON")
def cmd_compare(report_files, prediction_files, dataset_path, out_path):
    """Summarize reports into a best-by-F1 / best-by-macro-F1 table."""
    if not report_files and not prediction_files:
        raise click.UsageError("provide at least one --report or --predictions")
    if prediction_files and not dataset_path:
        raise click.UsageError("--predictions requires --dataset")
    reports = [
        EvalReport.from_json(Path(f).read_text(encoding="utf-8")) for f in report_files
    ]
    if prediction_files:
        dataset = load_dataset(dataset_path)
        for f in prediction_files:
            try:
                reports.append(score_external(f, dataset))
            except ValueError as exc:
                raise click.ClickException(f"{f}: {exc}")
    try:
        row = compare_models(reports)
    except ValueError as exc:
        raise click.ClickException(str(exc))

    click.echo(
        f"{row['jurisdiction']}  samples={row['n_samples']}  classes={row['n_classes']}"
    )
    if "best_traditional_by_f1" in row:
        best = row["best_traditional_by_f1"]
        click.echo(f"  best traditional by F1:    {best['model_id']}  {best['micro_f1']:.4f}")
        best = row["best_traditional_by_macro_f1"]
        click.echo(f"  best traditional by F1-M:  {best['model_id']}  {best['macro_f1']:.4f}")
    if "best_transformer_by_f1" in row:
        best = row["best_transformer_by_f1"]
        click.echo(
            f"  best transformer by F1:    {best['model_id']}  {best['micro_f1']:.4f}"
            f"  (macro {best['macro_f1']:.4f})"
        )
    if out_path:
        Path(out_path).write_text(
            json.dumps(row, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )


@main.command("explain")
@_CONFIG_OPTION
@click.argument("model_path", metavar="MODEL", type=click.Path(exists=True, dir_okay=False))
@click.option("--name", required=True, help="legal name to explain")
def cmd_explain(model_path, name):
    """Show per-token contribution scores for one prediction."""
    if not name.strip():
        raise click.UsageError("--name must be non-empty")
    pipeline = load_model(model_path)
    code, probability = pipeline.classify(name)
    click.echo(f"{name!r} -> {code} p={probability:.4f}")
    for token, score in explain_tokens(pipeline, name):
        click.echo(f"  {token:30s} {score:+.4f}")


@main.command("stats")
@_CONFIG_OPTION
@click.argument("dataset_path", metavar="DATASET", type=click.Path(exists=True, dir_okay=False))
@click.option("--elf-list", type=click.Path(exists=True, dir_okay=False))
def cmd_stats(dataset_path, elf_list):
    """Class distribution of a dataset, with resolved form names."""
    dataset = load_dataset(dataset_path)
    registry = load_registry(elf_list) if elf_list else None
    click.echo(f"{dataset.jurisdiction}: {len(dataset.samples)} samples")
    for code, local_name, count in dataset_stats(dataset, registry):
        click.echo(f"  {code}  {local_name or '?':45s} {count}")


def entrypoint(argv=None) -> int:
    from .model_store import CorruptModelError, VersionMismatchError
    from .registry import RegistryError

    try:
        main.main(args=argv, standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        return 1
    except (OSError, ValueError, RegistryError, CorruptModelError, VersionMismatchError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(entrypoint())
