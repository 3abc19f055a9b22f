"""Command line for the fine-tuning harness.

``th finetune`` consumes a dataset TSV and a fold CSV produced by the
companion toolkit and writes exchange-format predictions; ``th attribute``
prints/serializes token attributions for one name against a fine-tuned
checkpoint directory.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .attribution import attribute, completeness_check
from .config import MODEL_HUB_IDS, TransformerTrainConfig, UnknownModelIdentifierError
from .data import FoldMismatchError
from .finetune import finetune_files


@click.group()
def main():
    """Transformer fine-tuning harness for legal-form classification."""


@main.command("finetune")
@click.argument("dataset", type=click.Path(exists=True, dir_okay=False))
@click.argument("folds", type=click.Path(exists=True, dir_okay=False))
@click.option("--model", "model_identifier", required=True,
              help=f"one of {sorted(MODEL_HUB_IDS)} or a local checkpoint path")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.option("--epochs", type=int, default=5, show_default=True)
@click.option("--learning-rate", type=float, default=2e-5, show_default=True)
@click.option("--weight-decay", type=float, default=0.01, show_default=True)
@click.option("--batch-size", type=int, default=32, show_default=True)
@click.option("--max-seq-len", type=int, default=64, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--model-id", default="", help="label for output rows; defaults to --model")
def cmd_finetune(dataset, folds, model_identifier, out_path, epochs, learning_rate,
                 weight_decay, batch_size, max_seq_len, seed, model_id):
    """Fine-tune per fold and write exchange-format predictions."""
    config = TransformerTrainConfig(
        model_identifier=model_identifier,
        epochs=epochs,
        learning_rate=learning_rate,
        weight_decay=weight_decay,
        batch_size=batch_size,
        max_sequence_length=max_seq_len,
        seed=seed,
        model_id=model_id,
    )
    path = finetune_files(dataset, folds, config, out_path)
    click.echo(f"predictions written to {path}")


@main.command("attribute")
@click.argument("checkpoint", type=click.Path(exists=True))
@click.option("--name", required=True)
@click.option("--steps", type=int, default=50, show_default=True)
@click.option("--labels", default=None, help="comma-separated class labels, index order")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="also write the attribution report as JSON")
def cmd_attribute(checkpoint, name, steps, labels, out_path):
    """Integrated-gradients token attribution for one legal name."""
    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    model = AutoModelForSequenceClassification.from_pretrained(checkpoint)
    tokenizer = AutoTokenizer.from_pretrained(checkpoint)
    class_labels = labels.split(",") if labels else None
    result = attribute(model, tokenizer, name, n_steps=steps, class_labels=class_labels)
    click.echo(f"{name!r} -> {result.predicted}")
    for token, score in zip(result.tokens, result.scores):
        click.echo(f"  {token:24s} {score:.2f}")
    click.echo(f"completeness residual: {completeness_check(result):.4f}")
    if out_path:
        report = {
            "name": name,
            "predicted": result.predicted,
            "tokens": list(result.tokens),
            "scores": list(result.scores),
            "n_steps": result.n_steps,
            "completeness_residual": completeness_check(result),
        }
        Path(out_path).write_text(
            json.dumps(report, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )


def entrypoint(argv=None) -> int:
    try:
        main.main(args=argv, standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except (OSError, ValueError, FoldMismatchError, UnknownModelIdentifierError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(entrypoint())
