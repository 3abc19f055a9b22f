"""Per-fold fine-tuning of a sequence-classification checkpoint.

For each fold, a fresh model is loaded from the pre-trained checkpoint
(the classification head is newly initialized with a per-fold seed;
nothing is reused across folds) and trained on all other folds' samples
with AdamW. Names go straight into the model's own tokenizer — no custom
normalization of any kind. The concatenated test-fold predictions cover
every sample exactly once and are written in the prediction-exchange CSV
format of the companion toolkit.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np
import torch

from .config import TransformerTrainConfig, resolve_checkpoint
from .data import EXCHANGE_HEADER, FoldedSample, load_folded_dataset

__all__ = ["finetune", "finetune_files"]


def _load_fresh_model(checkpoint: str, num_labels: int, seed: int):
    from transformers import AutoModelForSequenceClassification, AutoTokenizer

    torch.manual_seed(seed)
    model = AutoModelForSequenceClassification.from_pretrained(
        checkpoint, num_labels=num_labels
    )
    # Guarantee a freshly seeded head even if the checkpoint carried one.
    head = getattr(model, "classifier", None)
    if isinstance(head, torch.nn.Linear):
        torch.nn.init.normal_(head.weight, std=0.02)
        torch.nn.init.zeros_(head.bias)
    tokenizer = AutoTokenizer.from_pretrained(checkpoint)
    return model, tokenizer


def _encode(tokenizer, names, config):
    return tokenizer(
        names,
        padding=True,
        truncation=True,
        max_length=config.max_sequence_length,
        return_tensors="pt",
    )


def _train_fold(model, tokenizer, train: list[FoldedSample], label_index, config, fold):
    optimizer = torch.optim.AdamW(
        model.parameters(), lr=config.learning_rate, weight_decay=config.weight_decay
    )
    labels = torch.tensor([label_index[s.elf_code] for s in train])
    order_rng = np.random.default_rng(config.seed * 1000 + fold)
    model.train()
    for _ in range(config.epochs):
        order = order_rng.permutation(len(train))
        for start in range(0, len(order), config.batch_size):
            batch_idx = order[start: start + config.batch_size]
            encoded = _encode(tokenizer, [train[i].legal_name for i in batch_idx], config)
            out = model(**encoded, labels=labels[batch_idx])
            out.loss.backward()
            optimizer.step()
            optimizer.zero_grad()


@torch.no_grad()
def _predict_fold(model, tokenizer, test: list[FoldedSample], config):
    model.eval()
    probabilities = []
    for start in range(0, len(test), config.batch_size):
        chunk = test[start: start + config.batch_size]
        encoded = _encode(tokenizer, [s.legal_name for s in chunk], config)
        logits = model(**encoded).logits
        probabilities.append(torch.softmax(logits, dim=-1))
    return torch.cat(probabilities, dim=0).cpu().numpy()


def finetune(samples: list[FoldedSample], config: TransformerTrainConfig):
    """Fine-tune per fold; yields (sample, predicted_code, probability)."""
    checkpoint = resolve_checkpoint(config.model_identifier)
    classes = sorted({s.elf_code for s in samples})
    label_index = {code: i for i, code in enumerate(classes)}
    folds = sorted({s.fold for s in samples})

    results: dict[str, tuple[FoldedSample, str, float]] = {}
    for fold in folds:
        train = [s for s in samples if s.fold != fold]
        test = [s for s in samples if s.fold == fold]
        if not train or not test:
            continue
        model, tokenizer = _load_fresh_model(
            checkpoint, num_labels=len(classes), seed=config.seed * 100 + fold
        )
        _train_fold(model, tokenizer, train, label_index, config, fold)
        probabilities = _predict_fold(model, tokenizer, test, config)
        winners = probabilities.argmax(axis=1)
        for sample, winner, row in zip(test, winners, probabilities):
            assert sample.lei not in results, "sample predicted twice"
            results[sample.lei] = (sample, classes[int(winner)], float(row[int(winner)]))
        del model
    return [results[s.lei] for s in samples if s.lei in results]


def finetune_files(
    dataset_path: str | Path,
    folds_path: str | Path,
    config: TransformerTrainConfig,
    out_path: str | Path,
) -> Path:
    """File-level entry point: dataset TSV + folds CSV -> exchange CSV."""
    samples = load_folded_dataset(dataset_path, folds_path)
    predictions = finetune(samples, config)
    out_path = Path(out_path)
    with open(out_path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# {config.header_comment()}\n")
        writer = csv.writer(fh)
        writer.writerow(EXCHANGE_HEADER)
        for sample, predicted, probability in predictions:
            writer.writerow(
                [sample.lei, sample.fold, sample.elf_code, predicted,
                 f"{probability:.6f}", config.model_id]
            )
    return out_path
