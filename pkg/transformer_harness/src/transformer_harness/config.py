"""Training configuration and the model-identifier table.

The optimizer recipe (AdamW, 5 epochs, learning rate 2e-5, weight decay
0.01) is fixed; overriding any of those values works but warns, so an
experiment that drifts from the reference recipe says so out loud.
Batch size 32 and sequence length 64 are our own choices (legal names
rarely pass 30 sub-word tokens) and get recorded in every output file.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["TransformerTrainConfig", "MODEL_HUB_IDS", "UnknownModelIdentifierError", "resolve_checkpoint"]

REFERENCE_EPOCHS = 5
REFERENCE_LEARNING_RATE = 2e-5
REFERENCE_WEIGHT_DECAY = 0.01

# Friendly identifier -> hub checkpoint. Local filesystem paths are also
# accepted anywhere an identifier is, which keeps tests and air-gapped
# runs on the exact same code path.
MODEL_HUB_IDS = {
    "bert-base-uncased": "bert-base-uncased",
    "bert-base-cased": "bert-base-cased",
    "bert-base-multilingual-uncased": "bert-base-multilingual-uncased",
    "bert-base-multilingual-cased": "bert-base-multilingual-cased",
    "bert-base-german-uncased": "dbmdz/bert-base-german-uncased",
    "bert-base-german-cased": "dbmdz/bert-base-german-cased",
    "bert-base-italian-uncased": "dbmdz/bert-base-italian-uncased",
    "bert-base-japanese": "cl-tohoku/bert-base-japanese",
    "bert-base-finnish-uncased-v1": "TurkuNLP/bert-base-finnish-uncased-v1",
    "bert-base-polish-uncased-v1": "dkleczek/bert-base-polish-uncased-v1",
    "bert-base-swedish-cased": "KB/bert-base-swedish-cased",
    "danish-bert-botxo": "Maltehb/danish-bert-botxo",
    "bertje": "GroNLP/bert-base-dutch-cased",
    "bertimbau": "neuralmind/bert-base-portuguese-cased",
    "beto-uncased": "dccuchile/bert-base-spanish-wwm-uncased",
    "finbert-pretrain": "yiyanghkust/finbert-pretrain",
}


class UnknownModelIdentifierError(ValueError):
    pass


def resolve_checkpoint(identifier: str) -> str:
    if identifier in MODEL_HUB_IDS:
        return MODEL_HUB_IDS[identifier]
    if Path(identifier).exists():
        return identifier
    raise UnknownModelIdentifierError(
        f"unknown model identifier {identifier!r}; expected one of "
        f"{sorted(MODEL_HUB_IDS)} or a local checkpoint path"
    )


@dataclass(frozen=True)
class TransformerTrainConfig:
    model_identifier: str
    epochs: int = REFERENCE_EPOCHS
    learning_rate: float = REFERENCE_LEARNING_RATE
    weight_decay: float = REFERENCE_WEIGHT_DECAY
    batch_size: int = 32
    max_sequence_length: int = 64
    seed: int = 0
    model_id: str = ""  # label used in output rows; defaults to the identifier

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1 or self.max_sequence_length < 8:
            raise ValueError("epochs/batch_size/max_sequence_length out of range")
        if self.learning_rate <= 0 or self.weight_decay < 0:
            raise ValueError("learning_rate must be positive, weight_decay non-negative")
        drifted = []
        if self.epochs != REFERENCE_EPOCHS:
            drifted.append(f"epochs={self.epochs}")
        if self.learning_rate != REFERENCE_LEARNING_RATE:
            drifted.append(f"learning_rate={self.learning_rate}")
        if self.weight_decay != REFERENCE_WEIGHT_DECAY:
            drifted.append(f"weight_decay={self.weight_decay}")
        if drifted:
            warnings.warn(
                "training recipe overridden (" + ", ".join(drifted) + "); "
                "results are not comparable to the reference setup",
                stacklevel=3,
            )
        if not self.model_id:
            object.__setattr__(self, "model_id", self.model_identifier)

    def header_comment(self) -> str:
        return (
            f"model={self.model_id} checkpoint={self.model_identifier} "
            f"epochs={self.epochs} lr={self.learning_rate} wd={self.weight_decay} "
            f"batch_size={self.batch_size} max_sequence_length={self.max_sequence_length} "
            f"seed={self.seed}"
        )
