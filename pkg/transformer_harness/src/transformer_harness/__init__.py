"""Fine-tune BERT-family checkpoints on legal-name datasets and explain them."""

from .attribution import TokenAttribution, attribute, completeness_check
from .config import (
    MODEL_HUB_IDS,
    TransformerTrainConfig,
    UnknownModelIdentifierError,
    resolve_checkpoint,
)
from .data import FoldedSample, FoldMismatchError, load_folded_dataset
from .finetune import finetune, finetune_files

__version__ = "0.1.0"

__all__ = [
    "MODEL_HUB_IDS",
    "FoldMismatchError",
    "FoldedSample",
    "TokenAttribution",
    "TransformerTrainConfig",
    "UnknownModelIdentifierError",
    "attribute",
    "completeness_check",
    "finetune",
    "finetune_files",
    "load_folded_dataset",
    "resolve_checkpoint",
]
