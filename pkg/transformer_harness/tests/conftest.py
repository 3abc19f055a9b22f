import csv
from pathlib import Path

import pytest
import torch

VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "gmbh", "eg", "stiftung", "der", "und",
    "volksbank", "odenwald", "kasse", "bank", "handel",
    "alpha", "beta", "gamma", "delta", "omega",
    "nord", "sued", "ost", "west", "berg", "tal",
    "##bank", "##wald", "##berg",
]


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory) -> Path:
    """A real (if minuscule) pre-trained-style checkpoint on disk.

    Saved as a bare encoder so loading it for sequence classification
    initializes a fresh head, exactly like a hub checkpoint would. The
    WordPiece tokenizer is built explicitly (vocab.txt loading is gone in
    recent transformers releases).
    """
    from tokenizers import Tokenizer
    from tokenizers.models import WordPiece
    from tokenizers.normalizers import BertNormalizer
    from tokenizers.pre_tokenizers import BertPreTokenizer
    from tokenizers.processors import TemplateProcessing
    from transformers import BertConfig, BertModel, BertTokenizerFast

    root = tmp_path_factory.mktemp("tiny-bert")
    vocab = {token: i for i, token in enumerate(VOCAB)}
    backend = Tokenizer(WordPiece(vocab, unk_token="[UNK]"))
    backend.normalizer = BertNormalizer(lowercase=True)
    backend.pre_tokenizer = BertPreTokenizer()
    backend.post_processor = TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[("[CLS]", vocab["[CLS]"]), ("[SEP]", vocab["[SEP]"])],
    )
    tokenizer = BertTokenizerFast(
        tokenizer_object=backend, unk_token="[UNK]", pad_token="[PAD]",
        cls_token="[CLS]", sep_token="[SEP]", mask_token="[MASK]",
    )
    torch.manual_seed(1234)
    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=64,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=128,
        max_position_embeddings=64,
        # dropout stalls tiny randomly-initialized encoders on small data
        hidden_dropout_prob=0.0,
        attention_probs_dropout_prob=0.0,
    )
    BertModel(config).save_pretrained(root)
    tokenizer.save_pretrained(root)
    return root


def lei(i: int) -> str:
    return f"5493{i:016d}"


def write_dataset_and_folds(path: Path, samples):
    """samples: iterable of (lei, name, code, fold)."""
    dataset = path / "DE.tsv"
    with open(dataset, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, dialect="excel-tab")
        writer.writerow(["lei", "name", "elf_code"])
        for sample_lei, name, code, _ in samples:
            writer.writerow([sample_lei, name, code])
    folds = path / "folds.csv"
    with open(folds, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lei", "fold"])
        for sample_lei, _, _, fold in samples:
            writer.writerow([sample_lei, fold])
    return dataset, folds


@pytest.fixture
def smoke_samples():
    """Two suffix-separable classes spread over 5 folds."""
    samples = []
    cores = ["alpha", "beta", "gamma", "delta", "omega", "nord", "sued", "ost", "west", "berg"]
    for i in range(20):
        suffix, code = ("gmbh", "2HBR") if i % 2 else ("eg", "AZFE")
        samples.append((lei(i), f"{cores[i % 10]} {cores[(i + 3) % 10]} {suffix}", code, i % 5))
    return samples
