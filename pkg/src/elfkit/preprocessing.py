"""Legal-name harmonization and whitespace tokenization.

Two regimes are supported: a minimal one that only lowercases, and an
extended one that applies a fixed sequence of harmonization rules
(diacritic folding, quote removal, abbreviation-period joining, purge of
separator characters). The extended regime exists to unify spellings such
as ``L.L.C.`` / ``LLC`` or ``G.m.b.H.`` / ``GmbH`` that denote the same
legal form.
"""

from __future__ import annotations

import re
import unicodedata
from enum import Enum
from functools import lru_cache

from sklearn.base import BaseEstimator, TransformerMixin

__all__ = [
    "PreprocessMode",
    "normalize_name",
    "tokenize",
    "NameNormalizer",
]


class PreprocessMode(Enum):
    """Name harmonization regime."""

    LOWER_ONLY = "lower"
    EXTENDED = "extended"

    @classmethod
    def from_string(cls, value: "str | PreprocessMode") -> "PreprocessMode":
        if isinstance(value, cls):
            return value
        for mode in cls:
            if mode.value == value:
                return mode
        raise ValueError(
            f"unknown preprocessing mode {value!r}; expected one of "
            f"{[m.value for m in cls]}"
        )


_WS_RUN = re.compile(r"\s+")

# Quotation marks removed outright: " + curly/guillemet/low-9 variants.
_QUOTE_TABLE = {ord(c): None for c in "\"“”«»„"}

# A run of single letters joined by periods ("l.l.c", "g.m.b.h"), not
# preceded by another letter, with an optional trailing period.
_ABBREV_RUN = re.compile(r"(?<![^\W\d_])([^\W\d_](?:\.[^\W\d_])+)\.?")

# Periods/commas touching a boundary get blanked. "Boundary" includes the
# characters the later purge step turns into spaces (and the period
# itself), otherwise purging could expose a new boundary period and a
# second normalization pass would differ from the first.
_BOUNDARY_CLASS = r"[\s.\-();/,]"
_DOT_AT_BOUNDARY = re.compile(rf"(?:(?<={_BOUNDARY_CLASS})|^)\.|\.(?={_BOUNDARY_CLASS}|$)")
_COMMA_AT_BOUNDARY = re.compile(rf"(?:(?<={_BOUNDARY_CLASS})|^),|,(?={_BOUNDARY_CLASS}|$)")

_PURGE_TABLE = {ord(c): " " for c in "-();/,"}


@lru_cache(maxsize=4096)
def _is_latin(char: str) -> bool:
    return unicodedata.name(char, "").startswith("LATIN")


def _fold_diacritics(text: str) -> str:
    """Strip combining marks from Latin-script characters only.

    Non-Latin scripts pass through untouched so that e.g. Japanese kana
    with dakuten or Cyrillic letters are not corrupted.
    """
    out = []
    for ch in text:
        decomposed = unicodedata.normalize("NFD", ch)
        if len(decomposed) > 1 and _is_latin(decomposed[0]):
            out.append(
                "".join(c for c in decomposed if not unicodedata.combining(c))
            )
        else:
            out.append(ch)
    return "".join(out)


def _strip_trailing_nonalnum(text: str) -> str:
    end = len(text)
    while end > 0 and not text[end - 1].isalnum():
        end -= 1
    return text[:end]


def _join_abbreviation_periods(text: str) -> str:
    """Collapse period-joined single-letter runs: ``l.l.c.`` -> ``llc``."""
    return _ABBREV_RUN.sub(lambda m: m.group(1).replace(".", ""), text)


def _sub_until_stable(pattern: re.Pattern, repl: str, text: str) -> str:
    # Lookbehinds see the pre-substitution text, so one pass can leave a
    # freshly exposed match behind; iterate to the fixpoint.
    while True:
        replaced = pattern.sub(repl, text)
        if replaced == text:
            return text
        text = replaced


def _fix_commas_periods(text: str) -> str:
    text = _join_abbreviation_periods(text)
    text = _sub_until_stable(_DOT_AT_BOUNDARY, " ", text)
    text = _sub_until_stable(_COMMA_AT_BOUNDARY, " ", text)
    return text


def _purge(text: str) -> str:
    # Separators first: turning them into spaces is what surfaces the
    # padded " & " / " + " conjunctions, which are then rewritten until
    # stable (" + + " overlaps itself, so one pass is not enough).
    text = text.translate(_PURGE_TABLE)
    text = _WS_RUN.sub(" ", text)
    while True:
        rewritten = text.replace(" & ", " and ").replace(" + ", " and ")
        if rewritten == text:
            return text
        text = rewritten


def normalize_name(name: str, mode: PreprocessMode = PreprocessMode.EXTENDED) -> str:
    """Harmonize a raw legal name.

    ``LOWER_ONLY`` lowercases and nothing else. ``EXTENDED`` applies, in
    this order: (1) lowercase, (2) fold diacritics on Latin characters,
    (3) collapse whitespace runs, (4) drop quotation marks, (5) strip
    trailing non-alphanumerics, (6) join abbreviation periods and blank
    stray commas/periods, (7) purge separator characters and rewrite
    `` & ``/`` + `` to `` and ``, (8) collapse whitespace again and trim.

    The extended result is empty only when the input contains no
    alphanumeric character at all.
    """
    mode = PreprocessMode.from_string(mode)
    if mode is PreprocessMode.LOWER_ONLY:
        return name.lower()
    s = name.lower()
    s = _fold_diacritics(s)
    s = _WS_RUN.sub(" ", s)
    s = s.translate(_QUOTE_TABLE)
    s = _strip_trailing_nonalnum(s)
    s = _fix_commas_periods(s)
    s = _purge(s)
    return _WS_RUN.sub(" ", s).strip()


def tokenize(normalized_name: str) -> list[str]:
    """Split a (pre-processed) name at whitespace runs.

    Never yields empty tokens; token order is preserved. Scripts without
    word delimiters (e.g. Japanese) come back as a single token.
    """
    return normalized_name.split()


class NameNormalizer(BaseEstimator, TransformerMixin):
    """Stateless transformer applying :func:`normalize_name` element-wise.

    Parameters
    ----------
    mode : str, default="extended"
        Either ``"lower"`` or ``"extended"``.
    """

    def __init__(self, mode: str = "extended"):
        self.mode = mode

    def fit(self, X, y=None):
        PreprocessMode.from_string(self.mode)
        return self

    def transform(self, X) -> list[str]:
        mode = PreprocessMode.from_string(self.mode)
        return [normalize_name(name, mode) for name in X]
