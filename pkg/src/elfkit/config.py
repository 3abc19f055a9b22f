"""Tiny ``key = value`` config files.

Used for two things: remapping CSV column names when GLEIF revises a file
layout, and mirroring CLI flags in reproducible experiment manifests.
Lines are ``key = value``; ``#`` starts a comment; blank lines are
ignored. Values keep internal whitespace but are stripped at the ends.
"""

from __future__ import annotations

from pathlib import Path

__all__ = ["read_kv_config"]


def read_kv_config(path: str | Path) -> dict[str, str]:
    result: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ValueError(f"{path}:{lineno}: empty key")
        result[key] = value.strip()
    return result
