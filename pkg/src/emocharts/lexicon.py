"""Emoji metadata corpus: loading, validation, indexing, and search.

The lexicon file is UTF-8 JSON-lines: one object per line with string
fields ``id``, ``emoji``, ``name``, ``description`` and an array of
strings ``keywords``. Lines starting with ``#`` are comments.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

ID_RE = re.compile(r"[a-z0-9_]+\Z")

# A version pragma written by save_lexicon; plain comments are skipped.
_VERSION_PRAGMA = "# version:"


class LexiconError(ValueError):
    """Invalid lexicon file or entry."""


@dataclass(frozen=True)
class EmojiEntry:
    """One emoji record: stable id, literal glyph, name, tags, free text."""

    id: str
    emoji: str
    name: str
    keywords: tuple[str, ...]
    description: str

    @property
    def codepoints(self) -> tuple[int, ...]:
        return tuple(ord(ch) for ch in self.emoji)

    def validate(self) -> None:
        if not ID_RE.match(self.id):
            raise LexiconError(f"invalid id {self.id!r}: must match [a-z0-9_]+")
        if not self.emoji:
            raise LexiconError(f"entry {self.id!r}: emoji renders to an empty string")
        for ch in self.emoji:
            if 0xD800 <= ord(ch) <= 0xDFFF:
                raise LexiconError(
                    f"entry {self.id!r}: U+{ord(ch):04X} is not a valid Unicode scalar"
                )


class Lexicon:
    """Immutable, indexed collection of emoji entries."""

    def __init__(self, entries: Iterable[EmojiEntry], version: str = "unversioned"):
        self.entries: list[EmojiEntry] = list(entries)
        self.version = version
        self._by_id: dict[str, EmojiEntry] = {}
        self._by_emoji: dict[str, EmojiEntry] = {}
        for entry in self.entries:
            entry.validate()
            if entry.id in self._by_id:
                raise LexiconError(f"duplicate id {entry.id!r}")
            if entry.emoji in self._by_emoji:
                raise LexiconError(
                    f"duplicate codepoint sequence for {entry.id!r} "
                    f"(already used by {self._by_emoji[entry.emoji].id!r})"
                )
            self._by_id[entry.id] = entry
            self._by_emoji[entry.emoji] = entry

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[EmojiEntry]:
        return iter(self.entries)

    def __contains__(self, emoji_id: str) -> bool:
        return emoji_id in self._by_id

    def get(self, emoji_id: str) -> EmojiEntry:
        try:
            return self._by_id[emoji_id]
        except KeyError:
            raise KeyError(f"unknown emoji id {emoji_id!r}") from None

    def by_codepoints(self, codepoints: Iterable[int]) -> EmojiEntry:
        emoji = "".join(chr(cp) for cp in codepoints)
        try:
            return self._by_emoji[emoji]
        except KeyError:
            raise KeyError(f"no entry for codepoints {list(codepoints)!r}") from None

    def ids(self) -> list[str]:
        return [e.id for e in self.entries]


def _parse_record(lineno: int, line: str) -> EmojiEntry:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise LexiconError(f"line {lineno}: malformed record: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise LexiconError(f"line {lineno}: record is not an object")
    for key in ("id", "emoji", "name", "keywords", "description"):
        if key not in raw:
            raise LexiconError(f"line {lineno}: missing field {key!r}")
    for key in ("id", "emoji", "name", "description"):
        if not isinstance(raw[key], str):
            raise LexiconError(f"line {lineno}: field {key!r} must be a string")
    kws = raw["keywords"]
    if not isinstance(kws, list) or not all(isinstance(k, str) for k in kws):
        raise LexiconError(f"line {lineno}: field 'keywords' must be an array of strings")
    entry = EmojiEntry(
        id=raw["id"],
        emoji=raw["emoji"],
        name=raw["name"],
        keywords=tuple(k.lower() for k in kws),
        description=raw["description"],
    )
    try:
        entry.validate()
    except LexiconError as exc:
        raise LexiconError(f"line {lineno}: {exc}") from None
    return entry


def load_lexicon(path: str | Path) -> Lexicon:
    """Load and validate a lexicon file; fails atomically on any bad record."""
    path = Path(path)
    entries: list[EmojiEntry] = []
    seen_ids: dict[str, int] = {}
    seen_emoji: dict[str, int] = {}
    version = "unversioned"
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if line.startswith(_VERSION_PRAGMA):
                    version = line[len(_VERSION_PRAGMA):].strip()
                continue
            entry = _parse_record(lineno, line)
            if entry.id in seen_ids:
                raise LexiconError(
                    f"line {lineno}: duplicate id {entry.id!r} "
                    f"(first defined on line {seen_ids[entry.id]})"
                )
            if entry.emoji in seen_emoji:
                raise LexiconError(
                    f"line {lineno}: duplicate codepoint sequence "
                    f"(first defined on line {seen_emoji[entry.emoji]})"
                )
            seen_ids[entry.id] = lineno
            seen_emoji[entry.emoji] = lineno
            entries.append(entry)
    return Lexicon(entries, version=version)


def save_lexicon(lexicon: Lexicon, path: str | Path) -> None:
    """Write a lexicon back to disk in the line-delimited format."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(f"{_VERSION_PRAGMA} {lexicon.version}\n")
        for e in lexicon.entries:
            record = {
                "id": e.id,
                "emoji": e.emoji,
                "name": e.name,
                "keywords": list(e.keywords),
                "description": e.description,
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def search(lexicon: Lexicon, query: str, limit: int) -> list[EmojiEntry]:
    """Rank entries by match quality: exact name, name prefix, exact
    keyword, then substring anywhere in name or keywords. Ties break on id.
    """
    q = query.strip().lower()
    if not q:
        raise ValueError("empty query")
    if limit < 1:
        raise ValueError("limit must be positive")
    ranked: list[tuple[int, str]] = []
    for entry in lexicon:
        name = entry.name.lower()
        if name == q:
            tier = 0
        elif name.startswith(q):
            tier = 1
        elif q in entry.keywords:
            tier = 2
        elif q in name or any(q in kw for kw in entry.keywords):
            tier = 3
        else:
            continue
        ranked.append((tier, entry.id))
    ranked.sort()
    return [lexicon.get(eid) for _, eid in ranked[:limit]]
