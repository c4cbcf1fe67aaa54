"""Ranked emoji recommendations, placeholder fallback, and ordinal palettes."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .embedding import EmbeddingTable, phrase_vector
from .lexicon import Lexicon

DEFAULT_PLACEHOLDER_ID = "white_circle"


@dataclass(frozen=True)
class Recommendation:
    emoji_id: str
    score: float   # cosine in [-1, 1]
    rank: int      # 1-based


@dataclass(frozen=True)
class OrdinalPalette:
    name: str
    kind: str                 # "sequential" | "diverging"
    levels: tuple[str, ...]   # emoji ids, low to high

    def __post_init__(self):
        if self.kind not in ("sequential", "diverging"):
            raise ValueError(f"palette {self.name!r}: unknown kind {self.kind!r}")
        if len(self.levels) < 2:
            raise ValueError(f"palette {self.name!r}: needs at least 2 levels")
        if len(set(self.levels)) != len(self.levels):
            raise ValueError(f"palette {self.name!r}: duplicate emoji ids")
        if self.kind == "diverging" and len(self.levels) % 2 == 0:
            raise ValueError(
                f"palette {self.name!r}: diverging palettes need an odd "
                f"number of levels (a neutral midpoint)"
            )


@dataclass(frozen=True)
class PlaceholderPolicy:
    placeholder_emoji_id: str = DEFAULT_PLACEHOLDER_ID


def recommend(
    table: EmbeddingTable, lexicon: Lexicon, text: str, k: int
) -> list[Recommendation]:
    """Top-k emojis by cosine against the phrase vector of `text`.

    Empty when no token of `text` is in vocabulary; the caller falls back
    to its placeholder. Ties break on emoji id.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    query = phrase_vector(table, text)
    if query is None:
        return []
    ids = [eid for eid in table.emoji_vectors if eid in lexicon]
    if not ids:
        return []
    matrix = np.stack([table.emoji_vectors[eid] for eid in ids])
    norms = np.linalg.norm(matrix, axis=1)
    qnorm = np.linalg.norm(query)
    if qnorm == 0.0:
        return []
    scores = np.clip(matrix @ query / (norms * qnorm), -1.0, 1.0)
    order = sorted(range(len(ids)), key=lambda i: (-scores[i], ids[i]))[:k]
    return [
        Recommendation(emoji_id=ids[i], score=float(scores[i]), rank=r)
        for r, i in enumerate(order, start=1)
    ]


def recommend_or_placeholder(
    table: EmbeddingTable,
    lexicon: Lexicon,
    text: str,
    policy: PlaceholderPolicy | None = None,
) -> str:
    """Best-match emoji id, or the policy placeholder when the model is silent."""
    policy = policy or PlaceholderPolicy()
    if policy.placeholder_emoji_id not in lexicon:
        raise KeyError(
            f"placeholder emoji {policy.placeholder_emoji_id!r} is not in the lexicon"
        )
    top = recommend(table, lexicon, text, k=1)
    return top[0].emoji_id if top else policy.placeholder_emoji_id


def load_palettes(path: str | Path, lexicon: Lexicon | None = None) -> list[OrdinalPalette]:
    """Read a line-delimited palette config; ids are checked against the lexicon."""
    path = Path(path)
    palettes: list[OrdinalPalette] = []
    names: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"line {lineno}: malformed palette record: {exc.msg}") from None
            try:
                palette = OrdinalPalette(
                    name=str(raw["name"]),
                    kind=str(raw["kind"]),
                    levels=tuple(raw["levels"]),
                )
            except KeyError as exc:
                raise ValueError(f"line {lineno}: missing field {exc}") from None
            if palette.name in names:
                raise ValueError(f"line {lineno}: duplicate palette {palette.name!r}")
            if lexicon is not None:
                for eid in palette.levels:
                    if eid not in lexicon:
                        raise ValueError(
                            f"line {lineno}: palette {palette.name!r} references "
                            f"unknown emoji id {eid!r}"
                        )
            names.add(palette.name)
            palettes.append(palette)
    return palettes


def builtin_palettes() -> list[OrdinalPalette]:
    """The palettes shipped with the package, in config-file order."""
    from .assets import default_palettes

    return list(default_palettes())


def bin_value(
    value: float,
    domain_min: float,
    domain_max: float,
    palette: OrdinalPalette,
    midpoint: float = 0.0,
) -> int:
    """Map a value to a 0-based palette level via equal-width bins.

    Diverging palettes bin over the domain symmetrized around `midpoint`,
    so the neutral glyph sits at the midpoint. Out-of-domain values clamp
    to the nearest end.
    """
    if not math.isfinite(value):
        raise ValueError("value must be finite")
    if domain_min >= domain_max:
        raise ValueError("degenerate domain")
    if palette.kind == "diverging":
        radius = max(abs(domain_min - midpoint), abs(domain_max - midpoint))
        lo, hi = midpoint - radius, midpoint + radius
    else:
        lo, hi = domain_min, domain_max
    k = len(palette.levels)
    index = math.floor(k * (value - lo) / (hi - lo))
    return min(max(index, 0), k - 1)
