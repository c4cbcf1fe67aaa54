"""Skip-gram word embeddings trained on emoji name/keyword/description text.

Training is plain skip-gram with negative sampling over the lexicon
corpus, run single-threaded so that identical (corpus, config, seed)
inputs reproduce byte-identical results. Each emoji is represented as
the mean of its in-vocabulary corpus token vectors.
"""
from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .lexicon import EmojiEntry, Lexicon

EMBEDDING_MAGIC = "emoji-encoder-embeddings"
EMBEDDING_FORMAT_VERSION = "v1"

_KEEP_CHARS = frozenset("abcdefghijklmnopqrstuvwxyz0123456789'")
_APOSTROPHES = str.maketrans({"‘": "'", "’": "'"})


class TrainError(ValueError):
    """Training cannot proceed (empty corpus, no trainable tokens, divergence)."""


class EmbeddingFileError(ValueError):
    """Embedding file is malformed or inconsistent."""


def tokenize(text: str) -> list[str]:
    """Lowercase tokens over the alphabet [a-z0-9']; everything else splits.

    Accented letters with a trivial ASCII decomposition are folded
    (``café`` -> ``cafe``); other non-ASCII characters act as separators.
    """
    text = unicodedata.normalize("NFKD", text.translate(_APOSTROPHES)).casefold()
    tokens: list[str] = []
    current: list[str] = []
    for ch in text:
        if ch in _KEEP_CHARS:
            current.append(ch)
        elif unicodedata.combining(ch):
            continue
        elif current:
            tokens.append("".join(current))
            current = []
    if current:
        tokens.append("".join(current))
    return tokens


def entry_tokens(entry: EmojiEntry) -> list[str]:
    """Corpus token sequence for one emoji: name, keywords, description."""
    return tokenize(entry.name) + list(entry.keywords) + tokenize(entry.description)


def build_corpus(lexicon: Lexicon) -> list[list[str]]:
    """One token sequence per lexicon entry, skipping empty ones."""
    corpus = []
    for entry in lexicon:
        seq = entry_tokens(entry)
        if seq:
            corpus.append(seq)
    return corpus


@dataclass(frozen=True)
class TrainConfig:
    dimension: int = 64
    window: int = 5
    negative_samples: int = 5
    epochs: int = 15
    learning_rate_initial: float = 0.025
    min_token_count: int = 2
    seed: int = 42
    subsample_threshold: float = 1e-3

    def validate(self) -> None:
        if self.dimension < 2:
            raise ValueError("dimension must be >= 2")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.negative_samples < 1:
            raise ValueError("negative_samples must be >= 1")
        if self.learning_rate_initial <= 0:
            raise ValueError("learning_rate_initial must be positive")
        if self.min_token_count < 1:
            raise ValueError("min_token_count must be >= 1")
        if self.subsample_threshold < 0:
            raise ValueError("subsample_threshold must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


def _sigmoid(x: np.ndarray) -> np.ndarray:
    # computed via exp(-|x|) so neither branch can overflow
    z = np.exp(-np.abs(x))
    return np.where(x >= 0, 1.0 / (1.0 + z), z / (1.0 + z))


def train(corpus: list[list[str]], config: TrainConfig) -> dict[str, np.ndarray]:
    """Train skip-gram-with-negative-sampling vectors; returns input vectors.

    Vocabulary keeps tokens with count >= min_token_count, ordered by
    descending count (ties alphabetical). Frequent tokens are subsampled,
    negatives are drawn proportional to count^0.75, and the learning rate
    decays linearly across all epoch-position pairs down to a floor of
    1e-4 of its initial value. Deterministic for a fixed seed.
    """
    config.validate()
    counts = Counter(tok for seq in corpus for tok in seq)
    vocab = sorted((t for t, c in counts.items() if c >= config.min_token_count),
                   key=lambda t: (-counts[t], t))
    if not vocab:
        raise TrainError("no trainable tokens")
    index = {t: i for i, t in enumerate(vocab)}
    nvocab = len(vocab)
    dim = config.dimension

    rng = np.random.default_rng(config.seed)
    w_in = (rng.random((nvocab, dim)) - 0.5) / dim
    w_out = np.zeros((nvocab, dim))

    freq = np.array([counts[t] for t in vocab], dtype=np.float64)
    noise = freq ** 0.75
    noise_cdf = np.cumsum(noise / noise.sum())

    if config.subsample_threshold > 0:
        rel = freq / freq.sum()
        t = config.subsample_threshold
        keep = np.minimum(1.0, np.sqrt(t / rel) + t / rel)
    else:
        keep = np.ones(nvocab)

    id_corpus = [[index[t] for t in seq if t in index] for seq in corpus]
    positions_per_epoch = sum(len(s) for s in id_corpus)
    if positions_per_epoch == 0:
        raise TrainError("no trainable tokens")
    total_steps = config.epochs * positions_per_epoch
    lr0 = config.learning_rate_initial
    lr_floor = lr0 * 1e-4
    n_neg = config.negative_samples
    window = config.window

    step = 0
    for _ in range(config.epochs):
        for seq in id_corpus:
            # subsample first; windows then slide over the kept tokens
            kept: list[tuple[int, float]] = []
            for tid in seq:
                lr = max(lr0 * (1.0 - step / total_steps), lr_floor)
                step += 1
                if keep[tid] < 1.0 and rng.random() >= keep[tid]:
                    continue
                kept.append((tid, lr))
            n = len(kept)
            for i, (center, lr) in enumerate(kept):
                lo = max(0, i - window)
                hi = min(n, i + window + 1)
                v = w_in[center]
                for j in range(lo, hi):
                    if j == i:
                        continue
                    context = kept[j][0]
                    draws = np.searchsorted(
                        noise_cdf, rng.random(n_neg), side="right"
                    ).clip(max=nvocab - 1)
                    # a negative that collides with the true context is dropped
                    targets = [context] + [int(d) for d in draws if d != context]
                    labels = np.zeros(len(targets))
                    labels[0] = 1.0
                    u = w_out[targets]
                    g = (labels - _sigmoid(u @ v)) * lr
                    grad_v = g @ u
                    np.add.at(w_out, targets, np.outer(g, v))
                    v = v + grad_v
                    w_in[center] = v

    if not np.isfinite(w_in).all():
        raise TrainError("training diverged: non-finite vectors")
    return {t: w_in[i].copy() for t, i in index.items()}


class EmbeddingTable:
    """Trained token vectors plus per-emoji mean vectors."""

    def __init__(
        self,
        dimension: int,
        token_vectors: dict[str, np.ndarray],
        emoji_vectors: dict[str, np.ndarray],
        lexicon_version: str = "unversioned",
        config: TrainConfig | None = None,
    ):
        self.dimension = dimension
        self.token_vectors = token_vectors
        self.emoji_vectors = emoji_vectors
        self.lexicon_version = lexicon_version
        self.config = config
        for name, vecs in (("token", token_vectors), ("emoji", emoji_vectors)):
            for key, vec in vecs.items():
                if vec.shape != (dimension,):
                    raise ValueError(f"{name} vector {key!r} has shape {vec.shape}, "
                                     f"expected ({dimension},)")
                if not np.isfinite(vec).all():
                    raise ValueError(f"{name} vector {key!r} has non-finite components")

    def __eq__(self, other: object) -> bool:
        # equality over the persisted content; config is in-memory metadata
        if not isinstance(other, EmbeddingTable):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and self.lexicon_version == other.lexicon_version
            and self.token_vectors.keys() == other.token_vectors.keys()
            and self.emoji_vectors.keys() == other.emoji_vectors.keys()
            and all(np.array_equal(v, other.token_vectors[k])
                    for k, v in self.token_vectors.items())
            and all(np.array_equal(v, other.emoji_vectors[k])
                    for k, v in self.emoji_vectors.items())
        )


def derive_emoji_vectors(
    lexicon: Lexicon,
    token_vectors: dict[str, np.ndarray],
    config: TrainConfig,
) -> EmbeddingTable:
    """Mean of in-vocabulary corpus tokens per emoji; no-coverage entries omitted."""
    if not token_vectors:
        raise ValueError("token_vectors is empty")
    emoji_vectors: dict[str, np.ndarray] = {}
    for entry in lexicon:
        vecs = [token_vectors[t] for t in entry_tokens(entry) if t in token_vectors]
        if vecs:
            emoji_vectors[entry.id] = np.mean(vecs, axis=0)
    return EmbeddingTable(
        dimension=config.dimension,
        token_vectors=token_vectors,
        emoji_vectors=emoji_vectors,
        lexicon_version=lexicon.version,
        config=config,
    )


def train_table(lexicon: Lexicon, config: TrainConfig | None = None) -> EmbeddingTable:
    """Full pipeline: corpus -> trained token vectors -> emoji vectors."""
    config = config or TrainConfig()
    token_vectors = train(build_corpus(lexicon), config)
    return derive_emoji_vectors(lexicon, token_vectors, config)


def phrase_vector(table: EmbeddingTable, text: str) -> np.ndarray | None:
    """Mean vector of a phrase's in-vocabulary tokens; None if none are known.

    Tokens are averaged in sorted order, so any reordering of the same
    token multiset produces a bit-identical vector.
    """
    toks = sorted(t for t in tokenize(text) if t in table.token_vectors)
    if not toks:
        return None
    return np.mean([table.token_vectors[t] for t in toks], axis=0)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity, clamped to [-1, 1] against rounding."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("zero-magnitude vector")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def _fmt(x: float) -> str:
    # shortest decimal form that reparses to the identical float
    return repr(float(x))


def save_table(table: EmbeddingTable, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(
            f"{EMBEDDING_MAGIC} {EMBEDDING_FORMAT_VERSION} {table.dimension} "
            f"{len(table.token_vectors)} {len(table.emoji_vectors)} "
            f"{table.lexicon_version}\n"
        )
        for token, vec in table.token_vectors.items():
            fh.write(f"t {token} " + " ".join(_fmt(c) for c in vec) + "\n")
        for emoji_id, vec in table.emoji_vectors.items():
            fh.write(f"e {emoji_id} " + " ".join(_fmt(c) for c in vec) + "\n")


def load_table(path: str | Path) -> EmbeddingTable:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        header = fh.readline()
        if not header.strip():
            raise EmbeddingFileError("missing header")
        parts = header.rstrip("\n").split(" ", 5)
        if len(parts) < 5 or parts[0] != EMBEDDING_MAGIC:
            raise EmbeddingFileError("not an embedding file (bad magic)")
        if parts[1] != EMBEDDING_FORMAT_VERSION:
            raise EmbeddingFileError(f"unsupported format version {parts[1]!r}")
        try:
            dimension = int(parts[2])
            token_count = int(parts[3])
            emoji_count = int(parts[4])
        except ValueError:
            raise EmbeddingFileError("header counts are not integers") from None
        lexicon_version = parts[5] if len(parts) == 6 else ""

        token_vectors: dict[str, np.ndarray] = {}
        emoji_vectors: dict[str, np.ndarray] = {}
        for lineno, line in enumerate(fh, start=2):
            cols = line.rstrip("\n").split(" ")
            if len(cols) < 2 or cols[0] not in ("t", "e"):
                raise EmbeddingFileError(f"line {lineno}: unrecognized row")
            if len(cols) - 2 != dimension:
                raise EmbeddingFileError(
                    f"line {lineno}: expected {dimension} components, "
                    f"found {len(cols) - 2}"
                )
            try:
                vec = np.array([float(c) for c in cols[2:]], dtype=np.float64)
            except ValueError:
                raise EmbeddingFileError(f"line {lineno}: bad component") from None
            if not np.isfinite(vec).all():
                raise EmbeddingFileError(f"line {lineno}: non-finite component")
            dest = token_vectors if cols[0] == "t" else emoji_vectors
            if cols[1] in dest:
                raise EmbeddingFileError(f"line {lineno}: duplicate key {cols[1]!r}")
            dest[cols[1]] = vec

    if len(token_vectors) != token_count or len(emoji_vectors) != emoji_count:
        raise EmbeddingFileError(
            f"truncated file: header promises {token_count} tokens / "
            f"{emoji_count} emojis, found {len(token_vectors)} / {len(emoji_vectors)}"
        )
    return EmbeddingTable(dimension, token_vectors, emoji_vectors, lexicon_version)
