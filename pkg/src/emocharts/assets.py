"""Access to the data files shipped with the package.

The default lexicon, palettes, and pre-trained embedding table live in
``emocharts/data/``. The embedding file is the committed output of
``emocharts train`` over the default lexicon (seed 42), so CLI and
service runs that rely on the defaults agree exactly.
"""
from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path


def data_path(name: str) -> Path:
    return Path(resources.files("emocharts").joinpath("data", name))


DEFAULT_LEXICON_PATH = data_path("lexicon.jsonl")
DEFAULT_PALETTES_PATH = data_path("palettes.jsonl")
DEFAULT_EMBEDDINGS_PATH = data_path("embeddings.txt")


@lru_cache(maxsize=1)
def default_lexicon():
    from .lexicon import load_lexicon

    return load_lexicon(DEFAULT_LEXICON_PATH)


@lru_cache(maxsize=1)
def default_palettes():
    from .recommend import load_palettes

    return load_palettes(DEFAULT_PALETTES_PATH, default_lexicon())


@lru_cache(maxsize=1)
def default_table():
    from .embedding import load_table

    return load_table(DEFAULT_EMBEDDINGS_PATH)
