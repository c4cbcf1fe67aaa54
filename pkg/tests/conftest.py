import pytest

from emocharts.embedding import TrainConfig, train_table
from emocharts.lexicon import EmojiEntry, Lexicon

# Two semantic clusters whose token pools are fully disjoint, so their
# tokens never share a context window during training. Every entry
# repeats its cluster anchor token ("water" / "fire") for a stable signal.
WATER_ENTRIES = [
    ("droplet", "\U0001F4A7", "Droplet", ("water", "drop", "rain"),
     "water drop rain wet splash, falling water"),
    ("ocean_wave", "\U0001F30A", "Ocean Wave", ("water", "wave", "sea"),
     "sea wave ocean water, tide swell water surf"),
    ("rain_cloud", "\U0001F327", "Rain Cloud", ("rain", "wet", "water"),
     "rain storm wet water, falling water drop shower"),
    ("river", "\U0001F3DE", "River", ("water", "stream", "flow"),
     "stream flow river water, current wet water"),
    ("flood", "\U0001F6A3", "Flood", ("flood", "water", "rising"),
     "rising water flood, overflow surge wet water"),
    ("fountain", "⛲", "Fountain", ("water", "splash", "spray"),
     "splash spray fountain water, jet water drop"),
]
FIRE_ENTRIES = [
    ("fire", "\U0001F525", "Fire", ("flame", "hot", "burn"),
     "flame hot burn blaze, fire ember fire"),
    ("candle", "\U0001F56F", "Candle", ("flame", "fire", "burn"),
     "burning flame candle fire, flicker glow fire"),
    ("volcano", "\U0001F30B", "Volcano", ("lava", "fire", "hot"),
     "lava eruption hot fire, ash blaze fire"),
    ("ember", "\U0001FAB5", "Ember", ("burn", "fire", "hot"),
     "glowing ember burn hot, smolder fire ash"),
    ("torch", "\U0001F3EE", "Torch", ("flame", "fire", "burn"),
     "flame torch burn fire, blazing light glow"),
    ("bonfire", "\U0001F9E8", "Bonfire", ("fire", "blaze", "smoke"),
     "blaze smoke fire, roaring flame hot fire"),
]


def make_two_cluster_lexicon() -> Lexicon:
    entries = [
        EmojiEntry(eid, emoji, name, kws, desc)
        for eid, emoji, name, kws, desc in WATER_ENTRIES + FIRE_ENTRIES
    ]
    return Lexicon(entries, version="toy-two-cluster")


@pytest.fixture(scope="session")
def two_cluster_lexicon():
    return make_two_cluster_lexicon()


@pytest.fixture(scope="session")
def desk_config():
    # subsampling off: on a corpus this small it starves frequent tokens
    return TrainConfig(dimension=32, epochs=20, min_token_count=2, seed=42,
                       subsample_threshold=0.0)


@pytest.fixture(scope="session")
def desk_table(two_cluster_lexicon, desk_config):
    return train_table(two_cluster_lexicon, desk_config)


@pytest.fixture(scope="session")
def water_ids():
    return [eid for eid, *_ in WATER_ENTRIES]


@pytest.fixture(scope="session")
def fire_ids():
    return [eid for eid, *_ in FIRE_ENTRIES]
