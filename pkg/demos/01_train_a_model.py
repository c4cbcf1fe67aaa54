"""
Training a small emoji embedding model
=======================================

Every emoji in a lexicon carries a name, keywords, and a one-line
description. Concatenating those word lists per emoji gives a tiny text
corpus, and a skip-gram model over that corpus puts related words (and
through them, related emojis) near each other.
"""

from emocharts.embedding import TrainConfig, train_table
from emocharts.lexicon import EmojiEntry, Lexicon

# Three tiny thematic groups. Repeated words like "water" and "flame"
# are what give the model something to learn from.
entries = [
    EmojiEntry("droplet", "💧", "droplet", ("water", "drip"),
               "a single drop of clean water falling"),
    EmojiEntry("wave", "🌊", "water wave", ("water", "sea"),
               "a tall ocean water wave rolling toward shore"),
    EmojiEntry("faucet", "🚰", "potable water", ("water", "tap"),
               "a tap pouring drinking water into a glass"),
    EmojiEntry("fire", "🔥", "fire", ("flame", "hot"),
               "a bright flame burning hot and fast"),
    EmojiEntry("candle", "🕯", "candle", ("flame", "wax"),
               "a small candle flame glowing in the dark"),
    EmojiEntry("pepper", "🌶", "hot pepper", ("hot", "spicy"),
               "a spicy chili pepper hot enough to burn"),
]
lexicon = Lexicon(entries=entries, version="demo-1")

# Subsampling is tuned for web-scale corpora; on a corpus this small it
# would throw away most of the signal, so we disable it.
config = TrainConfig(dimension=24, epochs=30, seed=7, subsample_threshold=0.0)
table = train_table(lexicon, config)

print(f"vocabulary: {len(table.token_vectors)} tokens")
print(f"emoji vectors: {len(table.emoji_vectors)}")

# The training run is fully deterministic: same lexicon, same config,
# same seed, same floats. Rerun this script and compare.
first_component = float(table.emoji_vectors["droplet"][0])
print(f"droplet[0] = {first_component!r}")
