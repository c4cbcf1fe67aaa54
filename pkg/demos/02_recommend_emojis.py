"""
Recommending emojis for field names
====================================

The packaged model was trained on the builtin lexicon. Given any phrase,
it averages the word vectors it knows, then ranks every emoji by cosine
similarity. Phrases the model has never seen fall back to a placeholder.
"""

from emocharts.assets import default_lexicon, default_table
from emocharts.recommend import recommend, recommend_or_placeholder

lexicon = default_lexicon()
table = default_table()

# A few dataset-ish column headers, from the mundane to the oddly specific.
phrases = [
    "number of remote workers",
    "rain and storms",
    "hospital admissions",
    "money spent on coffee",
]

for phrase in phrases:
    print(f"\n{phrase}")
    ranked = recommend(table, lexicon, phrase, k=5)
    if not ranked:
        print("  (no tokens in vocabulary)")
    for r in ranked:
        glyph = lexicon.get(r.emoji_id).emoji
        print(f"  {r.rank}. {glyph}  {r.emoji_id}  {r.score:.3f}")

# Gibberish gets the neutral placeholder instead of a wild guess.
choice = recommend_or_placeholder(table, lexicon, "zzxqv blorp")
print(f"\n'zzxqv blorp' -> {lexicon.get(choice).emoji} ({choice})")
