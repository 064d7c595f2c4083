"""Regenerate the bundled dictionary and frequency table.

Takes the 4,082 most frequent lowercase five-letter entries of the Webster's
2nd edition word list (proper nouns excluded) ranked by `wordfreq` English
frequencies, and writes:

    crates/cli/data/dictionary.txt      one word per line
    crates/cli/data/frequencies.csv     word,freq_per_million

Requires: pip install wordfreq english-words
"""

import pathlib

import wordfreq
from english_words import get_english_words_set

SIZE = 4082
OUT = pathlib.Path(__file__).resolve().parent.parent / "crates" / "cli" / "data"


def main() -> None:
    web2 = {w for w in get_english_words_set(["web2"], lower=False) if w.islower()}
    ranked = [
        w
        for w in wordfreq.top_n_list("en", 1_000_000)
        if len(w) == 5 and w.isascii() and w.isalpha() and w.islower() and w in web2
    ]
    words = ranked[:SIZE]
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "dictionary.txt").write_text("".join(w + "\n" for w in words))
    with open(OUT / "frequencies.csv", "w") as f:
        f.write("word,freq_per_million\n")
        for w in words:
            f.write(f"{w},{wordfreq.word_frequency(w, 'en') * 1e6:.4f}\n")


if __name__ == "__main__":
    main()
