"""Regenerate crates/core/data/lexicon_en.tsv.

Takes the most frequent English words (wordfreq) and assigns a coarse tag
from the open-class lemma tables shipped with lemminflect. Stop words are
always OTHER. Requires: pip install wordfreq lemminflect
"""
import pathlib
import re

import lemminflect
from wordfreq import top_n_list

DATA = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "data"
TARGET = 5000
ADJ_SUFFIXES = ("al", "ous", "ive", "ic", "ar", "ful", "less", "able", "ible", "ant", "ent", "ary")

stop = set(DATA.joinpath("stopwords_en.txt").read_text().split())


def tag(word):
    if word in stop:
        return "OTHER"
    lemmas = lemminflect.getAllLemmas(word)
    if not lemmas:
        return "OTHER"
    noun, verb, adj = "NOUN" in lemmas, "VERB" in lemmas, "ADJ" in lemmas
    if word.endswith("ing"):
        if noun and not verb:
            return "NOUN"
        if verb:
            return "GER"
    if word.endswith("ed") and verb:
        return "OTHER"
    if adj and (not noun or word.endswith(ADJ_SUFFIXES)):
        return "ADJ"
    if noun:
        return "NOUN"
    return "OTHER"


rows = []
for w in top_n_list("en", 20000):
    if not re.fullmatch(r"[a-z]{2,}", w):
        continue
    rows.append((w, tag(w)))
    if len(rows) == TARGET:
        break

rows.sort()
with DATA.joinpath("lexicon_en.tsv").open("w") as out:
    for w, t in rows:
        out.write(f"{w}\t{t}\n")
