"""Freeze reference stems from nltk's PorterStemmer in ORIGINAL_ALGORITHM mode.

Usage: python3 scripts/gen_porter_oracle.py > crates/core/tests/data/porter_original.tsv
"""
import sys
from pathlib import Path

from nltk.stem.porter import PorterStemmer

root = Path(__file__).resolve().parent.parent
words = set()
for line in (root / "crates/core/data/lexicon_en.tsv").read_text().splitlines():
    if line and not line.startswith("#"):
        words.add(line.split("\t")[0])
# classic suffix cases plus inflections that stress every step
words.update("""
caresses ponies ties caress cats feed agreed plastered bled motoring sing conflated
troubled sized hopping tanned falling hissing fizzed failing filing happy sky
relational conditional rational valenci hesitanci digitizer conformabli radicalli
differentli vileli analogousli vietnamization predication operator feudalism
decisiveness hopefulness callousness formaliti sensitiviti sensibiliti triplicate
formative formalize electriciti electrical hopeful goodness revival allowance
inference airliner gyroscopic adjustable defensible irritant replacement adjustment
dependent adoption homologou communism activate angulariti homologous effective
bowdlerize probate rate cease controll roll generalizations oscillators toy syzygy
yyyy by ivy enjoy spying modeling cities spatial urbanization interdisciplinarity
scale free networks analysis analyses dynamics hierarchical
""".split())
stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
out = sys.stdout
out.write("# word\tstem (nltk PorterStemmer ORIGINAL_ALGORITHM)\n")
for w in sorted(words):
    if w.isalpha() and w.isascii():
        out.write(f"{w}\t{stemmer.stem(w)}\n")
