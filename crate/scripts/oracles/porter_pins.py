"""Pins Porter stems for a vocabulary using NLTK's reference-compatible mode.

Writes tab-separated `word<TAB>stem<TAB>stem of stem` lines to stdout.
"""
import re
import sys

from nltk.stem.porter import PorterStemmer

CLASSIC = """
caresses ponies ties caress cats feed agreed plastered bled motoring sing
conflated troubled sized hopping tanned falling hissing fizzed failing filing
happy sky relational conditional rational valenci hesitanci digitizer
conformabli radicalli differentli vileli analogousli vietnamization
predication operator feudalism decisiveness hopefulness callousness
formaliti sensitiviti sensibiliti triplicate formative formalize electriciti
electrical hopeful goodness revival allowance inference airliner gyroscopic
adjustable defensible irritant replacement adjustment dependent adoption
homologou communism activate angulariti homologous effective bowdlerize
probate rate cease controll roll generalizations oscillators connection
connections connected connecting studies account balance customer booking
flight airport service services payment microservice microservices
""".split()


def main(paths):
    words = set(CLASSIC)
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            words.update(w for w in re.findall(r"[a-z]+", fh.read().lower()) if len(w) > 2)
    stemmer = PorterStemmer(mode=PorterStemmer.MARTIN_EXTENSIONS)
    for w in sorted(words):
        once = stemmer.stem(w)
        print(f"{w}\t{once}\t{stemmer.stem(once)}")


if __name__ == "__main__":
    main(sys.argv[1:])
