"""Independent recomputation of the fixture corpus and similarity matrices.

Usage: fixture_pipeline.py FIXTURE_DIR
Writes FIXTURE_DIR/expected_corpus.json and FIXTURE_DIR/expected_cs.csv.
"""
import csv
import json
import math
import os
import re
import sys

from nltk.stem.porter import PorterStemmer

HERE = os.path.dirname(os.path.abspath(__file__))
STOPWORDS = os.path.join(HERE, "..", "..", "crates", "core", "src", "ingest", "stopwords.txt")


def stopwords():
    with open(STOPWORDS, encoding="utf-8") as fh:
        return {l.strip() for l in fh if l.strip() and not l.startswith("#")}


def split(word):
    out = []
    for chunk in re.findall(r"[A-Za-z]+", word):
        out += re.findall(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+", chunk)
    return [w.lower() for w in out]


def corpus(path):
    stop = stopwords()
    stemmer = PorterStemmer(mode=PorterStemmer.MARTIN_EXTENSIONS)
    docs = {}
    with open(path, newline="") as fh:
        for row in list(csv.reader(fh))[1:]:
            words = [w for cell in row[1:] for w in re.split(r"[;\s]+", cell) if w]
            doc = []
            for w in words:
                for part in split(w):
                    if len(part) > 1 and part not in stop:
                        doc.append(stemmer.stem(part))
            docs[row[0]] = doc
    vocab = sorted({t for d in docs.values() for t in d})
    return docs, vocab


def calls(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    names = rows[0][1:]
    m = [[int(x or 0) for x in r[1:]] for r in rows[1:]]
    for i in range(len(m)):
        m[i][i] = 0
    return names, m


def structural(m):
    n = len(m)
    cin = [sum(m[s][i] for s in range(n)) for i in range(n)]
    s = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            c = m[i][j] + m[j][i]
            if cin[i] and cin[j]:
                v = 0.5 * (c / cin[j] + c / cin[i])
            elif cin[j]:
                v = c / cin[j]
            elif cin[i]:
                v = c / cin[i]
            else:
                v = 0.0
            s[i][j] = min(1.0, max(0.0, v))
    return s


def semantic(names, docs, vocab):
    D = len(docs)
    idf = {t: math.log((1 + D) / (1 + sum(t in d for d in docs.values()))) + 1 for t in vocab}
    vecs = []
    for name in names:
        d = docs.get(name, [])
        raw = [d.count(t) * idf[t] for t in vocab]
        norm = math.sqrt(sum(x * x for x in raw))
        vecs.append([x / norm for x in raw] if norm else raw)
    n = len(names)
    out = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                a, b = vecs[i], vecs[j]
                na = math.sqrt(sum(x * x for x in a))
                nb = math.sqrt(sum(x * x for x in b))
                out[i][j] = sum(x * y for x, y in zip(a, b)) / (na * nb) if na and nb else 0.0
    return out


def main(fixture):
    docs, vocab = corpus(os.path.join(fixture, "tokens.csv"))
    with open(os.path.join(fixture, "expected_corpus.json"), "w") as fh:
        json.dump({"docs": docs, "vocabulary": vocab}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    names, m = calls(os.path.join(fixture, "calls.csv"))
    st = structural(m)
    se = semantic(names, docs, vocab)
    with open(os.path.join(fixture, "expected_cs.csv"), "w") as fh:
        fh.write("class," + ",".join(names) + "\n")
        for i, name in enumerate(names):
            row = [1.0 if i == j else 0.5 * st[i][j] + 0.5 * se[i][j] for j in range(len(names))]
            fh.write(name + "," + ",".join(repr(x) for x in row) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
