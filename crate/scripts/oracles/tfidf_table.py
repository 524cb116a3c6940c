"""TF-IDF weights for two documents {a, a, b} and {b}, computed by hand.

idf(t) = ln((1 + D) / (1 + df(t))) + 1, tf = raw count, rows L2-normalised.
"""
import math

docs = [["a", "a", "b"], ["b"]]
vocab = sorted({t for d in docs for t in d})
D = len(docs)
idf = {t: math.log((1 + D) / (1 + sum(t in d for d in docs))) + 1 for t in vocab}
for i, d in enumerate(docs):
    raw = [d.count(t) * idf[t] for t in vocab]
    norm = math.sqrt(sum(x * x for x in raw))
    print(i, [repr(x / norm) for x in raw])
