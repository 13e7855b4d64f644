#!/usr/bin/env python3
# Copyright (c) 2026 The fidel-eval Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent reference computation for the golden fixture values.

Plain Python, no shared code with the C++ library: memoized recursive
Levenshtein, Counter-based clipped n-gram counts. The numbers it prints are
frozen into tests/golden_test.cpp and the acceptance suite.

  python3 oracle.py golden_5.jsonl
"""

import json
import math
import sys
from collections import Counter
from fractions import Fraction
from functools import lru_cache

FAMILIES = [(0x1200, [0x1210, 0x1280]), (0x12A0, [0x12D0]), (0x1230, [0x1220]),
            (0x1338, [0x1340])]


def normalize(text):
    out = []
    for ch in text:
        cp = ord(ch)
        for canon, members in FAMILIES:
            for m in members:
                if m <= cp < m + 8:
                    target = canon + (cp - m)
                    if cp != 0x12D7 and target != 0x12D7:
                        cp = target
        out.append(chr(cp))
    return "".join(out)


def lev(a, b):
    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1,
                   d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))
    return d(len(a), len(b))


def ngrams(words, n):
    return Counter(tuple(words[i:i + n]) for i in range(len(words) - n + 1))


def counts(ref, hyp):
    m, c = [], []
    for n in range(1, 5):
        h, r = ngrams(hyp, n), ngrams(ref, n)
        m.append(sum(min(v, r[g]) for g, v in h.items()))
        c.append(sum(h.values()))
    return m, c


def bp(h, r):
    if h == 0:
        return 0.0
    return 1.0 if h >= r else math.exp(1 - r / h)


def sentence_bleu(ref, hyp):
    m, c = counts(ref, hyp)
    logs = []
    for n in range(4):
        if c[n] == 0:
            continue
        if m[n] == 0:
            if n == 0:
                return 0.0
            logs.append(math.log(1 / (c[n] + 1)))
        else:
            logs.append(math.log(m[n] / c[n]))
    if not logs:
        return 0.0
    return 100 * bp(len(hyp), len(ref)) * math.exp(sum(logs) / len(logs))


def score(pairs):
    we = wn = ce = cn = 0
    M, C = [0] * 4, [0] * 4
    hl = rl = 0
    sb = []
    for ref, hyp in pairs:
        rw, hw = ref.split(), hyp.split()
        rc, hc = " ".join(rw), " ".join(hw)
        we += lev(tuple(rw), tuple(hw)); wn += len(rw)
        ce += lev(rc, hc); cn += len(rc)
        m, c = counts(rw, hw)
        M = [x + y for x, y in zip(M, m)]; C = [x + y for x, y in zip(C, c)]
        hl += len(hw); rl += len(rw)
        sb.append(sentence_bleu(rw, hw))
    if all(x > 0 for x in M):
        prod = Fraction(1)
        for x, y in zip(M, C):
            prod *= Fraction(x, y)
        cb = 100 * bp(hl, rl) * float(prod) ** 0.25
    else:
        prod, cb = Fraction(0), 0.0
    return {
        "word_edits": we, "ref_words": wn, "wer": 100 * we / wn,
        "char_edits": ce, "ref_chars": cn, "cer": 100 * ce / cn,
        "matches": M, "candidates": C, "precision_product": str(prod),
        "hyp_len": hl, "ref_len": rl, "corpus_bleu": cb,
        "avg_bleu": sum(sb) / len(sb), "sentence_bleu": sb,
    }


def main(path):
    pairs = [(r["ref"], r["hyp"]) for r in map(json.loads, open(path, encoding="utf-8"))]
    print("raw       ", json.dumps(score(pairs), ensure_ascii=False))
    norm = [(normalize(r), normalize(h)) for r, h in pairs]
    print("normalized", json.dumps(score(norm), ensure_ascii=False))


if __name__ == "__main__":
    main(sys.argv[1])
