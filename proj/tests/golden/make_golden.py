#!/usr/bin/env python3
"""Regenerates the golden audit outputs for the bundled fixture corpus.

Deliberately naive: the PMI table is evaluated cell by cell with nested loops
over the raw records, sharing no code with the C++ implementation.

    python3 tests/golden/make_golden.py data/fixture/mini_train.jsonl tests/golden
"""
import json
import math
import sys
from pathlib import Path

LABELS = ["entailment", "neutral", "contradiction"]


def tokenize(text):
    out = []
    cur = ""
    for ch in text.encode("utf-8"):
        c = chr(ch)
        if "A" <= c <= "Z":
            cur += c.lower()
        elif "a" <= c <= "z" or "0" <= c <= "9" or c == "'" or ch >= 0x80:
            cur += c
        else:
            if cur:
                out.append(cur)
            cur = ""
    if cur:
        out.append(cur)
    return out


def load(path):
    rows = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        if rec["gold_label"] == "-":
            continue
        rows.append((rec["sentence1"], rec["sentence2"], rec["gold_label"]))
    return rows


def fmt(v):
    if v == -math.inf:
        return "-inf"
    return "%.10f" % v


def pmi_tsv(rows, alpha):
    vocab = sorted({t for _, h, _ in rows for t in tokenize(h)},
                   key=lambda s: s.encode("utf-8"))
    count = {}
    for w in vocab:
        for k in LABELS:
            c = 0
            for _, h, lab in rows:
                if lab == k and w in tokenize(h):
                    c += 1
            count[(w, k)] = c
    z = 0.0
    for w in vocab:
        for k in LABELS:
            z += count[(w, k)] + alpha
    joint = {key: (c + alpha) / z for key, c in count.items()}
    totals = {k: sum(1 for _, _, lab in rows if lab == k) for k in LABELS}
    lines = ["word\tclass\tpmi\tcoverage"]
    for w in vocab:
        pw = sum(joint[(w, k)] for k in LABELS)
        for k in LABELS:
            pk = sum(joint[(v, k)] for v in vocab)
            p = joint[(w, k)]
            pmi = math.log(p) - math.log(pw) - math.log(pk) if p > 0 else -math.inf
            cov = count[(w, k)] / totals[k] if totals[k] else 0.0
            lines.append(f"{w}\t{k}\t{fmt(pmi)}\t{fmt(cov)}")
    return "\n".join(lines) + "\n"


def length_tsv(rows):
    lens = [(len(tokenize(h)), lab) for _, h, lab in rows]
    present = sorted({l for l, _ in lens})
    lines = ["class\tlength\tprobability"]
    for k in LABELS:
        n = sum(1 for _, lab in lens if lab == k)
        for l in present:
            c = sum(1 for ll, lab in lens if lab == k and ll == l)
            lines.append(f"{k}\t{l}\t{fmt(c / n if n else 0.0)}")
    return "\n".join(lines) + "\n"


def main():
    src, out = sys.argv[1], Path(sys.argv[2])
    rows = load(src)
    stem = Path(src).stem
    (out / f"{stem}.pmi.tsv").write_text(pmi_tsv(rows, 100.0))
    (out / f"{stem}.alpha1.pmi.tsv").write_text(pmi_tsv(rows, 1.0))
    (out / f"{stem}.length_pmf.tsv").write_text(length_tsv(rows))


if __name__ == "__main__":
    main()
