#!/usr/bin/env python3
"""Regenerates data/mini_epochs: a small parallel corpus with one source,
one reference and six progressively better machine translations.

Deterministic: fixed seeds, stdlib only. Run from the repository root:

    python3 scripts/make_mini_epochs.py
"""

import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "mini_epochs"

SUBJECTS = [
    ("le conseil", "the council"),
    ("la commission", "the commission"),
    ("le parlement", "the parliament"),
    ("l'union", "the union"),
    ("l'assemblée", "the assembly"),
]
VERBS = [
    ("adopte", "adopts"),
    ("examine", "examines"),
    ("soutient", "supports"),
    ("rejette", "rejects"),
    ("prépare", "prepares"),
]
OBJECTS = [
    ("la proposition", "the proposal"),
    ("le rapport", "the report"),
    ("la décision", "the decision"),
    ("l'amendement", "the amendment"),
    ("le budget", "the budget"),
    ("la résolution", "the resolution"),
    ("l'accord", "the agreement"),
    ("le programme", "the programme"),
]
TAILS = [
    ("aujourd'hui", "today"),
    ("à l'unanimité", "unanimously"),
    ("sans débat", "without debate"),
    ("", ""),
]

SENTENCES = 50

# (unk rate, wrong-word rate) per epoch; epoch 6 is a byte copy of epoch 5,
# and epoch 5 drifts slightly worse than epoch 4 so the unk optimum falls
# before the end of training.
RATES = {1: (0.40, 0.15), 2: (0.22, 0.10), 3: (0.10, 0.06), 4: (0.03, 0.03),
         5: (0.06, 0.04)}

KEEP = {"the", "."}


def make_pairs():
    rng = random.Random(7)
    pairs = []
    for _ in range(SENTENCES):
        subj = rng.choice(SUBJECTS)
        verb = rng.choice(VERBS)
        obj = rng.choice(OBJECTS)
        tail = rng.choice(TAILS)
        quoted = rng.random() < 0.12
        fr_obj = "« %s »" % obj[0] if quoted else obj[0]
        fr = " ".join(x for x in (subj[0], verb[0], fr_obj, tail[0], ".") if x)
        en = " ".join(x for x in (subj[1], verb[1], obj[1], tail[1], ".") if x)
        pairs.append((fr, en))
    return pairs


def translate(pairs, epoch):
    unk_rate, err_rate = RATES[epoch]
    rng = random.Random(100 + epoch)
    content = sorted({w for _, en in pairs for w in en.split() if w not in KEEP})
    lines = []
    for _, en in pairs:
        out = []
        for word in en.split():
            if word in KEEP:
                out.append(word)
                continue
            roll = rng.random()
            if roll < unk_rate:
                out.append("<unk>")
            elif roll < unk_rate + err_rate:
                wrong = rng.choice(content)
                while wrong == word:
                    wrong = rng.choice(content)
                out.append(wrong)
            else:
                out.append(word)
        lines.append(" ".join(out))
    return lines


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    pairs = make_pairs()

    docs = {"source": [fr for fr, _ in pairs], "target": [en for _, en in pairs]}
    for epoch in range(1, 6):
        docs["%02d" % epoch] = translate(pairs, epoch)
    docs["06"] = list(docs["05"])

    zero = {name: sum(1 for line in lines if "<unk>" not in line.split())
            for name, lines in docs.items() if name[0] == "0"}
    peak = max(zero, key=lambda n: (zero[n], n < "05"))
    assert peak == "04", zero
    assert all(zero["04"] > zero[n] for n in zero if n != "04"), zero
    assert docs["05"] == docs["06"]

    names = [("Source", "source"), ("Target", "target")] + [
        ("%02d" % e, "%02d" % e) for e in range(1, 7)]
    manifest = []
    for rank, (part, stem) in enumerate(names, start=1):
        path = OUT / ("%s.txt" % stem)
        path.write_text("\n".join(docs[stem]) + "\n", encoding="utf-8")
        manifest.append("%d\t%s\t%s.txt\taligned:yes" % (rank, part, stem))
    (OUT / "manifest.tsv").write_text("\n".join(manifest) + "\n", encoding="utf-8")

    print("wrote %s (unk-free sentences per epoch: %s)" % (OUT, zero))


if __name__ == "__main__":
    main()
