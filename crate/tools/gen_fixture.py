#!/usr/bin/env python3
"""Generate the parallel fixture corpus used by the test suites.

Correct target sentences are built from templates; errors are then injected
to produce the source side. Inflected forms come from the shipped lexicon so
the fixture agrees with the inflector's data.

usage: gen_fixture.py LEXICON_TSV OUT_DIR [--pairs 1000] [--seed 20240607]
"""

import argparse
import csv
import random
from collections import defaultdict
from pathlib import Path

NOUNS = """
activity student teacher city house problem idea book child car friend
question country system company paper computer school letter answer
program village river market doctor garden window picture family story
""".split()

VERBS = """
play walk visit help open finish watch start talk clean cook study carry
stop plan agree arrive travel move change answer
""".split()

IRREGULAR = "go see take make write give run eat buy bring think teach".split()

ADJS = """
big small happy large old new early hot easy young strong tall
""".split()

NAMES = "london paris john mary china monday april english".split()

MISSPELLINGS = {
    "believe": "beleive", "receive": "recieve", "because": "becuase",
    "friend": "freind", "which": "wich", "definitely": "definately",
    "separate": "seperate", "tomorrow": "tommorow", "beginning": "begining",
    "until": "untill", "different": "diffrent", "government": "goverment",
    "environment": "enviroment", "necessary": "neccessary", "really": "realy",
    "people": "poeple", "their": "thier", "weird": "wierd",
    "interesting": "intresting", "beautiful": "beautifull",
    "important": "importent", "language": "langauge", "problem": "problme",
    "probably": "probly", "school": "shcool", "family": "famliy",
    "knowledge": "knowlege",
    "success": "sucess", "restaurant": "restaraunt", "address": "adress",
}

FILLER = [
    "i believe that", "we really think", "people know", "it is important that",
    "my friend said that", "the government decided that", "because of this",
    "it is definitely different because", "tomorrow my family said that",
    "the restaurant was beautiful because", "it is necessary that",
    "in the beginning", "until tomorrow", "probably the language is interesting because",
    "the environment is really important because", "their knowledge is weird because",
    "we receive a separate address because", "success is probably necessary because",
]

PREP_SWAPS = [("in", "on"), ("at", "in"), ("to", "for"), ("on", "at"), ("of", "for")]

COMPOUNDS = [("every", "one", "everyone"), ("some", "thing", "something"),
             ("any", "way", "anyway"), ("to", "day", "today")]
HYPHENATED = ["well-known", "e-mail", "long-term", "part-time", "self-esteem"]


def load_lexicon(path):
    forms = defaultdict(dict)
    with open(path, encoding="utf-8") as f:
        for row in csv.reader(f, delimiter="\t"):
            if not row or row[0].startswith("#"):
                continue
            lemma, pos, fs = row
            forms[lemma][pos] = fs.split(",")[0]
    return forms


class Builder:
    def __init__(self, lex, rng):
        self.lex = lex
        self.rng = rng

    def form(self, lemma, pos):
        return self.lex.get(lemma, {}).get(pos, lemma)

    def subject(self):
        """(tokens, is_third_singular)"""
        r = self.rng
        choice = r.randrange(4)
        if choice == 0:
            return ["the", r.choice(NOUNS)], True
        if choice == 1:
            return ["the", self.form(r.choice(NOUNS), "NNS")], False
        if choice == 2:
            return [r.choice(["i", "we", "they", "you"])], False
        return [r.choice(["he", "she"])], True

    def sentence(self):
        r = self.rng
        subj, third = self.subject()
        kind = r.randrange(6)
        verb = r.choice(VERBS + IRREGULAR)
        obj_noun = r.choice(NOUNS)
        obj = ["the", self.form(obj_noun, "NNS") if r.random() < 0.5 else obj_noun]
        adj = r.choice(ADJS)
        if kind == 0:
            vp = [self.form(verb, "VBD")] + obj
        elif kind == 1:
            vp = [self.form(verb, "VBZ" if third else "VBP")] + obj
        elif kind == 2:
            aux = "is" if third else "are"
            if subj == ["i"]:
                aux = "am"
            vp = [aux, self.form(verb, "VBG")] + obj
        elif kind == 3:
            vp = ["has" if third else "have", self.form(verb, "VBN")] + obj
        elif kind == 4:
            aux = "was" if third or subj == ["i"] else "were"
            vp = [aux, self.form(adj, r.choice(["JJR", "JJ"])), "than", "before"] \
                if r.random() < 0.5 else [aux, "the", self.form(adj, "JJS"), r.choice(NOUNS)]
        else:
            vp = ["will", verb] + obj
        tail = []
        t = r.random()
        if t < 0.3:
            tail = [r.choice(["in", "at", "to", "on"]), "the", r.choice(NOUNS)]
        elif t < 0.45:
            tail = ["on", r.choice(NAMES).capitalize()]
        elif t < 0.6:
            tail = ["with", r.choice(["every", "some"]) + r.choice(["one", "thing"])]
        elif t < 0.7:
            tail = ["by", r.choice(HYPHENATED), r.choice(["work", "mail", "plans"])]
        words = subj + vp + tail
        if r.random() < 0.5:
            words = r.choice(FILLER).split() + words
        words[0] = words[0].capitalize()
        words = [w.capitalize() if w in NAMES else w for w in words]
        words = ["I" if w == "i" else w for w in words]
        return words + ["."]


def perturb(word, rng):
    if word in MISSPELLINGS and rng.random() < 0.7:
        return MISSPELLINGS[word]
    w = list(word)
    op = rng.randrange(4)
    i = rng.randrange(1, len(w))
    if op == 0 and len(w) > 3:
        w[i - 1], w[i] = w[i], w[i - 1]
    elif op == 1 and len(w) > 4:
        del w[i]
    elif op == 2:
        w.insert(i, w[i - 1])
    else:
        w[i] = rng.choice("aeiou")
    out = "".join(w)
    return out if out != word else word + word[-1]


def inflection_error(word, lex, rng):
    """Return a wrongly inflected variant of `word`, or None."""
    for lemma, forms in candidates_for(word, lex):
        options = [f for p, f in forms.items() if f != word and p[:2] == forms_pos(forms, word)[:2]]
        if options:
            return rng.choice(sorted(options))
    return None


def forms_pos(forms, word):
    for p, f in forms.items():
        if f == word:
            return p
    return ""


_REVERSE = {}


def candidates_for(word, lex):
    if not _REVERSE:
        for lemma, forms in lex.items():
            for f in forms.values():
                _REVERSE.setdefault(f, []).append(lemma)
    return [(l, lex[l]) for l in _REVERSE.get(word, [])[:1]]


INFLECTABLE = set(NOUNS) | set(VERBS) | set(IRREGULAR) | set(ADJS)


def corrupt(target, lex, rng):
    src = list(target)
    n_errors = rng.choice([0, 1, 1, 1, 2, 2, 3])
    for _ in range(n_errors):
        for _ in range(20):
            before = list(src)
            inject(src, lex, rng)
            if src != before:
                break
    return src


def inject(src, lex, rng):
    """Apply one random error in place; may be a no-op."""
    positions = list(range(len(src) - 1))
    if not positions:
        return
    kind = rng.randrange(9)
    i = rng.choice(positions)
    w = src[i]
    if kind in (0, 1):
        cands = [j for j in positions if src[j].isalpha() and len(src[j]) > 3]
        if cands:
            j = rng.choice(cands)
            bad = perturb(src[j].lower(), rng)
            src[j] = bad.capitalize() if src[j][0].isupper() else bad
    elif kind in (2, 3):
        j = rng.choice(positions)
        if any(lemma in INFLECTABLE for lemma, _ in candidates_for(src[j], lex)):
            bad = inflection_error(src[j], lex, rng)
            if bad:
                src[j] = bad
    elif kind == 4:
        if w[0].isupper():
            src[i] = w.lower()
    elif kind == 5:
        merged = {c for _, _, c in COMPOUNDS}
        j = next((k for k, t in enumerate(src) if t in merged), None)
        if j is not None:
            a, b, _ = next(c for c in COMPOUNDS if c[2] == src[j])
            src[j:j + 1] = [a, b]
        else:
            j = next((k for k, t in enumerate(src) if t in HYPHENATED), None)
            if j is not None:
                src[j:j + 1] = src[j].split("-")
    elif kind == 6:
        if w in ("the", "a", "to", "of", "is", "are") and len(src) > 3:
            del src[i]
    elif kind == 7:
        src.insert(i, rng.choice(["the", "a", "very", "that"]))
    else:
        for a, b in PREP_SWAPS:
            if w == a:
                src[i] = b
                break


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("lexicon")
    ap.add_argument("out_dir")
    ap.add_argument("--pairs", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=20240607)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    lex = load_lexicon(args.lexicon)
    b = Builder(lex, rng)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "corpus.src", "w", encoding="utf-8") as fs, \
            open(out / "corpus.tgt", "w", encoding="utf-8") as ft:
        for _ in range(args.pairs):
            tgt = b.sentence()
            src = corrupt(tgt, lex, rng)
            fs.write(" ".join(src) + "\n")
            ft.write(" ".join(tgt) + "\n")


if __name__ == "__main__":
    main()
