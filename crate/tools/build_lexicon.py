#!/usr/bin/env python3
"""Build the inflection lexicon and verb-form dictionary shipped in crates/core/data.

Input is the LemmInflect inflection lookup table (infl_lu.csv.gz plus
infl_overrides.csv, MIT licensed, derived from the AGID word list) and the
SymSpell English frequency dictionary (used to rank competing lemmas).

    python3 tools/build_lexicon.py path/to/lemminflect/resources crates/core/data

Output rows are `lemma<TAB>ptb_pos<TAB>form1,form2,...`. The lexicon is
filtered so that every form maps back to exactly one lemma per coarse POS and
lemmas are fixed points. The verb-form dictionary keeps the unfiltered VB* rows.
"""

import csv
import gzip
import os
import re
import sys
from collections import defaultdict

WORD = re.compile(r"^[a-z][a-z'-]*$")

COLUMNS = {
    "noun": ["NNS"],
    "verb": ["VBD", "VBN", "VBG", "VBZ"],
    "adj": ["JJR", "JJS"],
    "adv": ["RBR", "RBS"],
}
BASE = {"noun": ["NN"], "verb": ["VB", "VBP"], "adj": ["JJ"], "adv": ["RB"]}
COARSE_OF = {}
for c, tags in COLUMNS.items():
    for t in tags + BASE[c]:
        COARSE_OF[t] = c
ORDER = ["NN", "NNS", "VB", "VBP", "VBZ", "VBD", "VBG", "VBN",
         "JJ", "JJR", "JJS", "RB", "RBR", "RBS"]

# `be` is special-cased by LemmInflect and absent from its table.
EXTRA = {
    ("be", "verb"): {"VB": ["be"], "VBP": ["are", "am"], "VBZ": ["is"],
                     "VBD": ["was", "were"], "VBN": ["been"], "VBG": ["being"]},
}


def load_freq(path):
    freq = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if len(parts) == 2:
                freq[parts[0]] = int(parts[1])
    return freq


def load_table(res_dir):
    table = {}
    with gzip.open(os.path.join(res_dir, "infl_lu.csv.gz"), "rt", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            lemma, coarse, cols = row[0], row[1], row[2:]
            if coarse not in COLUMNS or not WORD.match(lemma):
                continue
            entry = {t: [lemma] for t in BASE[coarse]}
            prev = None
            for tag, col in zip(COLUMNS[coarse], cols):
                forms = [f for f in col.split("/") if f]
                if not forms and tag == "VBN" and prev:
                    forms = list(prev)
                forms = [f for f in forms if WORD.match(f)]
                if forms:
                    entry[tag] = forms
                prev = forms
            table[(lemma, coarse)] = entry
    with open(os.path.join(res_dir, "infl_overrides.csv"), encoding="utf-8") as fh:
        for row in csv.reader(fh):
            lemma, tag, form = row[0], row[1], row[2]
            coarse = COARSE_OF.get(tag)
            if coarse is None or (lemma, coarse) not in table or not WORD.match(form):
                continue
            forms = table[(lemma, coarse)].setdefault(tag, [])
            if form in forms:
                forms.remove(form)
            forms.insert(0, form)
    table.update(EXTRA)
    return table


def filter_ambiguous(table, freq):
    lemmas = defaultdict(set)
    for lemma, coarse in table:
        lemmas[coarse].add(lemma)
    claims = defaultdict(set)
    for (lemma, coarse), entry in table.items():
        for forms in entry.values():
            for f in forms:
                claims[(f, coarse)].add(lemma)

    def owner(form, coarse):
        if form in lemmas[coarse]:
            return form
        return min(claims[(form, coarse)], key=lambda l: (-freq.get(l, 0), l))

    out = {}
    for (lemma, coarse), entry in table.items():
        kept = {}
        for tag, forms in entry.items():
            forms = [f for f in forms if owner(f, coarse) == lemma]
            if forms:
                kept[tag] = forms
        out[(lemma, coarse)] = kept
    return out


def write(path, table, coarse_filter=None):
    rows = []
    for (lemma, coarse), entry in table.items():
        if coarse_filter and coarse != coarse_filter:
            continue
        for tag in ORDER:
            if tag in entry:
                rows.append((lemma, ORDER.index(tag), tag, entry[tag]))
    rows.sort(key=lambda r: (r[0], r[1]))
    with open(path, "w", encoding="utf-8") as fh:
        for lemma, _, tag, forms in rows:
            fh.write(f"{lemma}\t{tag}\t{','.join(forms)}\n")
    return len(rows)


def main():
    res_dir, out_dir = sys.argv[1], sys.argv[2]
    freq = load_freq(os.path.join(out_dir, "frequency_dictionary_en_82_765.txt"))
    table = load_table(res_dir)
    n_verb = write(os.path.join(out_dir, "verb_forms.tsv"), table, "verb")
    n_lex = write(os.path.join(out_dir, "lexicon.tsv"), filter_ambiguous(table, freq))
    print(f"lexicon.tsv: {n_lex} rows, verb_forms.tsv: {n_verb} rows")


if __name__ == "__main__":
    main()
