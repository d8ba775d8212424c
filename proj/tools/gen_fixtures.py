#!/usr/bin/env python3
# Copyright 2026 The faitheval Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the synthetic report fixtures under tests/fixtures.

small/     5 documents, 2 systems, every input kind the report accepts.
property/  30 documents, 3 systems; entailment scores separate faithful
           from hallucinated summaries and only weakly track factuality.

Output is a pure function of the seeds below.
"""

import argparse
import json
import os
import random

VOCAB = (
    "the council said on monday that a new plan would cut costs for local "
    "schools and hospitals after years of rising bills police officers were "
    "called to the scene where two men had been injured in a crash near the "
    "station club manager praised his players for their effort in a game "
    "that ended level minister announced funding for rail services across "
    "wales scotland england"
).split()

ANNOTATORS = ("r1", "r2", "r3")


def words_to_text(words):
    return " ".join(words)


def word_span(words, start, end):
    """Code-point interval covering words[start:end]."""
    offset = 0
    begin = stop = None
    for i, w in enumerate(words):
        if i == start:
            begin = offset
        offset += len(w)
        if i == end - 1:
            stop = offset
        offset += 1
    return begin, stop


def tsv(rows):
    return "".join("\t".join(str(c) for c in row) + "\n" for row in rows)


def write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def jsonl(records):
    return "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in records)


class Builder:
    def __init__(self, seed, n_docs, systems, n_folds):
        self.rng = random.Random(seed)
        self.docs = [f"d{i:02d}" for i in range(1, n_docs + 1)]
        self.systems = systems
        self.n_folds = n_folds
        self.documents = []
        self.summaries = {}
        self.references = {}
        self.annotations = []
        self.entail = {}
        self.metric = {}
        self.qa = []
        self.rc = []

    def text(self, n):
        return [self.rng.choice(VOCAB) for _ in range(n)]

    def add_doc(self, doc):
        body = self.text(40)
        self.documents.append({"doc_id": doc, "text": words_to_text(body)})
        self.references[doc] = body[:10]

    def add_summary(self, doc, system):
        ref = self.references[doc]
        keep = self.rng.randint(2, 7)
        words = ref[:keep] + self.text(10 - keep)
        self.summaries[(doc, system)] = words
        return words

    def hallucination(self, doc, system, words, kind):
        """kind: None (faithful), 'intrinsic', 'extrinsic' or 'both'."""
        for a in ANNOTATORS:
            spans = []
            if kind in ("intrinsic", "both"):
                spans.append(("intrinsic", 1, 3))
            if kind in ("extrinsic", "both"):
                spans.append(("extrinsic", 5, 7))
            # One annotator also marks a word nobody else does.
            if a == "r3" and kind is None and self.rng.random() < 0.5:
                spans.append(("extrinsic", 8, 9))
            if not spans:
                self.annotations.append([doc, system, a, "hallucination", "", "", "", "", ""])
            for label, s, e in spans:
                b, f = word_span(words, s, e)
                self.annotations.append([doc, system, a, "hallucination", label, b, f, "", ""])

    def verdicts(self, doc, system, votes):
        for a, v in zip(ANNOTATORS, votes):
            note = "supported by background knowledge" if v else "not supported"
            self.annotations.append(
                [doc, system, a, "factuality", "", "", "", "true" if v else "false", note])

    def linguistic(self, doc, system, words, repetition, incoherence):
        for a in ANNOTATORS:
            spans = []
            if repetition:
                spans.append(("repetition", 0, 2))
            if incoherence:
                spans.append(("incoherence", 6, 8))
            if not spans:
                self.annotations.append([doc, system, a, "linguistic", "", "", "", "", ""])
            for label, s, e in spans:
                b, f = word_span(words, s, e)
                self.annotations.append([doc, system, a, "linguistic", label, b, f, "", ""])

    def entailment(self, doc, system, p_entail):
        p_entail = round(p_entail, 6)
        p_neutral = round((1.0 - p_entail) * 0.6, 6)
        p_contradict = round(1.0 - p_entail - p_neutral, 6)
        self.entail[(doc, system)] = (p_entail, p_neutral, p_contradict)

    def questions(self, doc, system, words, n_correct):
        for q in range(2):
            answer = words[2 + q]
            self.qa.append([doc, system, q, f"what about {words[q]}?", answer])
            self.rc.append([doc, system, q, answer if q < n_correct else "unknown"])

    def folds(self):
        return {doc: i % self.n_folds for i, doc in enumerate(self.docs)}

    def write(self, out):
        os.makedirs(out, exist_ok=True)
        write(os.path.join(out, "documents.jsonl"), jsonl(self.documents))
        write(os.path.join(out, "summaries.jsonl"), jsonl(
            {"doc_id": d, "system_id": s, "text": words_to_text(w)}
            for (d, s), w in sorted(self.summaries.items())))
        write(os.path.join(out, "references.jsonl"), jsonl(
            {"doc_id": d, "text": words_to_text(w)} for d, w in sorted(self.references.items())))
        header = ["doc_id", "system_id", "annotator_id", "task", "label", "char_start",
                  "char_end", "verdict", "evidence_note"]
        write(os.path.join(out, "annotations.tsv"), tsv([header] + self.annotations))
        entail_rows = [[d, s, *p] for (d, s), p in sorted(self.entail.items())]
        entail_header = ["doc_id", "system_id", "p_entail", "p_neutral", "p_contradict"]
        write(os.path.join(out, "entailment_scores.tsv"), tsv([entail_header] + entail_rows))
        folds = self.folds()
        write(os.path.join(out, "folds.tsv"),
              tsv([["doc_id", "fold"]] + [[d, f] for d, f in sorted(folds.items())]))
        for f in range(self.n_folds):
            rows = [r for r in entail_rows if folds[r[0]] == f]
            write(os.path.join(out, f"fold_{f}_scores.tsv"), tsv([entail_header] + rows))
        if self.metric:
            write(os.path.join(out, "metric_scores.tsv"), tsv(
                [["doc_id", "system_id", "bertscore"]]
                + [[d, s, v] for (d, s), v in sorted(self.metric.items())]))
        if self.qa:
            write(os.path.join(out, "qa_pairs.tsv"),
                  tsv([["doc_id", "system_id", "q_index", "question", "answer"]] + self.qa))
            write(os.path.join(out, "rc_answers.tsv"),
                  tsv([["doc_id", "system_id", "q_index", "rc_answer"]] + self.rc))


def small(out):
    b = Builder(seed=7, n_docs=5, systems=["sysa", "sysb"], n_folds=2)
    # (hallucination kind, verdict votes, p_entail, repetition, incoherence, qa correct)
    plan = {
        ("d01", "sysa"): (None, None, 0.82, False, False, 2),
        ("d01", "sysb"): ("extrinsic", (True, True, True), 0.41, True, False, 1),
        ("d02", "sysa"): ("intrinsic", (False, False, False), 0.12, False, True, 0),
        ("d02", "sysb"): (None, None, 0.77, False, False, 2),
        ("d03", "sysa"): ("both", (True, False, True), 0.25, False, False, 1),
        ("d03", "sysb"): ("extrinsic", (False, False, False), 0.33, True, True, 0),
        ("d04", "sysa"): (None, None, 0.64, False, False, 1),
        ("d04", "sysb"): (None, None, 0.58, False, False, 2),
        ("d05", "sysa"): ("extrinsic", (True, True, True), 0.47, False, False, 1),
        ("d05", "sysb"): ("intrinsic", (False, True, False), 0.21, False, True, 0),
    }
    for doc in b.docs:
        b.add_doc(doc)
        for system in b.systems:
            kind, votes, p, rep, inc, correct = plan[(doc, system)]
            words = b.add_summary(doc, system)
            b.hallucination(doc, system, words, kind)
            if votes:
                b.verdicts(doc, system, votes)
            b.linguistic(doc, system, words, rep, inc)
            b.entailment(doc, system, p)
            b.metric[(doc, system)] = round(0.5 + 0.4 * p + 0.05 * b.rng.random(), 6)
            b.questions(doc, system, words, correct)
    b.write(out)


def prop(out):
    b = Builder(seed=11, n_docs=30, systems=["sysa", "sysb", "sysc"], n_folds=3)
    faithful_rate = {"sysa": 0.30, "sysb": 0.40, "sysc": 0.35}
    for doc in b.docs:
        b.add_doc(doc)
        for system in b.systems:
            words = b.add_summary(doc, system)
            faithful = b.rng.random() < faithful_rate[system]
            if faithful:
                b.hallucination(doc, system, words, None)
                p = 0.60 + 0.35 * b.rng.random()
            else:
                kind = b.rng.choice(["intrinsic", "extrinsic", "extrinsic", "both"])
                b.hallucination(doc, system, words, kind)
                factual = b.rng.random() < 0.4
                b.verdicts(doc, system, (factual,) * 3)
                # Factual hallucinations lean higher, with overlap.
                p = (0.20 if factual else 0.10) + 0.38 * b.rng.random()
            b.entailment(doc, system, p)
    b.write(out)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "..", "tests", "fixtures"))
    args = parser.parse_args()
    small(os.path.join(args.out, "small"))
    prop(os.path.join(args.out, "property"))


if __name__ == "__main__":
    main()
