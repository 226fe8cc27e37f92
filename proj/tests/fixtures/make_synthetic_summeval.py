#!/usr/bin/env python3
# Copyright 2026 The checkeval Authors
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

"""Writes summeval_synthetic.jsonl: 10 source articles x 16 summarizers.

Texts and scores are synthetic. Each summary's expert scores are drawn
around a per-summary quality level so the four dimensions are correlated
but not identical.
"""
import json
import random

TOPICS = [
    ("city council", "approved a new budget for public parks", "after a long debate"),
    ("local hospital", "opened a children's wing", "funded by private donors"),
    ("football club", "signed a young striker", "for a record fee"),
    ("river authority", "issued a flood warning", "after heavy rain"),
    ("tech startup", "raised fresh investment", "to expand overseas"),
    ("school board", "extended the school day", "following parent surveys"),
    ("museum", "returned an ancient statue", "to its country of origin"),
    ("airline", "cancelled dozens of flights", "because of a strike"),
    ("police force", "launched a road safety campaign", "ahead of the holidays"),
    ("research team", "published a study on sleep", "involving ten thousand adults"),
]
MODELS = [f"M{i}" for i in range(16)]
FILLERS = ["officials said", "according to a statement", "the report added", "critics noted"]


def article(subject, action, reason):
    return (f"The {subject} {action} on Monday {reason}. "
            f"Officials said the decision followed months of planning. "
            f"Residents reacted with a mix of relief and concern. "
            f"Further details are expected later this week.")


def summary(rng, subject, action, reason, quality):
    parts = [f"The {subject} {action}"]
    if quality > 0.3:
        parts.append(reason)
    text = " ".join(parts) + "."
    if quality > 0.6:
        text += " Officials said the decision followed months of planning."
    if quality < 0.4:
        text += " " + rng.choice(FILLERS) + " " + rng.choice(FILLERS) + "."
    if quality < 0.2:
        text = text.lower()
    return text


def scores(rng, quality):
    out = {}
    for dim in ("coherence", "consistency", "fluency", "relevance"):
        base = 1 + 4 * quality + rng.uniform(-0.9, 0.9)
        out[dim] = min(5, max(1, round(base)))
    return out


def main():
    rng = random.Random(20240611)
    with open("summeval_synthetic.jsonl", "w", encoding="utf-8") as f:
        for i, (subject, action, reason) in enumerate(TOPICS):
            doc_id = f"doc-{i:02d}"
            src = article(subject, action, reason)
            for m in MODELS:
                quality = rng.random()
                rec = {
                    "id": doc_id,
                    "model_id": m,
                    "text": src,
                    "decoded": summary(rng, subject, action, reason, quality) + f" [{m}]",
                    "expert_annotations": [scores(rng, quality) for _ in range(3)],
                }
                f.write(json.dumps(rec, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
