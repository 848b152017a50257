# Copyright 2026 The privhist Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Generates the bundled census-style benchmark dataset.

Writes census5k.csv, census5k.schema.json, and census5k.hierarchies.json
next to this script. The dataset is a fixed-seed synthetic stand-in for a
5,000-row stratified census income sample: five mixed-kind attributes and a
binary label whose rate is driven by marital status, education, hours, age,
and occupation through a logistic model. Regenerating is deterministic.
"""

import json
import math
import os
import random

SEED = 20260819
ROWS = 5000

MARITAL = [
    ("Married", 0.46),
    ("NeverMarried", 0.33),
    ("Divorced", 0.14),
    ("Separated", 0.03),
    ("Widowed", 0.04),
]

EDUCATION = [
    ("NoDiploma", 0.13),
    ("HSGrad", 0.32),
    ("SomeCollege", 0.22),
    ("Assoc", 0.08),
    ("Bachelors", 0.16),
    ("Masters", 0.06),
    ("Doctorate", 0.01),
    ("ProfSchool", 0.02),
]

OCCUPATION = [
    ("Exec", 0.13),
    ("Prof", 0.13),
    ("Sales", 0.11),
    ("Clerical", 0.12),
    ("Craft", 0.13),
    ("Machine", 0.10),
    ("Transport", 0.10),
    ("Service", 0.18),
]

EDU_SHIFT = {
    "NoDiploma": -0.9,
    "HSGrad": 0.0,
    "SomeCollege": 0.35,
    "Assoc": 0.45,
    "Bachelors": 0.75,
    "Masters": 1.1,
    "Doctorate": 1.4,
    "ProfSchool": 1.5,
}

WHITE_COLLAR = {"Exec", "Prof", "Sales", "Clerical"}


def weighted_choice(rng, pairs):
    u = rng.random()
    acc = 0.0
    for value, weight in pairs:
        acc += weight
        if u < acc:
            return value
    return pairs[-1][0]


def hours_draw(rng):
    u = rng.random()
    if u < 0.60:
        return 40
    if u < 0.75:
        return 20 + int(rng.random() * 20)  # 20..39
    if u < 0.95:
        return 41 + int(rng.random() * 25)  # 41..65
    if u < 0.975:
        return 1 + int(rng.random() * 19)  # 1..19
    return 66 + int(rng.random() * 34)  # 66..99


def label_score(age, edu, marital, occupation, hours):
    score = -3.05
    if marital == "Married":
        score += 2.6
    score += EDU_SHIFT[edu]
    if occupation in WHITE_COLLAR:
        score += 0.4
    if hours >= 45:
        score += 0.5
    elif hours >= 35:
        score += 0.15
    else:
        score -= 0.4
    if 35 <= age < 55:
        score += 0.45
    elif 25 <= age < 35:
        score += 0.1
    elif 55 <= age < 65:
        score += 0.2
    else:
        score -= 0.3
    return score


def generate(rows, seed):
    rng = random.Random(seed)
    records = []
    for _ in range(rows):
        marital = weighted_choice(rng, MARITAL)
        edu = weighted_choice(rng, EDUCATION)
        occupation = weighted_choice(rng, OCCUPATION)
        mode = 43.0 if marital == "Married" else 34.0
        age = int(rng.triangular(17.0, 90.0, mode))
        age = max(17, min(90, age))
        hours = hours_draw(rng)
        prob = 1.0 / (1.0 + math.exp(-label_score(age, edu, marital,
                                                  occupation, hours)))
        label = "1" if rng.random() < prob else "0"
        records.append((age, edu, marital, occupation, hours, label))
    return records


SCHEMA = {
    "label": {"column": "income", "positive": "1", "negative": "0"},
    "columns": [
        {"name": "age", "kind": "numeric"},
        {"name": "education", "kind": "categorical"},
        {"name": "marital", "kind": "categorical"},
        {"name": "occupation", "kind": "categorical"},
        {"name": "hours", "kind": "numeric"},
    ],
}


def numeric_hierarchy(attribute, lo, hi, mid_edges, leaf_edges):
    def node(edges, i):
        return {"label": "[%g,%g)" % (edges[i], edges[i + 1]),
                "range": [edges[i], edges[i + 1]]}

    mid = [lo] + mid_edges + [hi]
    leaf = [lo] + leaf_edges + [hi]
    children = []
    for i in range(len(mid) - 1):
        child = node(mid, i)
        grandchildren = [node(leaf, j) for j in range(len(leaf) - 1)
                         if mid[i] <= leaf[j] < mid[i + 1]]
        child["children"] = grandchildren
        children.append(child)
    return {
        "attribute": attribute,
        "root": {"label": "[%g,%g)" % (lo, hi), "range": [lo, hi],
                 "children": children},
    }


def categorical_hierarchy(attribute, groups):
    children = []
    all_values = []
    for group_label, values in groups:
        children.append({
            "label": group_label,
            "values": values,
            "children": [{"label": v, "values": [v]} for v in values],
        })
        all_values.extend(values)
    return {
        "attribute": attribute,
        "root": {"label": "any", "values": all_values, "children": children},
    }


HIERARCHIES = [
    numeric_hierarchy("age", 17, 90, [35, 55], [25, 35, 45, 55, 65]),
    categorical_hierarchy("education", [
        ("Basic", ["NoDiploma", "HSGrad"]),
        ("College", ["SomeCollege", "Assoc", "Bachelors"]),
        ("Advanced", ["Masters", "Doctorate", "ProfSchool"]),
    ]),
    categorical_hierarchy("marital", [
        ("Partnered", ["Married"]),
        ("Alone", ["NeverMarried", "Divorced", "Separated", "Widowed"]),
    ]),
    categorical_hierarchy("occupation", [
        ("WhiteCollar", ["Exec", "Prof", "Sales", "Clerical"]),
        ("BlueCollar", ["Craft", "Machine", "Transport", "Service"]),
    ]),
    numeric_hierarchy("hours", 1, 99, [35, 45], [20, 35, 40, 45, 60]),
]


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    records = generate(ROWS, SEED)

    csv_path = os.path.join(here, "census5k.csv")
    with open(csv_path, "w") as out:
        out.write("age,education,marital,occupation,hours,income\n")
        for age, edu, marital, occupation, hours, label in records:
            out.write("%d,%s,%s,%s,%d,%s\n"
                      % (age, edu, marital, occupation, hours, label))

    with open(os.path.join(here, "census5k.schema.json"), "w") as out:
        json.dump(SCHEMA, out, indent=2)
        out.write("\n")

    with open(os.path.join(here, "census5k.hierarchies.json"), "w") as out:
        json.dump(HIERARCHIES, out, indent=2)
        out.write("\n")

    positives = sum(1 for r in records if r[5] == "1")
    print("wrote %d rows (%.1f%% positive) to %s"
          % (len(records), 100.0 * positives / len(records), csv_path))


if __name__ == "__main__":
    main()
