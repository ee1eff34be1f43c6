# Copyright 2026 The Unintuit Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import random

import pytest

import unintuit

FILLER = ("box lid handle kitchen counter drawer shelf bottle cup pan pot "
          "kettle toaster cord switch button lamp filter pump hose week "
          "month daily gift brand order delivery").split()
POSITIVE = "great excellent love perfect sturdy reliable".split()
NEGATIVE = "terrible awful broke useless flimsy defective".split()


def review(rng, positive):
    body = [rng.choice(FILLER) for _ in range(rng.randint(6, 12))]
    body += [rng.choice(POSITIVE if positive else NEGATIVE) for _ in range(3)]
    roll = rng.random()
    if positive and roll < 0.12:
        body[rng.randrange(len(body)):0] = ["no", "more", "problems", rng.choice(FILLER)]
    elif positive and roll < 0.16:
        body[rng.randrange(len(body)):0] = ["worth", "the", "money", rng.choice(FILLER)]
    elif not positive and roll < 0.04:
        body = ["problems", "with", rng.choice(FILLER)] + body
    elif not positive and roll < 0.12:
        body = ["waste", "of", "money", rng.choice(FILLER)] + body
    rng.shuffle(body[-3:])
    return " ".join(body)


@pytest.fixture(scope="session")
def corpus():
    rng = random.Random(5)
    records = []
    for i in range(1600):
        positive = i % 2 == 0
        records.append((f"r{i}", "pos" if positive else "neg", review(rng, positive)))
    return unintuit.Corpus.from_records("Home and Kitchen", records)


@pytest.fixture(scope="session")
def model(corpus):
    return unintuit.train(corpus)


@pytest.fixture(scope="session")
def scorer():
    return unintuit.Scorer()
