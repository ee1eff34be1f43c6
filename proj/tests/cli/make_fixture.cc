/*
 * Copyright 2026 The Unintuit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Writes a raw star-rated review file and a judgment panel file for the CLI
// tests and demos: make_fixture OUT_DIR [N_DOCS] [SEED].

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "synthetic.h"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_fixture OUT_DIR [N_DOCS] [SEED]\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  unintuit::testing::SyntheticOptions options;
  options.n_docs = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 2000;
  options.seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;
  const unintuit::Corpus corpus = unintuit::testing::GenerateSynthetic(options);
  std::filesystem::create_directories(dir);

  std::ofstream reviews(dir / "reviews.jsonl");
  for (const unintuit::Document& doc : corpus.documents()) {
    const int stars = doc.label == unintuit::Sentiment::kPositive ? 5 : 1;
    reviews << nlohmann::json{{"id", doc.id}, {"stars", stars}, {"text", doc.text}}
                   .dump()
            << "\n";
  }
  // Mid ratings are discarded by the default star rule.
  reviews << R"({"id": "m1", "stars": 3, "text": "it is fine"})" << "\n";

  std::ofstream panel(dir / "judgments.csv");
  panel << "word,n_pos,n_neg,n_ns\n"
        << "great,5,0,0\n"
        << "love,4,0,1\n"
        << "terrible,0,5,0\n"
        << "broke,0,4,1\n"
        << "money,2,1,2\n"
        << "problems,0,4,1\n";
  return reviews && panel ? 0 : 1;
}
