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

// unintuit: command-line front end.
//
// Every subcommand accepts the shared options below, from flags or from an
// INI-style config file given with --config (flags win). See
// docs/report_schema.md for the config keys and output formats.

#include <pthread.h>
#include <signal.h>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "unintuit/classifier.h"
#include "unintuit/common.h"
#include "unintuit/corpus.h"
#include "unintuit/detector.h"
#include "unintuit/explain.h"
#include "unintuit/intuition.h"
#include "unintuit/miner.h"
#include "unintuit/pipeline.h"
#include "unintuit/report.h"
#include "unintuit/server.h"

namespace unintuit {
namespace {

using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitBackend = 3;

struct Options {
  std::string corpus;
  std::string model;
  std::string lexicon;
  std::string cache;
  PipelineConfig config;

  // ingest
  std::string input;
  std::string output;
  std::string format;
  std::string stars = "1:neg,5:pos";
  // ablate / mine / explain / report
  std::vector<std::string> words;
  std::string sentiment;
  std::string report_out;
  std::string model_out;
  // correlate
  std::string judgments;
  int panel_size = kDefaultPanelSize;
  // serve
  std::string report;
  std::string addr = "127.0.0.1:8080";
};

void Print(const json& value) { std::cout << CanonicalJson(value); }

const std::string& RequirePath(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string(flag) + " is required");
  return value;
}

const std::string& SingleWord(const Options& o) {
  if (o.words.size() != 1) throw UsageError("exactly one --word is required");
  return o.words.front();
}

Corpus LoadCorpus(const Options& o) {
  const std::filesystem::path path = RequirePath(o.corpus, "--corpus");
  return Ingest(path, FormatFromPath(path), StarMapping::Parse(o.stars),
                o.config.category);
}

std::string Category(const Options& o) {
  if (o.config.category.empty()) {
    throw UsageError("--category is required to build intuition prompts");
  }
  return o.config.category;
}

// The saved model when --model names an existing file, else a fresh fit.
TrainedClassifier LoadOrTrain(const Options& o, const Corpus& corpus) {
  if (!o.model.empty() && std::filesystem::exists(o.model)) {
    return TrainedClassifier::Load(o.model);
  }
  return TrainFromConfig(corpus, o.config);
}

class Scorer {
 public:
  explicit Scorer(const Options& o) : path_(o.cache) {
    auto cache = std::make_shared<ScoreCache>();
    if (!path_.empty()) cache->Load(path_);
    std::optional<std::filesystem::path> lexicon;
    if (!o.lexicon.empty()) lexicon = o.lexicon;
    scorer_ = std::make_shared<IntuitionScorer>(MakeScorer(lexicon), cache);
  }
  ~Scorer() {
    if (path_.empty()) return;
    try {
      scorer_->cache().Save(path_);
    } catch (const std::exception& e) {
      std::cerr << "warning: " << e.what() << "\n";
    }
  }

  const IntuitionScorer& operator*() const { return *scorer_; }
  std::shared_ptr<const IntuitionScorer> shared() const { return scorer_; }

 private:
  std::string path_;
  std::shared_ptr<IntuitionScorer> scorer_;
};

json MetricsJson(const EvalMetrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
          {"accuracy", m.accuracy},   {"n_test", m.n_test}};
}

json FeatureJson(const FeatureScore& f) {
  return {{"word", f.word},
          {"coefficient", f.coefficient},
          {"rank", f.rank},
          {"model_sentiment", SentimentName(f.model_sentiment)}};
}

void RunIngest(const Options& o) {
  const std::filesystem::path input = RequirePath(o.input, "--input");
  CorpusFormat format = FormatFromPath(input);
  if (o.format == "csv") format = CorpusFormat::kCsv;
  if (o.format == "jsonl") format = CorpusFormat::kJsonLines;
  const Corpus corpus =
      Ingest(input, format, StarMapping::Parse(o.stars), o.config.category);
  WriteCorpus(corpus, RequirePath(o.output, "--output"));
  Print({{"n_documents", corpus.size()},
         {"n_positive", corpus.CountLabel(Sentiment::kPositive)},
         {"n_negative", corpus.CountLabel(Sentiment::kNegative)},
         {"output", o.output}});
}

void RunTrain(const Options& o) {
  const Corpus corpus = LoadCorpus(o);
  const TrainedClassifier model = TrainFromConfig(corpus, o.config);
  model.Save(RequirePath(o.model, "--model"));
  Print({{"model", o.model},
         {"vocabulary_size", model.vectorizer().size()},
         {"metrics", MetricsJson(model.metrics())}});
}

void RunFeatures(const Options& o) {
  const Corpus corpus = LoadCorpus(o);
  const TrainedClassifier model = LoadOrTrain(o, corpus);
  const TopFeatures top = RankFeatures(
      model, std::min(o.config.top_k, model.vectorizer().size() / 2));
  json out = {{"positive", json::array()}, {"negative", json::array()}};
  for (const auto& f : top.positive) out["positive"].push_back(FeatureJson(f));
  for (const auto& f : top.negative) out["negative"].push_back(FeatureJson(f));
  Print(out);
}

void RunDiagnose(const Options& o) {
  const Corpus corpus = LoadCorpus(o);
  const TrainedClassifier model = LoadOrTrain(o, corpus);
  const Scorer scorer(o);
  json out = json::array();
  for (const auto& d : DiagnoseTopFeatures(model, *scorer, Category(o),
                                           o.config.top_k,
                                           o.config.thresholds)) {
    out.push_back(ToJson(d));
  }
  Print(out);
}

void RunAblate(const Options& o) {
  const Corpus corpus = LoadCorpus(o);
  const TrainedClassifier model = LoadOrTrain(o, corpus);
  const AblationResult r = Ablate(model, corpus, SingleWord(o));
  Print({{"word", r.word},
         {"significant", r.significant},
         {"p_value", r.test.p_value},
         {"statistic", r.test.statistic},
         {"method", r.test.method},
         {"only_full_correct", r.test.only_first_correct},
         {"only_ablated_correct", r.test.only_second_correct},
         {"full_metrics", MetricsJson(r.full_metrics)},
         {"ablated_metrics", MetricsJson(r.ablated_metrics)}});
}

void RunMine(const Options& o) {
  const Corpus corpus = LoadCorpus(o);
  if (o.sentiment.empty()) throw UsageError("--sentiment is required");
  const Sentiment sentiment = ParseSentiment(o.sentiment);
  const std::string& word = SingleWord(o);
  const Scorer scorer(o);
  const MineConfig& mine = o.config.explain.mine;
  const auto candidates = Mine(corpus, word, sentiment, *scorer, mine);
  const auto embedder = MakeEmbedder(corpus);
  const PatternSet set =
      SelectDiverse(candidates, *embedder, mine.lambda, mine.max_patterns);
  json selected = json::array();
  for (const CandidatePattern& p : set.selected) {
    selected.push_back({{"phrase", p.Text()},
                        {"anchor", p.anchor},
                        {"p_score", p.p_score},
                        {"support", p.support},
                        {"source_doc_ids", p.source_doc_ids}});
  }
  Print({{"word", word},
         {"sentiment", SentimentName(sentiment)},
         {"n_candidates", candidates.size()},
         {"lambda", set.lambda},
         {"selected", selected}});
}

void RunExplain(const Options& o) {
  const Corpus corpus = LoadCorpus(o);
  const TrainedClassifier model = LoadOrTrain(o, corpus);
  const Scorer scorer(o);
  ExplainConfig config = o.config.explain;
  config.thresholds = o.config.thresholds;
  Print(ToJson(BuildBundle(corpus, model, *scorer, *MakeEmbedder(corpus),
                           SingleWord(o), config)));
}

void RunReport(const Options& o) {
  const Corpus corpus = LoadCorpus(o);
  const Scorer scorer(o);
  PipelineConfig config = o.config;
  config.category = Category(o);
  config.words = o.words;
  const PipelineResult result =
      RunPipeline(corpus, config, *scorer, *MakeEmbedder(corpus));
  WriteReport(result.report, RequirePath(o.report_out, "--out"));
  if (!o.model_out.empty()) result.model.Save(o.model_out);
  std::size_t paradoxes = 0;
  for (const auto& d : result.report.diagnoses) {
    paradoxes += d.category == FeatureCategory::kParadoxPositive ||
                 d.category == FeatureCategory::kParadoxNegative;
  }
  Print({{"report", o.report_out},
         {"diagnoses", result.report.diagnoses.size()},
         {"paradoxes", paradoxes},
         {"bundles", result.report.bundles.size()},
         {"metrics", MetricsJson(result.report.metrics)}});
}

void RunCorrelate(const Options& o) {
  const auto records = LoadJudgments(RequirePath(o.judgments, "--judgments"));
  const Scorer scorer(o);
  const std::string category = Category(o);
  std::vector<std::pair<double, double>> pairs;
  json rows = json::array();
  for (const JudgmentRecord& r : records) {
    const double human = AggregateJudgments(r, o.panel_size);
    const double model = (*scorer).ScoreWord(category, r.word).p_pos;
    pairs.emplace_back(human, model);
    rows.push_back({{"word", r.word}, {"p_human", human}, {"p_model", model}});
  }
  const Correlation c = Correlate(pairs);
  Print({{"rho", c.rho}, {"p_value", c.p_value}, {"n", c.n}, {"pairs", rows}});
}

void RunServe(const Options& o) {
  // Block the shutdown signals before any worker thread exists so that only
  // the sigwait below receives them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  PipelineReport report = ReadReport(RequirePath(o.report, "--report"));
  const std::filesystem::path corpus_path = RequirePath(o.corpus, "--corpus");
  Corpus corpus = Ingest(corpus_path, FormatFromPath(corpus_path),
                         StarMapping::Parse(o.stars), report.category);
  TrainedClassifier model =
      o.model.empty() ? TrainFromConfig(corpus, report.config)
                      : TrainedClassifier::Load(o.model);
  const Scorer scorer(o);
  auto embedder = MakeEmbedder(corpus);
  ReportService service(std::move(report), std::move(corpus), std::move(model),
                        scorer.shared(), std::move(embedder));
  ApiServer server(service);
  const auto [host, port] = ParseBindAddress(o.addr);
  const int bound = server.Bind(host, port);
  std::cout << "listening on http://" << host << ":" << bound << std::endl;
  std::thread listener([&server] { server.Listen(); });
  int received = 0;
  sigwait(&signals, &received);
  server.Stop();
  listener.join();
  std::cout << "stopped" << std::endl;
}

void AddSharedOptions(CLI::App& app, Options& o) {
  PipelineConfig& c = o.config;
  MineConfig& m = c.explain.mine;
  app.add_option("--corpus", o.corpus, "Reviews (JSON lines or CSV)");
  app.add_option("--model", o.model, "Model file (written by train)");
  app.add_option("--category", c.category, "Product category for prompts");
  app.add_option("--stars", o.stars, "Star-to-label rule, e.g. 1:neg,5:pos");
  app.add_option("--lexicon", o.lexicon, "Mock scorer lexicon (token<TAB>weight)");
  app.add_option("--cache", o.cache, "Score cache file (JSON lines)");
  app.add_option("--min-df", c.min_df, "Minimum document frequency");
  app.add_option("--stopwords", c.stopwords, "builtin, none or a file path");
  app.add_option("--seed", c.train.seed, "Train/test split seed");
  app.add_option("--l2", c.train.l2, "L2 penalty");
  app.add_option("--learning-rate", c.train.learning_rate, "Gradient step");
  app.add_option("--max-iterations", c.train.max_iterations, "Iteration cap");
  app.add_option("--tolerance", c.train.tolerance, "Gradient tolerance");
  app.add_option("--test-fraction", c.train.test_fraction, "Held-out share");
  app.add_option("--top", c.top_k, "Features per side");
  app.add_option("--low", c.thresholds.low, "Lower intuition threshold");
  app.add_option("--high", c.thresholds.high, "Upper intuition threshold");
  app.add_option("--examples", c.explain.examples_per_side,
                 "Example reviews per side");
  app.add_option("--explain-seed", c.explain.seed, "Example sampling seed");
  app.add_option("--max-left", m.max_left, "Left context limit");
  app.add_option("--max-right", m.max_right, "Right context limit");
  app.add_option("--pattern-threshold", m.threshold, "Pattern score threshold");
  app.add_flag("--bare-anchor", m.include_bare_anchor,
               "Let the anchor alone be a pattern");
  app.add_option("--lambda", m.lambda, "Support vs. diversity weight");
  app.add_option("--max-patterns", m.max_patterns, "Patterns per side");
  app.add_option("--doc-cap", m.doc_cap, "Reviews scanned per side");
  app.add_option("--mine-seed", m.seed, "Review sampling seed");
  app.add_option("--threads", m.threads, "Mining threads");
}

int Main(int argc, char** argv) {
  Options o;
  CLI::App app{"Find and explain unintuitive features of sentiment models"};
  app.set_config("--config", "", "INI file with option values", false);
  app.fallthrough();
  app.require_subcommand(1);
  AddSharedOptions(app, o);

  auto* ingest = app.add_subcommand("ingest", "Normalize a review file");
  ingest->add_option("--input", o.input, "Raw reviews")->required();
  ingest->add_option("--output", o.output, "Normalized corpus")->required();
  ingest->add_option("--format", o.format, "jsonl or csv (default: by suffix)")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  ingest->callback([&] { RunIngest(o); });

  app.add_subcommand("train", "Fit and save the classifier")
      ->callback([&] { RunTrain(o); });
  app.add_subcommand("features", "Top-k features per side")
      ->callback([&] { RunFeatures(o); });
  app.add_subcommand("diagnose", "Categorize top features against intuition")
      ->callback([&] { RunDiagnose(o); });

  auto* ablate = app.add_subcommand("ablate", "Retrain without a word");
  ablate->add_option("--word", o.words, "Feature word")->required();
  ablate->callback([&] { RunAblate(o); });

  auto* mine = app.add_subcommand("mine", "Context patterns for a word");
  mine->add_option("--word", o.words, "Anchor word")->required();
  mine->add_option("--sentiment", o.sentiment, "pos or neg")->required();
  mine->callback([&] { RunMine(o); });

  auto* explain = app.add_subcommand("explain", "Explanation bundle for a word");
  explain->add_option("--word", o.words, "Feature word")->required();
  explain->callback([&] { RunExplain(o); });

  auto* report = app.add_subcommand("report", "Run the whole pipeline");
  report->add_option("--out", o.report_out, "Report file")->required();
  report->add_option("--word", o.words, "Bundle words (default: automatic)");
  report->add_flag("--ablate", o.config.ablate, "Screen non-intuitive words");
  report->add_option("--auto-bundles", o.config.auto_bundles,
                     "Automatic bundle count");
  report->add_option("--model-out", o.model_out, "Also save the model");
  report->callback([&] { RunReport(o); });

  auto* correlate = app.add_subcommand("correlate", "Human vs. model intuition");
  correlate->add_option("--judgments", o.judgments, "word,n_pos,n_neg,n_ns CSV")
      ->required();
  correlate->add_option("--panel-size", o.panel_size, "Raters per word");
  correlate->callback([&] { RunCorrelate(o); });

  auto* serve = app.add_subcommand("serve", "Serve a report over HTTP");
  serve->add_option("--report", o.report, "Report file")->required();
  serve->add_option("--addr", o.addr, "HOST:PORT (port 0 picks one)");
  serve->callback([&] { RunServe(o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  return 0;
}

}  // namespace
}  // namespace unintuit

int main(int argc, char** argv) {
  try {
    return unintuit::Main(argc, argv);
  } catch (const unintuit::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return unintuit::kExitUsage;
  } catch (const unintuit::BackendError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return unintuit::kExitBackend;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return unintuit::kExitData;
  }
}
