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

#include "unintuit/server.h"

#include <charconv>
#include <sstream>

#include "httplib.h"

namespace unintuit {
namespace {

using nlohmann::json;

ApiResponse Ok(const json& body) { return {200, CanonicalJson(body), {}}; }

ApiResponse Fail(int status, const std::string& message) {
  return {status, CanonicalJson(json{{"error", message}}), {}};
}

}  // namespace

ReportService::ReportService(PipelineReport report, Corpus corpus,
                             TrainedClassifier model,
                             std::shared_ptr<const IntuitionScorer> scorer,
                             std::shared_ptr<const EmbeddingProvider> embedder)
    : report_(std::move(report)),
      corpus_(std::move(corpus)),
      model_(std::move(model)),
      scorer_(std::move(scorer)),
      embedder_(std::move(embedder)) {}

ApiResponse ReportService::Health() const {
  return Ok({{"status", "ok"},
             {"schema_version", report_.schema_version},
             {"category", report_.category}});
}

ApiResponse ReportService::Report() const { return Ok(ToJson(report_)); }

ApiResponse ReportService::Diagnoses(
    const std::optional<std::string>& category) const {
  std::optional<FeatureCategory> filter;
  if (category && !category->empty()) {
    try {
      filter = ParseCategory(*category);
    } catch (const UsageError& e) {
      return Fail(400, e.what());
    }
  }
  json list = json::array();
  for (const FeatureDiagnosis& d : report_.diagnoses) {
    if (!filter || d.category == *filter) list.push_back(ToJson(d));
  }
  return Ok({{"diagnoses", list}});
}

std::optional<ExplanationBundle> ReportService::Cached(
    const std::string& word) const {
  if (const ExplanationBundle* bundle = report_.FindBundle(word)) {
    return *bundle;
  }
  std::shared_lock lock(computed_mutex_);
  const auto it = computed_.find(word);
  if (it == computed_.end()) return std::nullopt;
  return it->second;
}

ApiResponse ReportService::Bundle(const std::string& word) const {
  if (auto bundle = Cached(word)) return Ok(ToJson(*bundle));
  if (model_.vectorizer().IndexOf(word)) {
    return Fail(404, "no bundle for '" + word +
                         "' yet; POST /api/bundles/" + word + "/compute");
  }
  return Fail(404, "'" + word + "' is not in the model vocabulary");
}

ApiResponse ReportService::Documents(const std::string& ids) const {
  json list = json::array();
  std::stringstream stream(ids);
  std::string id;
  std::vector<std::string> missing;
  while (std::getline(stream, id, ',')) {
    if (id.empty()) continue;
    const auto index = corpus_.FindById(id);
    if (!index) {
      missing.push_back(id);
      continue;
    }
    const Document& doc = corpus_.document(*index);
    list.push_back({{"id", doc.id},
                    {"label", SentimentName(doc.label)},
                    {"text", doc.text}});
  }
  if (!missing.empty()) {
    std::string names;
    for (const std::string& m : missing) names += (names.empty() ? "" : ", ") + m;
    return Fail(404, "unknown document ids: " + names);
  }
  if (list.empty()) return Fail(400, "ids parameter is empty");
  return Ok({{"documents", list}});
}

std::shared_ptr<std::mutex> ReportService::WordLock(const std::string& word) {
  std::lock_guard lock(locks_mutex_);
  auto& slot = word_locks_[word];
  if (!slot) slot = std::make_shared<std::mutex>();
  return slot;
}

ApiResponse ReportService::ComputeBundle(const std::string& word) {
  if (!model_.vectorizer().IndexOf(word)) {
    return Fail(404, "'" + word + "' is not in the model vocabulary");
  }
  const auto word_lock = WordLock(word);
  std::lock_guard guard(*word_lock);
  if (auto bundle = Cached(word)) return Ok(ToJson(*bundle));
  try {
    ExplanationBundle bundle = BuildBundle(corpus_, model_, *scorer_,
                                           *embedder_, word,
                                           report_.config.explain);
    json body = ToJson(bundle);
    std::unique_lock lock(computed_mutex_);
    computed_.emplace(word, std::move(bundle));
    return Ok(body);
  } catch (const BackendError& e) {
    ApiResponse response = Fail(503, e.what());
    response.retry_after = kRetryAfterSeconds;
    return response;
  } catch (const DataError& e) {
    return Fail(422, e.what());
  } catch (const UsageError& e) {
    return Fail(400, e.what());
  }
}

struct ApiServer::Impl {
  httplib::Server http;
};

namespace {

void Send(const ApiResponse& response, httplib::Response& out) {
  out.status = response.status;
  if (response.retry_after) {
    out.set_header("Retry-After", std::to_string(*response.retry_after));
  }
  out.set_content(response.body, "application/json");
}

}  // namespace

ApiServer::ApiServer(ReportService& service) : impl_(std::make_unique<Impl>()) {
  auto& http = impl_->http;
  http.Get("/api/health", [&service](const httplib::Request&,
                                     httplib::Response& res) {
    Send(service.Health(), res);
  });
  http.Get("/api/report", [&service](const httplib::Request&,
                                     httplib::Response& res) {
    Send(service.Report(), res);
  });
  http.Get("/api/diagnoses", [&service](const httplib::Request& req,
                                        httplib::Response& res) {
    std::optional<std::string> category;
    if (req.has_param("category")) category = req.get_param_value("category");
    Send(service.Diagnoses(category), res);
  });
  http.Get("/api/documents", [&service](const httplib::Request& req,
                                        httplib::Response& res) {
    Send(service.Documents(req.get_param_value("ids")), res);
  });
  http.Get(R"(/api/bundles/([^/]+))", [&service](const httplib::Request& req,
                                                 httplib::Response& res) {
    Send(service.Bundle(req.matches[1]), res);
  });
  http.Post(R"(/api/bundles/([^/]+)/compute)",
            [&service](const httplib::Request& req, httplib::Response& res) {
              Send(service.ComputeBundle(req.matches[1]), res);
            });
  http.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                                std::exception_ptr error) {
    std::string message = "internal error";
    try {
      std::rethrow_exception(error);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    Send(Fail(500, message), res);
  });
}

ApiServer::~ApiServer() { Stop(); }

int ApiServer::Bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->http.bind_to_any_port(host);
  } else if (!impl_->http.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw UsageError("cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void ApiServer::Listen() { impl_->http.listen_after_bind(); }

void ApiServer::Stop() { impl_->http.stop(); }

std::pair<std::string, int> ParseBindAddress(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw UsageError("bind address must be HOST:PORT, got '" + address + "'");
  }
  int port = -1;
  const char* begin = address.data() + colon + 1;
  const char* end = address.data() + address.size();
  const auto [ptr, ec] = std::from_chars(begin, end, port);
  if (ec != std::errc() || ptr != end || port < 0 || port > 65535) {
    throw UsageError("invalid port in '" + address + "'");
  }
  return {address.substr(0, colon), port};
}

}  // namespace unintuit
