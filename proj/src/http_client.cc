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

#include "http_client.h"

#include <thread>

#include "httplib.h"
#include "unintuit/common.h"
#include "unintuit/intuition.h"

namespace unintuit::internal {

std::string PostJson(const std::string& url, const std::string& payload,
                     const PostOptions& options) {
  const auto [origin, path] = SplitUrl(url);
  const int attempts = std::max(options.attempts, 1);
  const auto seconds =
      std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
      options.timeout - seconds);
  std::string last_failure;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    if (attempt > 1) std::this_thread::sleep_for(options.backoff * (attempt - 1));
    httplib::Client client(origin);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());
    auto response = client.Post(path, payload, "application/json");
    if (!response) {
      last_failure = httplib::to_string(response.error());
      continue;
    }
    if (response->status >= 500 || response->status == 429) {
      last_failure = "HTTP " + std::to_string(response->status);
      continue;
    }
    if (response->status != 200) {
      throw BackendError(url + " rejected request with HTTP " +
                             std::to_string(response->status) + ": " +
                             response->body,
                         /*retryable=*/false);
    }
    return response->body;
  }
  throw BackendError(url + " unreachable after " + std::to_string(attempts) +
                         " attempts (" + last_failure + ")",
                     /*retryable=*/true);
}

}  // namespace unintuit::internal
