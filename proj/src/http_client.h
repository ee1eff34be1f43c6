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

#ifndef UNINTUIT_SRC_HTTP_CLIENT_H_
#define UNINTUIT_SRC_HTTP_CLIENT_H_

#include <chrono>
#include <string>

namespace unintuit::internal {

struct PostOptions {
  int attempts = 3;
  std::chrono::milliseconds timeout{10000};
  std::chrono::milliseconds backoff{200};
};

// POSTs a JSON payload and returns the 200 response body. Connection errors,
// 5xx and 429 are retried; other statuses fail immediately. Throws
// BackendError.
std::string PostJson(const std::string& url, const std::string& payload,
                     const PostOptions& options);

}  // namespace unintuit::internal

#endif  // UNINTUIT_SRC_HTTP_CLIENT_H_
