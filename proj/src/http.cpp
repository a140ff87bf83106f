// Copyright 2026 The qbafsum Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qbafsum/http.hpp"

#include <thread>

#ifdef QBAFSUM_WITH_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"

namespace qbafsum {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ServiceError("URL must include a scheme: '" + url + "'");
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

nlohmann::json post_json(const HttpEndpoint& endpoint, const nlohmann::json& body, const RetryPolicy& retry) {
  const SplitUrl target = split_url(endpoint.url);
  httplib::Client client(target.origin);
  if (!client.is_valid()) throw ServiceError("unsupported endpoint '" + endpoint.url + "'");
  client.set_connection_timeout(endpoint.timeout);
  client.set_read_timeout(endpoint.timeout);
  client.set_write_timeout(endpoint.timeout);

  httplib::Headers headers;
  for (const auto& [k, v] : endpoint.headers) headers.emplace(k, v);
  const std::string payload = body.dump();

  std::string last_error = "no attempt made";
  auto backoff = retry.initial_backoff;
  for (int attempt = 1; attempt <= std::max(1, retry.max_attempts); ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(static_cast<long>(backoff.count() * retry.multiplier));
    }
    auto result = client.Post(target.path, headers, payload, "application/json");
    if (!result) {
      last_error = "transport error: " + httplib::to_string(result.error());
      continue;
    }
    if (result->status >= 200 && result->status < 300) {
      try {
        return nlohmann::json::parse(result->body);
      } catch (const nlohmann::json::parse_error& e) {
        throw ServiceError("malformed JSON response from '" + endpoint.url + "': " + e.what());
      }
    }
    last_error = "HTTP " + std::to_string(result->status);
    if (result->status != 429 && result->status < 500) break;
  }
  throw ServiceError("request to '" + endpoint.url + "' failed: " + last_error);
}

}  // namespace qbafsum
