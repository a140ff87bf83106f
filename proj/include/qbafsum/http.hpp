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

#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace qbafsum {

/// Remote call failed after all retries.
class ServiceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  double multiplier = 2.0;
};

struct HttpEndpoint {
  std::string url;  // scheme://host[:port]/path
  std::vector<std::pair<std::string, std::string>> headers;
  std::chrono::seconds timeout{60};
};

/// POSTs a JSON body and parses a JSON response. Transport errors, 5xx and
/// 429 responses are retried with exponential backoff; other non-2xx
/// statuses fail immediately.
nlohmann::json post_json(const HttpEndpoint& endpoint, const nlohmann::json& body, const RetryPolicy& retry = {});

}  // namespace qbafsum
