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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qbafsum/graph.hpp"

namespace qbafsum {

/// Malformed input: unreadable file, bad JSON, or schema mismatch.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ParseOptions {
  bool strict = false;  // unknown fields are errors instead of warnings
};

/// Decodes the QBAF file format. Warnings (unknown fields in lenient mode,
/// collapsed duplicate edges) are appended to `warnings` when non-null.
Qbaf qbaf_from_json(const nlohmann::json& doc, ParseOptions options = {},
                    std::vector<std::string>* warnings = nullptr);
nlohmann::json qbaf_to_json(const Qbaf& qbaf);

Qbaf read_qbaf(const std::filesystem::path& path, ParseOptions options = {},
               std::vector<std::string>* warnings = nullptr);
void write_qbaf(const Qbaf& qbaf, const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
/// Writes `doc` pretty-printed with a trailing newline.
void write_json_file(const nlohmann::json& doc, const std::filesystem::path& path);
void write_text_file(const std::string& text, const std::filesystem::path& path);

namespace detail {
/// Reports keys of `object` outside `allowed`: throws in strict mode,
/// otherwise appends a warning.
void check_fields(const nlohmann::json& object, std::initializer_list<const char*> allowed,
                  const std::string& where, ParseOptions options, std::vector<std::string>* warnings);
}  // namespace detail

}  // namespace qbafsum
