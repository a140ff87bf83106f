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

#include "qbafsum/qbaf_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qbafsum {

using nlohmann::json;

namespace detail {

void check_fields(const json& object, std::initializer_list<const char*> allowed, const std::string& where,
                  ParseOptions options, std::vector<std::string>* warnings) {
  for (const auto& [key, value] : object.items()) {
    bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (known) continue;
    std::string message = "unknown field '" + key + "' in " + where;
    if (options.strict) throw ParseError(message);
    if (warnings) warnings->push_back(message);
  }
}

}  // namespace detail

namespace {

const json& require(const json& object, const char* key, const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) throw ParseError("missing field '" + std::string(key) + "' in " + where);
  return *it;
}

std::string require_string(const json& object, const char* key, const std::string& where) {
  const json& v = require(object, key, where);
  if (!v.is_string()) throw ParseError("field '" + std::string(key) + "' in " + where + " must be a string");
  return v.get<std::string>();
}

}  // namespace

Qbaf qbaf_from_json(const json& doc, ParseOptions options, std::vector<std::string>* warnings) {
  if (!doc.is_object()) throw ParseError("QBAF document must be a JSON object");
  detail::check_fields(doc, {"meta", "arguments", "edges"}, "document", options, warnings);

  GraphMeta meta;
  const json& jmeta = require(doc, "meta", "document");
  if (!jmeta.is_object()) throw ParseError("'meta' must be an object");
  detail::check_fields(jmeta, {"debate_id", "source"}, "meta", options, warnings);
  meta.debate_id = require_string(jmeta, "debate_id", "meta");
  std::string source = require_string(jmeta, "source", "meta");
  if (source == "original") {
    meta.source = GraphSource::Original;
  } else if (source == "summary") {
    meta.source = GraphSource::Summary;
  } else {
    throw ParseError("meta.source must be \"original\" or \"summary\"");
  }

  std::vector<Argument> arguments;
  const json& jargs = require(doc, "arguments", "document");
  if (!jargs.is_array()) throw ParseError("'arguments' must be an array");
  for (std::size_t i = 0; i < jargs.size(); ++i) {
    const json& ja = jargs[i];
    const std::string where = "arguments[" + std::to_string(i) + "]";
    if (!ja.is_object()) throw ParseError(where + " must be an object");
    detail::check_fields(ja, {"id", "kind", "text", "base_score", "order"}, where, options, warnings);
    Argument a;
    a.id = ArgumentId(require_string(ja, "id", where));
    std::string kind = require_string(ja, "kind", where);
    if (kind == "proposal") {
      a.kind = ArgumentKind::Proposal;
    } else if (kind == "speech") {
      a.kind = ArgumentKind::Speech;
    } else {
      throw ParseError(where + ".kind must be \"proposal\" or \"speech\"");
    }
    a.text = require_string(ja, "text", where);
    const json& score = require(ja, "base_score", where);
    if (!score.is_number()) throw ParseError(where + ".base_score must be a number");
    a.base_score = score.get<double>();
    if (auto it = ja.find("order"); it != ja.end() && !it->is_null()) {
      if (!it->is_number_integer()) throw ParseError(where + ".order must be an integer");
      a.order = it->get<long>();
    }
    arguments.push_back(std::move(a));
  }

  std::vector<Edge> edges;
  const json& jedges = require(doc, "edges", "document");
  if (!jedges.is_array()) throw ParseError("'edges' must be an array");
  for (std::size_t i = 0; i < jedges.size(); ++i) {
    const json& je = jedges[i];
    const std::string where = "edges[" + std::to_string(i) + "]";
    if (!je.is_object()) throw ParseError(where + " must be an object");
    detail::check_fields(je, {"source", "target", "polarity"}, where, options, warnings);
    Edge e;
    e.source = ArgumentId(require_string(je, "source", where));
    e.target = ArgumentId(require_string(je, "target", where));
    std::string polarity = require_string(je, "polarity", where);
    if (polarity == "attack") {
      e.polarity = Polarity::Attack;
    } else if (polarity == "support") {
      e.polarity = Polarity::Support;
    } else {
      throw ParseError(where + ".polarity must be \"attack\" or \"support\"");
    }
    edges.push_back(std::move(e));
  }

  Qbaf qbaf(std::move(meta), std::move(arguments), std::move(edges));
  if (warnings) warnings->insert(warnings->end(), qbaf.warnings().begin(), qbaf.warnings().end());
  return qbaf;
}

json qbaf_to_json(const Qbaf& qbaf) {
  json doc;
  doc["meta"] = {{"debate_id", qbaf.meta().debate_id}, {"source", to_string(qbaf.meta().source)}};
  json args = json::array();
  for (const auto& a : qbaf.arguments()) {
    json ja = {{"id", a.id.str()}, {"kind", to_string(a.kind)}, {"text", a.text}, {"base_score", a.base_score}};
    if (a.order) ja["order"] = *a.order;
    args.push_back(std::move(ja));
  }
  doc["arguments"] = std::move(args);
  json edges = json::array();
  for (const auto& e : qbaf.edges()) {
    edges.push_back({{"source", e.source.str()}, {"target", e.target.str()}, {"polarity", to_string(e.polarity)}});
  }
  doc["edges"] = std::move(edges);
  return doc;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

Qbaf read_qbaf(const std::filesystem::path& path, ParseOptions options, std::vector<std::string>* warnings) {
  try {
    return qbaf_from_json(read_json_file(path), options, warnings);
  } catch (const json::exception& e) {
    throw ParseError("invalid QBAF in '" + path.string() + "': " + e.what());
  }
}

void write_text_file(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ParseError("write failed for '" + path.string() + "'");
}

void write_json_file(const json& doc, const std::filesystem::path& path) {
  write_text_file(doc.dump(2) + "\n", path);
}

void write_qbaf(const Qbaf& qbaf, const std::filesystem::path& path) { write_json_file(qbaf_to_json(qbaf), path); }

}  // namespace qbafsum
