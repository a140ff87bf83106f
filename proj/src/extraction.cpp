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

#include "qbafsum/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "qbafsum/digest.hpp"
#include "qbafsum/qbaf_io.hpp"

namespace qbafsum {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Transcripts

void Transcript::check() const {
  std::set<int> seen;
  for (const auto& p : provisions) {
    if (p.index < 1) throw TranscriptError("provision index must be >= 1 (got " + std::to_string(p.index) + ")");
    if (!seen.insert(p.index).second) throw TranscriptError("duplicate provision " + std::to_string(p.index));
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].text.empty())
      throw TranscriptError("segment " + std::to_string(segments[i].order) + " has empty text");
    if (i > 0 && segments[i].order <= segments[i - 1].order)
      throw TranscriptError("segment orders must be strictly increasing (at " + std::to_string(segments[i].order) +
                            ")");
  }
}

Transcript transcript_from_json(const json& doc) {
  ParseOptions lenient;
  if (!doc.is_object()) throw ParseError("transcript must be a JSON object");
  try {
    Transcript t;
    detail::check_fields(doc, {"debate_id", "provisions", "segments"}, "transcript", lenient, nullptr);
    t.debate_id = doc.at("debate_id").get<std::string>();
    for (const auto& p : doc.at("provisions")) t.provisions.push_back({p.at("index").get<int>(), p.at("text").get<std::string>()});
    for (const auto& s : doc.at("segments")) {
      t.segments.push_back(
          {s.at("order").get<long>(), s.value("speaker", std::string()), s.at("text").get<std::string>()});
    }
    return t;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid transcript: ") + e.what());
  }
}

json transcript_to_json(const Transcript& t) {
  json provisions = json::array(), segments = json::array();
  for (const auto& p : t.provisions) provisions.push_back({{"index", p.index}, {"text", p.text}});
  for (const auto& s : t.segments) segments.push_back({{"order", s.order}, {"speaker", s.speaker}, {"text", s.text}});
  return {{"debate_id", t.debate_id}, {"provisions", provisions}, {"segments", segments}};
}

Transcript read_transcript(const std::filesystem::path& path) { return transcript_from_json(read_json_file(path)); }

ArgumentId segment_id(long order) { return ArgumentId("s:" + std::to_string(order)); }

std::vector<CandidatePair> candidate_pairs(const Transcript& t, const CandidateOptions& options) {
  std::vector<CandidatePair> out;
  const std::size_t s = t.segments.size();
  for (std::size_t i = 0; i < s; ++i) {
    const auto& src = t.segments[i];
    std::size_t first = 0;
    if (options.window && i > *options.window) first = i - *options.window;
    for (std::size_t j = first; j < i; ++j)
      out.push_back({segment_id(src.order), segment_id(t.segments[j].order), src.text, t.segments[j].text});
    if (!options.temporal) {
      for (std::size_t j = i + 1; j < s; ++j) {
        if (options.window && j - i > *options.window) break;
        out.push_back({segment_id(src.order), segment_id(t.segments[j].order), src.text, t.segments[j].text});
      }
    }
    for (const auto& p : t.provisions) out.push_back({segment_id(src.order), proposal_id(p.index), src.text, p.text});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Labels and classifiers

const char* to_string(RelationLabel label) {
  switch (label) {
    case RelationLabel::Attack: return "attack";
    case RelationLabel::Support: return "support";
    case RelationLabel::Neither: return "neither";
    case RelationLabel::Unclassified: return "unclassified";
  }
  return "?";
}

std::optional<RelationLabel> parse_relation_label(const std::string& text) {
  std::string s;
  for (unsigned char c : text)
    if (!std::isspace(c)) s.push_back(static_cast<char>(std::tolower(c)));
  if (s == "attack") return RelationLabel::Attack;
  if (s == "support") return RelationLabel::Support;
  if (s == "neither") return RelationLabel::Neither;
  if (s == "unclassified") return RelationLabel::Unclassified;
  return std::nullopt;
}

std::string ConstantClassifier::identity() const { return std::string("constant-") + to_string(label_); }

std::vector<Classification> ConstantClassifier::classify_batch(std::span<const CandidatePair> pairs) {
  return std::vector<Classification>(pairs.size(), Classification{label_, std::nullopt, to_string(label_)});
}

namespace {

std::string lowercase(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

Classification KeywordClassifier::classify_one(const CandidatePair& pair) {
  const std::string text = lowercase(pair.source_text);
  std::vector<std::string> tags;
  for (std::size_t at = text.find('@'); at != std::string::npos; at = text.find('@', at + 1)) {
    std::size_t end = at + 1;
    while (end < text.size() && (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == ':')) ++end;
    if (end > at + 1) tags.push_back(text.substr(at + 1, end - at - 1));
  }
  RelationLabel label = RelationLabel::Neither;
  bool targeted = tags.empty() || std::find(tags.begin(), tags.end(), lowercase(pair.target.str())) != tags.end();
  if (targeted) {
    if (text.find("disagree") != std::string::npos) {
      label = RelationLabel::Attack;
    } else if (text.find("agree") != std::string::npos) {
      label = RelationLabel::Support;
    }
  }
  return {label, std::nullopt, to_string(label)};
}

std::vector<Classification> KeywordClassifier::classify_batch(std::span<const CandidatePair> pairs) {
  std::vector<Classification> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(classify_one(p));
  return out;
}

ChatClassifier::ChatClassifier(Options options)
    : options_(std::move(options)), prompt_digest_(sha256_hex(options_.prompt_template)) {}

std::string ChatClassifier::identity() const {
  return "chat:" + options_.model + "@" + options_.url + "#prompt=" + prompt_digest_.substr(0, 16);
}

std::string ChatClassifier::render_prompt(const CandidatePair& pair) const {
  std::string out = options_.prompt_template;
  auto substitute = [&](const std::string& key, const std::string& value) {
    for (std::size_t at = out.find(key); at != std::string::npos; at = out.find(key, at + value.size()))
      out.replace(at, key.size(), value);
  };
  substitute("{{source}}", pair.source_text);
  substitute("{{target}}", pair.target_text);
  return out;
}

RelationLabel ChatClassifier::parse_reply(const std::string& reply) {
  const std::string text = lowercase(reply);
  std::size_t best = std::string::npos;
  RelationLabel label = RelationLabel::Unclassified;
  for (RelationLabel candidate : {RelationLabel::Attack, RelationLabel::Support, RelationLabel::Neither}) {
    std::size_t at = text.find(to_string(candidate));
    if (at < best) best = at, label = candidate;
  }
  return label;
}

std::vector<Classification> ChatClassifier::classify_batch(std::span<const CandidatePair> pairs) {
  HttpEndpoint endpoint{options_.url, {{"Authorization", "Bearer " + options_.api_key}}, options_.timeout};
  std::vector<Classification> out;
  for (const auto& pair : pairs) {
    json body = {{"model", options_.model},
                 {"temperature", 0},
                 {"messages", json::array({{{"role", "user"}, {"content", render_prompt(pair)}}})}};
    json reply = post_json(endpoint, body, options_.retry);
    std::string content;
    try {
      content = reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw ServiceError(std::string("unexpected chat response shape: ") + e.what());
    }
    RelationLabel label = parse_reply(content);
    if (label == RelationLabel::Unclassified) throw ServiceError("reply names no relation label: " + content);
    out.push_back({label, std::nullopt, content});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cache

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string ResponseCache::key(const std::string& classifier_identity, const CandidatePair& pair) {
  // Length-prefixed fields so that no two distinct inputs share an encoding.
  std::string material;
  for (const std::string* field : {&classifier_identity, &pair.source_text, &pair.target_text}) {
    material += std::to_string(field->size());
    material += ':';
    material += *field;
  }
  return sha256_hex(material);
}

std::optional<Classification> ResponseCache::load(const std::string& key) const {
  std::ifstream in(dir_ / (key + ".json"));
  if (!in) return std::nullopt;
  try {
    json doc = json::parse(in);
    auto label = parse_relation_label(doc.at("label").get<std::string>());
    if (!label || *label == RelationLabel::Unclassified) return std::nullopt;
    Classification c{*label, std::nullopt, doc.at("raw").get<std::string>()};
    if (doc.contains("confidence") && doc["confidence"].is_number()) c.confidence = doc["confidence"].get<double>();
    return c;
  } catch (const json::exception&) {
    return std::nullopt;  // corrupt entry: recompute
  }
}

void ResponseCache::store(const std::string& key, const Classification& value) const {
  json doc = {{"label", to_string(value.label)}, {"raw", value.raw}};
  if (value.confidence) doc["confidence"] = *value.confidence;
  // Write-then-rename keeps concurrent readers from seeing partial files.
  auto tmp = dir_ / (key + ".json.tmp");
  write_json_file(doc, tmp);
  std::filesystem::rename(tmp, dir_ / (key + ".json"));
}

// ---------------------------------------------------------------------------
// Classification driver

ClassifyRun classify(const std::vector<CandidatePair>& pairs, RelationClassifier& classifier,
                     const ClassifyOptions& options) {
  const std::string identity = classifier.identity();
  ClassifyRun run;
  std::vector<std::optional<Classification>> results(pairs.size());
  std::vector<std::string> keys(pairs.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (options.cache) {
      keys[i] = ResponseCache::key(identity, pairs[i]);
      if (auto hit = options.cache->load(keys[i])) {
        results[i] = std::move(hit);
        ++run.cache_hits;
        continue;
      }
    }
    pending.push_back(i);
  }

  std::vector<std::vector<std::size_t>> batches;
  const std::size_t batch = std::max<std::size_t>(1, options.batch_size);
  for (std::size_t i = 0; i < pending.size(); i += batch)
    batches.emplace_back(pending.begin() + i, pending.begin() + std::min(pending.size(), i + batch));

  auto run_batch = [&](const std::vector<std::size_t>& indices) {
    std::vector<CandidatePair> input;
    input.reserve(indices.size());
    for (std::size_t i : indices) input.push_back(pairs[i]);
    auto labels = classifier.classify_batch(input);
    if (labels.size() != indices.size()) throw ServiceError("classifier returned a short batch");
    for (std::size_t k = 0; k < indices.size(); ++k) {
      if (options.cache) options.cache->store(keys[indices[k]], labels[k]);
      results[indices[k]] = std::move(labels[k]);
    }
  };

  const std::size_t window = std::max<std::size_t>(1, options.max_in_flight);
  for (std::size_t start = 0; start < batches.size(); start += window) {
    const std::size_t stop = std::min(batches.size(), start + window);
    std::vector<std::future<void>> inflight;
    for (std::size_t b = start; b < stop; ++b)
      inflight.push_back(std::async(window == 1 ? std::launch::deferred : std::launch::async, run_batch,
                                    std::cref(batches[b])));
    for (std::size_t b = start; b < stop; ++b) {
      run.classifier_calls += batches[b].size();
      try {
        inflight[b - start].get();
      } catch (const std::exception& e) {
        if (options.strict) throw ClassificationError(std::string("classification failed: ") + e.what());
        run.errors.push_back(e.what());
      }
    }
  }

  run.verdicts.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    RelationVerdict v{pairs[i].source, pairs[i].target, RelationLabel::Unclassified, std::nullopt, identity, ""};
    if (results[i]) {
      v.label = results[i]->label;
      v.confidence = results[i]->confidence;
      v.digest = sha256_hex(results[i]->raw);
    } else {
      ++run.failures;
    }
    run.verdicts.push_back(std::move(v));
  }
  return run;
}

json verdicts_to_json(const std::vector<RelationVerdict>& verdicts) {
  json list = json::array();
  for (const auto& v : verdicts) {
    json jv = {{"source", v.source.str()},
               {"target", v.target.str()},
               {"label", to_string(v.label)},
               {"classifier", v.classifier},
               {"digest", v.digest}};
    if (v.confidence) jv["confidence"] = *v.confidence;
    list.push_back(std::move(jv));
  }
  return {{"verdicts", list}};
}

std::vector<RelationVerdict> verdicts_from_json(const json& doc) {
  std::vector<RelationVerdict> out;
  try {
    for (const auto& jv : doc.at("verdicts")) {
      auto label = parse_relation_label(jv.at("label").get<std::string>());
      if (!label) throw ParseError("unknown relation label '" + jv.at("label").get<std::string>() + "'");
      RelationVerdict v{ArgumentId(jv.at("source").get<std::string>()), ArgumentId(jv.at("target").get<std::string>()),
                        *label, std::nullopt, jv.value("classifier", std::string()), jv.value("digest", std::string())};
      if (jv.contains("confidence") && jv["confidence"].is_number()) v.confidence = jv["confidence"].get<double>();
      out.push_back(std::move(v));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid verdict file: ") + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Graph assembly

Qbaf build_qbaf(const Transcript& t, const std::vector<RelationVerdict>& verdicts, const BuildOptions& options,
                std::vector<std::string>* warnings) {
  t.check();
  if (!(options.speech_base >= 0.0 && options.speech_base <= 1.0))
    throw DomainError("speech base score must lie in [0,1]");

  CandidateOptions copts;
  copts.temporal = options.source == GraphSource::Original;
  std::set<std::pair<std::string, std::string>> candidates;
  for (const auto& c : candidate_pairs(t, copts)) candidates.emplace(c.source.str(), c.target.str());

  std::vector<Argument> arguments;
  for (const auto& p : t.provisions) arguments.push_back({proposal_id(p.index), ArgumentKind::Proposal, p.text, 0.5, {}});
  for (const auto& s : t.segments) {
    Argument a{segment_id(s.order), ArgumentKind::Speech, s.text, options.speech_base, {}};
    if (options.source == GraphSource::Original) a.order = s.order;
    arguments.push_back(std::move(a));
  }

  std::vector<Edge> edges;
  std::map<std::pair<std::string, std::string>, RelationLabel> seen;
  for (const auto& v : verdicts) {
    auto key = std::make_pair(v.source.str(), v.target.str());
    if (!candidates.count(key))
      throw TranscriptError("verdict on non-candidate pair " + v.source.str() + " -> " + v.target.str());
    if (auto [it, fresh] = seen.emplace(key, v.label); !fresh) {
      if (it->second != v.label)
        throw TranscriptError("conflicting verdicts for " + v.source.str() + " -> " + v.target.str());
      continue;
    }
    switch (v.label) {
      case RelationLabel::Attack: edges.push_back({v.source, v.target, Polarity::Attack}); break;
      case RelationLabel::Support: edges.push_back({v.source, v.target, Polarity::Support}); break;
      case RelationLabel::Neither: break;
      case RelationLabel::Unclassified:
        if (warnings) warnings->push_back("unclassified pair " + v.source.str() + " -> " + v.target.str() +
                                          " treated as neither");
        break;
    }
  }
  if (warnings && seen.size() < candidates.size()) {
    warnings->push_back(std::to_string(candidates.size() - seen.size()) +
                        " candidate pairs have no verdict and were treated as neither");
  }
  return Qbaf({t.debate_id, options.source}, std::move(arguments), std::move(edges));
}

// ---------------------------------------------------------------------------
// Gold labels and metrics

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

int class_index(RelationLabel label) {
  switch (label) {
    case RelationLabel::Attack: return 0;
    case RelationLabel::Support: return 1;
    case RelationLabel::Neither: return 2;
    case RelationLabel::Unclassified: return 3;
  }
  return 3;
}

}  // namespace

std::vector<GoldPair> gold_from_csv(const std::string& text) {
  std::vector<GoldPair> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (line_no == 1 && !fields.empty() && fields[0] == "source_id") continue;
    if (fields.size() < 3) throw ParseError("gold CSV line " + std::to_string(line_no) + ": expected >= 3 fields");
    auto label = parse_relation_label(fields[2]);
    if (!label || *label == RelationLabel::Unclassified)
      throw ParseError("gold CSV line " + std::to_string(line_no) + ": bad label '" + fields[2] + "'");
    GoldPair g{ArgumentId(fields[0]), ArgumentId(fields[1]), *label, {}};
    for (std::size_t k = 3; k < fields.size(); ++k) {
      if (fields[k].empty()) {
        g.annotators.push_back(std::nullopt);
        continue;
      }
      auto a = parse_relation_label(fields[k]);
      if (!a || *a == RelationLabel::Unclassified)
        throw ParseError("gold CSV line " + std::to_string(line_no) + ": bad annotator label '" + fields[k] + "'");
      g.annotators.push_back(a);
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<GoldPair> read_gold_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return gold_from_csv(buffer.str());
}

double cohen_kappa(std::span<const RelationLabel> a, std::span<const RelationLabel> b) {
  if (a.size() != b.size() || a.empty()) throw DomainError("kappa needs two non-empty label lists of equal length");
  const double n = static_cast<double>(a.size());
  double agree = 0.0;
  double count_a[4] = {0, 0, 0, 0}, count_b[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    agree += a[i] == b[i];
    ++count_a[class_index(a[i])];
    ++count_b[class_index(b[i])];
  }
  const double observed = agree / n;
  double expected = 0.0;
  for (int k = 0; k < 4; ++k) expected += (count_a[k] / n) * (count_b[k] / n);
  if (expected == 1.0) return 1.0;  // both raters constant and identical
  return (observed - expected) / (1.0 - expected);
}

ArcMetrics arc_eval(const std::vector<RelationVerdict>& verdicts, const std::vector<GoldPair>& gold) {
  if (gold.empty()) throw DomainError("arc_eval needs a non-empty gold set");
  std::map<std::pair<std::string, std::string>, RelationLabel> predicted;
  for (const auto& v : verdicts) predicted[{v.source.str(), v.target.str()}] = v.label;

  ArcMetrics m;
  m.n = gold.size();
  m.confusion.assign(3, std::vector<std::size_t>(4, 0));
  std::size_t correct = 0;
  for (const auto& g : gold) {
    auto it = predicted.find({g.source.str(), g.target.str()});
    RelationLabel p = it == predicted.end() ? RelationLabel::Unclassified : it->second;
    ++m.confusion[class_index(g.label)][class_index(p)];
    correct += p == g.label;
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(m.n);

  const char* names[3] = {"attack", "support", "neither"};
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    double tp = static_cast<double>(m.confusion[k][k]);
    double predicted_k = 0.0, gold_k = 0.0;
    for (int g = 0; g < 3; ++g) predicted_k += static_cast<double>(m.confusion[g][k]);
    for (int p = 0; p < 4; ++p) gold_k += static_cast<double>(m.confusion[k][p]);
    double precision = predicted_k > 0 ? tp / predicted_k : 0.0;
    double recall = gold_k > 0 ? tp / gold_k : 0.0;
    double f1 = precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    m.per_class_f1[names[k]] = f1;
    sum += f1;
  }
  m.macro_f1 = sum / 3.0;

  std::size_t raters = 0;
  for (const auto& g : gold) raters = std::max(raters, g.annotators.size());
  for (std::size_t i = 0; i < raters; ++i) {
    for (std::size_t j = i + 1; j < raters; ++j) {
      std::vector<RelationLabel> a, b;
      for (const auto& g : gold) {
        if (g.annotators.size() > j && g.annotators[i] && g.annotators[j]) {
          a.push_back(*g.annotators[i]);
          b.push_back(*g.annotators[j]);
        }
      }
      if (!a.empty()) m.kappa.push_back({i + 1, j + 1, a.size(), cohen_kappa(a, b)});
    }
  }
  return m;
}

json arc_metrics_to_json(const ArcMetrics& m) {
  json kappa = json::array();
  for (const auto& k : m.kappa)
    kappa.push_back({{"annotators", {k.first, k.second}}, {"items", k.items}, {"kappa", k.kappa}});
  return {{"n", m.n},
          {"accuracy", m.accuracy},
          {"macro_f1", m.macro_f1},
          {"per_class_f1", m.per_class_f1},
          {"confusion", {{"rows", {"attack", "support", "neither"}},
                         {"columns", {"attack", "support", "neither", "unclassified"}},
                         {"counts", m.confusion}}},
          {"kappa", kappa}};
}

}  // namespace qbafsum
