// Copyright 2026 The Retell Authors.
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

// Story bundles: one XML file per story holding its speech plans (DSyntS
// trees, optionally with a contingency text plan) and reference texts.
// See docs/story-format.md.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "retell/deaggregate.hpp"
#include "retell/dsynts.hpp"
#include "retell/error.hpp"
#include "retell/metrics.hpp"
#include "retell/planner.hpp"
#include "retell/realize.hpp"
#include "retell/xml.hpp"

#if __has_include(<unistd.h>)
#include <unistd.h>
#endif

namespace retell {

enum class ReferenceKind { original, sch, est };

inline std::string_view to_string(ReferenceKind k) {
  switch (k) {
    case ReferenceKind::original: return "original";
    case ReferenceKind::sch: return "sch";
    case ReferenceKind::est: return "est";
  }
  return "?";
}

inline std::optional<ReferenceKind> parse_reference_kind(std::string_view s) {
  for (auto k : {ReferenceKind::original, ReferenceKind::sch, ReferenceKind::est})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

struct SpeechPlan {
  std::string voice = "Narrator";
  std::vector<DSyntTree> trees;
  std::optional<TextPlan> plan;

  bool operator==(const SpeechPlan&) const = default;
};

struct StoryBundle {
  std::string story_id;
  std::string narrator_lexeme = "narrator";
  std::vector<SpeechPlan> speech_plans;  // narrative order
  std::map<ReferenceKind, std::string> reference_texts;

  bool operator==(const StoryBundle&) const = default;

  std::optional<std::string> reference(ReferenceKind k) const {
    auto it = reference_texts.find(k);
    if (it == reference_texts.end()) return std::nullopt;
    return it->second;
  }
};

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

// Writes to a temporary sibling and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  static std::atomic<unsigned> counter{0};
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("output directory " + dir.string() + " does not exist");
  long pid = 0;
#if __has_include(<unistd.h>)
  pid = static_cast<long>(::getpid());
#endif
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(pid) + "." +
                              std::to_string(counter++));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write to directory " + dir.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw IoError("error writing " + tmp.string() + " in directory " + dir.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot replace " + path.string() + " in directory " + dir.string());
  }
}

// ---------------------------------------------------------------------------
// Story XML

inline StoryBundle story_from_xml(const xml::Element& root) {
  if (root.name != "story") throw ValidationError("root element must be <story>, found <" + root.name + ">");
  StoryBundle b;
  if (const auto* id = root.attribute("id")) b.story_id = *id;
  if (const auto* n = root.attribute("narrator"); n && !n->empty()) b.narrator_lexeme = *n;

  std::set<std::string> ids;
  for (const auto& child : root.children) {
    if (child.name == "reference") {
      const auto* kind = child.attribute("kind");
      auto k = kind ? parse_reference_kind(*kind) : std::nullopt;
      if (!k)
        throw ValidationError("reference at line " + std::to_string(child.line) + " needs kind original|sch|est");
      if (!b.reference_texts.emplace(*k, child.text).second)
        throw ValidationError("duplicate " + std::string(to_string(*k)) + " reference");
    } else if (child.name == "speechplan") {
      SpeechPlan sp;
      if (const auto* v = child.attribute("voice"); v && !v->empty()) sp.voice = *v;
      for (const auto* t : child.children_named("dsynts")) {
        DSyntTree tree = tree_from_xml(*t);
        if (!ids.insert(tree.id).second) throw ValidationError("duplicate dsynts id '" + tree.id + "'");
        sp.trees.push_back(std::move(tree));
      }
      sp.plan = text_plan_from_xml(child);
      if (sp.plan) {
        for (const auto* id : {&sp.plan->nucleus_id, &sp.plan->satellite_id}) {
          bool found = false;
          for (const auto& t : sp.trees) found = found || t.id == *id;
          if (!found)
            throw ReferenceError("speechplan at line " + std::to_string(child.line) + ": dialogue_act '" + *id +
                                 "' names no dsynts in the same speech plan");
        }
      } else if (!child.children_named("proposition").empty()) {
        throw ValidationError("speechplan at line " + std::to_string(child.line) + ": propositions without rstplan");
      }
      b.speech_plans.push_back(std::move(sp));
    } else {
      throw ValidationError("unexpected <" + child.name + "> in story at line " + std::to_string(child.line));
    }
  }
  return b;
}

inline StoryBundle parse_story_bundle(std::string_view text) { return story_from_xml(xml::parse(text)); }

// The story id defaults to the file stem when the file does not set one.
inline StoryBundle load_story_bundle(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  StoryBundle b;
  try {
    b = parse_story_bundle(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.message(), e.line(), e.column());
  } catch (const ReferenceError& e) {
    throw ReferenceError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (b.story_id.empty()) b.story_id = path.stem().string();
  return b;
}

inline std::string serialize_story_bundle(const StoryBundle& b) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<story";
  if (!b.story_id.empty()) os << " id=\"" << xml::escape(b.story_id) << '"';
  os << " narrator=\"" << xml::escape(b.narrator_lexeme) << "\">\n";
  for (const auto& [kind, text] : b.reference_texts)
    os << "  <reference kind=\"" << to_string(kind) << "\">" << xml::cdata(text) << "</reference>\n";
  for (const auto& sp : b.speech_plans) {
    if (sp.plan) {
      std::ostringstream plan;
      write_text_plan(plan, *sp.plan, 1);
      std::string s = plan.str();
      // Trees go inside the speechplan element, before its closing tag.
      auto close = s.rfind("  </speechplan>");
      os << s.substr(0, close);
      for (const auto& t : sp.trees) write_tree(os, t, 2);
      os << s.substr(close);
    } else {
      os << "  <speechplan voice=\"" << xml::escape(sp.voice) << "\">\n";
      for (const auto& t : sp.trees) write_tree(os, t, 2);
      os << "  </speechplan>\n";
    }
  }
  os << "</story>\n";
  return os.str();
}

inline void save_story_bundle(const StoryBundle& b, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_story_bundle(b));
}

// Writes <out_dir>/<bundle_id>.<variation>.txt with a trailing newline.
inline std::filesystem::path save_retelling(std::string_view bundle_id, Variation v, std::string_view text,
                                            const std::filesystem::path& out_dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(out_dir, ec))
    throw IoError("output directory " + out_dir.string() + " does not exist");
  auto path = out_dir / (std::string(bundle_id) + "." + std::string(to_string(v)) + ".txt");
  std::string content(text);
  if (content.empty() || content.back() != '\n') content += '\n';
  write_file_atomic(path, content);
  return path;
}

// ---------------------------------------------------------------------------
// Run configuration (JSON):
//   {"variation": "soSN",
//    "pov": {"narrator": "narrator", "person": "first"},
//    "realization": {"adverb_position": "postverbal", "sentence_join": " "},
//    "lexicon": "data/lexicon.tsv"}
// A relative lexicon path is resolved against the config file's directory.

struct RunConfig {
  Variation variation = Variation::EST;
  POVConfig pov;
  RealizationConfig realization;
  std::filesystem::path lexicon_path;
};

inline RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir = {}) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("run config: ") + e.what(), 1, static_cast<int>(e.byte));
  }
  auto bad = [](const std::string& why) -> ValidationError { return ValidationError("run config: " + why); };
  try {
    RunConfig cfg;
    auto v = parse_variation(j.value("variation", std::string("EST")));
    if (!v) throw bad("unknown variation '" + j.value("variation", std::string()) + "'");
    cfg.variation = *v;
    if (j.contains("pov")) {
      const auto& p = j.at("pov");
      cfg.pov.narrator_lexeme = p.value("narrator", cfg.pov.narrator_lexeme);
      if (cfg.pov.narrator_lexeme.empty()) throw bad("pov.narrator must be non-empty");
      std::string person = p.value("person", std::string("first"));
      if (person == "first") cfg.pov.target_person = POVConfig::Target::first;
      else if (person == "third") cfg.pov.target_person = POVConfig::Target::third;
      else throw bad("pov.person must be first or third");
    }
    if (j.contains("realization")) {
      const auto& r = j.at("realization");
      std::string pos = r.value("adverb_position", std::string("postverbal"));
      if (pos == "postverbal") cfg.realization.adverb_position = RealizationConfig::AdverbPosition::postverbal;
      else if (pos == "preverbal") cfg.realization.adverb_position = RealizationConfig::AdverbPosition::preverbal;
      else throw bad("realization.adverb_position must be postverbal or preverbal");
      cfg.realization.sentence_join = r.value("sentence_join", cfg.realization.sentence_join);
    }
    if (!j.contains("lexicon")) throw bad("missing lexicon");
    std::filesystem::path lex = j.at("lexicon").get<std::string>();
    if (lex.is_relative() && !base_dir.empty()) lex = base_dir / lex;
    std::error_code ec;
    if (!std::filesystem::is_regular_file(lex, ec)) throw bad("lexicon " + lex.string() + " not found");
    cfg.lexicon_path = lex;
    return cfg;
  } catch (const json::exception& e) {
    throw bad(e.what());
  }
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_file(path), path.parent_path());
}

inline std::string run_config_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["variation"] = std::string(to_string(cfg.variation));
  j["pov"] = {{"narrator", cfg.pov.narrator_lexeme},
              {"person", cfg.pov.target_person == POVConfig::Target::first ? "first" : "third"}};
  j["realization"] = {{"adverb_position", cfg.realization.adverb_position ==
                                                  RealizationConfig::AdverbPosition::postverbal
                                              ? "postverbal"
                                              : "preverbal"},
                      {"sentence_join", cfg.realization.sentence_join}};
  j["lexicon"] = cfg.lexicon_path.string();
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Evaluation manifest: one "label<TAB>path_a<TAB>path_b" per line. Blank
// lines and lines starting with '#' are skipped. Relative paths resolve
// against the manifest's directory. Text files lose one trailing newline.

inline std::vector<TextPair> load_pair_manifest(const std::filesystem::path& manifest) {
  const std::string text = read_file(manifest);
  std::vector<TextPair> pairs;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto load_text = [&](const std::string& rel) {
    std::filesystem::path p = rel;
    if (p.is_relative()) p = manifest.parent_path() / p;
    std::string s = read_file(p);
    if (!s.empty() && s.back() == '\n') s.pop_back();
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    for (auto tab = line.find('\t'); tab != std::string::npos; tab = line.find('\t', start)) {
      cols.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    cols.push_back(line.substr(start));
    if (cols.size() != 3)
      throw ParseError(manifest.string() + ": expected label<TAB>path_a<TAB>path_b", line_no, 1);
    pairs.push_back({cols[0], load_text(cols[1]), load_text(cols[2])});
  }
  if (pairs.empty()) throw ValidationError(manifest.string() + ": manifest lists no pairs");
  return pairs;
}

}  // namespace retell
