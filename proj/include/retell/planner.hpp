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

// Re-aggregation of nucleus/satellite pairs and point-of-view rewriting.
// Aggregation is expressed as join directives that the realizer consumes;
// the clause trees themselves are never merged.

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "retell/deaggregate.hpp"
#include "retell/dsynts.hpp"

namespace retell {

enum class Variation { EST, soSN, becauseNS, becauseSN, NS, N };

inline constexpr std::array<Variation, 6> kAllVariations{
    Variation::EST, Variation::soSN, Variation::becauseNS,
    Variation::becauseSN, Variation::NS, Variation::N};

inline std::string_view to_string(Variation v) {
  switch (v) {
    case Variation::EST: return "EST";
    case Variation::soSN: return "soSN";
    case Variation::becauseNS: return "becauseNS";
    case Variation::becauseSN: return "becauseSN";
    case Variation::NS: return "NS";
    case Variation::N: return "N";
  }
  return "?";
}

// Case-sensitive, except that "est" is accepted for EST.
inline std::optional<Variation> parse_variation(std::string_view s) {
  if (s == "est") return Variation::EST;
  for (auto v : kAllVariations)
    if (to_string(v) == s) return v;
  return std::nullopt;
}

struct JoinDirective {
  enum class Position { between, leading };

  std::string connective;
  Position position = Position::between;
  bool comma = false;

  bool operator==(const JoinDirective&) const = default;
};

// Clauses joined into one sentence when joins is non-empty (one directive per
// boundary); otherwise each clause is its own sentence.
struct SentencePlan {
  std::vector<DSyntTree> clauses;
  std::vector<JoinDirective> joins;

  bool single_sentence() const { return !joins.empty() || clauses.size() == 1; }

  // Debugging aid: one clause id per line, each followed by its join.
  std::string debug_string() const {
    std::string out;
    for (std::size_t i = 0; i < clauses.size(); ++i) {
      out += clauses[i].id;
      if (i < joins.size()) {
        const auto& j = joins[i];
        out += std::string("\t") + (j.position == JoinDirective::Position::leading ? "leading" : "between") +
               " \"" + j.connective + "\"" + (j.comma ? " comma" : "");
      }
      out += '\n';
    }
    return out;
  }
};

struct POVConfig {
  enum class Target { first, third };

  std::string narrator_lexeme = "narrator";
  Target target_person = Target::first;
};

// Lexeme given to narrator mentions rewritten as first-person pronouns.
inline constexpr std::string_view kFirstPersonLexeme = "I";

inline SentencePlan plan_variation(const TextPlan& plan, const DSyntTree& nucleus,
                                   const DSyntTree& satellite, const DSyntTree& original,
                                   Variation v) {
  if (plan.nucleus_id != nucleus.id || plan.satellite_id != satellite.id)
    throw std::invalid_argument("text plan (" + plan.nucleus_id + ", " + plan.satellite_id +
                                ") does not reference trees (" + nucleus.id + ", " + satellite.id + ")");
  using P = JoinDirective::Position;
  switch (v) {
    case Variation::EST: return {{original}, {}};
    case Variation::soSN: return {{satellite, nucleus}, {{"so", P::between, true}}};
    case Variation::becauseNS: return {{nucleus, satellite}, {{"because", P::between, false}}};
    case Variation::becauseSN: return {{satellite, nucleus}, {{"because", P::leading, true}}};
    case Variation::NS: return {{nucleus, satellite}, {}};
    case Variation::N: return {{nucleus}, {}};
  }
  throw std::invalid_argument("unknown variation");
}

namespace detail {

inline void apply_pov_node(DSyntNode& n, const POVConfig& cfg) {
  if (n.lexeme == cfg.narrator_lexeme) {
    n.lexeme = std::string(kFirstPersonLexeme);
    n.word_class = WordClass::pronoun;
    n.person = Person::first;
    n.number = Number::sg;
    n.article.reset();
  }
  for (auto& c : n.children) apply_pov_node(c, cfg);
}

}  // namespace detail

// First person turns narrator mentions into first-person singular pronouns;
// case is chosen later from grammatical role. Third person is the encoding's
// native point of view and leaves the tree alone.
inline DSyntTree apply_pov(DSyntTree tree, const POVConfig& cfg) {
  if (cfg.target_person == POVConfig::Target::first && !cfg.narrator_lexeme.empty())
    detail::apply_pov_node(tree.root, cfg);
  return tree;
}

inline bool is_content_class(WordClass wc) {
  return wc == WordClass::verb || wc == WordClass::common_noun || wc == WordClass::proper_noun ||
         wc == WordClass::adjective || wc == WordClass::adverb;
}

// Multiset of content lexemes (nouns, verbs, adjectives, adverbs) as counts.
inline std::map<std::string, int> content_lexemes(const DSyntNode& root) {
  std::map<std::string, int> out;
  for_each_node(root, [&](const DSyntNode& n, const NodePath&) {
    if (is_content_class(n.word_class)) ++out[n.lexeme];
  });
  return out;
}

inline std::map<std::string, int> content_lexemes(const SentencePlan& plan) {
  std::map<std::string, int> out;
  for (const auto& c : plan.clauses)
    for (const auto& [k, v] : content_lexemes(c.root)) out[k] += v;
  return out;
}

}  // namespace retell
