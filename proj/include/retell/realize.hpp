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

// Surface realization: DSyntS clauses and sentence plans to English text.
//
// Clause order: [leading connective] subject [preverbal adverbs] verb
// II III [postverbal adverbs] ATTR phrases in input order [between join].
// Noun phrases: determiner or possessor, premodifiers, head, prepositional
// postmodifiers. Infinitives with an explicit subject come out as
// "for NP to VP", otherwise "to VP".

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "retell/dsynts.hpp"
#include "retell/error.hpp"
#include "retell/lexicon.hpp"
#include "retell/planner.hpp"

namespace retell {

struct RealizationConfig {
  enum class AdverbPosition { postverbal, preverbal };

  AdverbPosition adverb_position = AdverbPosition::postverbal;
  std::string sentence_join = " ";
};

struct ReflexiveSubstitution {
  std::size_t object_index;  // index of the rel II child among the verb's children
  std::string form;

  bool operator==(const ReflexiveSubstitution&) const = default;
};

inline constexpr int kMaxGenitiveDepth = 8;

namespace detail {

inline LexiconEntry entry_for(const Lexicon& lex, const DSyntNode& n) {
  if (const auto* e = lex.find(n.lexeme, n.word_class)) return *e;
  return LexiconEntry{n.lexeme, n.word_class, {}};
}

// "an" before vowel sounds: vowel-initial letter, adjusted by exceptions.
inline bool takes_an(std::string_view word) {
  static constexpr std::string_view kAnExceptions[] = {"hour", "honest", "honor", "honour", "heir", "herb"};
  static constexpr std::string_view kAExceptions[] = {"uni", "use", "usu", "uti", "eu", "one", "once", "ewe", "uk"};
  std::string w;
  for (char c : word) w += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (auto p : kAnExceptions)
    if (w.starts_with(p)) return true;
  for (auto p : kAExceptions)
    if (w.starts_with(p)) return false;
  return !w.empty() && is_vowel(w.front());
}

inline void append(std::vector<std::string>& dst, std::vector<std::string> src) {
  for (auto& s : src) dst.push_back(std::move(s));
}

inline std::string join_tokens(const std::vector<std::string>& toks) {
  std::string out;
  for (const auto& t : toks) {
    if (t.empty()) continue;
    if (!out.empty() && t != ",") out += ' ';
    out += t;
  }
  return out;
}

inline std::string finish_sentence(const std::vector<std::string>& toks) {
  std::string s = join_tokens(toks);
  for (char& c : s) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      break;
    }
  }
  return s + ".";
}

// Realizes the clauses of one tree; tracks the current node path so errors
// can name the offending node.
class ClauseRealizer {
 public:
  ClauseRealizer(const Lexicon& lex, const RealizationConfig& cfg, std::string tree_id)
      : lex_(lex), cfg_(cfg), tree_id_(std::move(tree_id)) {}

  std::vector<std::string> clause(const DSyntNode& verb) {
    if (verb.word_class != WordClass::verb) fail(verb, "clause root is not a verb");
    if (verb.is_infinitive()) return infinitive(verb);
    const DSyntNode* subject = verb.child(Rel::I);
    if (!subject) fail(verb, "finite verb has no rel I subject");
    std::vector<std::string> toks;
    {
      Scope s(*this, verb, *subject);
      if (!subject->is_nominal()) fail(*subject, "subject is not a noun phrase");
      append(toks, noun_phrase(*subject, CaseRole::subject, 0));
    }
    Features f;
    f.tense = verb.tense.value_or(Tense::pres);
    f.person = subject->person.value_or(Person::third);
    f.number = subject->number.value_or(Number::sg);
    std::string form = inflect(entry_for(lex_, verb), f);
    if (cfg_.adverb_position == RealizationConfig::AdverbPosition::preverbal)
      append(toks, adverbs(verb));
    toks.push_back(std::move(form));
    append(toks, complements(verb));
    return toks;
  }

  std::vector<std::string> noun_phrase(const DSyntNode& n, CaseRole role, int depth) {
    if (depth > kMaxGenitiveDepth)
      throw StructuralError(where(n) + ": genitive nesting deeper than " + std::to_string(kMaxGenitiveDepth));
    if (n.word_class == WordClass::pronoun) return {pronoun(n, role)};
    if (!n.is_noun())
      fail(n, "word class " + std::string(to_string(n.word_class)) + " cannot head a noun phrase");

    std::vector<std::string> toks;
    std::optional<std::size_t> article_at;
    const DSyntNode* possessor = nullptr;
    for (const auto& c : n.children)
      if (c.rel == Rel::I && c.is_nominal()) possessor = &c;

    if (possessor) {
      bool bare = possessor->word_class == WordClass::common_noun &&
                  (!possessor->article || possessor->article == Article::no_art);
      if (bare && n.article == Article::def) toks.push_back("the");
      Scope s(*this, n, *possessor);
      append(toks, noun_phrase(*possessor, CaseRole::possessive_det, depth + 1));
    } else if (n.article == Article::def) {
      toks.push_back("the");
    } else if (n.article == Article::indef) {
      article_at = toks.size();
      toks.push_back("a");
    }

    std::vector<std::string> post;
    for (const auto& c : n.children) {
      if (&c == possessor) continue;
      Scope s(*this, n, c);
      if (c.rel != Rel::ATTR) fail(c, "unsupported noun dependent rel " + std::string(c.rel ? to_string(*c.rel) : "?"));
      switch (c.word_class) {
        case WordClass::adjective: append(toks, adjective_phrase(c)); break;
        case WordClass::common_noun:
        case WordClass::proper_noun: toks.push_back(surface(c.lexeme)); break;
        case WordClass::preposition: append(post, prepositional(c)); break;
        default: fail(c, "unsupported noun modifier class " + std::string(to_string(c.word_class)));
      }
    }

    Features f;
    f.number = n.number.value_or(Number::sg);
    toks.push_back(inflect(entry_for(lex_, n), f));
    append(toks, std::move(post));

    if (article_at && *article_at + 1 < toks.size() && takes_an(toks[*article_at + 1]))
      toks[*article_at] = "an";
    if (role == CaseRole::possessive_det) {
      std::string& last = toks.back();
      last += (f.number == Number::pl && last.ends_with("s")) ? "'" : "'s";
    }
    return toks;
  }

  std::optional<ReflexiveSubstitution> reflexive(const DSyntNode& verb) const {
    const DSyntNode* subj = nullptr;
    const DSyntNode* obj = nullptr;
    std::size_t obj_index = 0;
    for (std::size_t i = 0; i < verb.children.size(); ++i) {
      const auto& c = verb.children[i];
      if (c.rel == Rel::I && !subj) subj = &c;
      if (c.rel == Rel::II && !obj) {
        obj = &c;
        obj_index = i;
      }
    }
    if (!subj || !obj || !subj->is_nominal() || !obj->is_nominal()) return std::nullopt;
    if (subj->lexeme != obj->lexeme || subj->number != obj->number || subj->article != obj->article)
      return std::nullopt;
    const Number num = subj->number.value_or(Number::sg);
    const Person per = subj->person.value_or(Person::third);
    if (subj->word_class == WordClass::pronoun) {
      const auto* e = lex_.find(subj->lexeme, WordClass::pronoun);
      if (!e) return std::nullopt;
      auto form = e->pronoun_form(CaseRole::reflexive, num, per);
      if (!form) return std::nullopt;
      return ReflexiveSubstitution{obj_index, *form};
    }
    if (per == Person::first) return ReflexiveSubstitution{obj_index, num == Number::pl ? "ourselves" : "myself"};
    if (per == Person::second) return ReflexiveSubstitution{obj_index, num == Number::pl ? "yourselves" : "yourself"};
    if (num == Number::pl) return ReflexiveSubstitution{obj_index, "themselves"};
    std::string gender;
    if (const auto* e = lex_.find(subj->lexeme, subj->word_class))
      gender = e->form("gender").value_or("");
    if (gender == "masc") return ReflexiveSubstitution{obj_index, "himself"};
    if (gender == "fem") return ReflexiveSubstitution{obj_index, "herself"};
    return ReflexiveSubstitution{obj_index, "itself"};
  }

 private:
  const Lexicon& lex_;
  const RealizationConfig& cfg_;
  std::string tree_id_;
  NodePath path_;
  std::vector<const DSyntNode*> stack_;

  // Pushes the path step from parent to child for the lifetime of the scope.
  struct Scope {
    ClauseRealizer& r;
    Scope(ClauseRealizer& r, const DSyntNode& parent, const DSyntNode& child) : r(r) {
      r.path_.push_back(static_cast<std::size_t>(&child - parent.children.data()));
    }
    ~Scope() { r.path_.pop_back(); }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;
  };

  std::string where(const DSyntNode& n) const {
    return "dsynts '" + tree_id_ + "' node " + format_path(path_) + " (lexeme '" + n.lexeme + "')";
  }
  [[noreturn]] void fail(const DSyntNode& n, const std::string& why) const {
    throw RealizationError(where(n) + ": " + why);
  }

  std::string pronoun(const DSyntNode& n, CaseRole role) const {
    const auto* e = lex_.find(n.lexeme, WordClass::pronoun);
    if (!e) fail(n, "pronoun not in lexicon");
    auto form = e->pronoun_form(role, n.number.value_or(Number::sg), n.person.value_or(Person::third));
    if (!form) fail(n, "lexicon has no " + std::string(to_string(role)) + " form");
    return *form;
  }

  std::vector<std::string> adverbs(const DSyntNode& head) const {
    std::vector<std::string> out;
    for (const auto& c : head.children)
      if (c.rel == Rel::ATTR && c.word_class == WordClass::adverb) out.push_back(surface(c.lexeme));
    return out;
  }

  std::vector<std::string> infinitive(const DSyntNode& verb) {
    std::vector<std::string> toks;
    if (const DSyntNode* subject = verb.child(Rel::I)) {
      Scope s(*this, verb, *subject);
      if (!subject->is_nominal()) fail(*subject, "infinitive subject is not a noun phrase");
      toks.push_back("for");
      append(toks, noun_phrase(*subject, CaseRole::object, 0));
    }
    toks.push_back("to");
    if (cfg_.adverb_position == RealizationConfig::AdverbPosition::preverbal)
      append(toks, adverbs(verb));
    toks.push_back(surface(verb.lexeme));
    append(toks, complements(verb));
    return toks;
  }

  std::vector<std::string> complements(const DSyntNode& verb) {
    std::vector<std::string> toks;
    auto refl = reflexive(verb);
    for (Rel r : {Rel::II, Rel::III}) {
      const DSyntNode* arg = verb.child(r);
      if (!arg) continue;
      Scope s(*this, verb, *arg);
      if (r == Rel::II && refl) toks.push_back(refl->form);
      else append(toks, argument(*arg));
    }
    if (cfg_.adverb_position == RealizationConfig::AdverbPosition::postverbal)
      append(toks, adverbs(verb));
    for (const auto& c : verb.children) {
      if (c.rel != Rel::ATTR || c.word_class == WordClass::adverb) continue;
      Scope s(*this, verb, c);
      if (c.word_class == WordClass::preposition) append(toks, prepositional(c));
      else if (c.word_class == WordClass::adjective) append(toks, adjective_phrase(c));
      else fail(c, "unsupported clause modifier class " + std::string(to_string(c.word_class)));
    }
    return toks;
  }

  std::vector<std::string> argument(const DSyntNode& n) {
    if (n.is_nominal()) return noun_phrase(n, CaseRole::object, 0);
    switch (n.word_class) {
      case WordClass::verb: return n.is_infinitive() ? infinitive(n) : clause(n);
      case WordClass::adjective: return adjective_phrase(n);
      case WordClass::preposition: return prepositional(n);
      case WordClass::adverb: return {surface(n.lexeme)};
      default: fail(n, "word class " + std::string(to_string(n.word_class)) + " cannot be an argument");
    }
  }

  std::vector<std::string> adjective_phrase(const DSyntNode& adj) {
    std::vector<std::string> toks = adverbs(adj);
    toks.push_back(surface(adj.lexeme));
    for (const auto& c : adj.children) {
      if (c.rel == Rel::ATTR && c.word_class == WordClass::adverb) continue;
      Scope s(*this, adj, c);
      append(toks, argument(c));
    }
    return toks;
  }

  std::vector<std::string> prepositional(const DSyntNode& prep) {
    std::vector<std::string> toks{surface(prep.lexeme)};
    for (const auto& c : prep.children) {
      Scope s(*this, prep, c);
      append(toks, argument(c));
    }
    return toks;
  }
};

}  // namespace detail

// Rel II realizes as a reflexive pronoun when it repeats the subject
// (same lexeme, number and article).
inline std::optional<ReflexiveSubstitution> resolve_reflexive(const DSyntNode& verb, const Lexicon& lexicon) {
  RealizationConfig cfg;
  return detail::ClauseRealizer(lexicon, cfg, "").reflexive(verb);
}

inline std::vector<std::string> linearize_np(const DSyntNode& node, CaseRole role, const Lexicon& lexicon) {
  RealizationConfig cfg;
  return detail::ClauseRealizer(lexicon, cfg, "").noun_phrase(node, role, 0);
}

inline std::string realize(const SentencePlan& plan, const Lexicon& lexicon, const RealizationConfig& cfg = {}) {
  if (plan.clauses.empty()) throw std::invalid_argument("sentence plan has no clauses");
  std::vector<std::vector<std::string>> clauses;
  for (const auto& c : plan.clauses)
    clauses.push_back(detail::ClauseRealizer(lexicon, cfg, c.id).clause(c.root));

  if (plan.joins.empty()) {
    std::string out;
    for (const auto& toks : clauses) {
      if (!out.empty()) out += cfg.sentence_join;
      out += detail::finish_sentence(toks);
    }
    return out;
  }
  if (plan.joins.size() + 1 != plan.clauses.size())
    throw std::invalid_argument("sentence plan needs one join per clause boundary");

  using P = JoinDirective::Position;
  std::vector<std::string> toks;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i > 0 && plan.joins[i - 1].position == P::between) {
      if (plan.joins[i - 1].comma) toks.push_back(",");
      toks.push_back(plan.joins[i - 1].connective);
    }
    if (i < plan.joins.size() && plan.joins[i].position == P::leading) toks.push_back(plan.joins[i].connective);
    detail::append(toks, clauses[i]);
    if (i < plan.joins.size() && plan.joins[i].position == P::leading && plan.joins[i].comma) toks.push_back(",");
  }
  return detail::finish_sentence(toks);
}

// One clause as a standalone sentence.
inline std::string realize_sentence(const DSyntTree& tree, const Lexicon& lexicon, const RealizationConfig& cfg = {}) {
  return realize(SentencePlan{{tree}, {}}, lexicon, cfg);
}

}  // namespace retell
