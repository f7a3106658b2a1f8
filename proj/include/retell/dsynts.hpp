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

// Deep Syntactic Structure trees: lexicalized dependency trees whose arcs are
// labelled I (subject), II (direct object), III (indirect object) or ATTR
// (modifier), with grammatical features on each node. Reads and writes the
// <dsynts>/<dsyntnode> XML dialect.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "retell/error.hpp"
#include "retell/xml.hpp"

namespace retell {

enum class WordClass { verb, common_noun, proper_noun, preposition, pronoun, adjective, adverb, conjunction };
enum class Rel { I, II, III, ATTR };
enum class Tense { past, pres, fut, inf_to };
enum class Mood { ind, inf_to };
enum class Number { sg, pl };
enum class Person { first, second, third };
enum class Article { def, indef, no_art };

namespace detail {

template <class E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

inline constexpr NameTable<WordClass, 8> kWordClassNames{{
    {WordClass::verb, "verb"},
    {WordClass::common_noun, "common_noun"},
    {WordClass::proper_noun, "proper_noun"},
    {WordClass::preposition, "preposition"},
    {WordClass::pronoun, "pronoun"},
    {WordClass::adjective, "adjective"},
    {WordClass::adverb, "adverb"},
    {WordClass::conjunction, "conjunction"},
}};
inline constexpr NameTable<Rel, 4> kRelNames{{
    {Rel::I, "I"}, {Rel::II, "II"}, {Rel::III, "III"}, {Rel::ATTR, "ATTR"}}};
inline constexpr NameTable<Tense, 4> kTenseNames{{
    {Tense::past, "past"}, {Tense::pres, "pres"}, {Tense::fut, "fut"}, {Tense::inf_to, "inf-to"}}};
inline constexpr NameTable<Mood, 2> kMoodNames{{{Mood::ind, "ind"}, {Mood::inf_to, "inf-to"}}};
inline constexpr NameTable<Number, 2> kNumberNames{{{Number::sg, "sg"}, {Number::pl, "pl"}}};
inline constexpr NameTable<Person, 3> kPersonNames{{
    {Person::first, "1st"}, {Person::second, "2nd"}, {Person::third, "3rd"}}};
inline constexpr NameTable<Article, 3> kArticleNames{{
    {Article::def, "def"}, {Article::indef, "indef"}, {Article::no_art, "no-art"}}};

template <class E, std::size_t N>
constexpr std::string_view name_of(const NameTable<E, N>& table, E value) {
  for (const auto& [e, s] : table)
    if (e == value) return s;
  return "?";
}

template <class E, std::size_t N>
constexpr std::optional<E> value_of(const NameTable<E, N>& table, std::string_view s) {
  for (const auto& [e, name] : table)
    if (name == s) return e;
  return std::nullopt;
}

}  // namespace detail

inline std::string_view to_string(WordClass v) { return detail::name_of(detail::kWordClassNames, v); }
inline std::string_view to_string(Rel v) { return detail::name_of(detail::kRelNames, v); }
inline std::string_view to_string(Tense v) { return detail::name_of(detail::kTenseNames, v); }
inline std::string_view to_string(Mood v) { return detail::name_of(detail::kMoodNames, v); }
inline std::string_view to_string(Number v) { return detail::name_of(detail::kNumberNames, v); }
inline std::string_view to_string(Person v) { return detail::name_of(detail::kPersonNames, v); }
inline std::string_view to_string(Article v) { return detail::name_of(detail::kArticleNames, v); }

inline std::optional<WordClass> parse_word_class(std::string_view s) {
  return detail::value_of(detail::kWordClassNames, s);
}

struct DSyntNode {
  std::string lexeme;
  WordClass word_class = WordClass::verb;
  // Required below the root. Roots may carry one too (the reference corpus
  // writes rel="II" on clause roots); it is kept for round-tripping only.
  std::optional<Rel> rel;
  std::optional<Tense> tense;
  std::optional<Mood> mood;
  std::string mode;
  std::optional<Number> number;
  std::optional<Person> person;
  std::optional<Article> article;
  bool extrapo = false;  // recorded, never interpreted
  std::map<std::string, std::string> extra;  // unrecognized attributes, verbatim
  std::vector<DSyntNode> children;

  bool operator==(const DSyntNode&) const = default;

  bool is_noun() const {
    return word_class == WordClass::common_noun || word_class == WordClass::proper_noun;
  }
  bool is_nominal() const { return is_noun() || word_class == WordClass::pronoun; }
  bool is_infinitive() const { return tense == Tense::inf_to || mood == Mood::inf_to; }

  // First child with the given relation, or nullptr.
  const DSyntNode* child(Rel r) const {
    for (const auto& c : children)
      if (c.rel == r) return &c;
    return nullptr;
  }
  DSyntNode* child(Rel r) {
    for (auto& c : children)
      if (c.rel == r) return &c;
    return nullptr;
  }
};

struct DSyntTree {
  std::string id;
  DSyntNode root;

  bool operator==(const DSyntTree&) const = default;
};

// Child indices from the root; the empty path names the root.
using NodePath = std::vector<std::size_t>;

inline std::string format_path(const NodePath& path) {
  if (path.empty()) return "/";
  std::string out;
  for (auto i : path) out += "/" + std::to_string(i);
  return out;
}

inline const DSyntNode* node_at(const DSyntNode& root, const NodePath& path) {
  const DSyntNode* n = &root;
  for (auto i : path) {
    if (i >= n->children.size()) return nullptr;
    n = &n->children[i];
  }
  return n;
}

inline DSyntNode* node_at(DSyntNode& root, const NodePath& path) {
  return const_cast<DSyntNode*>(node_at(std::as_const(root), path));
}

// Preorder visit; f receives (node, path).
template <class F>
void for_each_node(const DSyntNode& root, F&& f) {
  NodePath path;
  auto walk = [&](auto& self, const DSyntNode& n) -> void {
    f(n, std::as_const(path));
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      path.push_back(i);
      self(self, n.children[i]);
      path.pop_back();
    }
  };
  walk(walk, root);
}

// Preorder paths of every node satisfying pred.
template <class Pred>
std::vector<NodePath> find_subtree(const DSyntTree& tree, Pred&& pred) {
  std::vector<NodePath> out;
  for_each_node(tree.root, [&](const DSyntNode& n, const NodePath& p) {
    if (pred(n)) out.push_back(p);
  });
  return out;
}

inline std::size_t count_nodes(const DSyntNode& root) {
  std::size_t n = 1;
  for (const auto& c : root.children) n += count_nodes(c);
  return n;
}

// ---------------------------------------------------------------------------
// Validation

namespace detail {

inline std::string describe(const std::string& tree_id, const NodePath& path, const DSyntNode& n) {
  return "dsynts '" + tree_id + "' node " + format_path(path) + " (lexeme '" + n.lexeme + "')";
}

inline void validate_node(const std::string& tree_id, const DSyntNode& n, NodePath& path) {
  auto bad = [&](const std::string& what) {
    throw ValidationError(describe(tree_id, path, n) + ": " + what);
  };
  if (n.lexeme.empty()) bad("missing lexeme");
  if (!path.empty() && !n.rel) bad("missing rel on non-root node");
  if (n.word_class == WordClass::verb && n.article) bad("verb carries an article");
  if (n.is_noun() && (n.tense || n.mood)) bad("noun carries tense or mood");
  int seen[3] = {0, 0, 0};
  for (const auto& c : n.children) {
    if (c.rel && *c.rel != Rel::ATTR) {
      int k = static_cast<int>(*c.rel);
      if (++seen[k] > 1) bad("more than one child with rel " + std::string(to_string(*c.rel)));
    }
  }
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    path.push_back(i);
    validate_node(tree_id, n.children[i], path);
    path.pop_back();
  }
}

}  // namespace detail

// Throws ValidationError naming the first offending node.
inline void validate(const DSyntTree& tree) {
  if (tree.id.empty()) throw ValidationError("dsynts element without id");
  NodePath path;
  detail::validate_node(tree.id, tree.root, path);
  if (tree.root.word_class != WordClass::verb)
    throw ValidationError(detail::describe(tree.id, {}, tree.root) + ": clause root is not a verb");
}

// ---------------------------------------------------------------------------
// XML reading

namespace detail {

template <class E, std::size_t N>
std::optional<E> enum_attribute(const NameTable<E, N>& table, const std::string& value,
                                std::string_view attr, const std::string& where) {
  if (value.empty()) return std::nullopt;
  auto v = value_of(table, value);
  if (!v) throw ValidationError(where + ": unknown " + std::string(attr) + " '" + value + "'");
  return v;
}

inline DSyntNode node_from_xml(const xml::Element& e, const std::string& tree_id, NodePath& path) {
  if (e.name != "dsyntnode")
    throw ValidationError("dsynts '" + tree_id + "' node " + format_path(path) +
                          ": unexpected element <" + e.name + "> at line " + std::to_string(e.line));
  DSyntNode n;
  if (const auto* lex = e.attribute("lexeme")) n.lexeme = *lex;
  const std::string where = describe(tree_id, path, n);
  bool have_class = false;
  for (const auto& [key, value] : e.attributes) {
    if (key == "lexeme") continue;
    if (key == "class") {
      auto wc = enum_attribute(kWordClassNames, value, "class", where);
      if (!wc) throw ValidationError(where + ": empty class");
      n.word_class = *wc;
      have_class = true;
    } else if (key == "rel") {
      n.rel = enum_attribute(kRelNames, value, "rel", where);
    } else if (key == "tense") {
      n.tense = enum_attribute(kTenseNames, value, "tense", where);
    } else if (key == "mood") {
      n.mood = enum_attribute(kMoodNames, value, "mood", where);
    } else if (key == "mode") {
      n.mode = value;
    } else if (key == "number") {
      n.number = enum_attribute(kNumberNames, value, "number", where);
    } else if (key == "person") {
      n.person = enum_attribute(kPersonNames, value, "person", where);
    } else if (key == "article") {
      n.article = enum_attribute(kArticleNames, value, "article", where);
    } else if (key == "extrapo") {
      if (value == "+") n.extrapo = true;
      else if (!value.empty() && value != "-")
        throw ValidationError(where + ": unknown extrapo '" + value + "'");
    } else {
      n.extra.emplace(key, value);
    }
  }
  if (!have_class) throw ValidationError(where + ": missing class");
  for (std::size_t i = 0; i < e.children.size(); ++i) {
    path.push_back(i);
    n.children.push_back(node_from_xml(e.children[i], tree_id, path));
    path.pop_back();
  }
  return n;
}

}  // namespace detail

// Converts one <dsynts> element; validates the result.
inline DSyntTree tree_from_xml(const xml::Element& e) {
  DSyntTree t;
  const auto* id = e.attribute("id");
  if (!id || id->empty())
    throw ValidationError("dsynts element at line " + std::to_string(e.line) + " has no id");
  t.id = *id;
  if (e.children.size() != 1)
    throw ValidationError("dsynts '" + t.id + "' must contain exactly one root dsyntnode");
  NodePath path;
  t.root = detail::node_from_xml(e.children.front(), t.id, path);
  validate(t);
  return t;
}

// Every <dsynts> element in the document, in document order, at any depth.
inline std::vector<DSyntTree> parse_dsynts(std::string_view xml_text) {
  xml::Element root = xml::parse(xml_text);
  std::vector<DSyntTree> out;
  auto collect = [&](auto& self, const xml::Element& e) -> void {
    if (e.name == "dsynts") {
      out.push_back(tree_from_xml(e));
      return;
    }
    for (const auto& c : e.children) self(self, c);
  };
  collect(collect, root);
  return out;
}

// ---------------------------------------------------------------------------
// XML writing. Attributes are emitted in alphabetical order, two-space indent.

namespace detail {

inline void write_node(std::ostream& os, const DSyntNode& n, int depth) {
  std::map<std::string, std::string> attrs = n.extra;
  attrs["class"] = std::string(to_string(n.word_class));
  attrs["lexeme"] = n.lexeme;
  if (n.rel) attrs["rel"] = std::string(to_string(*n.rel));
  if (n.tense) attrs["tense"] = std::string(to_string(*n.tense));
  if (n.mood) attrs["mood"] = std::string(to_string(*n.mood));
  if (!n.mode.empty()) attrs["mode"] = n.mode;
  if (n.number) attrs["number"] = std::string(to_string(*n.number));
  if (n.person) attrs["person"] = std::string(to_string(*n.person));
  if (n.article) attrs["article"] = std::string(to_string(*n.article));
  if (n.extrapo) attrs["extrapo"] = "+";

  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  os << indent << "<dsyntnode";
  for (const auto& [k, v] : attrs) os << ' ' << k << "=\"" << xml::escape(v) << '"';
  if (n.children.empty()) {
    os << "/>\n";
    return;
  }
  os << ">\n";
  for (const auto& c : n.children) write_node(os, c, depth + 1);
  os << indent << "</dsyntnode>\n";
}

}  // namespace detail

inline void write_tree(std::ostream& os, const DSyntTree& tree, int depth = 0) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  os << indent << "<dsynts id=\"" << xml::escape(tree.id) << "\">\n";
  detail::write_node(os, tree.root, depth + 1);
  os << indent << "</dsynts>\n";
}

inline std::string serialize_dsynts(std::span<const DSyntTree> trees) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (trees.empty()) {
    os << "<dsynts-list/>\n";
    return os.str();
  }
  os << "<dsynts-list>\n";
  for (const auto& t : trees) write_tree(os, t, 1);
  os << "</dsynts-list>\n";
  return os.str();
}

}  // namespace retell
