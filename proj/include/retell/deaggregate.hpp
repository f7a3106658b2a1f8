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

// Splits "in order to" contingency clauses into a nucleus clause, a
// "want"-motivation satellite clause and the contingency text plan that lets
// the sentence planner put them back together in different ways.

#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "retell/dsynts.hpp"
#include "retell/error.hpp"
#include "retell/xml.hpp"

namespace retell {

inline constexpr std::string_view kInOrderLexeme = "in_order";
inline constexpr std::string_view kContingencyRelation = "contingency_cause";
inline constexpr std::string_view kSatelliteVerb = "want";

struct ContingencySite {
  std::string host_tree_id;
  NodePath path_to_in_order;
  DSyntNode embedded_verb;
  std::optional<DSyntNode> embedded_subject;

  bool operator==(const ContingencySite&) const = default;
};

struct TextPlan {
  std::string voice = "Narrator";
  std::string relation_name = std::string(kContingencyRelation);
  std::string nucleus_id;
  std::string satellite_id;

  bool operator==(const TextPlan&) const = default;
};

struct Deaggregation {
  DSyntTree nucleus;
  DSyntTree satellite;
  TextPlan plan;
};

inline bool is_in_order_site(const DSyntNode& n) {
  return n.lexeme == kInOrderLexeme && n.word_class == WordClass::preposition && n.rel == Rel::ATTR;
}

// First in_order modifier in preorder, with its embedded clause resolved.
inline std::optional<ContingencySite> detect_contingency(const DSyntTree& tree) {
  auto paths = find_subtree(tree, is_in_order_site);
  if (paths.empty()) return std::nullopt;
  const DSyntNode& site = *node_at(tree.root, paths.front());
  const DSyntNode* verb = site.child(Rel::II);
  if (!verb || verb->word_class != WordClass::verb)
    throw MalformedContingencyError("dsynts '" + tree.id + "' node " + format_path(paths.front()) +
                                    ": in_order has no embedded verb");
  if (verb->mood != Mood::inf_to)
    throw MalformedContingencyError("dsynts '" + tree.id + "' node " + format_path(paths.front()) +
                                    ": embedded verb '" + verb->lexeme + "' is not an infinitive");
  ContingencySite out;
  out.host_tree_id = tree.id;
  out.path_to_in_order = paths.front();
  out.embedded_verb = *verb;
  if (const DSyntNode* subj = verb->child(Rel::I)) out.embedded_subject = *subj;
  return out;
}

namespace detail {

inline std::pair<std::string, std::string> split_ids(const std::string& id) {
  auto us = id.find('_');
  if (us != std::string::npos && us > 0 && us + 1 < id.size() && id.find('_', us + 1) == std::string::npos)
    return {id.substr(0, us), id.substr(us + 1)};
  return {id + "_n", id + "_s"};
}

inline std::string join_ids(const std::string& nucleus, const std::string& satellite) {
  auto strip = [](const std::string& s, std::string_view suffix) -> std::optional<std::string> {
    if (s.size() > suffix.size() && s.ends_with(suffix)) return s.substr(0, s.size() - suffix.size());
    return std::nullopt;
  };
  auto n = strip(nucleus, "_n");
  auto s = strip(satellite, "_s");
  if (n && s && *n == *s) return *n;
  return nucleus + "_" + satellite;
}

}  // namespace detail

inline Deaggregation deaggregate(const DSyntTree& tree, const ContingencySite& site,
                                 std::string_view voice = "Narrator") {
  if (site.host_tree_id != tree.id)
    throw StructuralError("contingency site belongs to dsynts '" + site.host_tree_id +
                          "', not '" + tree.id + "'");
  if (site.path_to_in_order.empty())
    throw StructuralError("contingency site path is empty in dsynts '" + tree.id + "'");
  const DSyntNode* in_order = node_at(tree.root, site.path_to_in_order);
  if (!in_order || !is_in_order_site(*in_order) || !in_order->child(Rel::II) ||
      in_order->child(Rel::II)->lexeme != site.embedded_verb.lexeme)
    throw StructuralError("stale contingency site " + format_path(site.path_to_in_order) +
                          " in dsynts '" + tree.id + "'");

  auto [nucleus_id, satellite_id] = detail::split_ids(tree.id);

  Deaggregation out;
  out.nucleus.id = nucleus_id;
  out.nucleus.root = tree.root;
  NodePath parent_path(site.path_to_in_order.begin(), site.path_to_in_order.end() - 1);
  DSyntNode* parent = node_at(out.nucleus.root, parent_path);
  parent->children.erase(parent->children.begin() +
                         static_cast<std::ptrdiff_t>(site.path_to_in_order.back()));

  const DSyntNode* subject = site.embedded_subject ? &*site.embedded_subject
                                                   : out.nucleus.root.child(Rel::I);
  if (!subject)
    throw MalformedContingencyError("dsynts '" + tree.id +
                                    "': neither the embedded clause nor the host clause has a subject");

  DSyntNode want;
  want.lexeme = std::string(kSatelliteVerb);
  want.word_class = WordClass::verb;
  want.rel = tree.root.rel;
  want.tense = tree.root.tense;
  want.mood = tree.root.mood;

  DSyntNode agent = *subject;
  agent.rel = Rel::I;
  want.children.push_back(std::move(agent));

  DSyntNode complement = *in_order->child(Rel::II);
  std::erase_if(complement.children, [](const DSyntNode& c) { return c.rel == Rel::I; });
  complement.rel = Rel::II;
  complement.mood = Mood::inf_to;
  complement.tense = Tense::inf_to;
  want.children.push_back(std::move(complement));

  out.satellite.id = satellite_id;
  out.satellite.root = std::move(want);

  out.plan.voice = std::string(voice);
  out.plan.nucleus_id = out.nucleus.id;
  out.plan.satellite_id = out.satellite.id;
  return out;
}

// Inverse of deaggregate: puts the satellite's complement back under a fresh
// in_order node at the site's position, re-inserting the embedded subject
// only if the site had one.
inline DSyntTree reaggregate(const DSyntTree& nucleus, const DSyntTree& satellite,
                             const ContingencySite& site) {
  const DSyntNode* complement = satellite.root.child(Rel::II);
  if (!complement || site.path_to_in_order.empty())
    throw StructuralError("satellite '" + satellite.id + "' has no clausal complement");
  DSyntTree out;
  out.id = detail::join_ids(nucleus.id, satellite.id);
  out.root = nucleus.root;
  NodePath parent_path(site.path_to_in_order.begin(), site.path_to_in_order.end() - 1);
  DSyntNode* parent = node_at(out.root, parent_path);
  if (!parent || site.path_to_in_order.back() > parent->children.size())
    throw StructuralError("contingency site " + format_path(site.path_to_in_order) +
                          " does not fit nucleus '" + nucleus.id + "'");

  DSyntNode verb = site.embedded_verb;
  DSyntNode in_order;
  in_order.lexeme = std::string(kInOrderLexeme);
  in_order.word_class = WordClass::preposition;
  in_order.rel = Rel::ATTR;
  // The satellite may have been rewritten (POV) since de-aggregation; its
  // complement and agent are the current content.
  std::vector<DSyntNode> kids = complement->children;
  if (site.embedded_subject) {
    if (const DSyntNode* agent = satellite.root.child(Rel::I)) {
      auto pos = std::find_if(verb.children.begin(), verb.children.end(),
                              [](const DSyntNode& c) { return c.rel == Rel::I; });
      std::size_t at = static_cast<std::size_t>(pos - verb.children.begin());
      kids.insert(kids.begin() + static_cast<std::ptrdiff_t>(std::min(at, kids.size())), *agent);
    }
  }
  DSyntNode restored = *complement;
  restored.children = std::move(kids);
  restored.tense = site.embedded_verb.tense;
  restored.mood = site.embedded_verb.mood;
  in_order.children.push_back(std::move(restored));
  parent->children.insert(parent->children.begin() +
                              static_cast<std::ptrdiff_t>(site.path_to_in_order.back()),
                          std::move(in_order));
  return out;
}

// Variant for pre-split input with no recorded site: the in_order modifier is
// appended to the nucleus root and the satellite's agent becomes the explicit
// embedded subject.
inline DSyntTree reaggregate(const DSyntTree& nucleus, const DSyntTree& satellite) {
  const DSyntNode* complement = satellite.root.child(Rel::II);
  if (!complement) throw StructuralError("satellite '" + satellite.id + "' has no clausal complement");
  ContingencySite site;
  site.host_tree_id = detail::join_ids(nucleus.id, satellite.id);
  site.path_to_in_order = {nucleus.root.children.size()};
  site.embedded_verb = *complement;
  if (const DSyntNode* agent = satellite.root.child(Rel::I)) {
    site.embedded_subject = *agent;
    site.embedded_verb.children.insert(site.embedded_verb.children.begin(), *agent);
  }
  return reaggregate(nucleus, satellite, site);
}

// ---------------------------------------------------------------------------
// <speechplan> text plan XML.

inline void write_text_plan(std::ostream& os, const TextPlan& plan, int depth = 0) {
  const std::string in(static_cast<std::size_t>(depth) * 2, ' ');
  os << in << "<speechplan voice=\"" << xml::escape(plan.voice) << "\">\n"
     << in << "  <rstplan>\n"
     << in << "    <relation name=\"" << xml::escape(plan.relation_name) << "\">\n"
     << in << "      <proposition id=\"1\" ns=\"nucleus\"/>\n"
     << in << "      <proposition id=\"2\" ns=\"satellite\"/>\n"
     << in << "    </relation>\n"
     << in << "  </rstplan>\n"
     << in << "  <proposition dialogue_act=\"" << xml::escape(plan.nucleus_id) << "\" id=\"1\"/>\n"
     << in << "  <proposition dialogue_act=\"" << xml::escape(plan.satellite_id) << "\" id=\"2\"/>\n"
     << in << "</speechplan>\n";
}

inline std::string serialize_text_plan(const TextPlan& plan) {
  std::ostringstream os;
  write_text_plan(os, plan);
  return os.str();
}

// Reads the plan from a <speechplan> element. Returns nullopt when the
// element has no <rstplan>. Dialogue act ids are not checked against trees
// here; callers with the enclosing bundle do that.
inline std::optional<TextPlan> text_plan_from_xml(const xml::Element& speechplan) {
  auto rst = speechplan.children_named("rstplan");
  if (rst.empty()) return std::nullopt;
  const std::string where = "speechplan at line " + std::to_string(speechplan.line);
  if (rst.size() > 1) throw ValidationError(where + ": more than one rstplan");
  auto relations = rst.front()->children_named("relation");
  if (relations.size() != 1) throw ValidationError(where + ": rstplan must hold exactly one relation");
  const xml::Element& rel = *relations.front();
  TextPlan plan;
  if (const auto* v = speechplan.attribute("voice"); v && !v->empty()) plan.voice = *v;
  const auto* name = rel.attribute("name");
  if (!name || *name != kContingencyRelation)
    throw ValidationError(where + ": unsupported relation '" + (name ? *name : "") + "'");
  plan.relation_name = *name;

  std::string nucleus_prop, satellite_prop;
  for (const auto* p : rel.children_named("proposition")) {
    const auto* id = p->attribute("id");
    const auto* ns = p->attribute("ns");
    if (!id || !ns) throw ValidationError(where + ": relation proposition needs id and ns");
    if (*ns == "nucleus") nucleus_prop = *id;
    else if (*ns == "satellite") satellite_prop = *id;
    else throw ValidationError(where + ": unknown ns '" + *ns + "'");
  }
  if (nucleus_prop.empty() || satellite_prop.empty())
    throw ValidationError(where + ": relation needs one nucleus and one satellite");

  std::map<std::string, std::string> acts;
  for (const auto* p : speechplan.children_named("proposition")) {
    const auto* id = p->attribute("id");
    const auto* act = p->attribute("dialogue_act");
    if (!id || !act) throw ValidationError(where + ": proposition needs id and dialogue_act");
    acts[*id] = *act;
  }
  auto resolve = [&](const std::string& prop) {
    auto it = acts.find(prop);
    if (it == acts.end())
      throw ReferenceError(where + ": relation proposition " + prop + " has no dialogue_act");
    return it->second;
  };
  plan.nucleus_id = resolve(nucleus_prop);
  plan.satellite_id = resolve(satellite_prop);
  if (plan.nucleus_id == plan.satellite_id)
    throw ValidationError(where + ": nucleus and satellite name the same tree");
  return plan;
}

}  // namespace retell
