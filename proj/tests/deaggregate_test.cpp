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

#include <gtest/gtest.h>

#include "retell/corpus.hpp"
#include "retell/deaggregate.hpp"
#include "support/test_support.hpp"

namespace retell {
namespace {

DSyntTree organize_tree() {
  return parse_dsynts(read_file(testing::source_path("tests/data/contingency_5_6.xml"))).at(0);
}

// Expected nucleus, satellite and plan, authored independently of the code.
struct Expected {
  DSyntTree nucleus, satellite;
  TextPlan plan;
};

Expected expected_split() {
  auto bundle = load_story_bundle(testing::source_path("tests/data/deaggregated_5_6.xml"));
  const auto& sp = bundle.speech_plans.at(0);
  return {sp.trees.at(0), sp.trees.at(1), *sp.plan};
}

TEST(Deaggregate, DetectsInOrderSite) {
  auto t = organize_tree();
  auto site = detect_contingency(t);
  ASSERT_TRUE(site.has_value());
  EXPECT_EQ(site->host_tree_id, "5_6");
  EXPECT_EQ(format_path(site->path_to_in_order), "/3");
  EXPECT_EQ(site->embedded_verb.lexeme, "wait");
  ASSERT_TRUE(site->embedded_subject.has_value());
  EXPECT_EQ(site->embedded_subject->lexeme, "bird");
}

TEST(Deaggregate, NoSiteWithoutInOrder) {
  auto t = organize_tree();
  t.root.children.pop_back();
  EXPECT_FALSE(detect_contingency(t).has_value());
}

TEST(Deaggregate, MalformedSitesAreRejected) {
  auto t = organize_tree();
  auto no_verb = t;
  no_verb.root.children[3].children.clear();
  EXPECT_THROW(detect_contingency(no_verb), MalformedContingencyError);

  auto finite = t;
  finite.root.children[3].children[0].mood = Mood::ind;
  EXPECT_THROW(detect_contingency(finite), MalformedContingencyError);
}

TEST(Deaggregate, MatchesHandAuthoredSplit) {
  auto t = organize_tree();
  auto d = deaggregate(t, *detect_contingency(t));
  auto want = expected_split();
  EXPECT_EQ(d.nucleus, want.nucleus) << serialize_dsynts(std::vector<DSyntTree>{d.nucleus});
  EXPECT_EQ(d.satellite, want.satellite) << serialize_dsynts(std::vector<DSyntTree>{d.satellite});
  EXPECT_EQ(d.plan, want.plan);
  EXPECT_EQ(d.plan.relation_name, "contingency_cause");
  EXPECT_EQ(d.plan.nucleus_id, "5");
  EXPECT_EQ(d.plan.satellite_id, "6");
}

TEST(Deaggregate, TextPlanSerializesToExpectedLayout) {
  TextPlan p;
  p.nucleus_id = "5";
  p.satellite_id = "6";
  EXPECT_EQ(serialize_text_plan(p),
            "<speechplan voice=\"Narrator\">\n"
            "  <rstplan>\n"
            "    <relation name=\"contingency_cause\">\n"
            "      <proposition id=\"1\" ns=\"nucleus\"/>\n"
            "      <proposition id=\"2\" ns=\"satellite\"/>\n"
            "    </relation>\n"
            "  </rstplan>\n"
            "  <proposition dialogue_act=\"5\" id=\"1\"/>\n"
            "  <proposition dialogue_act=\"6\" id=\"2\"/>\n"
            "</speechplan>\n");
  auto back = text_plan_from_xml(xml::parse(serialize_text_plan(p)));
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(*back, p);
}

TEST(Deaggregate, TextPlanReaderValidates) {
  EXPECT_FALSE(text_plan_from_xml(xml::parse(R"(<speechplan voice="Narrator"/>)")).has_value());
  const char* dangling = R"(<speechplan voice="Narrator"><rstplan>
      <relation name="contingency_cause"><proposition id="1" ns="nucleus"/>
      <proposition id="2" ns="satellite"/></relation></rstplan>
      <proposition dialogue_act="5" id="1"/></speechplan>)";
  EXPECT_THROW(text_plan_from_xml(xml::parse(dangling)), ReferenceError);
  const char* self = R"(<speechplan voice="Narrator"><rstplan>
      <relation name="contingency_cause"><proposition id="1" ns="nucleus"/>
      <proposition id="2" ns="satellite"/></relation></rstplan>
      <proposition dialogue_act="5" id="1"/><proposition dialogue_act="5" id="2"/></speechplan>)";
  EXPECT_THROW(text_plan_from_xml(xml::parse(self)), ValidationError);
  const char* bad_ns = R"(<speechplan voice="Narrator"><rstplan>
      <relation name="contingency_cause"><proposition id="1" ns="core"/>
      <proposition id="2" ns="satellite"/></relation></rstplan>
      <proposition dialogue_act="5" id="1"/><proposition dialogue_act="6" id="2"/></speechplan>)";
  EXPECT_THROW(text_plan_from_xml(xml::parse(bad_ns)), ValidationError);
}

TEST(Deaggregate, ImplicitSubjectIsCopiedFromHost) {
  auto t = organize_tree();
  t.root.children[3].children[0].children.clear();  // "in order to wait"
  auto site = detect_contingency(t);
  ASSERT_TRUE(site);
  EXPECT_FALSE(site->embedded_subject);
  auto d = deaggregate(t, *site);
  const DSyntNode* agent = d.satellite.root.child(Rel::I);
  ASSERT_NE(agent, nullptr);
  EXPECT_EQ(agent->lexeme, "bird");
  EXPECT_EQ(agent->number, Number::pl);
  EXPECT_EQ(reaggregate(d.nucleus, d.satellite, *site), t);
}

TEST(Deaggregate, IdsWithoutSeparatorGetSuffixes) {
  auto t = organize_tree();
  t.id = "12";
  auto d = deaggregate(t, *detect_contingency(t));
  EXPECT_EQ(d.nucleus.id, "12_n");
  EXPECT_EQ(d.satellite.id, "12_s");
  EXPECT_EQ(reaggregate(d.nucleus, d.satellite, *detect_contingency(t)).id, "12");
}

TEST(Deaggregate, StaleSiteIsStructuralError) {
  auto t = organize_tree();
  auto site = *detect_contingency(t);
  auto other = t;
  other.id = "9";
  EXPECT_THROW(deaggregate(other, site), StructuralError);
  auto moved = site;
  moved.path_to_in_order = {1};
  EXPECT_THROW(deaggregate(t, moved), StructuralError);
}

TEST(Deaggregate, ReaggregateInvertsOnRandomTrees) {
  testing::TreeGenerator gen(11);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    auto t = gen.tree(4);
    std::optional<ContingencySite> site;
    try {
      site = detect_contingency(t);
    } catch (const MalformedContingencyError&) {
      continue;
    }
    if (!site) continue;
    Deaggregation d;
    try {
      d = deaggregate(t, *site);
    } catch (const MalformedContingencyError&) {
      continue;  // no subject anywhere
    }
    ASSERT_NO_THROW(validate(d.nucleus));
    ASSERT_NO_THROW(validate(d.satellite));
    EXPECT_FALSE(detect_contingency(d.nucleus).has_value() &&
                 detect_contingency(d.nucleus)->path_to_in_order == site->path_to_in_order);
    ASSERT_EQ(reaggregate(d.nucleus, d.satellite, *site), t);
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(Deaggregate, SitelessReaggregateRestoresContingencyFixture) {
  auto want = expected_split();
  EXPECT_EQ(reaggregate(want.nucleus, want.satellite), organize_tree());
}

}  // namespace
}  // namespace retell
