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

#include "retell/error.hpp"
#include "retell/lexicon.hpp"
#include "support/test_support.hpp"

namespace retell {
namespace {

LexiconEntry verb(const std::string& lexeme, const Lexicon& lex = testing::shipped_lexicon()) {
  if (const auto* e = lex.find(lexeme, WordClass::verb)) return *e;
  return {lexeme, WordClass::verb, {}};
}

LexiconEntry noun(const std::string& lexeme, const Lexicon& lex = testing::shipped_lexicon()) {
  if (const auto* e = lex.find(lexeme, WordClass::common_noun)) return *e;
  return {lexeme, WordClass::common_noun, {}};
}

Features past(Person p = Person::third, Number n = Number::sg) { return {Tense::past, p, n}; }
Features pres(Person p = Person::third, Number n = Number::sg) { return {Tense::pres, p, n}; }

TEST(Inflect, IrregularPastFromLexicon) {
  EXPECT_EQ(inflect(verb("drink"), past()), "drank");
  EXPECT_EQ(inflect(verb("come"), past()), "came");
  EXPECT_EQ(inflect(verb("fall"), past()), "fell");
  EXPECT_EQ(inflect(verb("hold"), past()), "held");
  EXPECT_EQ(inflect(verb("sit"), past()), "sat");
}

TEST(Inflect, BeAgreesWithSubject) {
  EXPECT_EQ(inflect(verb("be"), past()), "was");
  EXPECT_EQ(inflect(verb("be"), past(Person::third, Number::pl)), "were");
  EXPECT_EQ(inflect(verb("be"), past(Person::second)), "were");
  EXPECT_EQ(inflect(verb("be"), pres(Person::first)), "am");
  EXPECT_EQ(inflect(verb("be"), pres()), "is");
  EXPECT_EQ(inflect(verb("be"), pres(Person::first, Number::pl)), "are");
}

TEST(Inflect, RegularPastRules) {
  EXPECT_EQ(regular_past("place"), "placed");
  EXPECT_EQ(regular_past("organize"), "organized");
  EXPECT_EQ(regular_past("bathe"), "bathed");
  EXPECT_EQ(regular_past("approach"), "approached");
  EXPECT_EQ(regular_past("try"), "tried");
  EXPECT_EQ(regular_past("play"), "played");
  EXPECT_EQ(regular_past("slip"), "slipped");
  EXPECT_EQ(regular_past("stop"), "stopped");
  EXPECT_EQ(regular_past("caw"), "cawed");
  EXPECT_EQ(regular_past("fix"), "fixed");
  EXPECT_EQ(regular_past("wait"), "waited");
  EXPECT_EQ(regular_past("visit"), "visited");
}

TEST(Inflect, ThirdSingularAndPlural) {
  EXPECT_EQ(regular_third_sg("want"), "wants");
  EXPECT_EQ(regular_third_sg("watch"), "watches");
  EXPECT_EQ(regular_third_sg("go"), "goes");
  EXPECT_EQ(regular_third_sg("fly"), "flies");
  EXPECT_EQ(regular_plural("bird"), "birds");
  EXPECT_EQ(regular_plural("branch"), "branches");
  EXPECT_EQ(regular_plural("family"), "families");
  EXPECT_EQ(regular_plural("day"), "days");
  EXPECT_EQ(inflect(noun("child"), {std::nullopt, Person::third, Number::pl}), "children");
  EXPECT_EQ(inflect(noun("bowl"), {std::nullopt, Person::third, Number::sg}), "bowl");
}

TEST(Inflect, PresentTenseAgreement) {
  EXPECT_EQ(inflect(verb("want"), pres()), "wants");
  EXPECT_EQ(inflect(verb("want"), pres(Person::first)), "want");
  EXPECT_EQ(inflect(verb("want"), pres(Person::third, Number::pl)), "want");
}

TEST(Inflect, InfinitiveAndFuture) {
  EXPECT_EQ(inflect(verb("drink"), {Tense::inf_to}), "to drink");
  EXPECT_EQ(inflect(verb("drink"), {Tense::fut}), "will drink");
}

TEST(Inflect, MultiWordLexemeInflectsLastWord) {
  LexiconEntry e{"set_up", WordClass::verb, {}};
  EXPECT_EQ(inflect(e, past()), "set uped");  // no irregular form recorded
  LexiconEntry n{"collard_green", WordClass::common_noun, {}};
  EXPECT_EQ(inflect(n, {std::nullopt, Person::third, Number::pl}), "collard greens");
}

TEST(Inflect, ErrorsOnUninflectableRequests) {
  EXPECT_THROW(inflect(verb("drink"), {}), InflectionError);
  EXPECT_THROW(inflect(noun("bowl"), past()), InflectionError);
  LexiconEntry adj{"popular", WordClass::adjective, {}};
  EXPECT_THROW(inflect(adj, past()), InflectionError);
}

TEST(Lexicon, ShippedLexiconLoads) {
  const auto& lex = testing::shipped_lexicon();
  EXPECT_GT(lex.size(), 100u);
  const auto* i = lex.find("I", WordClass::pronoun);
  ASSERT_NE(i, nullptr);
  EXPECT_EQ(i->pronoun_form(CaseRole::object, Number::sg, Person::first), "me");
  EXPECT_EQ(i->pronoun_form(CaseRole::reflexive, Number::sg, Person::first), "myself");
  EXPECT_EQ(lex.find("crow", WordClass::common_noun)->form("gender"), "fem");
  EXPECT_EQ(lex.find("crow", WordClass::verb), nullptr);
}

TEST(Lexicon, ParsesSmallTable) {
  auto lex = Lexicon::load(testing::source_path("tests/data/lexicon_small.tsv"));
  EXPECT_EQ(lex.size(), 12u);
  EXPECT_EQ(inflect(*lex.find("mouse", WordClass::common_noun), {std::nullopt, Person::third, Number::pl}),
            "mice");
}

TEST(Lexicon, ReportsLineAndColumn) {
  try {
    Lexicon::parse("# header\ndrink\tverb\tpast=drank\nbowl\tnoun\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 6);
  }
  try {
    Lexicon::parse("drink\tverb\tpast=drank,plural=x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 23);
  }
  EXPECT_THROW(Lexicon::parse("drink\tverb\tpast\n"), ParseError);
  EXPECT_THROW(Lexicon::parse("I\tpronoun\tsubject.du.1st=we\n"), ParseError);
  EXPECT_THROW(Lexicon::load("/nonexistent/lexicon.tsv"), IoError);
}

TEST(Lexicon, LaterEntriesReplaceEarlier) {
  auto lex = Lexicon::parse("leap\tverb\tpast=leapt\nleap\tverb\tpast=leaped\n");
  EXPECT_EQ(lex.size(), 1u);
  EXPECT_EQ(lex.find("leap", WordClass::verb)->form("past"), "leaped");
}

}  // namespace
}  // namespace retell
