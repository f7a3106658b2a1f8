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

// End-to-end retelling of a story bundle under one variation and POV.

#include <string>
#include <variant>
#include <vector>

#include "retell/corpus.hpp"
#include "retell/deaggregate.hpp"
#include "retell/dsynts.hpp"
#include "retell/lexicon.hpp"
#include "retell/planner.hpp"
#include "retell/realize.hpp"

namespace retell {

// A nucleus/satellite pair with its plan and the aggregated original.
struct ContingencyUnit {
  TextPlan plan;
  DSyntTree nucleus;
  DSyntTree satellite;
  DSyntTree original;
};

using NarrativeItem = std::variant<DSyntTree, ContingencyUnit>;

// Flattens the bundle into narrative order. Trees with an "in order to"
// modifier are de-aggregated; speech plans that already carry a contingency
// plan contribute their pair in place of the nucleus tree.
inline std::vector<NarrativeItem> prepare_story(const StoryBundle& bundle) {
  std::vector<NarrativeItem> out;
  for (const auto& sp : bundle.speech_plans) {
    if (sp.plan) {
      const DSyntTree* nucleus = nullptr;
      const DSyntTree* satellite = nullptr;
      for (const auto& t : sp.trees) {
        if (t.id == sp.plan->nucleus_id) nucleus = &t;
        if (t.id == sp.plan->satellite_id) satellite = &t;
      }
      if (!nucleus || !satellite)
        throw ReferenceError("speech plan references missing trees " + sp.plan->nucleus_id + ", " +
                             sp.plan->satellite_id);
      for (const auto& t : sp.trees) {
        if (&t == nucleus)
          out.emplace_back(ContingencyUnit{*sp.plan, *nucleus, *satellite, reaggregate(*nucleus, *satellite)});
        else if (&t != satellite)
          out.emplace_back(t);
      }
      continue;
    }
    for (const auto& t : sp.trees) {
      if (auto site = detect_contingency(t)) {
        auto d = deaggregate(t, *site, sp.voice);
        out.emplace_back(ContingencyUnit{d.plan, d.nucleus, d.satellite, t});
      } else {
        out.emplace_back(t);
      }
    }
  }
  return out;
}

// One sentence plan per narrative item, with the POV rewrite applied. The
// narrator lexeme comes from the bundle; pov supplies the target person.
inline std::vector<SentencePlan> plan_story(const StoryBundle& bundle, Variation v, POVConfig pov) {
  if (!bundle.narrator_lexeme.empty()) pov.narrator_lexeme = bundle.narrator_lexeme;
  std::vector<SentencePlan> plans;
  for (auto& item : prepare_story(bundle)) {
    if (auto* tree = std::get_if<DSyntTree>(&item)) {
      plans.push_back(SentencePlan{{apply_pov(*tree, pov)}, {}});
    } else {
      auto& u = std::get<ContingencyUnit>(item);
      plans.push_back(plan_variation(u.plan, apply_pov(u.nucleus, pov), apply_pov(u.satellite, pov),
                                     apply_pov(u.original, pov), v));
    }
  }
  return plans;
}

inline std::string retell_story(const StoryBundle& bundle, Variation v, const POVConfig& pov,
                                const Lexicon& lexicon, const RealizationConfig& cfg = {}) {
  std::string out;
  for (const auto& plan : plan_story(bundle, v, pov)) {
    if (!out.empty()) out += cfg.sentence_join;
    out += realize(plan, lexicon, cfg);
  }
  return out;
}

}  // namespace retell
