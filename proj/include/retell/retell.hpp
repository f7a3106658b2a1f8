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

#include "retell/corpus.hpp"
#include "retell/deaggregate.hpp"
#include "retell/dsynts.hpp"
#include "retell/error.hpp"
#include "retell/lexicon.hpp"
#include "retell/metrics.hpp"
#include "retell/pipeline.hpp"
#include "retell/planner.hpp"
#include "retell/realize.hpp"
#include "retell/stats.hpp"
#include "retell/xml.hpp"
