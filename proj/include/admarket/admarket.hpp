// Copyright 2026 The admarket Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADMARKET_ADMARKET_HPP
#define ADMARKET_ADMARKET_HPP

#include "admarket/agents.hpp"
#include "admarket/auction_core.hpp"
#include "admarket/ctr_curve.hpp"
#include "admarket/errors.hpp"
#include "admarket/market_analysis.hpp"
#include "admarket/mediator_model.hpp"
#include "admarket/numeric.hpp"
#include "admarket/random.hpp"
#include "admarket/ranking.hpp"
#include "admarket/scenario.hpp"
#include "admarket/scenario_io.hpp"

#endif  // ADMARKET_ADMARKET_HPP
