// Copyright 2026 The poadual Authors
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

#include <string>
#include <variant>

#include "poadual/auctions.hpp"
#include "poadual/congestion.hpp"

namespace poadual::io {

using Instance =
    std::variant<congestion::AtomicGame, congestion::NonAtomicGame,
                 congestion::SplittableGame, auctions::BayesianAuction>;

std::string kind_name(const Instance& instance);

/// Parses the declarative instance format (congestion games and simultaneous
/// auctions). Errors carry line numbers.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

/// Canonical re-emission; parse(emit(parse(text))) yields an equal model.
std::string emit_instance(const Instance& instance);

bool instances_equal(const Instance& a, const Instance& b);

}  // namespace poadual::io
