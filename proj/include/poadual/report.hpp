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

#include <json.hpp>

#include <string>

#include "poadual/auctions.hpp"
#include "poadual/certificates.hpp"
#include "poadual/equilibria.hpp"
#include "poadual/smoothness.hpp"

namespace poadual::report {

using Json = nlohmann::ordered_json;

// Rationals always render as exact "p" or "p/q" strings, never decimals.
Json rational(const Rational& r);

std::string fnv1a_digest(const std::string& bytes);

Json caps_json(const equilibria::Caps& caps);
Json residuals_json(const lp::ResidualReport& r);
Json equilibrium_json(const equilibria::EquilibriumReport& r);
Json certificate_json(const certificates::DualCertificate& c);
Json smoothness_json(const smoothness::SmoothnessCertificate& c);
Json pigou_json(const smoothness::PigouResult& r);

/// Deterministic byte output: stable key order, 2-space indent, '\n' at end.
std::string to_json_text(const Json& report);

/// Human summary of the same tree.
std::string to_human_text(const Json& report);

}  // namespace poadual::report
