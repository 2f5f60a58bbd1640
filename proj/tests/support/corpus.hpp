// Copyright 2026 The mfhajj Authors.
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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mfhajj/search.hpp"

namespace mftest {

/// Random report-like documents over a small vocabulary so terms repeat
/// across documents and phrases occur by chance. Timestamps are spread over
/// 2026-01-01 .. 2026-01-31.
std::vector<mf::IndexDocument> random_documents(std::uint64_t seed, int count);

/// A random query over the full grammar: terms, phrases (some taken from a
/// document so they hit), filters, unknown x:y pairs and date bounds.
std::string random_query(std::mt19937_64& rng, const std::vector<mf::IndexDocument>& docs);

}  // namespace mftest
