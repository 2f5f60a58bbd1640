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

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mfhajj/search.hpp"
#include "mfhajj/vision.hpp"

namespace mftest {

/// Brute-force detector: scores every placement of every template by direct
/// pixel-by-pixel correlation against the edge map, with the annulus
/// membership evaluated per pixel from the ellipse equations. Shares only
/// edge_map() with the library.
std::vector<mf::FaceBox> detect_faces_exhaustive(const mf::GrayImage& image, const mf::DetectorParams& params);

/// Random detector input no larger than max_side x max_side: either a
/// rendered synthetic face (with random nuisance) embedded in a random
/// canvas, or a scene of random filled ellipses and rectangles with noise.
mf::GrayImage random_scene(std::uint64_t seed, int max_side = 160);

/// Linear-scan search: tokenizes every document at query time and scores it
/// independently of the inverted index.
class LinearSearch {
 public:
  void add(const mf::IndexDocument& doc) { docs_.push_back(doc); }
  void remove(const std::string& id);
  std::vector<mf::SearchHit> search(const mf::SearchQuery& query, std::size_t limit) const;

 private:
  std::vector<mf::IndexDocument> docs_;
};

}  // namespace mftest
