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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mfhajj/recognition.hpp"
#include "mfhajj/vision.hpp"

namespace mf {

/// Chip for an already decoded image: preprocess, detect, largest box, 64x64 crop.
/// Throws NoFaceDetected.
FaceChip chip_from_image(const ImageBuffer& image, const DetectorParams& params = {});

struct Calibration {
  double threshold = 0;
  double genuine_median = 0;
  double impostor_median = 0;
  std::size_t genuine_count = 0;
  std::size_t impostor_count = 0;
};

/// Leave-one-out over the gallery: each enrolled embedding is a probe. Its
/// genuine distance is to the nearest other embedding of the same person;
/// its impostor distances are the person-level distances (nearest embedding)
/// to every other person. The threshold is the midpoint of the two medians.
/// Needs >= 2 persons (EmptyGallery).
Calibration calibrate_threshold(const Gallery& gallery);

/// Median of a non-empty sample; the mean of the middle pair for even sizes.
double median(std::vector<double> values);

struct EvaluationOptions {
  int k = 32;
  int enroll = 3;  // leading variations enrolled; the next one is the probe
  DetectorParams detector;
  TrainOptions train;
};

struct EvaluationReport {
  int identities = 0;
  int probes = 0;
  int correct = 0;            // true identity ranked first and within threshold
  int correct_unthresholded = 0;
  int detection_failures = 0;
  double rank1 = 0;
  int k = 0;                  // components actually retained
  double orthonormality_error = 0;
  Calibration calibration;
  double seconds_chips = 0;
  double seconds_train = 0;
  double seconds_identify = 0;
  double seconds_total = 0;
};

/// Runs the enroll/probe protocol over a dataset written by generate_dataset:
/// trains on the enrolled images, calibrates the threshold on the gallery,
/// then identifies each identity's probe image.
EvaluationReport evaluate_identification(const std::filesystem::path& dataset_root,
                                         const EvaluationOptions& options = {});

}  // namespace mf
