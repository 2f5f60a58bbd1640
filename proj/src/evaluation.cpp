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

#include "mfhajj/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "mfhajj/error.hpp"
#include "mfhajj/synthetic.hpp"

namespace mf {
namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

FaceChip chip_from_image(const ImageBuffer& image, const DetectorParams& params) {
  const GrayImage gray = preprocess(image);
  std::vector<FaceBox> boxes;
  try {
    boxes = detect_faces(gray, params);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ImageTooSmall) throw;
    throw Error(ErrorCode::NoFaceDetected, "image is smaller than the smallest face template");
  }
  return crop_normalize(gray, largest_face(boxes));
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Calibration calibrate_threshold(const Gallery& gallery) {
  if (gallery.size() < 2) throw Error(ErrorCode::EmptyGallery, "calibration needs at least two enrolled persons");
  std::vector<double> genuine;
  std::vector<double> impostor;
  for (const auto& [person, embeddings] : gallery.entries()) {
    for (std::size_t i = 0; i < embeddings.size(); ++i) {
      double same = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < embeddings.size(); ++j) {
        if (j != i) same = std::min(same, distance(embeddings[i], embeddings[j]));
      }
      for (const auto& [other_person, other_embeddings] : gallery.entries()) {
        if (other_person == person) continue;
        double other = std::numeric_limits<double>::infinity();
        for (const auto& e : other_embeddings) other = std::min(other, distance(embeddings[i], e));
        impostor.push_back(other);
      }
      genuine.push_back(same);
    }
  }
  Calibration c;
  c.genuine_count = genuine.size();
  c.impostor_count = impostor.size();
  c.genuine_median = median(std::move(genuine));
  c.impostor_median = median(std::move(impostor));
  c.threshold = 0.5 * (c.genuine_median + c.impostor_median);
  return c;
}

EvaluationReport evaluate_identification(const std::filesystem::path& dataset_root, const EvaluationOptions& options) {
  if (options.enroll < kMinImagesPerPerson) {
    throw Error(ErrorCode::InsufficientGallery, "enrollment needs at least 3 images per identity");
  }
  const auto start = std::chrono::steady_clock::now();
  const DatasetManifest manifest = load_dataset_manifest(dataset_root);
  if (manifest.variations < options.enroll + 1) {
    throw Error(ErrorCode::ValidationError, "dataset has too few variations for the enroll/probe split");
  }

  EvaluationReport report;
  report.identities = static_cast<int>(manifest.entries.size());

  struct Subject {
    std::string id;
    std::vector<FaceChip> enrolled;
    std::optional<FaceChip> probe;
  };
  std::vector<Subject> subjects;
  for (const auto& entry : manifest.entries) {
    Subject s{entry.identity, {}, std::nullopt};
    for (int v = 0; v <= options.enroll && v < static_cast<int>(entry.files.size()); ++v) {
      const ImageBuffer image = read_image_file((dataset_root / entry.files[v]).string());
      try {
        FaceChip chip = chip_from_image(image, options.detector);
        if (v < options.enroll) {
          s.enrolled.push_back(std::move(chip));
        } else {
          s.probe = std::move(chip);
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoFaceDetected) throw;
        ++report.detection_failures;
      }
    }
    subjects.push_back(std::move(s));
  }
  report.seconds_chips = seconds_since(start);

  const auto train_start = std::chrono::steady_clock::now();
  std::vector<FaceChip> training;
  for (const auto& s : subjects) {
    if (static_cast<int>(s.enrolled.size()) >= kMinImagesPerPerson) {
      training.insert(training.end(), s.enrolled.begin(), s.enrolled.end());
    }
  }
  const int max_k = std::max(1, static_cast<int>(training.size()) - 1);
  const EigenModel model = train_eigenmodel(training, std::min(options.k, max_k), options.train);
  report.k = model.k;
  report.orthonormality_error = orthonormality_error(model);

  Gallery gallery;
  for (const auto& s : subjects) {
    if (static_cast<int>(s.enrolled.size()) >= kMinImagesPerPerson) gallery = enroll(gallery, s.id, s.enrolled, model);
  }
  report.calibration = calibrate_threshold(gallery);
  report.seconds_train = seconds_since(train_start);

  const auto identify_start = std::chrono::steady_clock::now();
  for (const auto& s : subjects) {
    ++report.probes;
    if (!s.probe) continue;
    const Embedding probe = embed(model, *s.probe);
    const auto best = identify(gallery, probe, 1, std::numeric_limits<double>::max());
    if (best.empty() || best.front().person_id != s.id) continue;
    ++report.correct_unthresholded;
    if (best.front().distance <= report.calibration.threshold) ++report.correct;
  }
  report.rank1 = report.probes == 0 ? 0.0 : static_cast<double>(report.correct) / report.probes;
  report.seconds_identify = seconds_since(identify_start);
  report.seconds_total = seconds_since(start);
  return report;
}

}  // namespace mf
