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
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mf {

/// Raster as ingested: row-major interleaved 8-bit samples.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  int channels = 1;  // 1 (gray) or 3 (RGB)
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int x, int y, int c = 0) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t& at(int x, int y, int c = 0) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  /// Throws InvalidArgument when dimensions, channel count or length disagree.
  void validate() const;

  bool operator==(const ImageBuffer&) const = default;
};

/// Single-channel image with samples in [0,1].
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, double fill = 0.0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }

  bool operator==(const GrayImage&) const = default;
};

enum class ImageFormat { Auto, Pgm, Ppm, Jpeg };

/// Decoder for formats the core does not implement itself (JPEG). Receives
/// the raw file bytes, returns a decoded buffer or throws mf::Error.
using ImageDecoder = std::function<ImageBuffer(std::span<const std::uint8_t>)>;

/// Installs the process-wide JPEG decoder. Passing an empty function removes it.
void register_jpeg_decoder(ImageDecoder decoder);
bool has_jpeg_decoder();

/// Sniffs PGM/PPM/JPEG from magic bytes.
ImageFormat sniff_format(std::span<const std::uint8_t> bytes);

ImageBuffer decode_image(std::span<const std::uint8_t> bytes,
                         ImageFormat hint = ImageFormat::Auto);

/// Binary PGM (1 channel) or PPM (3 channels), maxval 255.
std::vector<std::uint8_t> encode_pnm(const ImageBuffer& image);

ImageBuffer read_image_file(const std::string& path);
void write_pnm_file(const std::string& path, const ImageBuffer& image);

}  // namespace mf
