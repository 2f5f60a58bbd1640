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

#include "mfhajj/image.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <mutex>
#include <string>

#include "mfhajj/error.hpp"

namespace mf {

namespace {

std::mutex g_decoder_mu;
ImageDecoder g_jpeg_decoder;

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads a decimal field.
  int read_number(const char* what) {
    skip_space_and_comments();
    std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000) {
        throw Error(ErrorCode::MalformedHeader, std::string("PNM ") + what + " too large");
      }
      ++pos_;
    }
    if (pos_ == start) {
      if (pos_ >= bytes_.size()) {
        throw Error(ErrorCode::MalformedHeader, std::string("PNM header ends before ") + what);
      }
      throw Error(ErrorCode::MalformedHeader, std::string("PNM ") + what + " is not a number");
    }
    return static_cast<int>(value);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void expect_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::MalformedHeader, "PNM header must end with one whitespace byte");
    }
    ++pos_;
  }

  std::size_t position() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

ImageBuffer decode_pnm(std::span<const std::uint8_t> bytes, int channels) {
  HeaderReader reader(bytes);
  reader.advance(2);  // magic already checked
  if (bytes.size() > 2 && !std::isspace(bytes[2])) {
    throw Error(ErrorCode::MalformedHeader, "PNM magic must be followed by whitespace");
  }
  ImageBuffer image;
  image.channels = channels;
  image.width = reader.read_number("width");
  image.height = reader.read_number("height");
  int maxval = reader.read_number("maxval");
  reader.expect_single_space();
  if (image.width < 1 || image.height < 1) {
    throw Error(ErrorCode::MalformedHeader, "PNM dimensions must be positive");
  }
  if (maxval != 255) {
    throw Error(ErrorCode::UnsupportedFormat,
                "only maxval 255 is supported, got " + std::to_string(maxval));
  }
  std::size_t need = static_cast<std::size_t>(image.width) * image.height * channels;
  std::size_t have = bytes.size() - reader.position();
  if (have < need) {
    throw Error(ErrorCode::TruncatedPayload,
                "PNM payload has " + std::to_string(have) + " bytes, header implies " +
                    std::to_string(need));
  }
  auto first = bytes.begin() + static_cast<std::ptrdiff_t>(reader.position());
  image.pixels.assign(first, first + static_cast<std::ptrdiff_t>(need));
  return image;
}

}  // namespace

void ImageBuffer::validate() const {
  if (width < 1 || height < 1) throw Error(ErrorCode::InvalidArgument, "image dimensions must be >= 1");
  if (channels != 1 && channels != 3) throw Error(ErrorCode::InvalidArgument, "channels must be 1 or 3");
  if (pixels.size() != static_cast<std::size_t>(width) * height * channels) {
    throw Error(ErrorCode::InvalidArgument, "pixel buffer length does not match dimensions");
  }
}

void register_jpeg_decoder(ImageDecoder decoder) {
  std::lock_guard lock(g_decoder_mu);
  g_jpeg_decoder = std::move(decoder);
}

bool has_jpeg_decoder() {
  std::lock_guard lock(g_decoder_mu);
  return static_cast<bool>(g_jpeg_decoder);
}

ImageFormat sniff_format(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return ImageFormat::Pgm;
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') return ImageFormat::Ppm;
  if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) {
    return ImageFormat::Jpeg;
  }
  return ImageFormat::Auto;
}

ImageBuffer decode_image(std::span<const std::uint8_t> bytes, ImageFormat hint) {
  if (bytes.empty()) throw Error(ErrorCode::MalformedHeader, "empty image payload");
  ImageFormat sniffed = sniff_format(bytes);
  ImageFormat format = hint == ImageFormat::Auto ? sniffed : hint;
  switch (format) {
    case ImageFormat::Pgm:
      if (sniffed != ImageFormat::Pgm) throw Error(ErrorCode::MalformedHeader, "expected P5 magic");
      return decode_pnm(bytes, 1);
    case ImageFormat::Ppm:
      if (sniffed != ImageFormat::Ppm) throw Error(ErrorCode::MalformedHeader, "expected P6 magic");
      return decode_pnm(bytes, 3);
    case ImageFormat::Jpeg: {
      ImageDecoder decoder;
      {
        std::lock_guard lock(g_decoder_mu);
        decoder = g_jpeg_decoder;
      }
      if (!decoder) throw Error(ErrorCode::UnsupportedFormat, "no JPEG decoder registered");
      ImageBuffer image = decoder(bytes);
      image.validate();
      return image;
    }
    case ImageFormat::Auto:
      break;
  }
  throw Error(ErrorCode::UnsupportedFormat, "unrecognised image format");
}

std::vector<std::uint8_t> encode_pnm(const ImageBuffer& image) {
  image.validate();
  std::string header = (image.channels == 1 ? "P5\n" : "P6\n") + std::to_string(image.width) +
                       " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.pixels.begin(), image.pixels.end());
  return out;
}

ImageBuffer read_image_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open image " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_image(bytes);
}

void write_pnm_file(const std::string& path, const ImageBuffer& image) {
  auto bytes = encode_pnm(image);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write image " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

}  // namespace mf
