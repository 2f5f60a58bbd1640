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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mf {

enum class ErrorCode : std::uint16_t {
  // vision
  MalformedHeader,
  TruncatedPayload,
  UnsupportedFormat,
  ImageTooSmall,
  BoxOutOfBounds,
  TooFewVariations,
  // recognition
  TooFewChips,
  KOutOfRange,
  ModelVersionMismatch,
  InsufficientGallery,
  DuplicatePerson,
  EmptyGallery,
  DegenerateModel,
  ModelFormat,
  // registry
  CorruptLog,
  DuplicateOrigin,
  ValidationError,
  ReportNotFound,
  ReportNotClaimable,
  EmptyEvidence,
  ClaimNotFound,
  AlreadyDecided,
  BadPage,
  InvalidTransition,
  PersonNotFound,
  // search
  EmptyQuery,
  UnbalancedQuote,
  DuplicateDocument,
  NotIndexed,
  // service
  NoFaceDetected,
  BadImage,
  ChecksumMismatch,
  NonAscendingSeq,
  AuthFailure,
  Forbidden,
  AlertNotFound,
  AlreadyAcknowledged,
  PayloadTooLarge,
  ModelUnavailable,
  NotFound,
  // kiosk
  OutboxFull,
  ServerUnreachable,
  // generic
  InvalidArgument,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;
std::optional<ErrorCode> error_code_from_string(std::string_view name) noexcept;

/// Every failure in the library is reported as an `mf::Error` carrying a
/// stable machine-readable code. The code name is what the HTTP API returns
/// in the `code` field of its error body.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string detail = {})
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace mf
