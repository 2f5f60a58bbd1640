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

#include "mfhajj/error.hpp"

namespace mf {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::BoxOutOfBounds: return "BoxOutOfBounds";
    case ErrorCode::TooFewVariations: return "TooFewVariations";
    case ErrorCode::TooFewChips: return "TooFewChips";
    case ErrorCode::KOutOfRange: return "KOutOfRange";
    case ErrorCode::ModelVersionMismatch: return "ModelVersionMismatch";
    case ErrorCode::InsufficientGallery: return "InsufficientGallery";
    case ErrorCode::DuplicatePerson: return "DuplicatePerson";
    case ErrorCode::EmptyGallery: return "EmptyGallery";
    case ErrorCode::DegenerateModel: return "DegenerateModel";
    case ErrorCode::ModelFormat: return "ModelFormat";
    case ErrorCode::CorruptLog: return "CorruptLog";
    case ErrorCode::DuplicateOrigin: return "DuplicateOrigin";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::ReportNotFound: return "ReportNotFound";
    case ErrorCode::ReportNotClaimable: return "ReportNotClaimable";
    case ErrorCode::EmptyEvidence: return "EmptyEvidence";
    case ErrorCode::ClaimNotFound: return "ClaimNotFound";
    case ErrorCode::AlreadyDecided: return "AlreadyDecided";
    case ErrorCode::BadPage: return "BadPage";
    case ErrorCode::InvalidTransition: return "InvalidTransition";
    case ErrorCode::PersonNotFound: return "PersonNotFound";
    case ErrorCode::EmptyQuery: return "EmptyQuery";
    case ErrorCode::UnbalancedQuote: return "UnbalancedQuote";
    case ErrorCode::DuplicateDocument: return "DuplicateDocument";
    case ErrorCode::NotIndexed: return "NotIndexed";
    case ErrorCode::NoFaceDetected: return "NoFaceDetected";
    case ErrorCode::BadImage: return "BadImage";
    case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::NonAscendingSeq: return "NonAscendingSeq";
    case ErrorCode::AuthFailure: return "AuthFailure";
    case ErrorCode::Forbidden: return "Forbidden";
    case ErrorCode::AlertNotFound: return "AlertNotFound";
    case ErrorCode::AlreadyAcknowledged: return "AlreadyAcknowledged";
    case ErrorCode::PayloadTooLarge: return "PayloadTooLarge";
    case ErrorCode::ModelUnavailable: return "ModelUnavailable";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::OutboxFull: return "OutboxFull";
    case ErrorCode::ServerUnreachable: return "ServerUnreachable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

std::optional<ErrorCode> error_code_from_string(std::string_view name) noexcept {
  for (std::uint16_t i = 0; i <= static_cast<std::uint16_t>(ErrorCode::IoError); ++i) {
    const auto code = static_cast<ErrorCode>(i);
    if (to_string(code) == name) return code;
  }
  return std::nullopt;
}

}  // namespace mf
