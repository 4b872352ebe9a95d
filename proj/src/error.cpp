// src/error.cpp

// Copyright 2026  lre-eval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "lre/error.hpp"

namespace lre {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "IO_ERROR";
    case ErrorCode::kMalformed: return "MALFORMED";
    case ErrorCode::kDuplicateSegment: return "DUPLICATE_SEGMENT";
    case ErrorCode::kUnknownLanguage: return "UNKNOWN_LANGUAGE";
    case ErrorCode::kMissingSegment: return "MISSING_SEGMENT";
    case ErrorCode::kUnknownSegment: return "UNKNOWN_SEGMENT";
    case ErrorCode::kNonFiniteScore: return "NON_FINITE_SCORE";
    case ErrorCode::kHeaderMismatch: return "HEADER_MISMATCH";
    case ErrorCode::kMissingDuration: return "MISSING_DURATION";
    case ErrorCode::kEmptyClass: return "EMPTY_CLASS";
    case ErrorCode::kLanguageMismatch: return "LANGUAGE_MISMATCH";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kConstantScores: return "CONSTANT_SCORES";
    case ErrorCode::kUnknownMetadataSegment: return "UNKNOWN_METADATA_SEGMENT";
  }
  return "UNKNOWN";
}

std::string Location::str() const {
  std::string out;
  auto append = [&out](const std::string& part) {
    if (!out.empty()) out += ", ";
    out += part;
  };
  if (line != 0) append("line " + std::to_string(line));
  if (!segment_id.empty()) append("segment " + segment_id);
  if (!column.empty()) append("column " + column);
  return out;
}

namespace {

std::string compose(ErrorCode code, const std::string& message,
                    const Location& where) {
  std::string out(to_string(code));
  out += ": ";
  out += message;
  const std::string loc = where.str();
  if (!loc.empty()) out += " (" + loc + ")";
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, Location where)
    : std::runtime_error(compose(code, message, where)),
      code_(code),
      where_(std::move(where)),
      detail_(message) {}

}  // namespace lre
