// include/lre/error.hpp

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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lre {

// Shared by exceptions and validation issues. The string form
// (to_string) is part of the report format and must stay stable.
enum class ErrorCode {
  kIo,
  kMalformed,
  kDuplicateSegment,
  kUnknownLanguage,
  kMissingSegment,
  kUnknownSegment,
  kNonFiniteScore,
  kHeaderMismatch,
  kMissingDuration,
  kEmptyClass,
  kLanguageMismatch,
  kInvalidArgument,
  kConstantScores,
  kUnknownMetadataSegment,
};

std::string_view to_string(ErrorCode code);

/// Where in an input a problem was found. Any field may be empty/zero.
struct Location {
  std::size_t line = 0;  // 1-based; 0 when not tied to a line
  std::string segment_id;
  std::string column;

  std::string str() const;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, Location where = {});

  ErrorCode code() const noexcept { return code_; }
  const Location& where() const noexcept { return where_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  Location where_;
  std::string detail_;
};

}  // namespace lre
