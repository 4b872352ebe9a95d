// tools/cli.hpp

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

#include <ostream>
#include <string>
#include <vector>

namespace lre::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kContentFailure = 1;
inline constexpr int kUsageOrIo = 2;

/// Runs `lre-eval` with args (args[0] is the program name). Human text
/// goes to `out`/`err`; machine artifacts go under --out only.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace lre::cli
