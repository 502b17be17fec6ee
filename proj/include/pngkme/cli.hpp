// Copyright 2026 The pngkme Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line front end. `run` is the whole program minus process setup so
// tests can drive it with in-memory streams.

#ifndef PNGKME_CLI_HPP_
#define PNGKME_CLI_HPP_

#include <ostream>

namespace pngkme::cli {

inline constexpr int kSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  ///< domain or convergence failure
inline constexpr int kExitUsage = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pngkme::cli

#endif  // PNGKME_CLI_HPP_
