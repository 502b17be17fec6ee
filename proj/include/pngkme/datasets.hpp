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


// Bundled data and sample-file loading.

#ifndef PNGKME_DATASETS_HPP_
#define PNGKME_DATASETS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pngkme/inference.hpp"

namespace pngkme::datasets {

/// Remission times (months) of 128 bladder-cancer patients, in the order
/// of the original listing.
std::span<const double> bladder128();

/// Names accepted by `resolve`: "bladder128".
std::vector<std::string> bundled_names();
std::optional<std::vector<double>> bundled(std::string_view name);

/// One or more values per line separated by commas and/or whitespace; lines
/// whose first non-blank character is '#' are skipped. Throws
/// std::invalid_argument on an unparsable token.
std::vector<double> parse_values(std::string_view text);
/// Throws std::runtime_error if the file cannot be read.
std::vector<double> load_file(const std::string& path);

/// A bundled name, otherwise a file path.
Sample resolve(const std::string& ref);

/// FNV-1a over the values printed with two decimals, comma separated.
std::uint64_t checksum(std::span<const double> values);

}  // namespace pngkme::datasets

#endif  // PNGKME_DATASETS_HPP_
