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


#include "pngkme/datasets.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pngkme::datasets {

namespace {

constexpr std::array<double, 128> kBladder{
    0.08,  2.09,  3.48,  4.87,  6.94,  8.66,  13.11, 23.63, 0.20,  2.23,
    3.52,  4.98,  6.97,  9.02,  13.29, 0.40,  2.26,  3.57,  5.06,  7.09,
    9.22,  13.80, 25.74, 0.50,  2.46,  3.64,  5.09,  7.26,  9.47,  14.24,
    25.82, 0.51,  2.54,  3.70,  5.17,  7.28,  9.74,  14.76, 26.31, 0.81,
    2.62,  3.82,  5.32,  7.32,  10.06, 14.77, 32.15, 2.64,  3.88,  5.32,
    7.39,  10.34, 14.83, 34.26, 0.90,  2.69,  4.18,  5.34,  7.59,  10.66,
    15.96, 36.66, 1.05,  2.69,  4.23,  5.41,  7.62,  10.75, 16.62, 43.01,
    1.19,  2.75,  4.26,  5.41,  7.63,  17.12, 46.12, 1.26,  2.83,  4.33,
    7.66,  11.25, 17.14, 79.05, 1.35,  2.87,  5.62,  7.87,  11.64, 17.36,
    1.40,  3.02,  4.34,  5.71,  7.93,  11.79, 18.10, 1.46,  4.40,  5.85,
    8.26,  11.98, 19.13, 1.76,  3.25,  4.50,  6.25,  8.37,  12.02, 2.02,
    3.31,  4.51,  6.54,  8.53,  12.03, 20.28, 2.02,  3.36,  6.76,  12.07,
    21.73, 2.07,  3.36,  6.93,  8.65,  12.63, 22.69, 5.49,
};

}  // namespace

std::span<const double> bladder128() { return kBladder; }

std::vector<std::string> bundled_names() { return {"bladder128"}; }

std::optional<std::vector<double>> bundled(std::string_view name) {
  if (name == "bladder128") return std::vector<double>(kBladder.begin(), kBladder.end());
  return std::nullopt;
}

std::vector<double> parse_values(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() &&
             (line[i] == ',' || line[i] == ';' ||
              std::isspace(static_cast<unsigned char>(line[i])))) {
        ++i;
      }
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ',' && line[j] != ';' &&
             !std::isspace(static_cast<unsigned char>(line[j]))) {
        ++j;
      }
      double v = 0.0;
      const auto res = std::from_chars(line.data() + i, line.data() + j, v);
      if (res.ec != std::errc() || res.ptr != line.data() + j) {
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": cannot parse '" +
                                    std::string(line.substr(i, j - i)) + "'");
      }
      out.push_back(v);
      i = j;
    }
  }
  return out;
}

std::vector<double> load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_values(ss.str());
}

Sample resolve(const std::string& ref) {
  if (auto v = bundled(ref)) return Sample(std::move(*v));
  return Sample(load_file(ref));
}

std::uint64_t checksum(std::span<const double> values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int len = std::snprintf(buf, sizeof buf, i ? ",%.2f" : "%.2f", values[i]);
    for (int c = 0; c < len; ++c) {
      h ^= static_cast<unsigned char>(buf[c]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace pngkme::datasets
