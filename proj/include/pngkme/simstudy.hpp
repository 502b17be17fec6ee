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


// Monte Carlo study of the PNGKME maximum-likelihood estimators.

#ifndef PNGKME_SIMSTUDY_HPP_
#define PNGKME_SIMSTUDY_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "pngkme/distribution.hpp"

namespace pngkme {

struct SimDesign {
  std::vector<Params> truths;
  std::vector<std::size_t> sizes;
  int replications = 1000;
  std::uint64_t seed = 1;
  double omega = 0.05;  ///< recorded only
  int restarts = 4;     ///< heuristic starts per replicate (plus the truth)
  int refit_restarts = 16;
  unsigned threads = 0;

  /// Truths {(2.5,1.5,0.5), (5,2.5,0.5), (3.5,5.5,1.5), (1,1.5,2)} and
  /// sizes {50, 200, 500, 1000}, N = 1000.
  static SimDesign table1();
  /// Throws std::invalid_argument when empty or non-positive.
  void validate() const;
};

struct CellResult {
  Params truth;
  std::size_t n = 0;
  std::array<double, 3> bias{};
  std::array<double, 3> mse{};
  /// Same after dropping the 5% most extreme estimates of each parameter
  /// on either side.
  std::array<double, 3> trimmed_bias{};
  std::array<double, 3> trimmed_mse{};
  int replications = 0;
  int used = 0;      ///< converged replicates in the aggregates
  int refits = 0;    ///< replicates that needed the second attempt
  int failures = 0;  ///< still not converged after the refit
  bool unreliable = false;  ///< failure rate above 5%
  double seconds = 0.0;
};

struct SimReport {
  SimDesign design;
  std::vector<CellResult> cells;  ///< truth-major, then size
  double seconds = 0.0;
};

/// Called after each cell with (cells done, total cells).
using SimProgress = std::function<void(std::size_t, std::size_t)>;

SimReport run_study(const SimDesign& design, const SimProgress& progress = {});

/// One CSV row per cell: n, alpha, beta, lambda, bias_alpha, bias_beta,
/// bias_lambda, mse_alpha, mse_beta, mse_lambda.
std::string export_table(const SimReport& report);

struct SimRow {
  std::size_t n = 0;
  Params truth;
  std::array<double, 3> bias{};
  std::array<double, 3> mse{};
};

/// Inverse of export_table. Throws std::invalid_argument on malformed input.
std::vector<SimRow> parse_table(std::string_view csv);

}  // namespace pngkme

#endif  // PNGKME_SIMSTUDY_HPP_
