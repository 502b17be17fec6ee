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


#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "pngkme/simstudy.hpp"

using namespace pngkme;

namespace {

SimDesign small_design() {
  SimDesign d = SimDesign::table1();
  d.replications = 3;
  d.sizes = {50, 200};
  d.seed = 42;
  return d;
}

}  // namespace

TEST_CASE("default design") {
  const SimDesign d = SimDesign::table1();
  CHECK(d.truths.size() == 4);
  CHECK(d.sizes == std::vector<std::size_t>{50, 200, 500, 1000});
  CHECK(d.replications == 1000);
  CHECK(d.truths[3] == Params{1.0, 1.5, 2.0});
  d.validate();

  SimDesign bad = d;
  bad.replications = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = d;
  bad.sizes = {};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = d;
  bad.truths[0].beta = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("export shape and round trip") {
  SimDesign d = SimDesign::table1();
  d.replications = 2;
  const SimReport r = run_study(d);
  REQUIRE(r.cells.size() == 16);
  const std::string csv = export_table(r);
  const auto rows = parse_table(csv);
  REQUIRE(rows.size() == 16);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const CellResult& c = r.cells[i];
    CHECK(rows[i].n == c.n);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(rows[i].truth[k] == c.truth[k]);
      CHECK(std::abs(rows[i].bias[k] - c.bias[k]) <= 1e-12 * std::max(1.0, std::abs(c.bias[k])));
      CHECK(std::abs(rows[i].mse[k] - c.mse[k]) <= 1e-12 * std::max(1.0, std::abs(c.mse[k])));
    }
  }
  CHECK(csv.substr(0, csv.find('\n')) ==
        "n,alpha,beta,lambda,bias_alpha,bias_beta,bias_lambda,mse_alpha,mse_beta,mse_lambda");

  const std::string empty = export_table(SimReport{});
  CHECK(std::count(empty.begin(), empty.end(), '\n') == 1);
  CHECK(parse_table(empty).empty());
  CHECK_THROWS_AS(parse_table("n,alpha\n1,2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_table(empty + "1,2,3\n"), std::invalid_argument);
}

TEST_CASE("study is deterministic") {
  SimDesign d = small_design();
  d.threads = 1;
  const std::string a = export_table(run_study(d));
  const std::string b = export_table(run_study(d));
  d.threads = 3;
  const std::string c = export_table(run_study(d));
  CHECK(a == b);
  CHECK(a == c);
  d.seed = 43;
  CHECK(export_table(run_study(d)) != a);
}

TEST_CASE("cell invariants") {
  SimDesign d = small_design();
  d.replications = 20;
  const SimReport r = run_study(d);
  for (const CellResult& c : r.cells) {
    CHECK(c.failures <= c.replications);
    CHECK(c.used + c.failures == c.replications);
    CHECK(c.unreliable == (c.failures > 0.05 * c.replications));
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(c.mse[k] >= c.bias[k] * c.bias[k] - 1e-12);
      CHECK(c.trimmed_mse[k] >= c.trimmed_bias[k] * c.trimmed_bias[k] - 1e-12);
    }
  }
}

TEST_CASE("single large-sample fit is consistent") {
  SimDesign d;
  d.truths = {{1.0, 1.5, 2.0}};
  d.sizes = {1000000};
  d.replications = 1;
  d.seed = 5;
  d.restarts = 1;
  const CellResult c = run_study(d).cells.at(0);
  CHECK(c.failures == 0);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(c.bias[k]) <= 0.1);
}
