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
#include <vector>

#include "doctest.h"
#include "pngkme/datasets.hpp"
#include "pngkme/gof.hpp"

using namespace pngkme;
using doctest::Approx;

namespace {

Sample bladder() {
  const auto v = datasets::bladder128();
  return Sample(std::vector<double>(v.begin(), v.end()));
}

CdfFn uniform_cdf() {
  return [](double x) { return std::clamp(x, 0.0, 1.0); };
}

std::vector<double> plug_in(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (static_cast<double>(i) + 0.5) / n;
  return v;
}

}  // namespace

TEST_CASE("plug-in sample") {
  auto v = plug_in(100);
  CHECK(ks_statistic(uniform_cdf(), v) == Approx(0.005).epsilon(1e-12));
  CHECK(cvm_statistic(uniform_cdf(), v) == Approx(1.0 / 1200.0).epsilon(1e-12));
  CHECK(ad_statistic(uniform_cdf(), v) >= 0.0);
}

TEST_CASE("statistics ignore sample order") {
  const Sample b = bladder();
  const ModelSpec spec = ModelSpec::of(Family::PNGKME);
  const Params p{1.6651, 0.05250, 41.1860};
  auto cdf = [&](double x) { return model_cdf(spec, p, x); };
  std::vector<double> v = b.values();
  const GofStats a = gof_statistics(cdf, v);
  std::reverse(v.begin(), v.end());
  std::rotate(v.begin(), v.begin() + 37, v.end());
  const GofStats c = gof_statistics(cdf, v);
  CHECK(a.ks == c.ks);
  CHECK(a.cvm == c.cvm);
  CHECK(a.ad == c.ad);
  CHECK(a.ks >= 1.0 / (2.0 * 128.0));
  CHECK(a.ks <= 1.0);
}

TEST_CASE("limiting distributions") {
  // scipy kstwobign and the Anderson–Darling (1952) CvM series.
  const std::vector<std::pair<double, double>> ks = {
      {0.3, 0.9999906941986655}, {0.5, 0.9639452436648751}, {0.8, 0.5441424115741981},
      {1.0, 0.26999967167735456}, {1.3581, 0.0499996304316674}, {2.0, 0.0006709252557796953}};
  for (auto [x, p] : ks) CHECK(kolmogorov_sf(x) == Approx(p).epsilon(1e-9));
  const std::vector<std::pair<double, double>> cvm = {
      {0.02, 0.9969993856983981}, {0.1, 0.5848734384067971}, {0.347, 0.10019124868694851},
      {0.461, 0.05010712720175847}, {0.743, 0.010025523981498807}, {1.5, 0.0001726962197893256}};
  for (auto [w, p] : cvm) CHECK(cvm_sf(w) == Approx(p).epsilon(1e-8));
  // Tabulated upper-tail critical values of the limiting A² law.
  CHECK(ad_sf(1.933) == Approx(0.10).epsilon(0.01));
  CHECK(ad_sf(2.492) == Approx(0.05).epsilon(0.01));
  CHECK(ad_sf(3.857) == Approx(0.01).epsilon(0.02));
  CHECK(kolmogorov_sf(0.0) == 1.0);
  CHECK(cvm_sf(0.0) == 1.0);
  CHECK(ad_sf(0.0) == 1.0);
  CHECK(gof_pvalues({0.0, 0.0, 0.0}, 50).ks_p == 1.0);
}

TEST_CASE("p-values are nonincreasing in the statistic") {
  double last_ks = 1.0, last_cvm = 1.0, last_ad = 1.0;
  for (int i = 1; i <= 400; ++i) {
    const double t = 0.01 * i;
    const double a = kolmogorov_sf(t), b = cvm_sf(t / 2.0), c = ad_sf(t * 2.0);
    CHECK(a <= last_ks + 1e-15);
    CHECK(b <= last_cvm + 1e-15);
    CHECK(c <= last_ad + 1e-15);
    CHECK(a >= 0.0);
    CHECK(b >= 0.0);
    CHECK(c >= 0.0);
    last_ks = a;
    last_cvm = b;
    last_ad = c;
  }
}

TEST_CASE("statistics at the published estimates") {
  const Sample b = bladder();
  const ModelSpec pngkme = ModelSpec::of(Family::PNGKME);
  const Params p{1.6651, 0.05250, 41.1860};
  const GofStats st =
      gof_statistics([&](double x) { return model_cdf(pngkme, p, x); }, b.values());
  // Independent numpy evaluation at the same point.
  CHECK(st.ks == Approx(0.04050039011610701).epsilon(1e-10));
  CHECK(st.cvm == Approx(0.028168296290437586).epsilon(1e-10));
  CHECK(st.ad == Approx(0.19831300672205998).epsilon(1e-10));
  CHECK(std::abs(st.ks - 0.0386) <= 0.002);
  CHECK(std::abs(st.cvm - 0.0278) <= 0.002);
  CHECK(std::abs(st.ad - 0.1952) <= 0.01);
  const GofReport r = gof_pvalues(st, b.n());
  CHECK(r.ks_p == Approx(0.9826742711711434).epsilon(1e-8));
  CHECK(r.cvm_p == Approx(0.9817889508856034).epsilon(1e-8));
  CHECK(std::abs(r.ks_p - 0.9912) <= 0.02);
  CHECK(std::abs(r.cvm_p - 0.9833) <= 0.02);
  CHECK(std::abs(r.ad_p - 0.9917) <= 0.02);

  const ModelSpec ee = ModelSpec::of(Family::EE);
  const Params q{1.2174, 0.1212, 1.0};
  CHECK(std::abs(ks_statistic([&](double x) { return model_cdf(ee, q, x); }, b.values()) -
                 0.0725) <= 0.002);
  const ModelSpec gam = ModelSpec::of(Family::Gamma);
  const Params g{1.1717, 0.1251, 1.0};
  CHECK(std::abs(cvm_statistic([&](double x) { return model_cdf(gam, g, x); }, b.values()) -
                 0.1349) <= 0.005);
}

TEST_CASE("model comparison") {
  const Sample b = bladder();
  const auto battery = default_battery();
  const auto rows = compare_models(b, battery);
  REQUIRE(rows.size() == battery.size());
  CHECK(rows.front().model == "pngkme");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].fit.converged == rows[i - 1].fit.converged) {
      CHECK(rows[i - 1].fit.aic <= rows[i].fit.aic);
    } else {
      CHECK(rows[i - 1].fit.converged);
    }
  }
  for (const auto& row : rows) {
    CAPTURE(row.model);
    CHECK(row.fit.aic == fit(row.fit.spec, b).aic);
    CHECK(row.gof.ks_p >= 0.0);
    CHECK(row.gof.ks_p <= 1.0);
    if (row.model == "duse") CHECK(std::abs(row.fit.aic - 832.2907) <= 0.5);
  }
  const ModelSpec exp_only[] = {ModelSpec::of(Family::Exponential)};
  const auto one = compare_models(b, exp_only);
  REQUIRE(one.size() == 1);
  CHECK(one[0].fit.aic == Approx(830.6837943099).epsilon(1e-10));
}

TEST_CASE("bootstrap p-values are calibrated") {
  // Exponential data tested against the exponential family with estimated
  // rate: p-values should be roughly uniform.
  const ModelSpec spec = ModelSpec::of(Family::Exponential);
  int inside = 0;
  const int datasets = 40;
  for (int d = 0; d < datasets; ++d) {
    Rng rng(Rng(777).split(d));
    const Sample s(sample({1.0, 1.5, 1.0}, rng, 40));
    const FitResult f = fit(spec, s);
    const GofReport r = gof_bootstrap(f, s, 200, 1000 + d);
    CHECK(r.method == PValueMethod::bootstrap);
    CHECK(r.bootstrap_failures == 0);
    inside += r.ks_p > 0.01 && r.ks_p < 0.99;
  }
  CHECK(inside >= 38);
}
