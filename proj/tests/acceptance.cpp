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


// Acceptance checks. Prints one PASS/FAIL line per criterion, preceded by
// the individual checks. A check tagged "known" is a documented deviation of
// the reference numbers: it still reports FAIL but does not affect the exit
// status unless --strict is given.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "pngkme/cli.hpp"
#include "pngkme/datasets.hpp"
#include "pngkme/distribution.hpp"
#include "pngkme/gof.hpp"
#include "pngkme/inference.hpp"
#include "pngkme/numerics.hpp"
#include "pngkme/properties.hpp"
#include "pngkme/simstudy.hpp"

using namespace pngkme;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
  int id;
  std::string title;
  int failed = 0;
  int known_failed = 0;
  int checked = 0;

  void check(bool ok, const std::string& what, bool known = false) {
    ++checked;
    const char* tag = ok ? "ok  " : (known ? "FAIL (known)" : "FAIL");
    std::printf("    [%d] %-12s %s\n", id, tag, what.c_str());
    if (!ok) (known ? known_failed : failed)++;
  }
  void info(const std::string& what) const {
    std::printf("    [%d] info         %s\n", id, what.c_str());
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int g_unexpected = 0;
int g_any = 0;

void finish(const Criterion& c, double seconds) {
  const bool ok = c.failed == 0 && c.known_failed == 0;
  std::printf("%s criterion %d: %s (%d checks, %d failed, %d known; %.1f s)\n",
              ok ? "PASS" : "FAIL", c.id, c.title.c_str(), c.checked,
              c.failed + c.known_failed, c.known_failed, seconds);
  std::fflush(stdout);
  if (c.failed > 0) ++g_unexpected;
  if (!ok) ++g_any;
}

Sample bladder() {
  const auto v = datasets::bladder128();
  return Sample(std::vector<double>(v.begin(), v.end()));
}

bool within(double x, double target, double tol) { return std::abs(x - target) <= tol; }

// ---------------------------------------------------------------------------

void reference_fits() {
  Criterion c{1, "reference fits on bladder128"};
  const auto t0 = Clock::now();
  const Sample s = bladder();
  FitOptions opt;
  opt.seed = 1;
  auto run = [&](Family f) { return fit(ModelSpec::of(f), s, opt); };

  const FitResult pk = run(Family::PNGKME);
  c.check(pk.converged, "PNGKME fit converged");
  c.check(pk.neg2loglik <= 820.25, fmt("PNGKME -2lnL %.4f <= 820.25", pk.neg2loglik));
  c.check(within(pk.neg2loglik, 820.1974, 0.05),
          fmt("PNGKME -2lnL %.4f within 0.05 of 820.1974", pk.neg2loglik), true);
  c.check(within(pk.aic, 826.1974, 0.5), fmt("PNGKME AIC %.4f within 0.5 of 826.1974", pk.aic));
  c.info(fmt("PNGKME estimates alpha=%.6g beta=%.6g lambda=%.6g", pk.estimates.alpha,
             pk.estimates.beta, pk.estimates.lambda));

  const FitResult ee = run(Family::EE);
  c.check(within(ee.aic, 830.1486, 0.5), fmt("EE AIC %.4f within 0.5 of 830.1486", ee.aic));

  const FitResult ex = run(Family::Exponential);
  c.check(within(ex.estimates.beta, 0.1068, 0.0005),
          fmt("exponential beta %.6f within 0.0005 of 0.1068", ex.estimates.beta));
  c.check(within(ex.neg2loglik, 828.6646, 0.01),
          fmt("exponential -2lnL %.4f within 0.01 of 828.6646", ex.neg2loglik), true);

  const FitResult ew = run(Family::ExponentiatedWeibull);
  c.check(within(ew.neg2loglik, 821.3551, 0.5),
          fmt("EW -2lnL %.4f within 0.5 of 821.3551", ew.neg2loglik));

  const FitResult ga = run(Family::Gamma);
  c.check(within(ga.aic, 830.7268, 0.5), fmt("Gamma AIC %.4f within 0.5 of 830.7268", ga.aic));

  const double sec = since(t0);
  c.check(sec < 60.0, fmt("runtime %.1f s < 60 s", sec));
  finish(c, sec);
}

void uncertainty() {
  Criterion c{2, "covariance and intervals at the PNGKME MLE"};
  const auto t0 = Clock::now();
  const Sample s = bladder();
  const FitResult f = fit(ModelSpec::of(Family::PNGKME), s);
  c.check(f.converged && f.vcov_ok, "fit converged with a usable covariance");
  if (!f.vcov_ok) {
    finish(c, since(t0));
    return;
  }
  const double ref[3] = {0.06141611, 2.200424e-8, 6.190447e-5};
  const char* names[3] = {"alpha", "beta", "lambda"};
  for (int k = 0; k < 3; ++k) {
    const double v = f.vcov(k, k);
    c.check(std::abs(v - ref[k]) <= 0.05 * ref[k],
            fmt("Var(%s) %.6g within 5%% of %.6g", names[k], v, ref[k]), true);
  }
  const auto& ci = f.ci;
  c.check(within(ci[0].lower, 1.14668, 0.02) && within(ci[0].upper, 2.41793, 0.02),
          fmt("alpha CI (%.5f, %.5f) within 0.02 of (1.14668, 2.41793)", ci[0].lower,
              ci[0].upper),
          true);
  c.check(within(ci[1].lower, 0.04908, 0.001) && within(ci[1].upper, 0.05615, 0.001),
          fmt("beta CI (%.5f, %.5f) within 0.001 of (0.04908, 0.05615)", ci[1].lower,
              ci[1].upper),
          true);
  c.info(fmt("lambda CI (%.6g, %.6g), reported only", ci[2].lower, ci[2].upper));

  // Same quantities at the reference point, for context.
  const Params ref_point{1.6651, 0.0525, 41.186};
  const auto info = observed_information(ref_point, s);
  const auto inv = numerics::invert_symmetric(info);
  if (inv.ok) {
    c.info(fmt("inverse information at (1.6651, 0.0525, 41.186): diag %.6g %.6g %.6g",
               inv.inverse(0, 0), inv.inverse(1, 1), inv.inverse(2, 2)));
  }
  const double sec = since(t0);
  c.check(sec < 10.0, fmt("runtime %.1f s < 10 s", sec));
  finish(c, sec);
}

void reference_gof() {
  Criterion c{3, "goodness of fit at the reference PNGKME estimates"};
  const auto t0 = Clock::now();
  const Sample s = bladder();
  const Params p{1.6651, 0.0525, 41.186};
  const auto stats = gof_statistics([&](double x) { return cdf(p, x); }, s.values());
  const auto r = gof_pvalues(stats, s.n());
  c.check(within(r.ks, 0.0386, 0.002), fmt("K-S %.5f within 0.002 of 0.0386", r.ks));
  c.check(within(r.cvm, 0.0278, 0.003), fmt("CvM %.5f within 0.003 of 0.0278", r.cvm));
  c.check(within(r.ad, 0.1952, 0.02), fmt("A-D %.5f within 0.02 of 0.1952", r.ad));
  c.check(within(r.ks_p, 0.9912, 0.02), fmt("K-S p %.4f within 0.02 of 0.9912", r.ks_p));
  c.check(within(r.cvm_p, 0.9833, 0.02), fmt("CvM p %.4f within 0.02 of 0.9833", r.cvm_p));
  c.check(within(r.ad_p, 0.9917, 0.02), fmt("A-D p %.4f within 0.02 of 0.9917", r.ad_p));
  const double sec = since(t0);
  c.check(sec < 5.0, fmt("runtime %.1f s < 5 s", sec));
  finish(c, sec);
}

void simulation() {
  Criterion c{4, "simulation study, N = 200, seed 42"};
  const auto t0 = Clock::now();
  SimDesign d = SimDesign::table1();
  d.replications = 200;
  d.seed = 42;
  const SimReport rep = run_study(d);
  const char* names[3] = {"alpha", "beta", "lambda"};
  auto cell = [&](const Params& truth, std::size_t n) -> const CellResult& {
    for (const auto& cr : rep.cells) {
      if (cr.n == n && cr.truth.alpha == truth.alpha && cr.truth.beta == truth.beta &&
          cr.truth.lambda == truth.lambda) {
        return cr;
      }
    }
    throw std::logic_error("missing cell");
  };
  for (const Params& t : d.truths) {
    const auto& small = cell(t, 50);
    const auto& large = cell(t, 1000);
    for (int k = 0; k < 3; ++k) {
      c.check(large.mse[k] < small.mse[k],
              fmt("(%g,%g,%g) MSE(%s): n=1000 %.4g < n=50 %.4g", t.alpha, t.beta, t.lambda,
                  names[k], large.mse[k], small.mse[k]));
    }
  }
  for (const auto& cr : rep.cells) {
    if (cr.failures > 0 || cr.unreliable) {
      c.info(fmt("(%g,%g,%g) n=%zu: %d of %d replicates excluded%s", cr.truth.alpha,
                 cr.truth.beta, cr.truth.lambda, cr.n, cr.failures, cr.replications,
                 cr.unreliable ? ", unreliable" : ""));
    }
  }
  const auto& ref = cell({2.5, 1.5, 0.5}, 1000);
  c.check(std::abs(ref.bias[0]) <= 0.05,
          fmt("(2.5,1.5,0.5) n=1000 |bias(alpha)| %.4f <= 0.05", std::abs(ref.bias[0])), true);
  c.check(ref.mse[0] >= 0.07 && ref.mse[0] <= 0.30,
          fmt("(2.5,1.5,0.5) n=1000 MSE(alpha) %.4f in [0.07, 0.30]", ref.mse[0]));
  const double sec = since(t0);
  c.check(sec < 600.0, fmt("runtime %.1f s < 600 s", sec));
  finish(c, sec);
}

// Pinned grid: α, λ ∈ {0.5, 2, 5} and β ∈ {0.5, 2}.
const std::vector<Params> kGrid = {
    {0.5, 0.5, 0.5}, {0.5, 2.0, 2.0}, {0.5, 0.5, 5.0}, {2.0, 2.0, 0.5},
    {2.0, 0.5, 2.0}, {2.0, 2.0, 5.0}, {5.0, 0.5, 0.5}, {5.0, 2.0, 2.0},
    {5.0, 0.5, 5.0}, {2.0, 2.0, 2.0},
};

void properties() {
  Criterion c{5, "property suites"};
  const auto t0 = Clock::now();
  Rng rng(20260501);
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * rng.uniform());
  };

  // Normalization and round trip on random triples.
  std::vector<Params> random;
  for (int i = 0; i < 50; ++i) {
    random.push_back({log_uniform(0.5, 5.0), log_uniform(0.2, 5.0), log_uniform(0.05, 50.0)});
  }
  double worst_norm = 0.0, worst_rt = 0.0;
  for (const Params& p : random) {
    const auto r = numerics::integrate([&](double x) { return pdf(p, x); }, 0.0,
                                       numerics::kInf, 1e-11, 1.0 / p.beta);
    worst_norm = std::max(worst_norm, std::abs(r.value - 1.0));
    for (int j = 1; j < 100; ++j) {
      const double x = quantile(p, j / 100.0) * 1.37;
      worst_rt = std::max(worst_rt, std::abs(quantile(p, cdf(p, x)) - x) / (1.0 + x));
    }
  }
  c.check(worst_norm <= 1e-8, fmt("pdf integrates to 1 on 50 random triples (max err %.2g)",
                                  worst_norm));
  c.check(worst_rt <= 1e-8, fmt("quantile(cdf(x)) = x (max scaled err %.2g)", worst_rt));

  // Score and information against finite differences on the bladder data.
  const Sample s = bladder();
  const ModelSpec spec = ModelSpec::of(Family::PNGKME);
  double worst_score = 0.0, worst_info = 0.0, worst_printed_ab = 0.0;
  double worst_printed_l = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Params p{log_uniform(0.4, 4.0), log_uniform(0.4, 2.5) / s.mean(),
                   log_uniform(i % 2 ? 1.5 : 0.05, 60.0)};
    const std::vector<double> x{p.alpha, p.beta, p.lambda};
    auto scaled = [&](std::span<const double> u) {
      return log_likelihood(spec, {u[0] * x[0], u[1] * x[1], u[2] * x[2]}, s);
    };
    const std::vector<double> ones{1.0, 1.0, 1.0};
    const auto fd = numerics::fd_gradient(scaled, ones, 1e-6);
    const auto g = score(p, s);
    for (int k = 0; k < 3; ++k) {
      worst_score = std::max(worst_score, std::abs(g[k] * x[k] - fd[k]) /
                                              std::max(std::abs(fd[k]), 1.0));
    }
    const auto h = numerics::fd_hessian(scaled, ones, 1e-4);
    const auto info = observed_information(p, s);
    const double floor = 1e-3 * h.max_abs();
    auto rel = [&](const numerics::Matrix& m, int r, int k) {
      return std::abs(-m(r, k) * x[r] * x[k] - h(r, k)) / std::max(std::abs(h(r, k)), floor);
    };
    for (int r = 0; r < 3; ++r) {
      for (int k = 0; k < 3; ++k) worst_info = std::max(worst_info, rel(info, r, k));
    }
    if (p.lambda > 1.0) {
      const auto printed = observed_information_as_printed(p, s);
      for (int r = 0; r < 2; ++r) {
        for (int k = 0; k < 2; ++k) worst_printed_ab = std::max(worst_printed_ab, rel(printed, r, k));
      }
      for (int k = 0; k < 3; ++k) worst_printed_l = std::max(worst_printed_l, rel(printed, k, 2));
    }
  }
  c.check(worst_score <= 1e-5, fmt("analytic score vs finite differences (max rel %.2g)",
                                   worst_score));
  c.check(worst_info <= 1e-4, fmt("analytic Hessian vs finite differences (max rel %.2g)",
                                  worst_info));
  c.check(worst_printed_ab <= 1e-4,
          fmt("printed Hessian, alpha/beta entries, vs finite differences (max rel %.2g)",
              worst_printed_ab));
  c.info(fmt("logged exception: printed Hessian lambda entries differ from finite "
             "differences (max rel %.2g); excluded",
             worst_printed_l));

  // Series against quadrature on the pinned grid.
  double worst_series = 0.0;
  int compared = 0, skipped = 0;
  std::string worst_what;
  auto agree = [&](const PropertyResult& a, const PropertyResult& q, const std::string& what) {
    ++compared;
    double err;
    if (a.fell_back || !a.converged || a.method != Method::series) {
      err = numerics::kInf;
    } else if (std::isinf(a.value) && a.value == q.value) {
      err = 0.0;
    } else {
      err = std::abs(a.value - q.value) / std::abs(q.value);
    }
    if (!(err <= worst_series)) {
      worst_series = err;
      worst_what = what;
    }
  };
  for (const Params& p : kGrid) {
    const std::string at = fmt("(%g,%g,%g)", p.alpha, p.beta, p.lambda);
    for (int r = 1; r <= 3; ++r) {
      agree(raw_moment({p, r, Method::series}), raw_moment({p, r}), "moment " + at);
    }
    agree(mean_deviation_about_mean(p, Method::series), mean_deviation_about_mean(p),
          "mean deviation about the mean " + at);
    agree(mean_deviation_about_median(p, Method::series), mean_deviation_about_median(p),
          "mean deviation about the median " + at);
    for (double sv : {0.5, 2.0}) {
      agree(renyi_entropy(p, sv, Method::series), renyi_entropy(p, sv), "Renyi " + at);
    }
    const Params plain{p.alpha, p.beta, 1.0};
    const Params other{p.alpha * 1.3, p.beta * 0.8, 1.0};
    const std::vector<std::pair<ReliabilityPair, bool>> pairs = {
        {{p, {p.alpha, p.beta, p.lambda * 1.7}}, true},
        {{plain, p}, p.lambda > 1.0},  // needs ln λ₂ > 0
        {{p, plain}, p.lambda > 1.0},  // needs ln λ₁ > 0
        {{plain, other}, true},
    };
    for (const auto& [pair, applicable] : pairs) {
      if (!applicable) {
        ++skipped;
        continue;
      }
      agree(reliability(pair, Method::series), reliability(pair), "reliability " + at);
    }
  }
  c.check(worst_series <= 1e-6,
          fmt("series vs quadrature, %d comparisons (max rel %.2g at %s)", compared,
              worst_series, worst_what.c_str()));
  c.info(fmt("%d reliability pairs with lambda <= 1 have no incomplete-gamma form; "
             "not compared",
             skipped));

  double worst_sym = 0.0, worst_order = 0.0, worst_branch = 0.0;
  for (const Params& p : kGrid) {
    worst_sym = std::max(worst_sym, std::abs(reliability({p, p}).value - 0.5));
    for (int j = 1; j <= 9; ++j) {
      const double x = quantile(p, j / 10.0);
      double mix = 0.0;
      for (int k = 1; k <= 5; ++k) mix += order_stat_pdf(p, 5, k, x) / 5.0;
      worst_order = std::max(worst_order, std::abs(mix - pdf(p, x)));
    }
    for (double x : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double at1 = cdf({p.alpha, p.beta, 1.0}, x);
      for (double l : {1.0 - 1e-7, 1.0 + 1e-7}) {
        worst_branch = std::max(worst_branch, std::abs(cdf({p.alpha, p.beta, l}, x) - at1));
      }
    }
  }
  c.check(worst_sym <= 1e-8, fmt("R(p, p) = 1/2 (max err %.2g)", worst_sym));
  c.check(worst_order <= 1e-10,
          fmt("order-statistic mixture identity, n = 5 (max err %.2g)", worst_order));
  c.check(worst_branch <= 1e-6, fmt("lambda-branch continuity (max err %.2g)", worst_branch));

  const double sec = since(t0);
  c.check(sec < 300.0, fmt("runtime %.1f s < 300 s", sec));
  finish(c, sec);
}

std::string cli_output(std::vector<const char*> args, int* code) {
  args.insert(args.begin(), "pngkme");
  std::ostringstream out, err;
  *code = cli::run(static_cast<int>(args.size()), args.data(), out, err);
  return out.str();
}

void determinism() {
  Criterion c{6, "determinism of simulate and fit"};
  const auto t0 = Clock::now();
  const std::vector<std::vector<const char*>> commands = {
      {"simulate", "--preset", "table1", "--reps", "200", "--seed", "42"},
      {"fit", "--data", "bladder128", "--seed", "7"},
      {"fit", "--model", "ew", "--seed", "7", "--output", "csv"},
  };
  for (const auto& cmd : commands) {
    int c1 = -1, c2 = -1;
    const std::string a = cli_output(cmd, &c1);
    const std::string b = cli_output(cmd, &c2);
    std::string line;
    for (const char* w : cmd) line += std::string(w) + " ";
    c.check(c1 == 0 && c2 == 0 && !a.empty() && a == b,
            fmt("%sgives identical output (%zu bytes) on two runs", line.c_str(), a.size()));
  }
  finish(c, since(t0));
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else {
      only.push_back(std::atoi(argv[i]));
    }
  }
  auto want = [&](int id) {
    return only.empty() || std::find(only.begin(), only.end(), id) != only.end();
  };
  const std::vector<std::function<void()>> all = {reference_fits, uncertainty, reference_gof,
                                                  simulation,     properties,  determinism};
  for (int id = 1; id <= 6; ++id) {
    if (!want(id)) continue;
    try {
      all[id - 1]();
    } catch (const std::exception& e) {
      std::printf("FAIL criterion %d: exception: %s\n", id, e.what());
      ++g_unexpected;
      ++g_any;
    }
  }
  std::printf("summary: %d criteria failed, %d with failures outside the known list\n", g_any,
              g_unexpected);
  return (strict ? g_any : g_unexpected) > 0 ? 1 : 0;
}
