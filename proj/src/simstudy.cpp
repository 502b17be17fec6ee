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


#include "pngkme/simstudy.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "pngkme/inference.hpp"

namespace pngkme {

namespace {

constexpr const char* kHeader =
    "n,alpha,beta,lambda,bias_alpha,bias_beta,bias_lambda,mse_alpha,mse_beta,"
    "mse_lambda";

struct Replicate {
  Params est;
  bool ok = false;
  bool refit = false;
};

Replicate run_replicate(const Params& truth, std::size_t n, const SimDesign& d,
                        const Rng& stream, std::uint64_t fit_seed) {
  Rng rng = stream;
  const Sample s(sample(truth, rng, n));
  FitOptions opt;
  opt.restarts = d.restarts;
  opt.seed = fit_seed;
  opt.nest_restarts = false;
  opt.threads = 1;
  opt.extra_starts = {truth};
  Replicate out;
  FitResult r = fit(ModelSpec::of(Family::PNGKME), s, opt);
  if (!r.converged) {
    out.refit = true;
    opt.restarts = d.refit_restarts;
    opt.nest_restarts = true;
    opt.extra_starts.push_back(r.estimates);
    r = fit(ModelSpec::of(Family::PNGKME), s, opt);
  }
  out.est = r.estimates;
  out.ok = r.converged;
  return out;
}

void aggregate(CellResult& cell, const std::vector<Replicate>& reps) {
  std::array<std::vector<double>, 3> err;
  for (const Replicate& r : reps) {
    if (r.refit) ++cell.refits;
    if (!r.ok) {
      ++cell.failures;
      continue;
    }
    for (std::size_t k = 0; k < 3; ++k) err[k].push_back(r.est[k] - cell.truth[k]);
  }
  cell.used = static_cast<int>(err[0].size());
  cell.unreliable = cell.failures > 0.05 * cell.replications;
  const double nan = std::nan("");
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& e = err[k];
    if (e.empty()) {
      cell.bias[k] = cell.mse[k] = cell.trimmed_bias[k] = cell.trimmed_mse[k] = nan;
      continue;
    }
    double s = 0.0, s2 = 0.0;
    for (double v : e) {
      s += v;
      s2 += v * v;
    }
    const double m = static_cast<double>(e.size());
    cell.bias[k] = s / m;
    cell.mse[k] = s2 / m;
    std::vector<double> sorted = e;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t cut = sorted.size() / 20;
    double ts = 0.0, ts2 = 0.0;
    for (std::size_t i = cut; i < sorted.size() - cut; ++i) {
      ts += sorted[i];
      ts2 += sorted[i] * sorted[i];
    }
    const double tm = static_cast<double>(sorted.size() - 2 * cut);
    cell.trimmed_bias[k] = ts / tm;
    cell.trimmed_mse[k] = ts2 / tm;
  }
}

double parse_double(std::string_view t) {
  double v = 0.0;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
  if (r.ec != std::errc() || r.ptr != t.data() + t.size()) {
    throw std::invalid_argument("parse_table: bad number '" + std::string(t) + "'");
  }
  return v;
}

}  // namespace

SimDesign SimDesign::table1() {
  SimDesign d;
  d.truths = {{2.5, 1.5, 0.5}, {5.0, 2.5, 0.5}, {3.5, 5.5, 1.5}, {1.0, 1.5, 2.0}};
  d.sizes = {50, 200, 500, 1000};
  d.replications = 1000;
  return d;
}

void SimDesign::validate() const {
  if (truths.empty() || sizes.empty()) {
    throw std::invalid_argument("SimDesign: need at least one truth and size");
  }
  if (replications < 1) throw std::invalid_argument("SimDesign: N must be >= 1");
  if (restarts < 1 || refit_restarts < 1) {
    throw std::invalid_argument("SimDesign: restarts must be >= 1");
  }
  for (std::size_t n : sizes) {
    if (n < 2) throw std::invalid_argument("SimDesign: sample sizes must be >= 2");
  }
  for (const Params& p : truths) p.validate();
}

SimReport run_study(const SimDesign& design, const SimProgress& progress) {
  design.validate();
  const auto t0 = std::chrono::steady_clock::now();
  SimReport report;
  report.design = design;
  const Rng root(design.seed);
  const std::size_t total = design.truths.size() * design.sizes.size();
  const unsigned threads = std::max(
      1u, design.threads ? design.threads : std::thread::hardware_concurrency());
  for (std::size_t ti = 0; ti < design.truths.size(); ++ti) {
    for (std::size_t si = 0; si < design.sizes.size(); ++si) {
      const auto c0 = std::chrono::steady_clock::now();
      const std::size_t cell_index = ti * design.sizes.size() + si;
      const Rng cell_rng = root.split(cell_index);
      CellResult cell;
      cell.truth = design.truths[ti];
      cell.n = design.sizes[si];
      cell.replications = design.replications;
      std::vector<Replicate> reps(static_cast<std::size_t>(design.replications));
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t r = next++; r < reps.size(); r = next++) {
          reps[r] = run_replicate(cell.truth, cell.n, design, cell_rng.split(r),
                                  mix_seed(design.seed ^ (cell_index << 32) ^ r));
        }
      };
      const unsigned used = std::min<unsigned>(threads, static_cast<unsigned>(reps.size()));
      if (used <= 1) {
        worker();
      } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < used; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
      }
      aggregate(cell, reps);
      cell.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - c0).count();
      report.cells.push_back(cell);
      if (progress) progress(report.cells.size(), total);
    }
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::string export_table(const SimReport& report) {
  std::string out = kHeader;
  out += '\n';
  char buf[64];
  for (const CellResult& c : report.cells) {
    out += std::to_string(c.n);
    const double vals[9] = {c.truth.alpha, c.truth.beta, c.truth.lambda,
                            c.bias[0],     c.bias[1],    c.bias[2],
                            c.mse[0],      c.mse[1],     c.mse[2]};
    for (double v : vals) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::vector<SimRow> parse_table(std::string_view csv) {
  std::vector<SimRow> rows;
  bool header = true;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      if (line != kHeader) throw std::invalid_argument("parse_table: unexpected header");
      header = false;
      continue;
    }
    std::vector<std::string_view> f;
    std::size_t a = 0;
    while (true) {
      const std::size_t b = line.find(',', a);
      f.push_back(line.substr(a, b == std::string_view::npos ? line.npos : b - a));
      if (b == std::string_view::npos) break;
      a = b + 1;
    }
    if (f.size() != 10) throw std::invalid_argument("parse_table: expected 10 columns");
    SimRow r;
    r.n = static_cast<std::size_t>(parse_double(f[0]));
    for (std::size_t k = 0; k < 3; ++k) {
      r.truth[k] = parse_double(f[1 + k]);
      r.bias[k] = parse_double(f[4 + k]);
      r.mse[k] = parse_double(f[7 + k]);
    }
    rows.push_back(r);
  }
  if (header) throw std::invalid_argument("parse_table: missing header");
  return rows;
}

}  // namespace pngkme
