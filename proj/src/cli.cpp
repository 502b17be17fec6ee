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


#include "pngkme/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pngkme/datasets.hpp"
#include "pngkme/distribution.hpp"
#include "pngkme/gof.hpp"
#include "pngkme/inference.hpp"
#include "pngkme/simstudy.hpp"

namespace pngkme::cli {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised after a result has been written, to turn it into exit code 1.
struct ReportedFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { json, csv, table };

struct Config {
  std::string subcommand;
  std::string output;
  std::uint64_t seed = 1;
  double omega = 0.05;
  int restarts = 8;
  bool strict = false;
  unsigned threads = 0;

  std::string model = "pngkme";
  std::optional<double> alpha, beta, lambda;
  std::string data = "bladder128";

  std::string fn = "cdf";
  std::vector<double> xs, us;
  std::size_t n = 0;

  std::vector<std::string> models;
  std::string pvalues = "asymptotic";
  int bootstrap = 200;

  std::string preset = "table1";
  int reps = 200;
  bool full = false;
  std::vector<std::size_t> sizes;

  double from = 0.0, to = 5.0, step = 0.01;
};

std::string fmt(double v, int digits = 10) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Json num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

Format resolve_format(const Config& c, Format fallback) {
  if (c.output.empty()) return fallback;
  if (c.output == "json") return Format::json;
  if (c.output == "csv") return Format::csv;
  if (c.output == "table") return Format::table;
  throw UsageError("--output must be json, csv or table");
}

ModelSpec resolve_model(const std::string& name) {
  auto spec = ModelSpec::parse(name);
  if (!spec) throw UsageError("unknown model '" + name + "'");
  return *spec;
}

Params resolve_params(const Config& c, const ModelSpec& spec) {
  const std::array<std::optional<double>, 3> given{c.alpha, c.beta, c.lambda};
  const std::array<const char*, 3> flag{"--alpha", "--beta", "--lambda"};
  Params p;
  for (std::size_t i = 0; i < 3; ++i) {
    if (spec.fixed[i]) {
      if (given[i]) {
        throw UsageError(std::string(flag[i]) + " is fixed by model " + spec.name());
      }
      p[i] = *spec.fixed[i];
    } else {
      p[i] = given[i].value_or(1.0);
    }
  }
  p.validate();
  return p;
}

Json params_json(const ModelSpec& spec, const Params& p) {
  Json j = Json::object();
  const auto names = slot_names(spec.family);
  for (std::size_t i = 0; i < 3; ++i) {
    if (!names[i].empty()) j[names[i]] = num(p[i]);
  }
  return j;
}

Json config_json(const Config& c) {
  Json j;
  j["subcommand"] = c.subcommand;
  j["output"] = c.output;
  j["seed"] = c.seed;
  j["omega"] = c.omega;
  j["restarts"] = c.restarts;
  j["strict"] = c.strict;
  if (c.subcommand == "eval" || c.subcommand == "sample" || c.subcommand == "curves" ||
      c.subcommand == "fit" || c.subcommand == "gof") {
    j["model"] = c.model;
    Json p = Json::object();
    if (c.alpha) p["alpha"] = *c.alpha;
    if (c.beta) p["beta"] = *c.beta;
    if (c.lambda) p["lambda"] = *c.lambda;
    j["parameters"] = p;
  }
  if (c.subcommand == "fit" || c.subcommand == "compare" || c.subcommand == "gof") {
    j["data"] = c.data;
  }
  if (c.subcommand == "eval") {
    j["fn"] = c.fn;
    j["x"] = c.xs;
    j["u"] = c.us;
  }
  if (c.subcommand == "sample") j["n"] = c.n;
  if (c.subcommand == "compare") j["models"] = c.models;
  if (c.subcommand == "compare" || c.subcommand == "gof") {
    j["pvalues"] = c.pvalues;
    j["bootstrap"] = c.bootstrap;
  }
  if (c.subcommand == "simulate") {
    j["preset"] = c.preset;
    j["reps"] = c.reps;
    j["sizes"] = c.sizes;
  }
  if (c.subcommand == "curves") {
    j["from"] = c.from;
    j["to"] = c.to;
    j["step"] = c.step;
  }
  return j;
}

Json envelope(const Config& c) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config_json(c);
  return j;
}

FitOptions fit_options(const Config& c) {
  FitOptions o;
  o.omega = c.omega;
  o.seed = c.seed;
  o.restarts = c.restarts;
  o.threads = c.threads;
  return o;
}

Json fit_json(const FitResult& f) {
  Json j;
  j["model"] = f.spec.name();
  j["estimates"] = params_json(f.spec, f.estimates);
  const auto names = slot_names(f.spec.family);
  Json free = Json::array();
  for (std::size_t i : f.free_indices) free.push_back(names[i]);
  j["free_parameters"] = free;
  j["loglik"] = num(f.loglik);
  j["neg2loglik"] = num(f.neg2loglik);
  j["aic"] = num(f.aic);
  if (f.vcov_ok) {
    Json m = Json::array();
    for (std::size_t r = 0; r < f.vcov.size(); ++r) {
      Json row = Json::array();
      for (std::size_t c = 0; c < f.vcov.size(); ++c) row.push_back(num(f.vcov(r, c)));
      m.push_back(row);
    }
    j["vcov"] = m;
    Json ci = Json::object();
    for (std::size_t k = 0; k < f.ci.size(); ++k) {
      ci[names[f.free_indices[k]]] = {num(f.ci[k].lower), num(f.ci[k].upper)};
    }
    j["ci"] = ci;
  } else {
    j["vcov"] = nullptr;
    j["ci"] = nullptr;
  }
  j["converged"] = f.converged;
  j["optimizer"] = {{"iterations", f.trace.iterations},
                    {"gradient_norm", num(f.trace.gradient_norm)},
                    {"restarts_used", f.trace.restarts_used},
                    {"best_start", f.trace.best_start},
                    {"message", f.trace.message}};
  return j;
}

Json gof_json(const GofReport& g) {
  Json j;
  j["ks"] = num(g.ks);
  j["ks_p"] = num(g.ks_p);
  j["cvm"] = num(g.cvm);
  j["cvm_p"] = num(g.cvm_p);
  j["ad"] = num(g.ad);
  j["ad_p"] = num(g.ad_p);
  j["method"] = g.method == PValueMethod::asymptotic ? "asymptotic" : "bootstrap";
  if (g.method == PValueMethod::bootstrap) {
    j["bootstrap_replicates"] = g.bootstrap_replicates;
    j["bootstrap_failures"] = g.bootstrap_failures;
  }
  return j;
}

PValueMethod pvalue_method(const Config& c) {
  if (c.pvalues == "asymptotic") return PValueMethod::asymptotic;
  if (c.pvalues == "bootstrap") return PValueMethod::bootstrap;
  throw UsageError("--pvalues must be asymptotic or bootstrap");
}

void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) line += "  ";
      line += r[i];
      if (i + 1 < r.size()) line.append(width[i] - r[i].size(), ' ');
    }
    out << line << '\n';
  }
}

void print_csv(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << '\n';
  }
}

void emit_rows(std::ostream& out, Format f,
               const std::vector<std::vector<std::string>>& rows) {
  if (f == Format::csv) {
    print_csv(out, rows);
  } else {
    print_table(out, rows);
  }
}

// ---------------------------------------------------------------------------

void cmd_eval(const Config& c, std::ostream& out) {
  const ModelSpec spec = resolve_model(c.model);
  const Params p = resolve_params(c, spec);
  const Format f = resolve_format(c, Format::table);
  const bool quantile = c.fn == "quantile";
  static const std::vector<std::string> fns = {"cdf", "pdf", "logpdf", "survival",
                                               "hazard", "quantile"};
  if (std::find(fns.begin(), fns.end(), c.fn) == fns.end()) {
    throw UsageError("--fn must be one of cdf, pdf, logpdf, survival, hazard, quantile");
  }
  const auto& args = quantile ? c.us : c.xs;
  if (args.empty()) throw UsageError(quantile ? "--u is required" : "--x is required");
  if (quantile && !c.xs.empty()) throw UsageError("--x does not apply to quantile");
  if (!quantile && !c.us.empty()) throw UsageError("--u only applies to quantile");

  std::vector<double> values;
  for (double a : args) {
    double v;
    if (c.fn == "cdf") {
      v = model_cdf(spec, p, a);
    } else if (c.fn == "pdf") {
      v = model_pdf(spec, p, a);
    } else if (c.fn == "logpdf") {
      v = model_log_pdf(spec, p, a);
    } else if (c.fn == "survival") {
      v = spec.is_pngkme_family() ? survival(p, a) : 1.0 - model_cdf(spec, p, a);
    } else if (c.fn == "hazard") {
      if (!spec.is_pngkme_family()) {
        throw std::domain_error("hazard is only available for the PNGKME family");
      }
      v = hazard(p, a);
    } else {
      v = model_quantile(spec, p, a);
    }
    values.push_back(v);
  }
  const std::string arg_name = quantile ? "u" : "x";
  if (f == Format::json) {
    Json j = envelope(c);
    j["parameters"] = params_json(spec, p);
    Json pts = Json::array();
    for (std::size_t i = 0; i < args.size(); ++i) {
      pts.push_back({{arg_name, args[i]}, {"value", num(values[i])}});
    }
    j["fn"] = c.fn;
    j["points"] = pts;
    out << j.dump(2) << '\n';
    return;
  }
  std::vector<std::vector<std::string>> rows{{arg_name, c.fn}};
  for (std::size_t i = 0; i < args.size(); ++i) {
    rows.push_back({fmt(args[i]), fmt(values[i])});
  }
  emit_rows(out, f, rows);
}

void cmd_sample(const Config& c, std::ostream& out) {
  const ModelSpec spec = resolve_model(c.model);
  const Params p = resolve_params(c, spec);
  if (c.n == 0) throw UsageError("--n must be positive");
  const Format f = resolve_format(c, Format::table);
  Rng rng(c.seed);
  const auto xs = model_sample(spec, p, rng, c.n);
  if (f == Format::json) {
    Json j = envelope(c);
    j["rng"] = std::string(Rng::kAlgorithm);
    j["values"] = xs;
    out << j.dump(2) << '\n';
    return;
  }
  if (f == Format::csv) out << "x\n";
  for (double x : xs) out << fmt(x, 17) << '\n';
}

void cmd_fit(const Config& c, std::ostream& out) {
  const ModelSpec spec = resolve_model(c.model);
  const Sample s = datasets::resolve(c.data);
  const Format f = resolve_format(c, Format::json);
  const FitResult r = fit(spec, s, fit_options(c));
  if (f == Format::json) {
    Json j = envelope(c);
    j["n"] = s.n();
    j["result"] = fit_json(r);
    if (!r.converged) {
      j["error"] = {{"code", kExitFailure},
                    {"message", "fit did not converge: " + r.trace.message}};
    }
    out << j.dump(2) << '\n';
  } else {
    const auto names = slot_names(spec.family);
    std::vector<std::vector<std::string>> rows{
        {"parameter", "estimate", "se", "ci_lower", "ci_upper"}};
    for (std::size_t k = 0; k < r.free_indices.size(); ++k) {
      const std::size_t i = r.free_indices[k];
      rows.push_back({names[i], fmt(r.estimates[i]),
                      r.vcov_ok ? fmt(std::sqrt(r.vcov(k, k))) : "nan",
                      r.vcov_ok ? fmt(r.ci[k].lower) : "nan",
                      r.vcov_ok ? fmt(r.ci[k].upper) : "nan"});
    }
    emit_rows(out, f, rows);
    if (f == Format::table) {
      out << "neg2loglik  " << fmt(r.neg2loglik) << "\naic         " << fmt(r.aic)
          << "\nconverged   " << (r.converged ? "true" : "false") << '\n';
    }
  }
  if (!r.converged) throw ReportedFailure("fit did not converge: " + r.trace.message);
}

void cmd_compare(const Config& c, std::ostream& out) {
  const Sample s = datasets::resolve(c.data);
  std::vector<ModelSpec> specs;
  if (c.models.empty()) {
    specs = default_battery();
  } else {
    for (const auto& m : c.models) specs.push_back(resolve_model(m));
  }
  CompareOptions opt;
  opt.fit = fit_options(c);
  opt.method = pvalue_method(c);
  opt.bootstrap_replicates = c.bootstrap;
  const Format f = resolve_format(c, Format::json);
  const auto rows = compare_models(s, specs, opt);
  const bool all_ok = std::all_of(rows.begin(), rows.end(),
                                  [](const ComparisonRow& r) { return r.fit.converged; });
  if (f == Format::json) {
    Json j = envelope(c);
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json row = fit_json(r.fit);
      row["gof"] = gof_json(r.gof);
      arr.push_back(row);
    }
    j["rows"] = arr;
    if (!all_ok) j["failed_rows"] = true;
    out << j.dump(2) << '\n';
  } else {
    std::vector<std::vector<std::string>> t{{"model", "alpha", "beta", "lambda",
                                             "neg2loglik", "aic", "ks", "ks_p", "cvm",
                                             "cvm_p", "ad", "ad_p", "converged"}};
    for (const auto& r : rows) {
      const Params& p = r.fit.estimates;
      t.push_back({r.model, fmt(p.alpha), fmt(p.beta), fmt(p.lambda),
                   fmt(r.fit.neg2loglik), fmt(r.fit.aic), fmt(r.gof.ks), fmt(r.gof.ks_p),
                   fmt(r.gof.cvm), fmt(r.gof.cvm_p), fmt(r.gof.ad), fmt(r.gof.ad_p),
                   r.fit.converged ? "true" : "false"});
    }
    emit_rows(out, f, t);
  }
}

void cmd_gof(const Config& c, std::ostream& out) {
  const ModelSpec spec = resolve_model(c.model);
  const Sample s = datasets::resolve(c.data);
  const Format f = resolve_format(c, Format::json);
  const PValueMethod method = pvalue_method(c);
  const bool given = c.alpha || c.beta || c.lambda;
  FitResult fr;
  if (given) {
    fr.spec = spec;
    fr.estimates = resolve_params(c, spec);
    fr.free_indices = spec.free_indices();
    fr.loglik = log_likelihood(spec, fr.estimates, s);
    fr.neg2loglik = -2.0 * fr.loglik;
    fr.aic = fr.neg2loglik + 2.0 * static_cast<double>(spec.free_count());
    fr.converged = true;
  } else {
    fr = fit(spec, s, fit_options(c));
  }
  const Params p = fr.estimates;
  GofReport g;
  if (method == PValueMethod::bootstrap) {
    g = gof_bootstrap(fr, s, c.bootstrap, c.seed, fit_options(c));
  } else {
    g = gof_pvalues(
        gof_statistics([&](double x) { return model_cdf(spec, p, x); }, s.values()), s.n());
  }
  if (f == Format::json) {
    Json j = envelope(c);
    j["model"] = spec.name();
    j["parameters"] = params_json(spec, p);
    j["parameters_source"] = given ? "given" : "fitted";
    j["gof"] = gof_json(g);
    out << j.dump(2) << '\n';
  } else {
    emit_rows(out, f,
              {{"statistic", "value", "p_value"},
               {"ks", fmt(g.ks), fmt(g.ks_p)},
               {"cvm", fmt(g.cvm), fmt(g.cvm_p)},
               {"ad", fmt(g.ad), fmt(g.ad_p)}});
  }
}

void cmd_simulate(const Config& c, std::ostream& out, std::ostream& err) {
  if (c.preset != "table1") throw UsageError("--preset must be table1");
  SimDesign d = SimDesign::table1();
  d.replications = c.full ? 1000 : c.reps;
  d.seed = c.seed;
  d.omega = c.omega;
  d.threads = c.threads;
  if (!c.sizes.empty()) d.sizes = c.sizes;
  if (d.replications < 1) throw UsageError("--reps must be positive");
  const Format f = resolve_format(c, Format::csv);
  const SimReport r = run_study(d, [&err](std::size_t done, std::size_t total) {
    err << "simulate: cell " << done << "/" << total << " done\n";
  });
  err << "simulate: " << fmt(r.seconds, 4) << " s\n";
  std::vector<std::string> unreliable;
  for (const auto& cell : r.cells) {
    if (cell.unreliable) {
      unreliable.push_back("(" + fmt(cell.truth.alpha) + "," + fmt(cell.truth.beta) + "," +
                           fmt(cell.truth.lambda) + ") n=" + std::to_string(cell.n));
    }
  }
  const bool fail = c.strict && !unreliable.empty();
  if (f == Format::json) {
    Json j = envelope(c);
    Json cells = Json::array();
    for (const auto& cell : r.cells) {
      Json cj;
      cj["n"] = cell.n;
      cj["truth"] = {{"alpha", cell.truth.alpha}, {"beta", cell.truth.beta},
                     {"lambda", cell.truth.lambda}};
      cj["bias"] = {num(cell.bias[0]), num(cell.bias[1]), num(cell.bias[2])};
      cj["mse"] = {num(cell.mse[0]), num(cell.mse[1]), num(cell.mse[2])};
      cj["trimmed_bias"] = {num(cell.trimmed_bias[0]), num(cell.trimmed_bias[1]),
                            num(cell.trimmed_bias[2])};
      cj["trimmed_mse"] = {num(cell.trimmed_mse[0]), num(cell.trimmed_mse[1]),
                           num(cell.trimmed_mse[2])};
      cj["replications"] = cell.replications;
      cj["used"] = cell.used;
      cj["refits"] = cell.refits;
      cj["failures"] = cell.failures;
      cj["unreliable"] = cell.unreliable;
      cells.push_back(cj);
    }
    j["cells"] = cells;
    if (fail) {
      j["error"] = {{"code", kExitFailure}, {"message", "unreliable cells"}};
    }
    out << j.dump(2) << '\n';
  } else if (f == Format::csv) {
    out << export_table(r);
  } else {
    std::vector<std::vector<std::string>> t{{"n", "alpha", "beta", "lambda", "bias_alpha",
                                             "bias_beta", "bias_lambda", "mse_alpha",
                                             "mse_beta", "mse_lambda", "failures"}};
    for (const auto& cell : r.cells) {
      t.push_back({std::to_string(cell.n), fmt(cell.truth.alpha), fmt(cell.truth.beta),
                   fmt(cell.truth.lambda), fmt(cell.bias[0], 5), fmt(cell.bias[1], 5),
                   fmt(cell.bias[2], 5), fmt(cell.mse[0], 5), fmt(cell.mse[1], 5),
                   fmt(cell.mse[2], 5), std::to_string(cell.failures)});
    }
    print_table(out, t);
  }
  for (const auto& u : unreliable) err << "simulate: unreliable cell " << u << '\n';
  if (fail) throw ReportedFailure("unreliable cells with --strict");
}

void cmd_curves(const Config& c, std::ostream& out) {
  const ModelSpec spec = resolve_model(c.model);
  if (!spec.is_pngkme_family()) {
    throw UsageError("curves supports the PNGKME family only");
  }
  const Params p = resolve_params(c, spec);
  if (!(c.step > 0.0) || !(c.to > c.from) || c.from < 0.0) {
    throw UsageError("need 0 <= --from < --to and --step > 0");
  }
  const Format f = resolve_format(c, Format::csv);
  const auto count = static_cast<std::size_t>(std::floor((c.to - c.from) / c.step + 1e-9)) + 1;
  std::vector<std::vector<std::string>> rows{{"x", "pdf", "cdf", "hazard"}};
  Json pts = Json::array();
  for (std::size_t i = 0; i < count; ++i) {
    const double x = c.from + static_cast<double>(i) * c.step;
    const double d = pdf(p, x), F = cdf(p, x), h = hazard(p, x);
    if (f == Format::json) {
      pts.push_back({{"x", x}, {"pdf", num(d)}, {"cdf", num(F)}, {"hazard", num(h)}});
    } else {
      rows.push_back({fmt(x), fmt(d), fmt(F), fmt(h)});
    }
  }
  if (f == Format::json) {
    Json j = envelope(c);
    j["parameters"] = params_json(spec, p);
    j["points"] = pts;
    out << j.dump(2) << '\n';
  } else {
    emit_rows(out, f, rows);
  }
}

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--output", c.output, "json, csv or table");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--omega", c.omega, "CI level is 1 - omega")
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--restarts", c.restarts, "optimizer starts per fit")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--strict", c.strict, "treat warnings as failures");
  sub->add_option("--threads", c.threads, "worker threads, 0 = all cores");
}

void add_params(CLI::App* sub, Config& c) {
  sub->add_option("--model", c.model, "model name");
  sub->add_option("--alpha", c.alpha);
  sub->add_option("--beta", c.beta);
  sub->add_option("--lambda", c.lambda);
}

void add_data(CLI::App* sub, Config& c) {
  sub->add_option("--data", c.data, "bundled name (bladder128) or file path");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"PNGKME distribution toolkit"};
  app.require_subcommand(1);
  Config c;

  auto* eval = app.add_subcommand("eval", "evaluate cdf, pdf, hazard or quantile");
  add_common(eval, c);
  add_params(eval, c);
  eval->add_option("--fn", c.fn, "cdf, pdf, logpdf, survival, hazard or quantile");
  eval->add_option("--x", c.xs)->delimiter(',');
  eval->add_option("--u", c.us)->delimiter(',');

  auto* smp = app.add_subcommand("sample", "draw random variates");
  add_common(smp, c);
  add_params(smp, c);
  smp->add_option("--n", c.n, "number of draws")->required();

  auto* fitc = app.add_subcommand("fit", "maximum-likelihood fit");
  add_common(fitc, c);
  fitc->add_option("--model", c.model, "model name");
  add_data(fitc, c);

  auto* cmp = app.add_subcommand("compare", "fit a battery of models and rank by AIC");
  add_common(cmp, c);
  add_data(cmp, c);
  cmp->add_option("--models", c.models, "models to compare")->delimiter(',');
  cmp->add_option("--pvalues", c.pvalues, "asymptotic or bootstrap");
  cmp->add_option("--bootstrap", c.bootstrap, "bootstrap replicates")
      ->check(CLI::PositiveNumber);

  auto* gofc = app.add_subcommand("gof", "goodness-of-fit statistics");
  add_common(gofc, c);
  add_params(gofc, c);
  add_data(gofc, c);
  gofc->add_option("--pvalues", c.pvalues, "asymptotic or bootstrap");
  gofc->add_option("--bootstrap", c.bootstrap, "bootstrap replicates")
      ->check(CLI::PositiveNumber);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo bias/MSE study");
  add_common(sim, c);
  sim->add_option("--preset", c.preset, "design preset (table1)");
  sim->add_option("--reps", c.reps, "replications per cell")->check(CLI::PositiveNumber);
  sim->add_flag("--full", c.full, "full design with 1000 replications");
  sim->add_option("--sizes", c.sizes, "sample sizes")->delimiter(',');

  auto* cur = app.add_subcommand("curves", "pdf/cdf/hazard on a grid");
  add_common(cur, c);
  add_params(cur, c);
  cur->add_option("--from", c.from);
  cur->add_option("--to", c.to);
  cur->add_option("--step", c.step);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  for (auto* s : app.get_subcommands()) c.subcommand = s->get_name();
  if (c.output.empty()) {
    c.output = c.subcommand == "fit" || c.subcommand == "compare" || c.subcommand == "gof"
                   ? "json"
               : c.subcommand == "simulate" || c.subcommand == "curves" ? "csv"
                                                                         : "table";
  }

  bool json = c.output == "json";
  try {
    if (c.subcommand == "eval") {
      cmd_eval(c, out);
    } else if (c.subcommand == "sample") {
      cmd_sample(c, out);
    } else if (c.subcommand == "fit") {
      cmd_fit(c, out);
    } else if (c.subcommand == "compare") {
      cmd_compare(c, out);
    } else if (c.subcommand == "gof") {
      cmd_gof(c, out);
    } else if (c.subcommand == "simulate") {
      cmd_simulate(c, out, err);
    } else if (c.subcommand == "curves") {
      cmd_curves(c, out);
    }
  } catch (const ReportedFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    if (json) {
      Json j = envelope(c);
      j["error"] = {{"code", kExitFailure}, {"message", e.what()}};
      out << j.dump(2) << '\n';
    }
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace pngkme::cli
