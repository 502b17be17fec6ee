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

#include "pngkme/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

namespace pngkme::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Series for γ(a, x) / (x^a e^{−x}); valid for x < a + 1.
double lower_gamma_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double total = del;
  for (int n = 0; n < 10000; ++n) {
    ap += 1.0;
    del *= x / ap;
    total += del;
    if (std::abs(del) < std::abs(total) * kEps) {
      return total;
    }
  }
  throw std::runtime_error("lower incomplete gamma series did not converge");
}

// Continued fraction for Γ(a, x) / (x^a e^{−x}); valid for x ≥ a + 1
// (modified Lentz).
double upper_gamma_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) {
      return h;
    }
  }
  throw std::runtime_error("upper incomplete gamma fraction did not converge");
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::domain_error("incomplete gamma: a must be positive, got " +
                            std::to_string(a));
  }
  if (!(x >= 0.0)) {
    throw std::domain_error("incomplete gamma: x must be non-negative, got " +
                            std::to_string(x));
  }
}

// Gauss–Kronrod 7/15 abscissae and weights (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& g, double a,
                      double b, int& evals, bool& finite) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = g(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = g(center - dx);
    f2[j] = g(center + dx);
    const double sum = f1[j] + f2[j];
    resk += kWgk[j] * sum;
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) {
      resg += kWg[j / 2] * sum;
    }
  }
  evals += 15;
  const double mean = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  resk *= half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg * half));
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > kTiny / (50.0 * kEps)) {
    err = std::max(err, 50.0 * kEps * resabs);
  }
  if (!std::isfinite(resk) || !std::isfinite(err)) {
    finite = false;
  }
  return Segment{a, b, resk, err};
}

}  // namespace

// ---------------------------------------------------------------------------

double log_gamma(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::domain_error("log_gamma: argument must be positive, got " +
                            std::to_string(a));
  }
  return std::lgamma(a);
}

double regularized_gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double log_pref = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    return std::exp(log_pref) * lower_gamma_series(a, x);
  }
  return 1.0 - std::exp(log_pref) * upper_gamma_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double log_pref = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    return 1.0 - std::exp(log_pref) * lower_gamma_series(a, x);
  }
  return std::exp(log_pref) * upper_gamma_fraction(a, x);
}

double upper_incomplete_gamma(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return std::tgamma(a);
  if (std::isinf(x)) return 0.0;
  const double log_pref = -x + a * std::log(x);
  if (x < a + 1.0) {
    return std::tgamma(a) - std::exp(log_pref) * lower_gamma_series(a, x);
  }
  return std::exp(log_pref) * upper_gamma_fraction(a, x);
}

double lower_incomplete_gamma(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return std::tgamma(a);
  const double log_pref = -x + a * std::log(x);
  if (x < a + 1.0) {
    return std::exp(log_pref) * lower_gamma_series(a, x);
  }
  return std::tgamma(a) - std::exp(log_pref) * upper_gamma_fraction(a, x);
}

double SignedLog::value() const {
  return sign == 0 ? 0.0 : sign * std::exp(log_abs);
}

SignedLog binomial(double delta, long j) {
  if (j < 0) {
    throw std::domain_error("binomial: negative lower index");
  }
  SignedLog out{0.0, 1};
  for (long i = 1; i <= j; ++i) {
    const double factor = (delta - static_cast<double>(i) + 1.0) /
                          static_cast<double>(i);
    if (factor == 0.0) {
      return SignedLog{};
    }
    out.log_abs += std::log(std::abs(factor));
    if (factor < 0.0) out.sign = -out.sign;
  }
  return out;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("normal_quantile: p must lie in [0, 1]");
  }
  if (p == 0.0) return -kInf;
  if (p == 1.0) return kInf;

  // Acklam's rational approximation.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x = 0.0;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
          c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

// ---------------------------------------------------------------------------

QuadratureResult integrate(const std::function<double(double)>& f, double lo,
                           double hi, double rel_tol, double scale,
                           int max_evaluations) {
  if (std::isnan(lo) || std::isnan(hi) || std::isinf(lo)) {
    throw std::domain_error("integrate: lower limit must be finite");
  }
  if (!(scale > 0.0)) {
    throw std::domain_error("integrate: scale must be positive");
  }
  QuadratureResult out;
  if (lo == hi) {
    out.converged = true;
    return out;
  }
  if (!std::isinf(hi) && hi < lo) {
    QuadratureResult r = integrate(f, hi, lo, rel_tol, scale, max_evaluations);
    r.value = -r.value;
    return r;
  }

  std::function<double(double)> g;
  double a = lo;
  double b = hi;
  if (std::isinf(hi)) {
    g = [&f, lo, scale](double t) {
      const double one_minus = 1.0 - t;
      const double x = lo + scale * t / one_minus;
      return f(x) * scale / (one_minus * one_minus);
    };
    a = 0.0;
    b = 1.0;
  } else {
    g = f;
  }

  bool finite = true;
  std::priority_queue<Segment> work;
  std::vector<Segment> frozen;
  Segment first = gauss_kronrod(g, a, b, out.evaluations, finite);
  work.push(first);
  double total = first.value;
  double total_err = first.error;
  const double abs_floor = 1e-15;

  while (finite) {
    if (total_err <= std::max(rel_tol * std::abs(total), abs_floor)) {
      out.converged = true;
      break;
    }
    if (work.empty() || out.evaluations + 30 > max_evaluations) {
      break;
    }
    Segment worst = work.top();
    work.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) <
            64.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(worst);
      continue;
    }
    Segment left = gauss_kronrod(g, worst.a, mid, out.evaluations, finite);
    Segment right = gauss_kronrod(g, mid, worst.b, out.evaluations, finite);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
  }

  // Re-accumulate to shed drift from the running updates.
  CompensatedSum value;
  CompensatedSum err;
  while (!work.empty()) {
    value.add(work.top().value);
    err.add(work.top().error);
    work.pop();
  }
  for (const Segment& s : frozen) {
    value.add(s.value);
    err.add(s.error);
  }
  out.value = value.value();
  out.abs_error_estimate = std::abs(err.value());
  if (!finite) {
    out.converged = false;
  } else if (!out.converged) {
    out.converged = out.abs_error_estimate <=
                    std::max(rel_tol * std::abs(out.value), abs_floor);
  }
  return out;
}

// ---------------------------------------------------------------------------

void SeriesControl::validate() const {
  if (!(rel_tol > 0.0)) {
    throw std::invalid_argument("SeriesControl: rel_tol must be positive");
  }
  if (!(abs_tol > 0.0)) {
    throw std::invalid_argument("SeriesControl: abs_tol must be positive");
  }
  if (max_terms_per_index < 10) {
    throw std::invalid_argument(
        "SeriesControl: max_terms_per_index must be at least 10");
  }
  if (!(extrapolation_rel_tol > 0.0)) {
    throw std::invalid_argument(
        "SeriesControl: extrapolation_rel_tol must be positive");
  }
}

namespace {

// Solves the small dense system a·x = b by Gaussian elimination with
// partial pivoting. Returns false when singular.
template <std::size_t N>
bool solve_dense(std::array<std::array<double, N>, N> a,
                 std::array<double, N> b, std::array<double, N>& x) {
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < N; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (a[piv][c] == 0.0) return false;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < N; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < N; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t c = N; c-- > 0;) {
    double v = b[c];
    for (std::size_t k = c + 1; k < N; ++k) v -= a[c][k] * x[k];
    x[c] = v / a[c][c];
  }
  return std::isfinite(x[0]);
}

// Decay exponent p of one-signed terms from ln|t_n| = a − p ln n + b₁/n +
// b₂/n² + b₃/n³ fitted through five counts.
double decay_exponent(const std::vector<double>& terms,
                      const std::array<long, 5>& counts) {
  std::array<std::array<double, 5>, 5> m{};
  std::array<double, 5> y{};
  for (std::size_t r = 0; r < 5; ++r) {
    const double n = static_cast<double>(counts[r]);
    m[r] = {1.0, -std::log(n), 1.0 / n, 1.0 / (n * n), 1.0 / (n * n * n)};
    y[r] = std::log(std::abs(terms[counts[r] - 1]));
  }
  std::array<double, 5> x{};
  return solve_dense(m, y, x) ? x[1] : std::numeric_limits<double>::quiet_NaN();
}

// Limit S of partial sums S_n = S − Σ_{i<L−1} c_i n^{−q−i}, from the sums
// after the given counts.
template <std::size_t L>
double richardson(double q, const std::array<long, L>& counts,
                  const std::vector<double>& partial) {
  std::array<std::array<double, L>, L> m{};
  std::array<double, L> y{};
  for (std::size_t r = 0; r < L; ++r) {
    const double n = static_cast<double>(counts[r]);
    m[r][0] = 1.0;
    for (std::size_t i = 1; i < L; ++i) {
      m[r][i] = -std::pow(n, -q - static_cast<double>(i - 1));
    }
    y[r] = partial[counts[r] - 1];
  }
  std::array<double, L> x{};
  return solve_dense(m, y, x) ? x[0] : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

SeriesResult sum_series(const std::function<double(long)>& term, long k_start,
                        const SeriesControl& ctrl) {
  ctrl.validate();
  SeriesResult out;
  std::vector<double> terms;
  std::vector<double> partial;
  CompensatedSum acc;
  long peak = 0;
  double peak_abs = 0.0;
  int zero_run = 0;
  const long leading_zero_limit = 20 * ctrl.max_terms_per_index;

  for (long i = 0;; ++i) {
    const double t = term(k_start + i);
    ++out.terms;
    if (!std::isfinite(t)) {
      out.value = acc.value();
      out.error_estimate = kInf;
      out.converged = false;
      return out;
    }
    acc.add(t);
    terms.push_back(t);
    partial.push_back(acc.value());
    const double a = std::abs(t);
    if (a > peak_abs) {
      peak_abs = a;
      peak = i;
    }
    zero_run = (t == 0.0) ? zero_run + 1 : 0;
    const double total = acc.value();
    const double threshold = std::max(ctrl.rel_tol * std::abs(total),
                                      ctrl.abs_tol);

    if (peak_abs == 0.0) {
      // Leading zeros: either an identically zero series or terms that
      // underflow before rising.
      if (i + 1 >= leading_zero_limit) {
        out.value = 0.0;
        out.converged = true;
        return out;
      }
      continue;
    }

    const long past = i - peak;
    double tail = kInf;
    if (zero_run >= 3) {
      tail = 0.0;
    } else if (past >= 2 && t != 0.0) {
      const double prev = terms[i - 1];
      const double b = std::abs(prev);
      const bool alternating = prev != 0.0 && (prev < 0.0) != (t < 0.0);
      if (alternating) {
        if (a <= b) tail = a;
      } else if (past >= 4) {
        const long mid = i - past / 2;
        const double am = std::abs(terms[mid]);
        if (am > 0.0 && am > a) {
          const double slope =
              std::log(am / a) /
              std::log(static_cast<double>(i + 1) / static_cast<double>(mid + 1));
          if (slope > 1.0) {
            tail = a * static_cast<double>(i + 1) / (slope - 1.0);
          }
        }
      }
    }
    if (past >= 2 && tail <= threshold) {
      out.value = total;
      out.error_estimate = tail;
      out.converged = true;
      return out;
    }

    if (past >= ctrl.max_terms_per_index) {
      out.value = total;
      out.error_estimate = tail;
      out.converged = false;
      if (!ctrl.extrapolate) {
        return out;
      }
      // Algebraic tail: terms of one sign decaying like n^{−p}.
      const long n = i + 1;
      const std::array<long, 5> fit = {n / 8, n / 4, 3 * n / 8, n / 2, n};
      if (fit[0] < 4 || fit[0] <= peak + 1) {
        return out;
      }
      bool one_sign = true;
      for (long r = fit[0] - 1; r <= i; ++r) {
        if (terms[r] == 0.0 || (terms[r] < 0.0) != (t < 0.0)) {
          one_sign = false;
          break;
        }
      }
      if (!one_sign) {
        return out;
      }
      const double p = decay_exponent(terms, fit);
      if (!(p > 1.0) || !std::isfinite(p)) {
        return out;
      }
      const double three = richardson<4>(
          p - 1.0, std::array<long, 4>{n / 8, n / 4, n / 2, n}, partial);
      const double two = richardson<3>(
          p - 1.0, std::array<long, 3>{n / 4, n / 2, n}, partial);
      if (!std::isfinite(three) || !std::isfinite(two)) {
        return out;
      }
      out.value = three;
      out.error_estimate = std::abs(three - two);
      out.extrapolated = true;
      out.converged =
          out.error_estimate <=
          std::max(ctrl.extrapolation_rel_tol * std::abs(three), ctrl.abs_tol);
      return out;
    }
  }
}

SeriesResult sum_double_series(const std::function<double(long, long)>& term,
                               const SeriesControl& ctrl, long j_start,
                               long k_start) {
  ctrl.validate();
  bool inner_ok = true;
  bool inner_extrapolated = false;
  long inner_terms = 0;
  double inner_error = 0.0;
  auto outer_term = [&](long j) {
    const SeriesResult inner =
        sum_series([&term, j](long k) { return term(j, k); }, k_start, ctrl);
    inner_ok = inner_ok && inner.converged;
    inner_extrapolated = inner_extrapolated || inner.extrapolated;
    inner_terms += inner.terms;
    inner_error += inner.error_estimate;
    return inner.value;
  };
  SeriesResult out = sum_series(outer_term, j_start, ctrl);
  out.terms = inner_terms;
  out.converged = out.converged && inner_ok;
  out.extrapolated = out.extrapolated || inner_extrapolated;
  out.error_estimate += inner_error;
  return out;
}

// ---------------------------------------------------------------------------

Matrix::Matrix(std::size_t n, double fill) : n_(n), a_(n * n, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : n_(rows.size()), a_() {
  a_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) {
      throw std::invalid_argument("Matrix: rows must form a square matrix");
    }
    a_.insert(a_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::operator*(const Matrix& other) const {
  if (other.n_ != n_) {
    throw std::invalid_argument("Matrix: dimension mismatch");
  }
  Matrix out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n_; ++k) s += (*this)(i, k) * other(k, j);
      out(i, j) = s;
    }
  }
  return out;
}

Matrix Matrix::operator-() const {
  Matrix out = *this;
  for (double& v : out.a_) v = -v;
  return out;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

bool Matrix::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double x = (*this)(i, j);
      const double y = (*this)(j, i);
      if (std::abs(x - y) > tol * std::max({1.0, std::abs(x), std::abs(y)})) {
        return false;
      }
    }
  }
  return true;
}

std::vector<double> Matrix::diag() const {
  std::vector<double> d(n_);
  for (std::size_t i = 0; i < n_; ++i) d[i] = (*this)(i, i);
  return d;
}

InverseResult invert_symmetric(const Matrix& m) {
  const std::size_t n = m.size();
  if (n == 0 || n > 3) {
    throw std::invalid_argument("invert_symmetric: dimension must be 1..3");
  }
  InverseResult out;
  out.inverse = Matrix(n);
  std::vector<double> scale(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(m(i, i) > 0.0) || !std::isfinite(m(i, i))) return out;
    scale[i] = 1.0 / std::sqrt(m(i, i));
  }
  // s = D m D has a unit diagonal.
  Matrix s(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      s(i, j) = 0.5 * (m(i, j) + m(j, i)) * scale[i] * scale[j];
    }
  }
  const double norm = s.max_abs();
  Matrix l(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 1e-12 * norm)) return out;
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  // Invert L, then s⁻¹ = L⁻ᵀ L⁻¹.
  Matrix linv(n);
  for (std::size_t i = 0; i < n; ++i) {
    linv(i, i) = 1.0 / l(i, i);
    for (std::size_t j = 0; j < i; ++j) {
      double v = 0.0;
      for (std::size_t k = j; k < i; ++k) v -= l(i, k) * linv(k, j);
      linv(i, j) = v / l(i, i);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double v = 0.0;
      for (std::size_t k = i; k < n; ++k) v += linv(k, i) * linv(k, j);
      v *= scale[i] * scale[j];
      out.inverse(i, j) = v;
      out.inverse(j, i) = v;
    }
  }
  out.ok = true;
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> fd_gradient(const ScalarField& f, std::span<const double> x,
                                double h_rel) {
  std::vector<double> point(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = h_rel * std::max(std::abs(x[i]), 1.0);
    point[i] = x[i] + h;
    const double fp = f(point);
    point[i] = x[i] - h;
    const double fm = f(point);
    point[i] = x[i];
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

Matrix fd_hessian(const ScalarField& f, std::span<const double> x,
                  double h_rel) {
  const std::size_t n = x.size();
  std::vector<double> point(x.begin(), x.end());
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = h_rel * std::max(std::abs(x[i]), 1.0);
  }
  auto eval = [&](std::size_t i, double di, std::size_t j, double dj) {
    point[i] += di;
    point[j] += dj;
    const double v = f(point);
    point[i] = x[i];
    point[j] = x[j];
    return v;
  };
  const double f0 = f(point);
  Matrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double fp = eval(i, h[i], i, 0.0);
    const double fm = eval(i, -h[i], i, 0.0);
    out(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    for (std::size_t j = 0; j < i; ++j) {
      const double v = (eval(i, h[i], j, h[j]) - eval(i, h[i], j, -h[j]) -
                        eval(i, -h[i], j, h[j]) + eval(i, -h[i], j, -h[j])) /
                       (4.0 * h[i] * h[j]);
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

}  // namespace pngkme::numerics
