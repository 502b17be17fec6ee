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

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "pngkme/numerics.hpp"

using namespace pngkme::numerics;
using doctest::Approx;

// Reference values below come from 40-digit mpmath evaluations.

TEST_CASE("incomplete gamma against high precision references") {
  CHECK(upper_incomplete_gamma(2.5, 1.3) ==
        Approx(1.0121136007032034).epsilon(1e-13));
  CHECK(lower_incomplete_gamma(2.5, 1.3) ==
        Approx(0.31722678747593361).epsilon(1e-13));
  CHECK(regularized_gamma_p(0.5, 4.0) ==
        Approx(0.99532226501895273).epsilon(1e-13));
  CHECK(regularized_gamma_q(30.0, 25.0) ==
        Approx(0.81789608402254489).epsilon(1e-12));
  CHECK(regularized_gamma_p(100.0, 90.0) ==
        Approx(0.15822098918643017).epsilon(1e-11));
  CHECK(regularized_gamma_p(3.0, 0.0) == 0.0);
  CHECK_THROWS_AS(log_gamma(-1.0), std::domain_error);
}

TEST_CASE("generalized binomial coefficient") {
  CHECK(binomial(-0.5, 7).value() == Approx(-0.20947265625).epsilon(1e-14));
  CHECK(binomial(2.3, 10).value() ==
        Approx(-0.00052745981254687487).epsilon(1e-12));
  CHECK(binomial(3.0, 5).sign == 0);
  CHECK(binomial(5.0, 2).value() == Approx(10.0));
  CHECK(binomial(1.7, 0).value() == 1.0);
}

TEST_CASE("normal cdf and quantile") {
  CHECK(normal_cdf(-3.0) == Approx(0.0013498980316300945).epsilon(1e-13));
  CHECK(normal_quantile(0.975) == Approx(1.9599639845400539).epsilon(1e-13));
  CHECK(normal_quantile(1e-10) == Approx(-6.3613409024040562).epsilon(1e-12));
  for (double p : {1e-6, 0.01, 0.3, 0.5, 0.77, 0.999}) {
    CHECK(normal_cdf(normal_quantile(p)) == Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("adaptive quadrature") {
  auto r = integrate([](double x) { return std::exp(-x); }, 0.0, kInf);
  CHECK(r.converged);
  CHECK(r.value == Approx(1.0).epsilon(1e-11));

  r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 4.0);
  CHECK(r.value == Approx(4.0).epsilon(1e-8));

  r = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(r.value == Approx(2.0).epsilon(1e-12));

  r = integrate([](double x) { return x * x * std::exp(-0.01 * x); }, 0.0,
                kInf, 1e-10, 100.0);
  CHECK(r.value == Approx(2e6).epsilon(1e-9));
}

TEST_CASE("series summation: geometric, alternating and algebraic tails") {
  auto geo = sum_series([](long k) { return std::pow(0.5, k); }, 0);
  CHECK(geo.converged);
  CHECK(geo.value == Approx(2.0).epsilon(1e-11));

  auto alt = sum_series(
      [](long k) { return (k % 2 ? -1.0 : 1.0) / static_cast<double>(k); }, 1);
  CHECK(alt.value == Approx(-std::log(2.0)).epsilon(1e-3));

  auto z2 = sum_series([](long k) { return 1.0 / double(k * k); }, 1);
  CHECK(z2.extrapolated);
  CHECK(z2.value == Approx(1.6449340668482264).epsilon(1e-6));

  auto z15 = sum_series([](long k) { return std::pow(double(k), -1.5); }, 1);
  CHECK(z15.value == Approx(2.6123753486854883).epsilon(1e-3));

  SeriesControl raw;
  raw.extrapolate = false;
  auto z2raw = sum_series([](long k) { return 1.0 / double(k * k); }, 1, raw);
  CHECK_FALSE(z2raw.converged);
  CHECK(z2raw.value < 1.6449340668482264);

  auto zeros = sum_series([](long) { return 0.0; }, 0);
  CHECK(zeros.converged);
  CHECK(zeros.value == 0.0);

  auto dbl = sum_double_series(
      [](long j, long k) { return std::pow(0.5, j) * std::pow(0.25, k); });
  CHECK(dbl.value == Approx(2.0 * (1.0 / 3.0)).epsilon(1e-12));

  SeriesControl bad;
  bad.rel_tol = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("symmetric inverse and finite differences") {
  Matrix m{{4.0, 1.0, 0.5}, {1.0, 3.0, 0.2}, {0.5, 0.2, 2.0}};
  auto inv = invert_symmetric(m);
  REQUIRE(inv.ok);
  Matrix prod = m * inv.inverse;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(prod(i, j) == Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
  Matrix indefinite{{1.0, 2.0}, {2.0, 1.0}};
  CHECK_FALSE(invert_symmetric(indefinite).ok);

  ScalarField f = [](std::span<const double> x) {
    return x[0] * x[0] * x[1] + std::sin(x[1]);
  };
  std::vector<double> x{1.5, 0.3};
  auto g = fd_gradient(f, x);
  CHECK(g[0] == Approx(2.0 * 1.5 * 0.3).epsilon(1e-8));
  CHECK(g[1] == Approx(1.5 * 1.5 + std::cos(0.3)).epsilon(1e-8));
  Matrix h = fd_hessian(f, x);
  CHECK(h(0, 0) == Approx(0.6).epsilon(1e-6));
  CHECK(h(0, 1) == Approx(3.0).epsilon(1e-6));
  CHECK(h(1, 1) == Approx(-std::sin(0.3)).epsilon(1e-5));
}

TEST_CASE("log gamma and incomplete gamma identities") {
  CHECK(log_gamma(1.0) == Approx(0.0));
  CHECK(log_gamma(0.5) == Approx(0.5723649429247001).epsilon(1e-13));
  CHECK(log_gamma(5.0) == Approx(std::log(24.0)).epsilon(1e-13));
  CHECK(upper_incomplete_gamma(1.0, 0.0) == Approx(1.0));
  CHECK(upper_incomplete_gamma(1.0, 2.0) == Approx(std::exp(-2.0)).epsilon(1e-13));
  auto oracle = integrate(
      [](double t) { return std::pow(t, 1.5) * std::exp(-t); }, 1.3, 61.3, 1e-12);
  CHECK(upper_incomplete_gamma(2.5, 1.3) == Approx(oracle.value).epsilon(1e-10));
  for (double a : {0.5, 1.0, 2.0, 3.7}) {
    CHECK(upper_incomplete_gamma(a, 0.0) ==
          Approx(std::exp(log_gamma(a))).epsilon(1e-12));
  }
  for (double a = 0.5; a <= 10.0; a += 0.5) {
    for (double x = 0.0; x <= 20.0; x += 0.5) {
      const double lhs = upper_incomplete_gamma(a + 1.0, x);
      const double rhs =
          a * upper_incomplete_gamma(a, x) + std::pow(x, a) * std::exp(-x);
      CHECK(lhs == Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("quadrature is linear and matches closed forms") {
  auto f = [](double x) { return std::exp(-x) * std::cos(x); };
  auto g = [](double x) { return x * std::exp(-2.0 * x); };
  auto rf = integrate(f, 0.0, kInf);
  auto rg = integrate(g, 0.0, kInf);
  auto rfg = integrate([&](double x) { return 2.0 * f(x) - 3.0 * g(x); }, 0.0, kInf);
  CHECK(std::abs(rfg.value - (2.0 * rf.value - 3.0 * rg.value)) <=
        2.0 * rf.abs_error_estimate + 3.0 * rg.abs_error_estimate +
            rfg.abs_error_estimate + 1e-14);
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0).value ==
        Approx(1.0 / 3.0).epsilon(1e-13));
  const double b = 0.1068;
  CHECK(integrate([b](double x) { return x * b * std::exp(-b * x); }, 0.0, kInf,
                  1e-10, 1.0 / b)
            .value == Approx(1.0 / b).epsilon(1e-9));
}

TEST_CASE("worked examples for series and finite differences") {
  CHECK(sum_double_series([](long, long) { return 0.0; }).value == 0.0);
  auto half = sum_double_series(
      [](long j, long k) { return std::pow(0.5, double(j + k)); });
  CHECK(half.value == Approx(2.0).epsilon(1e-12));

  ScalarField sq = [](std::span<const double> x) { return x[0] * x[0]; };
  std::vector<double> x3{3.0};
  CHECK(fd_gradient(sq, x3)[0] == Approx(6.0).epsilon(1e-8));
  ScalarField prod = [](std::span<const double> x) { return x[0] * x[1]; };
  std::vector<double> x25{2.0, 5.0};
  auto g = fd_gradient(prod, x25);
  CHECK(g[0] == Approx(5.0).epsilon(1e-8));
  CHECK(g[1] == Approx(2.0).epsilon(1e-8));
}

TEST_CASE("property: symmetric inverse round trip on random SPD matrices") {
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> logc(0.0, std::log(1e6));
  CHECK(invert_3x3_symmetric(Matrix::identity(3)).inverse.max_abs() ==
        Approx(1.0));
  const double d[] = {2.0, 4.0, 5.0};
  auto dinv = invert_3x3_symmetric(Matrix::diagonal(d));
  CHECK(dinv.inverse(0, 0) == Approx(0.5));
  CHECK(dinv.inverse(1, 1) == Approx(0.25));
  CHECK(dinv.inverse(2, 2) == Approx(0.2));
  for (int trial = 0; trial < 100; ++trial) {
    // Q·diag(eigs)·Qᵀ with Q from Gram–Schmidt and condition number ≤ 1e6.
    double q[3][3];
    for (auto& row : q) {
      for (double& v : row) v = unit(gen);
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < i; ++j) {
        double dot = 0.0;
        for (int k = 0; k < 3; ++k) dot += q[i][k] * q[j][k];
        for (int k = 0; k < 3; ++k) q[i][k] -= dot * q[j][k];
      }
      double norm = 0.0;
      for (int k = 0; k < 3; ++k) norm += q[i][k] * q[i][k];
      norm = std::sqrt(norm);
      for (int k = 0; k < 3; ++k) q[i][k] /= norm;
    }
    const double cond = std::exp(logc(gen));
    const double eig[3] = {1.0, std::sqrt(cond), cond};
    Matrix m(3);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        double v = 0.0;
        for (int k = 0; k < 3; ++k) v += q[k][r] * eig[k] * q[k][c];
        m(r, c) = v;
      }
    }
    auto inv = invert_3x3_symmetric(m);
    REQUIRE(inv.ok);
    Matrix id = m * inv.inverse;
    double worst = 0.0;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        worst = std::max(worst, std::abs(id(r, c) - (r == c ? 1.0 : 0.0)));
      }
    }
    CHECK(worst <= 1e-8);
  }
}
