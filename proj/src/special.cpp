// Copyright 2026 The cvqst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvqst/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cvqst {

namespace {

constexpr double kPi = std::numbers::pi;

// Maclaurin series x - (2/3)x^3 + (4/15)x^5 - ...; next-term ratio
// -2x^2/(2k+3) so convergence is fast and cancellation mild for |x| < 0.5.
double dawson_series(double x) {
  double term = x;
  double sum = x;
  const double x2 = x * x;
  for (int k = 0; k < 40; ++k) {
    term *= -2.0 * x2 / (2.0 * k + 3.0);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Sampling form D(x) = (1/sqrt(pi)) sum_{n odd} exp(-(x-nh)^2)/n.
// Discretization error scales as exp(-(pi/2h)^2): below 1e-17 at h = 1/4.
// Window |x-nh| <= 7.5 keeps the truncated tail under 1e-24.
double dawson_sampling(double x) {
  constexpr double h = 0.25;
  constexpr double window = 7.5;
  const int lo_raw = static_cast<int>(std::floor((x - window) / h));
  const int hi_raw = static_cast<int>(std::ceil((x + window) / h));
  int n = (lo_raw % 2 == 0) ? lo_raw + 1 : lo_raw;
  double sum = 0.0;
  for (; n <= hi_raw; n += 2) {
    const double d = x - n * h;
    sum += std::exp(-d * d) / n;
  }
  return sum / std::sqrt(kPi);
}

}  // namespace

double dawson(double x) {
  if (std::abs(x) < 0.5) return dawson_series(x);
  return dawson_sampling(x);
}

double erfi(double x) {
  if (std::abs(x) > 26.0)
    throw std::domain_error("erfi: |x| > 26 overflows double range");
  return 2.0 / std::sqrt(kPi) * std::exp(x * x) * dawson(x);
}

void fock_wavefunctions(int n_max, double x, std::span<double> out) {
  if (n_max < 0 || n_max > kMaxFockIndex)
    throw std::invalid_argument("fock_wavefunctions: n_max out of range [0, " +
                                std::to_string(kMaxFockIndex) + "]");
  if (std::ssize(out) < n_max + 1)
    throw std::invalid_argument("fock_wavefunctions: output span too small");
  const double psi0 = std::pow(1.0 / kPi, 0.25) * std::exp(-0.5 * x * x);
  out[0] = psi0;
  if (n_max == 0) return;
  out[1] = std::sqrt(2.0) * x * psi0;
  for (int n = 1; n < n_max; ++n)
    out[n + 1] =
        x * std::sqrt(2.0 / (n + 1)) * out[n] - std::sqrt(n / (n + 1.0)) * out[n - 1];
}

double fock_wavefunction(int n, double x) {
  if (n < 0 || n > kMaxFockIndex)
    throw std::invalid_argument("fock_wavefunction: n out of range");
  double buf[kMaxFockIndex + 1];
  fock_wavefunctions(n, x, std::span<double>(buf, n + 1));
  return buf[n];
}

void irregular_wavefunctions(int n_max, double x, std::span<double> out) {
  if (n_max < 0 || n_max > kMaxIrregularIndex)
    throw std::invalid_argument(
        "irregular_wavefunctions: n_max out of range [0, " +
        std::to_string(kMaxIrregularIndex) + "]");
  if (std::abs(x) > kIrregularRange)
    throw std::domain_error("irregular_wavefunctions: |x| exceeds stable range 12");
  if (std::ssize(out) < n_max + 1)
    throw std::invalid_argument("irregular_wavefunctions: output span too small");
  const double pi14 = std::pow(kPi, 0.25);
  const double gauss = std::exp(-0.5 * x * x);
  out[0] = pi14 * pi14 * pi14 * gauss * erfi(x);
  if (n_max == 0) return;
  out[1] = std::sqrt(2.0) * x * out[0] - std::sqrt(2.0) * pi14 / gauss;
  for (int n = 1; n < n_max; ++n)
    out[n + 1] =
        x * std::sqrt(2.0 / (n + 1)) * out[n] - std::sqrt(n / (n + 1.0)) * out[n - 1];
}

}  // namespace cvqst
