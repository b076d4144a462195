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

#include "cvqst/pattern.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cvqst::pattern {

namespace {

constexpr int kTablePoints = 4096;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_indices(int m, int n) {
  if (m < 0 || n < 0 || std::max(m, n) >= kMaxIrregularIndex)
    throw std::invalid_argument("pattern: indices must lie in [0, " +
                                std::to_string(kMaxIrregularIndex - 1) + "]");
}

// fills M_mn for all m <= n <= n_max at one x
void pattern_row(int n_max, double x, std::vector<double>& psi,
                 std::vector<double>& phi, Eigen::MatrixXd& out) {
  fock_wavefunctions(n_max + 1, x, psi);
  irregular_wavefunctions(n_max + 1, x, phi);
  for (int m = 0; m <= n_max; ++m) {
    const double cm = std::sqrt(2.0 * m + 2.0);
    for (int n = m; n <= n_max; ++n) {
      const double cn = std::sqrt(2.0 * n + 2.0);
      out(m, n) = 2.0 * x * psi[m] * phi[n] - cm * psi[m + 1] * phi[n] -
                  cn * psi[m] * phi[n + 1];
    }
  }
}

void warn_if_phases_lopsided(const std::vector<QuadratureSample>& samples) {
  if (samples.size() < 200) return;
  int bins[12] = {};
  for (const auto& s : samples) {
    double t = std::fmod(s.theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    ++bins[std::min(static_cast<int>(t / kTwoPi * 12), 11)];
  }
  const double expect = static_cast<double>(samples.size()) / 12.0;
  for (int b = 0; b < 12; ++b) {
    if (bins[b] < 0.5 * expect) {
      std::cerr << "pattern: warning: phase coverage is uneven (bin " << b
                << " holds " << bins[b] << " of ~" << expect
                << " expected); off-diagonal estimates need uniform phases\n";
      return;
    }
  }
}

}  // namespace

double pattern_function(int m, int n, double x) {
  check_indices(m, n);
  if (m > n) std::swap(m, n);
  double psi[kMaxIrregularIndex + 1];
  double phi[kMaxIrregularIndex + 1];
  fock_wavefunctions(n + 1, x, {psi, static_cast<size_t>(n + 2)});
  irregular_wavefunctions(n + 1, x, {phi, static_cast<size_t>(n + 2)});
  return 2.0 * x * psi[m] * phi[n] - std::sqrt(2.0 * m + 2.0) * psi[m + 1] * phi[n] -
         std::sqrt(2.0 * n + 2.0) * psi[m] * phi[n + 1];
}

PatternTable::PatternTable(int n_max) : n_max_(n_max) {
  check_indices(n_max, n_max);
  x0_ = -kIrregularRange;
  dx_ = 2.0 * kIrregularRange / (kTablePoints - 1);
  const int n_pairs = (n_max + 1) * (n_max + 2) / 2;
  values_.resize(n_pairs, kTablePoints);
  std::vector<double> psi(n_max + 2), phi(n_max + 2);
  Eigen::MatrixXd row(n_max + 1, n_max + 1);
  for (int g = 0; g < kTablePoints; ++g) {
    pattern_row(n_max, x0_ + g * dx_, psi, phi, row);
    for (int m = 0; m <= n_max; ++m)
      for (int n = m; n <= n_max; ++n) values_(pair_index(m, n), g) = row(m, n);
  }
}

double PatternTable::value(int m, int n, double x) const {
  if (m < 0 || n < 0 || m > n_max_ || n > n_max_)
    throw std::invalid_argument("pattern: index exceeds table n_max");
  if (m > n) std::swap(m, n);
  const int row = pair_index(m, n);
  const double u = (x - x0_) / dx_;
  if (u <= 0.0) return values_(row, 0);
  if (u >= kTablePoints - 1) return values_(row, kTablePoints - 1);
  const int i = static_cast<int>(u);
  const double f = u - i;
  return values_(row, i) + f * (values_(row, i + 1) - values_(row, i));
}

PatternEstimate estimate_density_matrix(
    const std::vector<QuadratureSample>& samples, int n_max) {
  if (samples.empty()) throw std::invalid_argument("pattern: empty sample list");
  warn_if_phases_lopsided(samples);
  const PatternTable table(n_max);
  const int d = n_max + 1;
  const auto n = static_cast<double>(samples.size());

  Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXd mean_sq = Eigen::MatrixXd::Zero(d, d);
  std::vector<Complex> rot(d);
  for (const auto& s : samples) {
    rot[0] = Complex(1, 0);
    const Complex step(std::cos(s.theta), std::sin(s.theta));
    for (int k = 1; k < d; ++k) rot[k] = rot[k - 1] * step;
    for (int m = 0; m < d; ++m) {
      for (int nn = m; nn < d; ++nn) {
        const double v = table.value(m, nn, s.q);
        // exp(i(m-n)theta) = conj(rot[n-m]) for n >= m
        mean(m, nn) += v * std::conj(rot[nn - m]);
        mean_sq(m, nn) += v * v;
      }
    }
  }
  mean /= n;
  mean_sq /= n;

  PatternEstimate est;
  est.rho.resize(d, d);
  est.se.resize(d, d);
  for (int m = 0; m < d; ++m) {
    for (int nn = m; nn < d; ++nn) {
      est.rho(m, nn) = mean(m, nn);
      est.rho(nn, m) = std::conj(mean(m, nn));
      const double var = std::max(mean_sq(m, nn) - std::norm(mean(m, nn)), 0.0);
      est.se(m, nn) = est.se(nn, m) = std::sqrt(var / n);
    }
  }
  return est;
}

PhotonStats photon_number_stats(const std::vector<QuadratureSample>& samples,
                                int n_max) {
  if (samples.empty()) throw std::invalid_argument("pattern: empty sample list");
  const PatternTable table(n_max);
  const int d = n_max + 1;
  const auto n = static_cast<double>(samples.size());

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd mean_sq = Eigen::VectorXd::Zero(d);
  for (const auto& s : samples) {
    for (int j = 0; j < d; ++j) {
      const double v = table.value(j, j, s.q);
      mean(j) += v;
      mean_sq(j) += v * v;
    }
  }
  mean /= n;
  mean_sq /= n;

  PhotonStats stats;
  stats.p = mean;
  stats.se.resize(d);
  for (int j = 0; j < d; ++j) {
    const double var = std::max(mean_sq(j) - mean(j) * mean(j), 0.0);
    stats.se(j) = std::sqrt(var / n);
  }
  return stats;
}

}  // namespace cvqst::pattern
