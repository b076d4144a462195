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

#include "cvqst/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cvqst::sampler {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kGridPoints = 4096;
constexpr int kRandomPhases = 4096;

// Stateless counter generator: splitmix64 finalizer over a Weyl sequence.
// Draw j of sample i uses counter 3*i + j, so streams never overlap and the
// output is reproducible under any processing order.
std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double to_unit_double(std::uint64_t r) {
  return static_cast<double>(r >> 11) * 0x1.0p-53;
}

double wrap_phase(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

// Off-diagonal sums B_k(x) = sum_{n-m=k} rho_mn psi_m(x) psi_n(x), so the
// marginal at any phase is pr(x) = B_0 + 2 sum_k Re[B_k exp(i k theta)].
struct HarmonicTables {
  std::vector<double> x;
  std::vector<std::vector<Complex>> b;  // b[k][grid]

  HarmonicTables(const DensityMatrix& rho, double q_cut) {
    const int d = rho.dim();
    x.resize(kGridPoints);
    b.assign(d, std::vector<Complex>(kGridPoints, Complex(0, 0)));
    std::vector<double> psi(d);
    const double h = 2.0 * q_cut / (kGridPoints - 1);
    for (int g = 0; g < kGridPoints; ++g) {
      x[g] = -q_cut + g * h;
      fock_wavefunctions(d - 1, x[g], psi);
      for (int k = 0; k < d; ++k) {
        Complex s(0, 0);
        for (int m = 0; m + k < d; ++m) s += rho(m, m + k) * psi[m] * psi[m + k];
        b[k][g] = s;
      }
    }
  }

  // cumulative trapezoid masses of the marginal at a fixed phase
  void cdf_at(double theta, std::vector<double>& pdf, std::vector<double>& cum) const {
    const int d = static_cast<int>(b.size());
    const Complex rot(std::cos(theta), std::sin(theta));
    for (int g = 0; g < kGridPoints; ++g) pdf[g] = b[0][g].real();
    Complex phase = rot;
    for (int k = 1; k < d; ++k) {
      const Complex p2 = 2.0 * phase;
      for (int g = 0; g < kGridPoints; ++g)
        pdf[g] += (b[k][g] * p2).real();
      phase *= rot;
    }
    for (int g = 0; g < kGridPoints; ++g) pdf[g] = std::max(pdf[g], 0.0);
    cum[0] = 0.0;
    for (int g = 1; g < kGridPoints; ++g)
      cum[g] = cum[g - 1] + 0.5 * (pdf[g - 1] + pdf[g]);
    const double total = cum[kGridPoints - 1];
    if (!(total > 0))
      throw std::runtime_error("sampler: marginal integrates to zero");
    for (int g = 0; g < kGridPoints; ++g) cum[g] /= total;
  }
};

double invert_cdf(const std::vector<double>& x, const std::vector<double>& cum,
                  double u) {
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  const int j = std::clamp(static_cast<int>(it - cum.begin()), 1, kGridPoints - 1);
  const double lo = cum[j - 1], hi = cum[j];
  const double frac = hi > lo ? (u - lo) / (hi - lo) : 0.5;
  return x[j - 1] + frac * (x[j] - x[j - 1]);
}

}  // namespace

double effective_efficiency(double eta, double snr) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::invalid_argument("effective_efficiency: eta must lie in (0, 1]");
  if (!(snr > 1.0))
    throw std::invalid_argument("effective_efficiency: snr must exceed 1");
  return eta * (1.0 - 1.0 / snr);
}

std::vector<QuadratureSample> sample(const DensityMatrix& truth,
                                     const AcquisitionPlan& plan) {
  if (plan.n_samples < 1)
    throw std::invalid_argument("sample: n_samples must be positive");
  if (!(plan.xi > 0.0 && plan.xi <= 1.0))
    throw std::invalid_argument("sample: xi must lie in (0, 1]");
  const double eta_eff = effective_efficiency(plan.eta, plan.snr);

  const auto& sched = plan.schedule;
  int n_distinct = kRandomPhases;
  if (sched.kind == PhaseSchedule::Kind::swept) {
    if (sched.n_phases < 1)
      throw std::invalid_argument("sample: swept schedule needs n_phases >= 1");
    n_distinct = sched.n_phases;
  } else if (sched.kind == PhaseSchedule::Kind::fixed_list) {
    if (sched.phases.empty())
      throw std::invalid_argument("sample: fixed_list schedule needs phases");
    n_distinct = static_cast<int>(sched.phases.size());
  }

  const DensityMatrix lossy =
      eta_eff < 1.0 ? bernoulli_loss(truth, eta_eff) : truth;
  const double q_cut = 2.0 * std::sqrt(static_cast<double>(truth.dim() - 1)) + 4.0;
  const HarmonicTables truth_tables(lossy, q_cut);
  const HarmonicTables vacuum_tables(DensityMatrix::vacuum(1), q_cut);

  const long long n = plan.n_samples;
  std::vector<double> theta(n), u(n);
  std::vector<int> key(n);  // 0 = vacuum branch, 1 + phase id = truth branch
  std::vector<double> phase_value(n_distinct);
  if (sched.kind == PhaseSchedule::Kind::fixed_list)
    for (int j = 0; j < n_distinct; ++j) phase_value[j] = wrap_phase(sched.phases[j]);
  else
    for (int j = 0; j < n_distinct; ++j) phase_value[j] = kTwoPi * j / n_distinct;

  for (long long i = 0; i < n; ++i) {
    int pid;
    switch (sched.kind) {
      case PhaseSchedule::Kind::uniform_random:
        pid = static_cast<int>(counter_draw(plan.seed, 3 * i) >> 52);
        break;
      case PhaseSchedule::Kind::swept:
        pid = static_cast<int>((i * static_cast<long long>(n_distinct)) / n);
        break;
      default:
        pid = static_cast<int>(i % n_distinct);
    }
    theta[i] = phase_value[pid];
    // coin < xi is certain at xi = 1 since coin lies in [0, 1)
    const bool truth_branch =
        to_unit_double(counter_draw(plan.seed, 3 * i + 1)) < plan.xi;
    key[i] = truth_branch ? 1 + pid : 0;
    u[i] = to_unit_double(counter_draw(plan.seed, 3 * i + 2));
  }

  // Bucket indices by (branch, phase) so each inverse-CDF table is built
  // exactly once; output order stays the original sample order.
  const int n_keys = 1 + n_distinct;
  std::vector<long long> count(n_keys + 1, 0);
  for (long long i = 0; i < n; ++i) ++count[key[i] + 1];
  for (int k = 0; k < n_keys; ++k) count[k + 1] += count[k];
  std::vector<long long> order(n);
  {
    std::vector<long long> cursor(count.begin(), count.end() - 1);
    for (long long i = 0; i < n; ++i) order[cursor[key[i]]++] = i;
  }

  std::vector<QuadratureSample> out(n);
  std::vector<double> pdf(kGridPoints), cum(kGridPoints);
  for (int k = 0; k < n_keys; ++k) {
    const long long lo = count[k], hi = count[k + 1];
    if (lo == hi) continue;
    const HarmonicTables& tables = (k == 0) ? vacuum_tables : truth_tables;
    const double tab_theta = (k == 0) ? 0.0 : phase_value[k - 1];
    tables.cdf_at(tab_theta, pdf, cum);
    for (long long s = lo; s < hi; ++s) {
      const long long i = order[s];
      out[i] = {theta[i], invert_cdf(tables.x, cum, u[i])};
    }
  }
  return out;
}

}  // namespace cvqst::sampler
