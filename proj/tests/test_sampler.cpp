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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "cvqst/sampler.hpp"

using namespace cvqst;
using sampler::AcquisitionPlan;
using sampler::PhaseSchedule;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double mean_q2(const std::vector<QuadratureSample>& s) {
  double acc = 0.0;
  for (const auto& x : s) acc += x.q * x.q;
  return acc / double(s.size());
}

AcquisitionPlan plan_of(long long n, std::uint64_t seed) {
  AcquisitionPlan p;
  p.n_samples = n;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("effective efficiency folds electronic noise into loss") {
  CHECK(sampler::effective_efficiency(0.62, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(0.62));
  CHECK(sampler::effective_efficiency(1.0, 10.0) == doctest::Approx(0.9));
  CHECK(sampler::effective_efficiency(0.62, 14.0) ==
        doctest::Approx(0.62 * 13.0 / 14.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)sampler::effective_efficiency(0.62, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)sampler::effective_efficiency(0.62, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)sampler::effective_efficiency(0.0, 10.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)sampler::effective_efficiency(1.1, 10.0),
                  std::invalid_argument);
}

TEST_CASE("second moments match the detected states") {
  const auto vac = sampler::sample(DensityMatrix::vacuum(2), plan_of(100000, 7));
  REQUIRE(vac.size() == 100000);
  double m1 = 0.0;
  for (const auto& s : vac) m1 += s.q;
  m1 /= double(vac.size());
  const double var = mean_q2(vac) - m1 * m1;
  CHECK(var == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(m1) < 0.01);

  const DensityMatrix one = DensityMatrix::fock(1, 3);
  CHECK(mean_q2(sampler::sample(one, plan_of(100000, 11))) ==
        doctest::Approx(1.5).epsilon(0.02 / 1.5));

  AcquisitionPlan lossy = plan_of(100000, 13);
  lossy.eta = 0.55;
  CHECK(mean_q2(sampler::sample(one, lossy)) ==
        doctest::Approx(1.05).epsilon(0.02 / 1.05));

  // electronic noise at snr = 2 halves the effective efficiency
  AcquisitionPlan noisy = plan_of(100000, 17);
  noisy.snr = 2.0;
  CHECK(mean_q2(sampler::sample(one, noisy)) ==
        doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("mode mismatch substitutes vacuum with probability 1 - xi") {
  const DensityMatrix one = DensityMatrix::fock(1, 3);
  AcquisitionPlan half = plan_of(100000, 19);
  half.xi = 0.5;
  // mean q^2 = 0.5 * 1.5 + 0.5 * 0.5
  CHECK(mean_q2(sampler::sample(one, half)) == doctest::Approx(1.0).epsilon(0.02));

  AcquisitionPlan matched = plan_of(2000, 19);
  matched.xi = 1.0;
  const auto a = sampler::sample(one, matched);
  const auto b = sampler::sample(one, plan_of(2000, 19));
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].q == b[i].q);
}

TEST_CASE("empirical CDF at a fixed phase passes a KS test") {
  const long long n = 50000;
  AcquisitionPlan p = plan_of(n, 23);
  p.schedule = PhaseSchedule::fixed_list({0.7});
  auto s = sampler::sample(DensityMatrix::vacuum(2), p);
  std::vector<double> qs(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].theta == doctest::Approx(0.7));
    qs[i] = s[i].q;
  }
  std::sort(qs.begin(), qs.end());
  // vacuum CDF: (1 + erf(q)) / 2
  double d = 0.0;
  for (size_t i = 0; i < qs.size(); ++i) {
    const double f = 0.5 * (1.0 + std::erf(qs[i]));
    d = std::max(d, std::abs(f - double(i + 1) / double(n)));
    d = std::max(d, std::abs(f - double(i) / double(n)));
  }
  CHECK(d < 1.63 / std::sqrt(double(n)));
}

TEST_CASE("uniform random phases are uniform across 12 bins") {
  const long long n = 120000;
  const auto s = sampler::sample(DensityMatrix::fock(1, 3), plan_of(n, 29));
  std::vector<double> counts(12, 0.0);
  for (const auto& x : s) {
    REQUIRE(x.theta >= 0.0);
    REQUIRE(x.theta < kTwoPi);
    counts[std::min<int>(11, int(x.theta / kTwoPi * 12))] += 1.0;
  }
  const double expect = double(n) / 12.0;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expect) * (c - expect) / expect;
  CHECK(chi2 < 31.264);  // 99.9% critical value, 11 degrees of freedom
}

TEST_CASE("swept and fixed-list schedules visit the announced phases") {
  AcquisitionPlan p = plan_of(10, 31);
  p.schedule = PhaseSchedule::swept(5);
  const auto s = sampler::sample(DensityMatrix::vacuum(2), p);
  for (int i = 0; i < 10; ++i)
    CHECK(s[i].theta == doctest::Approx(kTwoPi * ((i * 5) / 10) / 5.0));
  CHECK(s.front().theta == doctest::Approx(0.0));
  CHECK(s.back().theta == doctest::Approx(kTwoPi * 4.0 / 5.0));

  AcquisitionPlan f = plan_of(7, 31);
  f.schedule = PhaseSchedule::fixed_list({0.3, 1.1, 2.9 + kTwoPi});
  const auto t = sampler::sample(DensityMatrix::vacuum(2), f);
  const double wrapped[3] = {0.3, 1.1, 2.9};
  for (int i = 0; i < 7; ++i)
    CHECK(t[i].theta == doctest::Approx(wrapped[i % 3]).epsilon(1e-12));
}

TEST_CASE("identical plans give identical streams, different seeds differ") {
  const DensityMatrix one = DensityMatrix::fock(1, 3);
  const auto a = sampler::sample(one, plan_of(500, 101));
  const auto b = sampler::sample(one, plan_of(500, 101));
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].theta == b[i].theta);
    CHECK(a[i].q == b[i].q);
  }
  const auto c = sampler::sample(one, plan_of(500, 102));
  int differing = 0;
  for (size_t i = 0; i < c.size(); ++i) differing += (c[i].q != a[i].q);
  CHECK(differing > 450);
}

TEST_CASE("plan validation") {
  const DensityMatrix vac = DensityMatrix::vacuum(2);
  CHECK_THROWS_AS((void)sampler::sample(vac, plan_of(0, 1)), std::invalid_argument);
  CHECK_THROWS_AS((void)sampler::sample(vac, plan_of(-5, 1)), std::invalid_argument);

  AcquisitionPlan p = plan_of(10, 1);
  p.eta = 0.0;
  CHECK_THROWS_AS((void)sampler::sample(vac, p), std::invalid_argument);
  p = plan_of(10, 1);
  p.eta = 1.2;
  CHECK_THROWS_AS((void)sampler::sample(vac, p), std::invalid_argument);
  p = plan_of(10, 1);
  p.snr = 1.0;
  CHECK_THROWS_AS((void)sampler::sample(vac, p), std::invalid_argument);
  p = plan_of(10, 1);
  p.xi = 0.0;
  CHECK_THROWS_AS((void)sampler::sample(vac, p), std::invalid_argument);
  p = plan_of(10, 1);
  p.xi = 1.5;
  CHECK_THROWS_AS((void)sampler::sample(vac, p), std::invalid_argument);
  p = plan_of(10, 1);
  p.schedule = PhaseSchedule::swept(0);
  CHECK_THROWS_AS((void)sampler::sample(vac, p), std::invalid_argument);
  p = plan_of(10, 1);
  p.schedule = PhaseSchedule::fixed_list({});
  CHECK_THROWS_AS((void)sampler::sample(vac, p), std::invalid_argument);
}
