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

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "cvqst/maxlik.hpp"
#include "cvqst/sampler.hpp"
#include "cvqst/special.hpp"
#include "cvqst/states.hpp"

using namespace cvqst;
using maxlik::MaxlikConfig;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<QuadratureSample> draw(const DensityMatrix& rho, long long n,
                                   std::uint64_t seed, double eta = 1.0) {
  sampler::AcquisitionPlan plan;
  plan.n_samples = n;
  plan.seed = seed;
  plan.eta = eta;
  return sampler::sample(rho, plan);
}

Eigen::MatrixXcd parity_matrix(int d) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
  for (int m = 0; m < d; ++m) p(m, m) = (m % 2 ? -1.0 : 1.0);
  return p;
}

}  // namespace

TEST_CASE("povm elements, loss duality and phase periodicity") {
  const Eigen::MatrixXcd pi1 = maxlik::povm_element(0.8, 0.6, 1.0, 3);
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n) {
      const Complex expect =
          Complex(std::cos((m - n) * 0.6), std::sin((m - n) * 0.6)) *
          fock_wavefunction(m, 0.8) * fock_wavefunction(n, 0.8);
      CHECK(std::abs(pi1(m, n) - expect) < 1e-14);
    }

  // Tr[Pi_eta |1><1|] = eta psi_1(q)^2 + (1 - eta) psi_0(q)^2
  const double q = 0.7, eta = 0.55;
  const Eigen::MatrixXcd pi = maxlik::povm_element(q, 1.3, eta, 3);
  const double p0 = fock_wavefunction(0, q), p1 = fock_wavefunction(1, q);
  CHECK(pi(1, 1).real() ==
        doctest::Approx(eta * p1 * p1 + (1.0 - eta) * p0 * p0).epsilon(1e-12));

  // duality against the Fock-side channel for a generic state
  states::StateSpec c;
  c.kind = "coherent";
  c.alpha = Complex(0.6, -0.3);
  const DensityMatrix rho = states::build(c, 9);
  for (double e : {0.25, 0.62, 0.97}) {
    const Eigen::MatrixXcd lossy_pi = maxlik::povm_element(-0.4, 2.1, e, 9);
    const Eigen::MatrixXcd clean_pi = maxlik::povm_element(-0.4, 2.1, 1.0, 9);
    const double lhs = (lossy_pi * rho.matrix()).trace().real();
    const double rhs =
        (clean_pi * bernoulli_loss(rho, e).matrix()).trace().real();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }

  const Eigen::MatrixXcd wrapped = maxlik::povm_element(0.8, 0.6 + 2.0 * kPi, 1.0, 3);
  CHECK((wrapped - pi1).cwiseAbs().maxCoeff() < 1e-13);

  CHECK_THROWS_AS((void)maxlik::povm_element(0.0, 0.0, 0.0, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)maxlik::povm_element(0.0, 0.0, 1.0, -1),
                  std::invalid_argument);
}

TEST_CASE("log likelihood on elementary datasets") {
  const DensityMatrix vac = DensityMatrix::vacuum(3);
  const std::vector<QuadratureSample> one{{0.0, 0.0}};
  CHECK(maxlik::log_likelihood(vac, one) ==
        doctest::Approx(-0.5 * std::log(kPi)).epsilon(1e-13));

  const std::vector<QuadratureSample> two{{0.0, 0.0}, {0.0, 0.0}};
  CHECK(maxlik::log_likelihood(vac, two) ==
        doctest::Approx(-std::log(kPi)).epsilon(1e-13));

  // the generating state outscores a disjoint hypothesis on its own data
  const auto data = draw(vac, 2000, 3);
  CHECK(maxlik::log_likelihood(vac, data) >
        maxlik::log_likelihood(DensityMatrix::fock(1, 3), data));
}

TEST_CASE("r operator is the probability-weighted povm average") {
  const DensityMatrix vac = DensityMatrix::vacuum(3);
  const std::vector<QuadratureSample> one{{1.1, 0.4}};
  for (double eta : {1.0, 0.7}) {
    const Eigen::MatrixXcd r = maxlik::r_operator(vac, one, eta, 2);
    const Eigen::MatrixXcd pi = maxlik::povm_element(0.4, 1.1, eta, 2);
    const double pr = (pi * vac.matrix()).trace().real();
    CHECK((r - pi / pr).cwiseAbs().maxCoeff() < 1e-12);
  }

  CHECK_THROWS_AS((void)maxlik::r_operator(vac, one, 1.0, 4),
                  std::invalid_argument);

  // |1><1| assigns zero probability to q = 0: structurally singular data
  const DensityMatrix excited = DensityMatrix::fock(1, 2);
  const std::vector<QuadratureSample> dead{{0.3, 0.0}};
  CHECK_THROWS_AS((void)maxlik::r_operator(excited, dead, 1.0, 1),
                  std::runtime_error);
}

TEST_CASE("diluted iteration: monotone likelihood, convergence, residual") {
  const auto data = draw(DensityMatrix::fock(1, 3), 5000, 31, 0.5);

  MaxlikConfig slow;
  slow.n_max = 2;
  slow.epsilon = 0.01;
  const auto res = maxlik::reconstruct(data, slow);
  REQUIRE(res.likelihood_trace.size() >= 2);
  CHECK(res.likelihood_trace.size() == res.residual_trace.size());
  for (size_t i = 1; i < res.likelihood_trace.size(); ++i)
    CHECK(res.likelihood_trace[i] >= res.likelihood_trace[i - 1]);
  CHECK(res.rho.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.g_condition == 1.0);

  // interior maximum reached tightly: R rho R = rho to well below 1e-6 |rho|
  MaxlikConfig tight;
  tight.n_max = 1;
  tight.epsilon = 1.0;
  tight.stop_tol = 1e-12;
  tight.max_iters = 5000;
  const auto ml = maxlik::reconstruct(data, tight);
  CHECK(ml.converged);
  CHECK(ml.fixed_point_residual < 1e-6 * ml.rho.matrix().norm());
  CHECK(ml.fixed_point_residual == doctest::Approx(ml.residual_trace.back()));

  // undiluted map agrees on the attained maximum
  MaxlikConfig undiluted = tight;
  undiluted.epsilon = std::numeric_limits<double>::infinity();
  const auto fast = maxlik::reconstruct(data, undiluted);
  CHECK(fast.converged);
  CHECK(fast.likelihood_trace.back() ==
        doctest::Approx(ml.likelihood_trace.back()).epsilon(1e-9));
  CHECK(fast.iterations < ml.iterations);

  // detected-state reconstruction splits |1> through a 50/50 coupler
  CHECK(ml.rho(0, 0).real() == doctest::Approx(0.5).epsilon(0.1));
  CHECK(ml.rho(1, 1).real() == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("vacuum data reconstructs the vacuum") {
  const auto data = draw(DensityMatrix::vacuum(2), 10000, 37);
  MaxlikConfig cfg;
  cfg.n_max = 4;
  const auto res = maxlik::reconstruct(data, cfg);
  CHECK(res.converged);
  CHECK(fidelity(res.rho, DensityMatrix::vacuum(5)) >= 0.995);
}

TEST_CASE("loss correction recovers the pre-detector state") {
  const auto data = draw(DensityMatrix::fock(1, 3), 20000, 41, 0.62);

  MaxlikConfig blind;
  blind.n_max = 4;
  const auto uncorrected = maxlik::reconstruct(data, blind);
  CHECK(uncorrected.rho(0, 0).real() == doctest::Approx(0.38).epsilon(0.02 / 0.38));
  CHECK(uncorrected.rho(1, 1).real() == doctest::Approx(0.62).epsilon(0.02 / 0.62));

  MaxlikConfig informed = blind;
  informed.eta = 0.62;
  const auto corrected = maxlik::reconstruct(data, informed);
  CHECK(fidelity(corrected.rho, DensityMatrix::fock(1, 5)) >= 0.9);
  CHECK(corrected.rho(1, 1).real() > 0.9);
}

TEST_CASE("theta -> theta + pi closure keeps parity sectors separate") {
  auto data = draw(DensityMatrix::fock(1, 3), 2000, 43);
  const size_t n = data.size();
  data.reserve(2 * n);
  for (size_t i = 0; i < n; ++i)
    data.push_back({data[i].theta + kPi, data[i].q});

  // R commutes with parity on a parity-symmetric state
  const int d = 4;
  const DensityMatrix mixed(Eigen::MatrixXcd::Identity(d, d) / double(d));
  const Eigen::MatrixXcd r = maxlik::r_operator(mixed, data, 1.0, d - 1);
  const Eigen::MatrixXcd p = parity_matrix(d);
  CHECK((r * p - p * r).cwiseAbs().maxCoeff() < 1e-10 * r.norm());

  // so the iteration never leaves the parity-commuting manifold
  MaxlikConfig cfg;
  cfg.n_max = d - 1;
  const auto res = maxlik::reconstruct(data, cfg);
  double odd = 0.0;
  for (int m = 0; m < d; ++m)
    for (int nn = 0; nn < d; ++nn)
      if ((m - nn) % 2 != 0) odd = std::max(odd, std::abs(res.rho(m, nn)));
  CHECK(odd < 1e-8);
}

TEST_CASE("bias correction for a coarse outcome alphabet") {
  // A digitizer that rounds q to integers yields a finite outcome set whose
  // POVM elements do not resolve the identity on the truncated space. The
  // plain fixed point drifts toward sectors where G = sum_j Pi_j is large;
  // the corrected map removes the drift. Phases restricted to [0, pi/4).
  states::StateSpec spec;
  spec.kind = "coherent";
  spec.alpha = Complex(0.6, 0.0);
  const DensityMatrix truth = states::build(spec, 8);

  sampler::AcquisitionPlan plan;
  plan.n_samples = 20000;
  plan.seed = 47;
  plan.schedule = sampler::PhaseSchedule::fixed_list(
      {0.0, kPi / 16.0, kPi / 8.0, 3.0 * kPi / 16.0});
  auto data = sampler::sample(truth, plan);
  for (auto& s : data) s.q = std::round(s.q);

  MaxlikConfig plain;
  plain.n_max = 4;
  plain.max_iters = 800;
  const auto biased = maxlik::reconstruct(data, plain);
  MaxlikConfig corrected = plain;
  corrected.bias_correction = true;
  const auto fixed = maxlik::reconstruct(data, corrected);
  CHECK(fixed.g_condition > 1.0);

  double l1_biased = 0.0;
  double l1_fixed = 0.0;
  for (int j = 0; j <= plain.n_max; ++j) {
    l1_biased += std::abs(biased.rho(j, j).real() - truth(j, j).real());
    l1_fixed += std::abs(fixed.rho(j, j).real() - truth(j, j).real());
  }
  CHECK(l1_fixed < l1_biased);
  CHECK(l1_biased > 1.0);  // the uncorrected drift is not statistical noise
  CHECK(l1_fixed < 0.5);

  // a synthetic alphabet of n_max+1 equispaced phases crossed with a fine
  // symmetric q grid sums to G = c * identity, and the corrected run must
  // return exactly the plain result
  std::vector<QuadratureSample> complete;
  for (int k = 0; k <= plain.n_max; ++k) {
    const double theta = kPi * k / (plain.n_max + 1);
    for (double q = -8.0; q <= 8.0 + 1e-12; q += 0.05)
      complete.push_back({theta, q});
  }
  MaxlikConfig quick = plain;
  quick.max_iters = 40;
  MaxlikConfig quick_corr = quick;
  quick_corr.bias_correction = true;
  const auto a = maxlik::reconstruct(complete, quick);
  const auto b = maxlik::reconstruct(complete, quick_corr);
  CHECK((a.rho.matrix() - b.rho.matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(b.g_condition == doctest::Approx(1.0).epsilon(1e-9));

  // all samples at q = 0 leave the odd sector unobserved: G is singular
  std::vector<QuadratureSample> degenerate;
  for (int i = 0; i < 50; ++i) degenerate.push_back({0.1 * i, 0.0});
  CHECK_THROWS_AS((void)maxlik::reconstruct(degenerate, corrected),
                  std::runtime_error);
}

TEST_CASE("iteration cap is reported, not thrown") {
  const auto data = draw(DensityMatrix::fock(1, 3), 3000, 53, 0.5);
  MaxlikConfig cfg;
  cfg.n_max = 3;
  cfg.epsilon = 0.001;
  cfg.max_iters = 3;
  const auto res = maxlik::reconstruct(data, cfg);
  CHECK_FALSE(res.converged);
  CHECK(res.iterations <= 3);
}

TEST_CASE("parametric bootstrap spread") {
  MaxlikConfig cfg;
  cfg.n_max = 2;
  sampler::AcquisitionPlan plan;
  plan.n_samples = 2000;

  const DensityMatrix vac = DensityMatrix::vacuum(3);
  // identical replica seeds give identical estimates, hence zero spread
  const Eigen::MatrixXd none = maxlik::bootstrap_errors(vac, plan, cfg, {5, 5});
  CHECK(none.maxCoeff() < 1e-7);

  const Eigen::MatrixXd se = maxlik::bootstrap_errors(vac, plan, cfg, 20, 1);
  CHECK(se(0, 0) > 0.0);
  CHECK(se(0, 0) < 0.01);

  CHECK_THROWS_AS((void)maxlik::bootstrap_errors(vac, plan, cfg, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)maxlik::bootstrap_errors(vac, plan, cfg, {7}),
                  std::invalid_argument);
}

TEST_CASE("configuration validation") {
  const auto data = draw(DensityMatrix::vacuum(2), 100, 59);
  MaxlikConfig cfg;
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS((void)maxlik::reconstruct(data, cfg), std::invalid_argument);
  cfg = MaxlikConfig{};
  cfg.max_iters = 0;
  CHECK_THROWS_AS((void)maxlik::reconstruct(data, cfg), std::invalid_argument);
  cfg = MaxlikConfig{};
  cfg.stop_tol = 0.0;
  CHECK_THROWS_AS((void)maxlik::reconstruct(data, cfg), std::invalid_argument);
  cfg = MaxlikConfig{};
  cfg.eta = 1.0001;
  CHECK_THROWS_AS((void)maxlik::reconstruct(data, cfg), std::invalid_argument);
  cfg = MaxlikConfig{};
  cfg.n_max = kMaxFockIndex;
  CHECK_THROWS_AS((void)maxlik::reconstruct(data, cfg), std::invalid_argument);
  CHECK_THROWS_AS((void)maxlik::reconstruct({}, MaxlikConfig{}),
                  std::invalid_argument);
}
