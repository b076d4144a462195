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
#include <memory>
#include <numbers>

#include "cvqst/states.hpp"

using namespace cvqst;
using states::StateSpec;

namespace {

StateSpec spec_of(const std::string& kind) {
  StateSpec s;
  s.kind = kind;
  return s;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix() - b.matrix(),
                                                     Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace

TEST_CASE("basic families place their population correctly") {
  const DensityMatrix vac = states::build(spec_of("vacuum"), 4);
  CHECK(vac.dim() == 5);
  CHECK(vac(0, 0).real() == doctest::Approx(1.0));

  StateSpec f = spec_of("fock");
  f.n = 1;
  const DensityMatrix one = states::build(f, 3);
  CHECK(one(1, 1).real() == doctest::Approx(1.0));
  CHECK(one.purity() == doctest::Approx(1.0));

  StateSpec th = spec_of("thermal");
  th.nbar = 0.5;
  const DensityMatrix t = states::build(th, 40);
  CHECK(t(0, 0).real() == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(t(1, 1).real() == doctest::Approx(2.0 / 9.0).epsilon(1e-9));
  CHECK(t.mean_photon_number() == doctest::Approx(0.5).epsilon(1e-6));

  StateSpec sr = spec_of("single_rail");
  sr.c0 = Complex(1.0, 0.0) / std::sqrt(2.0);
  sr.c1 = Complex(0.0, 1.0) / std::sqrt(2.0);
  const DensityMatrix rail = states::build(sr, 2);
  CHECK(rail(0, 1).imag() == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(rail(1, 0).imag() == doctest::Approx(0.5).epsilon(1e-12));
}

// Amplitude values below were computed independently with an
// arbitrary-precision oracle (tests/oracles/fock_oracle.py).

TEST_CASE("squeezed vacuum amplitudes") {
  StateSpec s = spec_of("squeezed_vacuum");
  s.zeta = 0.3;
  // n_max far beyond the support so renormalization cannot shift amplitudes
  const DensityMatrix rho = states::build(s, 40);
  const auto amp = [&](int n) { return std::sqrt(rho(n, n).real()); };
  CHECK(amp(0) == doctest::Approx(0.976698111709521864).epsilon(1e-10));
  CHECK(amp(2) == doctest::Approx(0.207188957388569708).epsilon(1e-10));
  CHECK(amp(4) == doctest::Approx(0.0538292701446338803).epsilon(1e-10));
  CHECK(amp(6) == doctest::Approx(0.014741752756127676).epsilon(1e-10));
  CHECK(rho(1, 1).real() == doctest::Approx(0.0).scale(1.0));
  CHECK(rho(3, 3).real() == doctest::Approx(0.0).scale(1.0));
  CHECK(rho.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-14));
  // relative phases are all positive for zeta > 0
  CHECK(rho(0, 2).real() > 0.0);
  CHECK(rho(0, 2).imag() == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("odd cat amplitudes and parity structure") {
  StateSpec s = spec_of("odd_cat");
  s.alpha = Complex(1.2, 0.0);
  const DensityMatrix rho = states::build(s, 14);
  const auto amp = [&](int n) { return std::sqrt(rho(n, n).real()); };
  CHECK(amp(1) == doctest::Approx(0.850255052457494728).epsilon(1e-10));
  CHECK(amp(3) == doctest::Approx(0.499845847138609527).epsilon(1e-10));
  CHECK(amp(5) == doctest::Approx(0.160947258116097549).epsilon(1e-10));
  for (int n = 0; n <= 14; n += 2)
    CHECK(rho(n, n).real() == doctest::Approx(0.0).scale(1.0));

  // small alpha: amplitudes approach the photon-subtracted-squeezed ratio
  // c3/c1 -> alpha^2/sqrt(6)
  StateSpec tiny = spec_of("odd_cat");
  tiny.alpha = Complex(0.05, 0.0);
  const DensityMatrix small = states::build(tiny, 6);
  const double ratio = std::sqrt(small(3, 3).real() / small(1, 1).real());
  CHECK(ratio == doctest::Approx(0.05 * 0.05 / std::sqrt(6.0)).epsilon(1e-3));

  StateSpec e = spec_of("even_cat");
  e.alpha = Complex(1.2, 0.0);
  const DensityMatrix even = states::build(e, 14);
  for (int n = 1; n <= 13; n += 2)
    CHECK(even(n, n).real() == doctest::Approx(0.0).scale(1.0));
  CHECK(even(0, 0).real() > 0.3);
}

TEST_CASE("coherent marginal is the displaced vacuum Gaussian") {
  StateSpec c = spec_of("coherent");
  c.alpha = Complex(0.9, -0.4);
  const DensityMatrix rho = states::build(c, 24);
  for (double theta : {0.0, 0.6, 2.0}) {
    const double mean =
        std::sqrt(2.0) * (c.alpha * Complex(std::cos(theta), -std::sin(theta))).real();
    for (double q : {-1.0, 0.2, 1.7}) {
      const double expect = std::exp(-(q - mean) * (q - mean)) / std::sqrt(std::numbers::pi);
      CHECK(marginal(rho, q, theta) == doctest::Approx(expect).epsilon(1e-6));
    }
  }
}

TEST_CASE("photon addition and subtraction") {
  StateSpec add = spec_of("photon_added");
  add.n = 1;
  add.base = std::make_shared<StateSpec>(spec_of("thermal"));  // nbar = 0
  const DensityMatrix lifted = states::build(add, 4);
  CHECK(lifted(1, 1).real() == doctest::Approx(1.0).epsilon(1e-12));

  // a a' rho(thermal) != a' a rho(thermal): ordering matters
  StateSpec base = spec_of("thermal");
  base.nbar = 1.0;
  StateSpec add_sub = spec_of("photon_subtracted");
  add_sub.n = 1;
  add_sub.base = std::make_shared<StateSpec>(spec_of("photon_added"));
  add_sub.base->n = 1;
  add_sub.base->base = std::make_shared<StateSpec>(base);
  StateSpec sub_add = spec_of("photon_added");
  sub_add.n = 1;
  sub_add.base = std::make_shared<StateSpec>(spec_of("photon_subtracted"));
  sub_add.base->n = 1;
  sub_add.base->base = std::make_shared<StateSpec>(base);
  const DensityMatrix first = states::build(add_sub, 30);
  const DensityMatrix second = states::build(sub_add, 30);
  CHECK(trace_distance(first, second) > 0.01);

  // subtraction leaves a valid normalized state
  CHECK(first.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));

  StateSpec kill = spec_of("photon_subtracted");
  kill.n = 1;
  kill.base = std::make_shared<StateSpec>(spec_of("vacuum"));
  CHECK_THROWS_AS((void)states::build(kill, 4), std::invalid_argument);
}

TEST_CASE("kitten fidelity check") {
  CHECK(states::kitten_fidelity_check(0.5, 20) >= 0.99);
  // alpha -> 0 makes the match exact
  CHECK(states::kitten_fidelity_check(0.05, 20) == doctest::Approx(1.0).epsilon(1e-5));
  const double at_one = states::kitten_fidelity_check(1.0, 24);
  CHECK(at_one > 0.9);
  CHECK(at_one < 1.0);
  // monotone degradation as the cat grows
  CHECK(states::kitten_fidelity_check(0.3, 20) >
        states::kitten_fidelity_check(0.8, 20));
}

TEST_CASE("truncation tail is rejected with the adequate n_max named") {
  StateSpec c = spec_of("coherent");
  c.alpha = Complex(2.0, 0.0);
  try {
    (void)states::build(c, 3);
    FAIL("expected a truncation error");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto pos = msg.find("need n_max >= ");
    REQUIRE(pos != std::string::npos);
    const int adequate = std::stoi(msg.substr(pos + 14));
    CHECK(adequate > 3);
    // building at the named truncation must succeed
    const DensityMatrix ok = states::build(c, adequate);
    CHECK(ok.dim() == adequate + 1);
    // and one below it must still fail
    CHECK_THROWS_AS((void)states::build(c, adequate - 1), std::invalid_argument);
  }
}

TEST_CASE("parameter validation") {
  StateSpec s = spec_of("squeezed_vacuum");
  s.zeta = 1.0;
  CHECK_THROWS_AS((void)states::build(s, 8), std::invalid_argument);

  StateSpec cat = spec_of("odd_cat");
  cat.alpha = Complex(-1.0, 0.0);
  CHECK_THROWS_AS((void)states::build(cat, 8), std::invalid_argument);
  cat.alpha = Complex(1.0, 0.5);
  CHECK_THROWS_AS((void)states::build(cat, 8), std::invalid_argument);

  StateSpec sr = spec_of("single_rail");
  sr.c0 = Complex(1.0, 0.0);
  sr.c1 = Complex(1.0, 0.0);
  CHECK_THROWS_AS((void)states::build(sr, 8), std::invalid_argument);

  StateSpec th = spec_of("thermal");
  th.nbar = -0.1;
  CHECK_THROWS_AS((void)states::build(th, 8), std::invalid_argument);

  StateSpec f = spec_of("fock");
  f.n = -1;
  CHECK_THROWS_AS((void)states::build(f, 8), std::invalid_argument);

  StateSpec add = spec_of("photon_added");
  add.n = 0;
  add.base = std::make_shared<StateSpec>(spec_of("vacuum"));
  CHECK_THROWS_AS((void)states::build(add, 8), std::invalid_argument);
  add.n = 1;
  add.base.reset();
  CHECK_THROWS_AS((void)states::build(add, 8), std::invalid_argument);

  CHECK_THROWS_AS((void)states::build(spec_of("gaussian"), 8), std::invalid_argument);
  CHECK_THROWS_AS((void)states::build(spec_of("vacuum"), 0), std::invalid_argument);
  CHECK_THROWS_AS((void)states::build(spec_of("vacuum"), kMaxFockIndex + 1),
                  std::invalid_argument);
}
