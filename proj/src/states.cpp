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

#include "cvqst/states.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cvqst::states {

namespace {

constexpr double kTailTol = 1e-6;

// Workspace states are built a little larger than requested so ladder
// operators have headroom; final truncation is checked against kTailTol.
int chain_shift(const StateSpec& s) {
  if (s.kind == "photon_added" || s.kind == "photon_subtracted")
    return s.n + (s.base ? chain_shift(*s.base) : 0);
  return 0;
}

Eigen::VectorXcd coherent_amplitudes(Complex alpha, int dim) {
  Eigen::VectorXcd c(dim);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(double(n));
  return c;
}

// Unnormalized truncation of an exactly normalized state: the deficit
// 1 - sum |c_n|^2 (or 1 - tr for mixed) is the discarded tail population.
Eigen::MatrixXcd build_workspace(const StateSpec& spec, int dim) {
  if (spec.kind == "vacuum" || spec.kind == "fock") {
    const int n = spec.kind == "vacuum" ? 0 : spec.n;
    if (n < 0) throw std::invalid_argument("states::build: fock index negative");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    if (n < dim) m(n, n) = 1.0;
    return m;
  }
  if (spec.kind == "coherent") {
    const Eigen::VectorXcd c = coherent_amplitudes(spec.alpha, dim);
    return c * c.adjoint();
  }
  if (spec.kind == "squeezed_vacuum") {
    const double z = spec.zeta;
    if (!(std::abs(z) < 1.0))
      throw std::invalid_argument("states::build: squeezed_vacuum needs |zeta| < 1");
    const double r = std::atanh(z);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim);
    // c_{2k} = sqrt((2k)!)/k! (zeta/2)^k / sqrt(cosh r)
    double amp = 1.0 / std::sqrt(std::cosh(r));
    for (int k = 0; 2 * k < dim; ++k) {
      c(2 * k) = amp;
      amp *= 0.5 * z * std::sqrt((2.0 * k + 1.0) * (2.0 * k + 2.0)) / (k + 1.0);
    }
    return c * c.adjoint();
  }
  if (spec.kind == "odd_cat" || spec.kind == "even_cat") {
    if (spec.alpha.imag() != 0.0 || spec.alpha.real() <= 0.0)
      throw std::invalid_argument("states::build: cat states need real alpha > 0");
    const double a = spec.alpha.real();
    const bool odd = spec.kind == "odd_cat";
    const double norm2 = 2.0 * (1.0 + (odd ? -1.0 : 1.0) * std::exp(-2.0 * a * a));
    Eigen::VectorXcd c = coherent_amplitudes(Complex(a, 0.0), dim);
    for (int n = 0; n < dim; ++n)
      c(n) *= (n % 2 == (odd ? 1 : 0)) ? 2.0 / std::sqrt(norm2) : 0.0;
    return c * c.adjoint();
  }
  if (spec.kind == "single_rail") {
    const double norm = std::sqrt(std::norm(spec.c0) + std::norm(spec.c1));
    if (std::abs(norm - 1.0) > 1e-9)
      throw std::invalid_argument("states::build: single_rail amplitudes not normalized");
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim);
    c(0) = spec.c0 / norm;
    c(1) = spec.c1 / norm;
    return c * c.adjoint();
  }
  if (spec.kind == "thermal") {
    if (spec.nbar < 0.0)
      throw std::invalid_argument("states::build: thermal needs nbar >= 0");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    double p = 1.0 / (1.0 + spec.nbar);
    for (int n = 0; n < dim; ++n) {
      m(n, n) = p;
      p *= spec.nbar / (1.0 + spec.nbar);
    }
    return m;
  }
  if (spec.kind == "photon_added" || spec.kind == "photon_subtracted") {
    if (!spec.base)
      throw std::invalid_argument("states::build: " + spec.kind + " needs a base state");
    if (spec.n < 1)
      throw std::invalid_argument("states::build: " + spec.kind + " needs n >= 1");
    Eigen::MatrixXcd m = build_workspace(*spec.base, dim);
    for (int rep = 0; rep < spec.n; ++rep) {
      Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(dim, dim);
      if (spec.kind == "photon_added") {
        for (int i = 1; i < dim; ++i)
          for (int j = 1; j < dim; ++j)
            next(i, j) = std::sqrt(double(i) * j) * m(i - 1, j - 1);
      } else {
        for (int i = 0; i + 1 < dim; ++i)
          for (int j = 0; j + 1 < dim; ++j)
            next(i, j) = std::sqrt((i + 1.0) * (j + 1.0)) * m(i + 1, j + 1);
      }
      const double tr = next.trace().real();
      if (tr <= 0.0)
        throw std::invalid_argument("states::build: " + spec.kind +
                                    " annihilates the state");
      m = next / tr;
    }
    return m;
  }
  throw std::invalid_argument("states::build: unknown kind '" + spec.kind + "'");
}

double tail_beyond(const Eigen::MatrixXcd& m, int n_max) {
  double head = 0.0, total = 0.0;
  for (int n = 0; n < m.rows(); ++n) {
    const double p = m(n, n).real();
    total += p;
    if (n <= n_max) head += p;
  }
  // pure families carry exact normalization, so missing total is also tail
  return std::max(0.0, 1.0 - head / std::max(total, 1.0));
}

}  // namespace

DensityMatrix build(const StateSpec& spec, int n_max) {
  if (n_max < 1 || n_max > kMaxFockIndex)
    throw std::invalid_argument("states::build: n_max out of range [1, " +
                                std::to_string(kMaxFockIndex) + "]");
  const int dim_w = n_max + 1 + chain_shift(spec) + 8;
  const Eigen::MatrixXcd work = build_workspace(spec, dim_w);
  if (tail_beyond(work, n_max) > kTailTol) {
    // report the smallest adequate truncation, probed at full capacity
    const Eigen::MatrixXcd probe =
        build_workspace(spec, kMaxFockIndex + 1 + chain_shift(spec) + 8);
    for (int nm = n_max + 1; nm <= kMaxFockIndex; ++nm) {
      if (tail_beyond(probe, nm) <= kTailTol)
        throw std::invalid_argument(
            "states::build: truncation tail exceeds 1e-6 at n_max = " +
            std::to_string(n_max) + "; need n_max >= " + std::to_string(nm));
    }
    throw std::invalid_argument(
        "states::build: state not representable within n_max = " +
        std::to_string(kMaxFockIndex));
  }
  Eigen::MatrixXcd m = work.topLeftCorner(n_max + 1, n_max + 1);
  m /= m.trace().real();
  return DensityMatrix(std::move(m));
}

double kitten_fidelity_check(double alpha, int n_max) {
  StateSpec cat;
  cat.kind = "odd_cat";
  cat.alpha = Complex(alpha, 0.0);
  StateSpec sub;
  sub.kind = "photon_subtracted";
  sub.n = 1;
  sub.base = std::make_shared<StateSpec>();
  sub.base->kind = "squeezed_vacuum";
  sub.base->zeta = alpha * alpha / 6.0;
  return fidelity(build(cat, n_max), build(sub, n_max));
}

}  // namespace cvqst::states
