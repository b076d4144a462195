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

#include "cvqst/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvqst {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kEigenFloor = -1e-10;

// Pascal-triangle table of binomial coefficients C(0..n, 0..n).
// Exact up to C(56,28); beyond that the additions round but stay within
// 1e-15 relative, which the loss-channel tolerances absorb.
std::vector<std::vector<double>> binomials(int n) {
  std::vector<std::vector<double>> c(n + 1);
  for (int i = 0; i <= n; ++i) {
    c[i].assign(i + 1, 1.0);
    for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c;
}

}  // namespace

void GridSpec::validate() const {
  if (!(q_min < q_max) || !(p_min < p_max))
    throw std::invalid_argument("GridSpec: min must be below max on both axes");
  if (nq < 2 || np < 2)
    throw std::invalid_argument("GridSpec: need at least 2 points per axis");
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1)
    throw std::invalid_argument("DensityMatrix: matrix must be square and nonempty");
  if (m_.rows() > kMaxFockIndex + 1)
    throw std::invalid_argument("DensityMatrix: dimension exceeds " +
                                std::to_string(kMaxFockIndex + 1));
  const double herm_err = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > kHermitianTol)
    throw std::invalid_argument("DensityMatrix: not Hermitian (deviation " +
                                std::to_string(herm_err) + ")");
  const Complex tr = m_.trace();
  if (std::abs(tr - 1.0) > kTraceTol)
    throw std::invalid_argument("DensityMatrix: trace deviates from one by " +
                                std::to_string(std::abs(tr - 1.0)));
  m_ = ((m_ + m_.adjoint()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < kEigenFloor)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                std::to_string(min_eig));
}

DensityMatrix DensityMatrix::vacuum(int dim) { return fock(0, dim); }

DensityMatrix DensityMatrix::fock(int n, int dim) {
  if (n < 0 || n >= dim)
    throw std::invalid_argument("DensityMatrix::fock: need 0 <= n < dim");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  m(n, n) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::from_pure(const Eigen::VectorXcd& amplitudes) {
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > 1e-9)
    throw std::invalid_argument("DensityMatrix::from_pure: amplitudes not normalized");
  const Eigen::VectorXcd v = amplitudes / norm;
  return DensityMatrix(v * v.adjoint());
}

double DensityMatrix::mean_photon_number() const {
  double s = 0.0;
  for (int n = 0; n < dim(); ++n) s += n * m_(n, n).real();
  return s;
}

Complex quadrature_overlap(int n, double q, double theta) {
  return Complex(std::cos(n * theta), std::sin(n * theta)) *
         fock_wavefunction(n, q);
}

double marginal(const DensityMatrix& rho, double q, double theta, double eta) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::invalid_argument("marginal: eta must lie in (0, 1]");
  if (eta < 1.0) return marginal(bernoulli_loss(rho, eta), q, theta, 1.0);

  const int d = rho.dim();
  std::vector<double> psi(d);
  fock_wavefunctions(d - 1, q, psi);
  double pr = 0.0;
  for (int m = 0; m < d; ++m) pr += rho(m, m).real() * psi[m] * psi[m];
  for (int m = 0; m < d; ++m) {
    for (int n = m + 1; n < d; ++n) {
      const Complex phase(std::cos((n - m) * theta), std::sin((n - m) * theta));
      pr += 2.0 * (rho(m, n) * phase).real() * psi[m] * psi[n];
    }
  }
  // a PSD state cannot have a negative marginal; zero out rounding dust
  if (pr < 0.0 && pr > -1e-12) pr = 0.0;
  return pr;
}

double wigner_point(const DensityMatrix& rho, double q, double p) {
  const int d = rho.dim();
  const double r2 = q * q + p * p;
  const double z = 2.0 * r2;
  const double damp = std::exp(-r2);
  const Complex u(q, p);

  // W = sum over diagonals k = n - m of
  //   coeff(m,k) * L_m^k(z) * damp * {rho_mm           (k = 0)
  //                                   2 Re[rho_{m,m+k} u^k]  (k > 0)}
  // with coeff(m,k) = (1/pi)(-1)^m sqrt(2^k m!/(m+k)!).
  double w = 0.0;
  Complex uk(1.0, 0.0);
  for (int k = 0; k < d; ++k) {
    double coeff = 1.0 / kPi;
    for (int j = 1; j <= k; ++j) coeff *= std::sqrt(2.0 / j);
    double lm_prev = 0.0, lm = 1.0;  // L_{-1}^k, L_0^k
    for (int m = 0; m + k < d; ++m) {
      if (m > 0) {
        const double lm_next =
            ((2.0 * m - 1.0 + k - z) * lm - (m - 1.0 + k) * lm_prev) / m;
        lm_prev = lm;
        lm = lm_next;
        coeff *= -std::sqrt(m / (m + static_cast<double>(k)));
      }
      const double basis = coeff * lm * damp;
      if (k == 0)
        w += rho(m, m).real() * basis;
      else
        w += 2.0 * (rho(m, m + k) * uk).real() * basis;
    }
    uk *= u;
  }
  return w;
}

WignerGrid wigner(const DensityMatrix& rho, const GridSpec& grid) {
  grid.validate();
  WignerGrid out{grid, Eigen::MatrixXd(grid.nq, grid.np)};
  for (int i = 0; i < grid.nq; ++i)
    for (int j = 0; j < grid.np; ++j)
      out.values(i, j) = wigner_point(rho, grid.q_at(i), grid.p_at(j));
  return out;
}

namespace {

struct LossTables {
  std::vector<std::vector<double>> binom;
  std::vector<double> eta_half;   // sqrt(eta)^i
  std::vector<double> one_minus;  // (1-eta)^k

  LossTables(int d, double eta)
      : binom(binomials(d - 1)), eta_half(2 * d - 1), one_minus(d) {
    const double sqrt_eta = std::sqrt(eta);
    eta_half[0] = 1.0;
    for (int i = 1; i < 2 * d - 1; ++i) eta_half[i] = eta_half[i - 1] * sqrt_eta;
    one_minus[0] = 1.0;
    for (int k = 1; k < d; ++k) one_minus[k] = one_minus[k - 1] * (1.0 - eta);
  }
};

void check_loss_eta(double eta, const char* who) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument(std::string(who) + ": eta must lie in [0, 1]");
}

}  // namespace

Eigen::MatrixXcd apply_loss(const Eigen::MatrixXcd& m, double eta) {
  check_loss_eta(eta, "apply_loss");
  if (eta == 1.0) return m;
  const int d = static_cast<int>(m.rows());
  const LossTables t(d, eta);

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Complex s(0.0, 0.0);
      for (int k = 0; k + std::max(a, b) < d; ++k)
        s += std::sqrt(t.binom[a + k][k] * t.binom[b + k][k]) * t.one_minus[k] *
             m(a + k, b + k);
      out(a, b) = s * t.eta_half[a + b];
    }
  }
  return out;
}

Eigen::MatrixXcd apply_loss_adjoint(const Eigen::MatrixXcd& m, double eta) {
  check_loss_eta(eta, "apply_loss_adjoint");
  if (eta == 1.0) return m;
  const int d = static_cast<int>(m.rows());
  const LossTables t(d, eta);

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Complex s(0.0, 0.0);
      for (int k = 0; k <= std::min(a, b); ++k)
        s += std::sqrt(t.binom[a][k] * t.binom[b][k]) * t.one_minus[k] *
             t.eta_half[a + b - 2 * k] * m(a - k, b - k);
      out(a, b) = s;
    }
  }
  return out;
}

DensityMatrix bernoulli_loss(const DensityMatrix& rho, double eta) {
  check_loss_eta(eta, "bernoulli_loss");
  if (eta == 1.0) return rho;
  Eigen::MatrixXcd out = apply_loss(rho.matrix(), eta);
  // the channel is exactly trace-preserving; symmetrize rounding dust so the
  // result passes state validation
  out = Complex(0.5, 0.0) * (out + out.adjoint().eval());
  return DensityMatrix(std::move(out));
}

WignerGrid wigner_convolve_loss(const WignerGrid& w, double eta) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::invalid_argument("wigner_convolve_loss: eta must lie in (0, 1]");
  if (eta == 1.0) return w;
  const GridSpec& g = w.spec;
  g.validate();
  const double width = std::sqrt(1.0 - eta);
  if (g.dq() >= width || g.dp() >= width)
    throw std::invalid_argument(
        "wigner_convolve_loss: grid spacing must be finer than the kernel "
        "width sqrt(1-eta) = " +
        std::to_string(width));

  const double sqrt_eta = std::sqrt(eta);
  Eigen::MatrixXd tq(g.nq, g.nq), tp(g.np, g.np);
  for (int i = 0; i < g.nq; ++i)
    for (int j = 0; j < g.nq; ++j) {
      const double dqs = g.q_at(i) - sqrt_eta * g.q_at(j);
      tq(i, j) = std::exp(-dqs * dqs / (1.0 - eta)) * g.dq();
    }
  for (int i = 0; i < g.np; ++i)
    for (int j = 0; j < g.np; ++j) {
      const double dps = g.p_at(i) - sqrt_eta * g.p_at(j);
      tp(i, j) = std::exp(-dps * dps / (1.0 - eta)) * g.dp();
    }
  WignerGrid out{g, Eigen::MatrixXd(g.nq, g.np)};
  out.values = (tq * w.values * tp.transpose()) / (kPi * (1.0 - eta));
  return out;
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("fidelity: dimension mismatch");
  // Eigenvalues of rank-deficient inputs carry O(1e-16) solver noise that a
  // bare square root would amplify to O(1e-8); clip below a relative floor.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(a.matrix());
  Eigen::VectorXd lam = ea.eigenvalues();
  const double floor_a = lam.maxCoeff() * 1e-14;
  lam = (lam.array() < floor_a).select(0.0, lam).cwiseSqrt();
  const Eigen::MatrixXcd sqrt_a =
      ea.eigenvectors() * lam.asDiagonal() * ea.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> em(sqrt_a * b.matrix() * sqrt_a,
                                                     Eigen::EigenvaluesOnly);
  const double floor_m = em.eigenvalues().maxCoeff() * 1e-14;
  double tr = 0.0;
  for (int i = 0; i < em.eigenvalues().size(); ++i)
    if (em.eigenvalues()(i) > floor_m) tr += std::sqrt(em.eigenvalues()(i));
  return std::clamp(tr * tr, 0.0, 1.0);
}

}  // namespace cvqst
