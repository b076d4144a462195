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

#ifndef CVQST_FOCK_HPP
#define CVQST_FOCK_HPP

#include <Eigen/Dense>
#include <complex>

#include "cvqst/special.hpp"

// Core phase-space types and channels for a single bosonic mode, Fock basis
// truncated at dim-1 photons. Quadrature convention throughout: [Q,P] = i,
// vacuum variance 1/2, rotated quadrature Q_theta = Q cos(theta) + P sin(theta),
// and <n|q,theta> = exp(i n theta) psi_n(q).

namespace cvqst {

using Complex = std::complex<double>;

// One homodyne outcome: local-oscillator phase and quadrature value.
struct QuadratureSample {
  double theta;
  double q;
};

// Rectangular phase-space grid, endpoints included on both axes.
struct GridSpec {
  double q_min, q_max;
  int nq;
  double p_min, p_max;
  int np;

  double dq() const { return (q_max - q_min) / (nq - 1); }
  double dp() const { return (p_max - p_min) / (np - 1); }
  double q_at(int i) const { return q_min + i * dq(); }
  double p_at(int j) const { return p_min + j * dp(); }
  void validate() const;
};

// Wigner function sampled on a grid; values(i, j) = W(q_at(i), p_at(j)).
struct WignerGrid {
  GridSpec spec;
  Eigen::MatrixXd values;
};

// Trace-one positive-semidefinite Hermitian matrix in the Fock basis.
// Construction validates (and then exactly symmetrizes) the input:
// hermiticity to 1e-12, unit trace to 1e-12, smallest eigenvalue >= -1e-10.
class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd m);

  static DensityMatrix vacuum(int dim);
  static DensityMatrix fock(int n, int dim);
  // Pure state from Fock amplitudes; requires norm within 1e-9 of one,
  // then normalizes exactly.
  static DensityMatrix from_pure(const Eigen::VectorXcd& amplitudes);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  Complex operator()(int m, int n) const { return m_(m, n); }

  double purity() const { return (m_ * m_).trace().real(); }
  double mean_photon_number() const;

 private:
  Eigen::MatrixXcd m_;
};

// <n|q,theta> = exp(i n theta) psi_n(q), the Fock component of the rotated
// quadrature eigenstate.
Complex quadrature_overlap(int n, double q, double theta);

// pr(q, theta) = <q,theta| rho |q,theta>; eta < 1 first passes rho through
// bernoulli_loss(rho, eta). Result is clamped at the numerical floor so a
// positive-semidefinite input never yields a negative probability density.
double marginal(const DensityMatrix& rho, double q, double theta, double eta = 1.0);

// W(q,p) = (1/2pi) Int <q+u/2|rho|q-u/2> exp(-i p u) du, evaluated with the
// closed Laguerre form per Fock pair. W at the origin reduces to the parity
// sum (1/pi) sum_n (-1)^n rho_nn exactly.
double wigner_point(const DensityMatrix& rho, double q, double p);
WignerGrid wigner(const DensityMatrix& rho, const GridSpec& grid);

// Photon-loss (beam-splitter) channel at transmission eta in [0,1]:
//   rho'_mn = sum_k sqrt(C(m+k,k) C(n+k,k)) eta^{(m+n)/2} (1-eta)^k rho_{m+k,n+k}.
// Trace-preserving and completely positive; eta = 1 is the identity and
// eta = 0 maps everything to vacuum.
DensityMatrix bernoulli_loss(const DensityMatrix& rho, double eta);

// The same channel on a raw Fock-basis matrix (no state validation), and its
// adjoint (Heisenberg-picture) map
//   M'_ab = sum_k sqrt(C(a,k) C(b,k)) eta^{(a+b)/2-k} (1-eta)^k M_{a-k,b-k},
// defined so that Tr[apply_loss_adjoint(M) rho] = Tr[M apply_loss(rho)]
// exactly on the truncated space. Loss-degraded measurement operators are
// built with the adjoint.
Eigen::MatrixXcd apply_loss(const Eigen::MatrixXcd& m, double eta);
Eigen::MatrixXcd apply_loss_adjoint(const Eigen::MatrixXcd& m, double eta);

// Same channel applied in phase space: Gaussian smoothing of a Wigner grid,
//   W'(q,p) = (1/(pi(1-eta))) Int W(q',p')
//             exp(-((q - sqrt(eta) q')^2 + (p - sqrt(eta) p')^2)/(1-eta)) dq' dp'.
// Requires grid spacing finer than the kernel width sqrt(1-eta); eta = 1
// returns the input unchanged. The kernel is separable, so the quadrature is
// two one-axis matrix products.
WignerGrid wigner_convolve_loss(const WignerGrid& w, double eta);

// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2, symmetric in a, b;
// equals |<psi_a|psi_b>|^2 for pure inputs. Result clamped to [0, 1].
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace cvqst

#endif  // CVQST_FOCK_HPP
