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

#ifndef CVQST_SPATIAL_HPP
#define CVQST_SPATIAL_HPP

#include <utility>
#include <vector>

#include "cvqst/fock.hpp"

// Deterministic phase-space tomography of transverse spatial modes. The
// field lives on a centered grid with an odd point count, so x = 0 is a grid
// node and parity inversion (index reflection) is exact. The Wigner function
// here is the displaced-parity expectation
//   W(x, kx) = (1/pi) Int E(x+u) E*(x-u) exp(-2i kx u) du,
// normalized so Int W dx dkx = 1, |W| <= 1/pi.

namespace cvqst::spatial {

class SpatialMode {
 public:
  // 1D mode; size must be odd and >= 3. The field is normalized so that
  // sum |E|^2 * pitch = 1 (throws on an all-zero field).
  static SpatialMode line(double pitch, double k0, Eigen::VectorXcd field);
  // 2D mode; both dimensions odd and >= 3, normalized with pitch^2.
  // field(i, j) = E(x_i, y_j).
  static SpatialMode plane(double pitch, double k0, Eigen::MatrixXcd field);

  int dims() const { return dims_; }
  double pitch() const { return pitch_; }
  double k0() const { return k0_; }
  int nx() const { return static_cast<int>(field_.rows()); }
  int ny() const { return static_cast<int>(field_.cols()); }
  double x_at(int i) const { return (i - (nx() - 1) / 2) * pitch_; }
  double y_at(int j) const { return (j - (ny() - 1) / 2) * pitch_; }
  const Eigen::MatrixXcd& field() const { return field_; }

 private:
  SpatialMode(int dims, double pitch, double k0, Eigen::MatrixXcd field);

  int dims_;
  double pitch_;
  double k0_;
  Eigen::MatrixXcd field_;
};

// Ensemble second-order coherence rho(x1, x2) = <E(x1) E*(x2)> on the 1D
// grid. Hermitian, positive semidefinite, trace * pitch = 1.
struct CorrelationMatrix {
  double pitch = 0.0;
  Eigen::MatrixXcd rho;

  int n() const { return static_cast<int>(rho.rows()); }
  double x_at(int i) const { return (i - (n() - 1) / 2) * pitch; }
};

// Paraxial free-space propagation over distance z: the transverse spectrum
// is multiplied by exp(-i k^2 z / (2 k0)). Unitary, so the norm is
// preserved; throws if more than 1e-3 of the energy ends up in the outer 5%
// bands of the grid (diffraction has outgrown the window).
SpatialMode propagate(const SpatialMode& mode, double z);

// E'(x) = E(x - x0) exp(i kx0 x); the shift is applied in the spectral
// domain, so sub-pixel x0 is exact for band-limited fields. Throws on edge
// clipping like propagate. The plane overload displaces both axes.
SpatialMode displace(const SpatialMode& mode, double x0, double kx0);
SpatialMode displace(const SpatialMode& mode, double x0, double y0,
                     double kx0, double ky0);

// Displaced-parity value of the Wigner function: displace by (-x, -kx),
// split about the grid center into even and odd parts, return
// (1/pi) (Int |E_even|^2 - Int |E_odd|^2). The plane overload inverts both
// axes jointly and carries 1/pi^2.
double wigner_point(const SpatialMode& mode, double x, double kx);
double wigner_point(const SpatialMode& mode, double x, double y, double kx,
                    double ky);

// Parity-weighted trace of the correlation matrix,
//   W(x_j, kx) = (pitch/pi) sum_s rho(j+s, j-s) exp(-2i kx s pitch).
// x must coincide with a grid node (the correlation matrix cannot be
// shifted sub-pixel); kx is unrestricted.
double wigner_point(const CorrelationMatrix& corr, double x, double kx);

// Grid of wigner_point values for a 1D mode; grid.q_* spans x and grid.p_*
// spans kx. One spectral shift per x row, O(n) per point after that.
WignerGrid wigner_scan(const SpatialMode& mode, const GridSpec& grid);

// rho = sum_k w_k E_k E_k^dagger over 1D modes sharing grid and pitch;
// weights must be nonnegative and sum to 1 (within 1e-9, then renormalized).
CorrelationMatrix ensemble_correlation(
    const std::vector<std::pair<double, SpatialMode>>& ensemble);

// Free propagation shears phase space, so the intensity profile at distance
// z is a Radon projection of the z = 0 Wigner function. With x and kx made
// dimensionless by a length scale s (u = x/s, v = kx s), the profile at z
// is the projection at angle theta = atan(z / (k0 s^2)): sample m carries
// q_m = (x_m / s) cos(theta) and weight |E(x_m, z)|^2 pitch. The output
// plugs directly into the weighted back-projection reconstruction.
struct ShearProjection {
  double theta = 0.0;
  std::vector<QuadratureSample> samples;
  std::vector<double> weights;
};
ShearProjection intensity_projection(const SpatialMode& mode, double z,
                                     double s);

}  // namespace cvqst::spatial

#endif  // CVQST_SPATIAL_HPP
