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

#include "cvqst/spatial.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cvqst::spatial {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEdgeBandFraction = 0.05;
constexpr double kEdgeEnergyTol = 1e-3;

void check_odd(int n, const char* axis) {
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument(std::string("spatial: ") + axis +
                                " point count must be odd and >= 3");
}

// FFT sample frequency (angular) of bin j on an n-point grid
double fft_k(int j, int n, double pitch) {
  const int f = j <= n / 2 ? j : j - n;
  return 2.0 * kPi * f / (n * pitch);
}

void fft_inplace(Eigen::VectorXcd& v, int sign) {
  const int n = static_cast<int>(v.size());
  auto* data = reinterpret_cast<fftw_complex*>(v.data());
  fftw_plan plan = fftw_plan_dft_1d(n, data, data, sign, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  if (sign == FFTW_BACKWARD) v /= static_cast<double>(n);
}

void fft2_inplace(Eigen::MatrixXcd& m, int sign) {
  // FFTW's row-major (n0, n1) maps to Eigen's column-major (cols, rows)
  auto* data = reinterpret_cast<fftw_complex*>(m.data());
  fftw_plan plan =
      fftw_plan_dft_2d(static_cast<int>(m.cols()), static_cast<int>(m.rows()),
                       data, data, sign, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  if (sign == FFTW_BACKWARD) m /= static_cast<double>(m.size());
}

// fraction of total energy in the outer bands, checked after any operation
// that can push the field toward (and wrap it around) the grid edge
void check_edges(const Eigen::MatrixXcd& field, const char* op) {
  const int nx = static_cast<int>(field.rows());
  const int ny = static_cast<int>(field.cols());
  const int bx = std::max(1, static_cast<int>(nx * kEdgeBandFraction));
  double edge = field.topRows(bx).squaredNorm() + field.bottomRows(bx).squaredNorm();
  if (ny > 1) {
    const int by = std::max(1, static_cast<int>(ny * kEdgeBandFraction));
    edge += field.leftCols(by).squaredNorm() + field.rightCols(by).squaredNorm();
  }
  const double total = field.squaredNorm();
  if (edge > kEdgeEnergyTol * total)
    throw std::runtime_error(
        std::string("spatial: ") + op + " pushed " + std::to_string(edge / total) +
        " of the energy into the grid edge bands; enlarge the grid");
}

}  // namespace

SpatialMode::SpatialMode(int dims, double pitch, double k0,
                         Eigen::MatrixXcd field)
    : dims_(dims), pitch_(pitch), k0_(k0), field_(std::move(field)) {
  if (!(pitch_ > 0.0)) throw std::invalid_argument("spatial: pitch must be > 0");
  if (!(k0_ > 0.0)) throw std::invalid_argument("spatial: k0 must be > 0");
  check_odd(nx(), "x");
  if (dims_ == 2) check_odd(ny(), "y");
  const double norm2 = field_.squaredNorm() * std::pow(pitch_, dims_);
  if (!(norm2 > 0.0))
    throw std::invalid_argument("spatial: field has zero norm");
  field_ /= std::sqrt(norm2);
}

SpatialMode SpatialMode::line(double pitch, double k0, Eigen::VectorXcd field) {
  return SpatialMode(1, pitch, k0, std::move(field));
}

SpatialMode SpatialMode::plane(double pitch, double k0, Eigen::MatrixXcd field) {
  return SpatialMode(2, pitch, k0, std::move(field));
}

SpatialMode propagate(const SpatialMode& mode, double z) {
  if (z == 0.0) return mode;
  const double pitch = mode.pitch();
  if (mode.dims() == 1) {
    Eigen::VectorXcd f = mode.field().col(0);
    const int n = static_cast<int>(f.size());
    fft_inplace(f, FFTW_FORWARD);
    for (int j = 0; j < n; ++j) {
      const double k = fft_k(j, n, pitch);
      const double phase = -k * k * z / (2.0 * mode.k0());
      f(j) *= Complex(std::cos(phase), std::sin(phase));
    }
    fft_inplace(f, FFTW_BACKWARD);
    check_edges(f, "propagate");
    return SpatialMode::line(pitch, mode.k0(), std::move(f));
  }
  Eigen::MatrixXcd f = mode.field();
  fft2_inplace(f, FFTW_FORWARD);
  for (int j = 0; j < f.cols(); ++j) {
    const double ky = fft_k(j, static_cast<int>(f.cols()), pitch);
    for (int i = 0; i < f.rows(); ++i) {
      const double kx = fft_k(i, static_cast<int>(f.rows()), pitch);
      const double phase = -(kx * kx + ky * ky) * z / (2.0 * mode.k0());
      f(i, j) *= Complex(std::cos(phase), std::sin(phase));
    }
  }
  fft2_inplace(f, FFTW_BACKWARD);
  check_edges(f, "propagate");
  return SpatialMode::plane(pitch, mode.k0(), std::move(f));
}

SpatialMode displace(const SpatialMode& mode, double x0, double kx0) {
  if (mode.dims() != 1)
    throw std::invalid_argument("spatial: 2D modes need the 4-argument displace");
  Eigen::VectorXcd f = mode.field().col(0);
  const int n = static_cast<int>(f.size());
  if (x0 != 0.0) {
    fft_inplace(f, FFTW_FORWARD);
    for (int j = 0; j < n; ++j) {
      const double phase = -fft_k(j, n, mode.pitch()) * x0;
      f(j) *= Complex(std::cos(phase), std::sin(phase));
    }
    fft_inplace(f, FFTW_BACKWARD);
  }
  if (kx0 != 0.0) {
    for (int i = 0; i < n; ++i) {
      const double phase = kx0 * mode.x_at(i);
      f(i) *= Complex(std::cos(phase), std::sin(phase));
    }
  }
  check_edges(f, "displace");
  return SpatialMode::line(mode.pitch(), mode.k0(), std::move(f));
}

SpatialMode displace(const SpatialMode& mode, double x0, double y0, double kx0,
                     double ky0) {
  if (mode.dims() != 2)
    throw std::invalid_argument("spatial: 1D modes need the 2-argument displace");
  Eigen::MatrixXcd f = mode.field();
  const int nx = static_cast<int>(f.rows());
  const int ny = static_cast<int>(f.cols());
  if (x0 != 0.0 || y0 != 0.0) {
    fft2_inplace(f, FFTW_FORWARD);
    for (int j = 0; j < ny; ++j) {
      const double py = fft_k(j, ny, mode.pitch()) * y0;
      for (int i = 0; i < nx; ++i) {
        const double phase = -(fft_k(i, nx, mode.pitch()) * x0 + py);
        f(i, j) *= Complex(std::cos(phase), std::sin(phase));
      }
    }
    fft2_inplace(f, FFTW_BACKWARD);
  }
  if (kx0 != 0.0 || ky0 != 0.0) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const double phase = kx0 * mode.x_at(i) + ky0 * mode.y_at(j);
        f(i, j) *= Complex(std::cos(phase), std::sin(phase));
      }
    }
  }
  check_edges(f, "displace");
  return SpatialMode::plane(mode.pitch(), mode.k0(), std::move(f));
}

double wigner_point(const SpatialMode& mode, double x, double kx) {
  if (mode.dims() != 1)
    throw std::invalid_argument("spatial: 2D modes need the 4-argument wigner_point");
  // The kx displacement would only multiply E by a ramp; in the parity
  // product E(c+s) E*(c-s) the ramp reduces to exp(-2i kx u_s), which is the
  // transform factor below, so only the x shift touches the field.
  const SpatialMode shifted = displace(mode, -x, 0.0);
  const Eigen::VectorXcd& f = shifted.field().col(0);
  const int n = static_cast<int>(f.size());
  const int c = (n - 1) / 2;
  const Complex step(std::cos(-2.0 * kx * mode.pitch()),
                     std::sin(-2.0 * kx * mode.pitch()));
  Complex rot(1.0, 0.0);  // exp(-2i kx (j - c) pitch) built up from j = c
  double acc = 0.0;
  for (int s = 0; c + s < n; ++s) {
    const Complex term = f(c + s) * std::conj(f(c - s)) * rot;
    acc += s == 0 ? term.real() : 2.0 * term.real();
    rot *= step;
  }
  return acc * mode.pitch() / kPi;
}

double wigner_point(const SpatialMode& mode, double x, double y, double kx,
                    double ky) {
  const SpatialMode shifted = displace(mode, -x, -y, 0.0, 0.0);
  const Eigen::MatrixXcd& f = shifted.field();
  const int nx = static_cast<int>(f.rows());
  const int ny = static_cast<int>(f.cols());
  const int cx = (nx - 1) / 2, cy = (ny - 1) / 2;
  double acc = 0.0;
  for (int j = 0; j < ny; ++j) {
    const double py = -2.0 * ky * (j - cy) * mode.pitch();
    for (int i = 0; i < nx; ++i) {
      const double phase = -2.0 * kx * (i - cx) * mode.pitch() + py;
      const Complex term = f(i, j) * std::conj(f(nx - 1 - i, ny - 1 - j)) *
                           Complex(std::cos(phase), std::sin(phase));
      acc += term.real();
    }
  }
  return acc * mode.pitch() * mode.pitch() / (kPi * kPi);
}

double wigner_point(const CorrelationMatrix& corr, double x, double kx) {
  const int n = corr.n();
  if (n < 3) throw std::invalid_argument("spatial: empty correlation matrix");
  const double jf = x / corr.pitch + (n - 1) / 2;
  const int j = static_cast<int>(std::lround(jf));
  if (j < 0 || j >= n || std::abs(jf - j) > 1e-9)
    throw std::invalid_argument(
        "spatial: correlation-matrix wigner_point needs x on a grid node");
  const int reach = std::min(j, n - 1 - j);
  double acc = corr.rho(j, j).real();
  const Complex step(std::cos(-2.0 * kx * corr.pitch),
                     std::sin(-2.0 * kx * corr.pitch));
  Complex rot = step;
  for (int s = 1; s <= reach; ++s) {
    acc += 2.0 * (corr.rho(j + s, j - s) * rot).real();
    rot *= step;
  }
  return acc * corr.pitch / kPi;
}

WignerGrid wigner_scan(const SpatialMode& mode, const GridSpec& grid) {
  if (mode.dims() != 1)
    throw std::invalid_argument("spatial: wigner_scan supports 1D modes");
  grid.validate();
  const int n = mode.nx();
  const int c = (n - 1) / 2;
  const double pitch = mode.pitch();

  Eigen::VectorXcd spectrum = mode.field().col(0);
  fft_inplace(spectrum, FFTW_FORWARD);

  WignerGrid out{grid, Eigen::MatrixXd::Zero(grid.nq, grid.np)};
  Eigen::VectorXcd fx(n);
  std::vector<Complex> a(n);
  for (int ix = 0; ix < grid.nq; ++ix) {
    const double x = grid.q_at(ix);
    for (int j = 0; j < n; ++j) {
      const double phase = fft_k(j, n, pitch) * x;  // shift by -x
      fx(j) = spectrum(j) * Complex(std::cos(phase), std::sin(phase));
    }
    fft_inplace(fx, FFTW_BACKWARD);
    check_edges(fx, "wigner_scan shift");
    for (int j = 0; j < n; ++j) a[j] = fx(j) * std::conj(fx(n - 1 - j));
    for (int ik = 0; ik < grid.np; ++ik) {
      const double kx = grid.p_at(ik);
      const Complex step(std::cos(-2.0 * kx * pitch), std::sin(-2.0 * kx * pitch));
      // start at j = 0 with exp(-2i kx (0 - c) pitch)
      Complex rot(std::cos(2.0 * kx * pitch * c), std::sin(2.0 * kx * pitch * c));
      Complex acc(0.0, 0.0);
      for (int j = 0; j < n; ++j) {
        acc += a[j] * rot;
        rot *= step;
      }
      out.values(ix, ik) = acc.real() * pitch / kPi;
    }
  }
  return out;
}

CorrelationMatrix ensemble_correlation(
    const std::vector<std::pair<double, SpatialMode>>& ensemble) {
  if (ensemble.empty())
    throw std::invalid_argument("spatial: empty ensemble");
  double total = 0.0;
  for (const auto& [w, mode] : ensemble) {
    if (w < 0.0) throw std::invalid_argument("spatial: negative ensemble weight");
    if (mode.dims() != 1)
      throw std::invalid_argument("spatial: ensembles support 1D modes");
    if (mode.nx() != ensemble.front().second.nx() ||
        mode.pitch() != ensemble.front().second.pitch())
      throw std::invalid_argument("spatial: ensemble modes must share the grid");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("spatial: ensemble weights must sum to 1");

  const int n = ensemble.front().second.nx();
  CorrelationMatrix corr{ensemble.front().second.pitch(),
                         Eigen::MatrixXcd::Zero(n, n)};
  for (const auto& [w, mode] : ensemble)
    corr.rho += (w / total) * (mode.field().col(0) * mode.field().col(0).adjoint());
  return corr;
}

ShearProjection intensity_projection(const SpatialMode& mode, double z,
                                     double s) {
  if (mode.dims() != 1)
    throw std::invalid_argument("spatial: intensity_projection supports 1D modes");
  if (!(s > 0.0)) throw std::invalid_argument("spatial: scale s must be > 0");
  const SpatialMode at_z = propagate(mode, z);
  ShearProjection proj;
  proj.theta = std::atan(z / (mode.k0() * s * s));
  const double cos_t = std::cos(proj.theta);
  const int n = at_z.nx();
  proj.samples.reserve(n);
  proj.weights.reserve(n);
  for (int i = 0; i < n; ++i) {
    proj.samples.push_back({proj.theta, at_z.x_at(i) / s * cos_t});
    proj.weights.push_back(std::norm(at_z.field()(i, 0)) * at_z.pitch());
  }
  return proj;
}

}  // namespace cvqst::spatial
