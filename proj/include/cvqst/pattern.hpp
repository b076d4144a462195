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

#ifndef CVQST_PATTERN_HPP
#define CVQST_PATTERN_HPP

#include <vector>

#include "cvqst/fock.hpp"

// Direct sampling of density-matrix elements: each rho_mn is a plain sample
// mean of exp(i(m-n)theta) M_mn(q) over the data, where M_mn is the pattern
// function built from regular and irregular oscillator wavefunctions. No
// matrix inversion, no iteration; errors are ordinary standard errors of the
// mean. Estimates are NOT projected onto physical states, so small negative
// diagonal values at low statistics are expected and left visible.

namespace cvqst::pattern {

// M_mn(x) = d/dx [psi_m(x) phi_n(x)] for n >= m, extended symmetrically
// (M_mn = M_nm). The derivative is evaluated through the ladder identities
//   psi_m' = x psi_m - sqrt(2m+2) psi_{m+1},
//   phi_n' = x phi_n - sqrt(2n+2) phi_{n+1},
// giving M_mn = 2x psi_m phi_n - sqrt(2m+2) psi_{m+1} phi_n
//               - sqrt(2n+2) psi_m phi_{n+1}.
// Requires max(m,n) < kMaxIrregularIndex and |x| <= kIrregularRange.
double pattern_function(int m, int n, double x);

// All pattern functions for one n_max, tabulated on 4096 points spanning
// [-kIrregularRange, kIrregularRange] and linearly interpolated. Outside the
// range the value at the nearest endpoint is used; every truncated state's
// marginal mass out there is negligible, so clamping only suppresses the
// (unbounded) growth of M on data outliers.
class PatternTable {
 public:
  explicit PatternTable(int n_max);

  int n_max() const { return n_max_; }
  double value(int m, int n, double x) const;

 private:
  int n_max_;
  double x0_, dx_;
  // row (m,n) with m <= n at pair_index(m,n); columns are grid points
  Eigen::MatrixXd values_;

  int pair_index(int m, int n) const {
    return m * (2 * n_max_ + 3 - m) / 2 + (n - m);
  }
};

struct PatternEstimate {
  Eigen::MatrixXcd rho;  // Hermitian by construction, not forced positive
  Eigen::MatrixXd se;    // per-element standard error of the complex mean
};

// rho_mn = mean over samples of exp(i(m-n)theta) M_mn(q), unbiased for every
// element when phases are uniform on [0, 2pi); a warning is emitted when the
// empirical phase coverage is visibly lopsided. se_mn = sqrt((mean[M_mn^2] -
// |rho_mn|^2) / N).
PatternEstimate estimate_density_matrix(
    const std::vector<QuadratureSample>& samples, int n_max);

struct PhotonStats {
  Eigen::VectorXd p;   // pr(0..n_max), each a sample mean of M_jj(q)
  Eigen::VectorXd se;  // standard errors
};

// Diagonal-only estimate; phases never enter, so it works on data whose
// phases were not recorded or not uniformly distributed.
PhotonStats photon_number_stats(const std::vector<QuadratureSample>& samples,
                                int n_max);

}  // namespace cvqst::pattern

#endif  // CVQST_PATTERN_HPP
