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

#ifndef CVQST_RADON_HPP
#define CVQST_RADON_HPP

#include <vector>

#include "cvqst/fock.hpp"

// Filtered back-projection: estimates the Wigner function directly from
// (theta, q) pairs without an intermediate density matrix.

namespace cvqst::radon {

struct RadonConfig {
  // Low-pass cutoff of the regularized kernel. Larger kc resolves finer
  // phase-space structure but amplifies statistical ripple; 4 covers states
  // with up to roughly ten photons.
  double kc = 4.0;
  GridSpec grid{-4.0, 4.0, 81, -4.0, 4.0, 81};
  // Direct mode evaluates the kernel once per (sample, grid point). Binned
  // mode first histograms samples on n_phase_bins x n_q_bins and evaluates
  // at bin centers; cheaper once N greatly exceeds the bin count, at the
  // cost of binning bias. Both bin counts must be >= 8 when binned.
  bool binned = false;
  int n_phase_bins = 0;
  int n_q_bins = 0;

  void validate() const;
};

// Band-limited back-projection kernel
//   K(x) = (1/2) Int_{-kc}^{kc} |s| exp(i s x) ds
//        = (cos(kc x) - 1)/x^2 + kc sin(kc x)/x,
// even in x, K(0) = kc^2/2 (series used below |kc x| = 1e-2 where the closed
// form loses digits to cancellation).
double kernel(double x, double kc);

// W(Q, P) ~= (1/(2 pi N)) sum_m K(Q cos(theta_m) + P sin(theta_m) - q_m),
// the sample-mean form of (1/2 pi^2) Int_0^pi dtheta Int dq pr(q,theta) K.
// Unbiased up to the kc band limit when phases cover [0, 2pi) (or [0, pi))
// uniformly. The weighted overload treats w_m as a sample multiplicity and
// divides by sum(w) instead of N; weights must be nonnegative with a
// positive sum. Kernel values come from a lookup table with step 2e-3 in
// kc*x, linearly interpolated (absolute error below 3e-6 * kc^2).
WignerGrid reconstruct(const std::vector<QuadratureSample>& samples,
                       const RadonConfig& cfg);
WignerGrid reconstruct(const std::vector<QuadratureSample>& samples,
                       const std::vector<double>& weights,
                       const RadonConfig& cfg);

}  // namespace cvqst::radon

#endif  // CVQST_RADON_HPP
