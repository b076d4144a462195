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

#ifndef CVQST_MAXLIK_HPP
#define CVQST_MAXLIK_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "cvqst/fock.hpp"
#include "cvqst/sampler.hpp"

// Iterative maximum-likelihood reconstruction. Each homodyne outcome (q,
// theta) is a POVM element; the likelihood is maximized over physical
// density matrices by the fixed-point iteration rho <- N[T rho T'] with
// T = (I + eps R(rho)) / (1 + eps), which preserves positivity and trace at
// every step. Detector loss enters through the POVMs, so the iteration
// reconstructs the state before the detector.

namespace cvqst::maxlik {

// Probabilities below this are clamped (and counted) rather than allowed to
// produce infinite log-likelihood terms from outlier samples.
inline constexpr double kProbabilityFloor = 1e-300;

// POVM element of outcome (q, theta) on a detector with efficiency eta,
// truncated at n_max photons. For eta = 1 this is the rank-1 projector
//   <m|Pi|n> = exp(i(m-n)theta) psi_m(q) psi_n(q);
// for eta < 1 the adjoint of the Bernoulli loss channel is applied, so that
// Tr[Pi_eta rho] = Tr[Pi_1 bernoulli_loss(rho, eta)] exactly on the
// truncated space.
Eigen::MatrixXcd povm_element(double q, double theta, double eta, int n_max);

// sum_i ln pr_rho(q_i, theta_i) with the probability floor applied.
double log_likelihood(const DensityMatrix& rho,
                      const std::vector<QuadratureSample>& samples,
                      double eta = 1.0);

// R(rho) = (1/N) sum_i Pi_i / pr_rho(i). Hermitian and PSD; approaches the
// identity-like operator G = (1/N) sum_i Pi_i as rho approaches the
// maximum-likelihood state on dense data. Throws on a sample whose
// probability is not positive (reporting the sample); probabilities in
// (0, kProbabilityFloor) are clamped and counted into *floored if given.
Eigen::MatrixXcd r_operator(const DensityMatrix& rho,
                            const std::vector<QuadratureSample>& samples,
                            double eta, int n_max,
                            long long* floored = nullptr);

struct MaxlikConfig {
  int n_max = 10;
  int max_iters = 2000;
  // Dilution parameter. Finite eps guarantees monotone likelihood in the
  // eps -> 0 limit and is enforced here by halving eps whenever a step
  // would lower the guarded objective: the raw log-likelihood for the plain
  // iteration, the conditional score sum_i ln pr_i - N ln tr(G rho) for the
  // bias-corrected one. eps = infinity selects the undiluted
  // rho <- N[R rho R] map, monitored with an automatic permanent fallback
  // to eps = 1 on the first decrease; with bias_correction eps must be
  // finite.
  double epsilon = 1.0;
  // Converged when |dL| / max(|L|, 1) stays below stop_tol for 10
  // consecutive iterations.
  double stop_tol = 1e-9;
  // Conjugates the iteration by G^{-1}, G = sum of POVM elements over the
  // distinct outcomes in the record. Intended for finite outcome alphabets
  // (quantized or binned acquisitions) where G fails to resolve the
  // identity; there the plain fixed point is biased toward large-G sectors
  // while G^{-1} R rho R G^{-1} = rho holds at the truth. With every
  // outcome distinct (raw continuous data) G degrades to a sample average
  // and the correction is not meaningful.
  bool bias_correction = false;
  double eta = 1.0;

  void validate() const;
};

struct MaxlikResult {
  DensityMatrix rho;
  int iterations = 0;
  bool converged = false;
  // One entry per accepted iteration; nondecreasing unless bias correction
  // is on (the corrected map does not ascend the raw likelihood).
  std::vector<double> likelihood_trace;
  // ||R rho R - rho||_F at the same points, aligned with likelihood_trace
  std::vector<double> residual_trace;
  double final_epsilon = 0.0;
  long long floored_samples = 0;   // across all r_operator evaluations
  double fixed_point_residual = 0.0;  // ||R rho R - rho||_F at exit
  // condition number of G (1 when bias correction is off); a warning is
  // emitted above 1e6 and construction fails if G is singular
  double g_condition = 1.0;
};

// Runs the diluted iteration from the maximally mixed state. With
// bias_correction the step operator is (I + eps G^{-1} R) / (1 + eps) where
// G is normalized to unit mean eigenvalue, removing the bias an outcome
// alphabet with G != identity imprints on the plain iteration; when G is
// proportional to the identity (complete coverage) the correction is a
// no-op and the two iterations return identical results.
MaxlikResult reconstruct(const std::vector<QuadratureSample>& samples,
                         const MaxlikConfig& cfg);

// Parametric bootstrap: treats rho_ml as the truth, simulates K datasets
// with the given plan (seed overridden per replica), reconstructs each, and
// returns the element-wise spread sqrt(mean |rho_k - mean(rho_k)|^2).
// Deterministic given the seeds; the base_seed overload uses seeds
// base_seed, base_seed + 1, ...
Eigen::MatrixXd bootstrap_errors(const DensityMatrix& rho_ml,
                                 const sampler::AcquisitionPlan& plan,
                                 const MaxlikConfig& cfg,
                                 const std::vector<std::uint64_t>& seeds);
Eigen::MatrixXd bootstrap_errors(const DensityMatrix& rho_ml,
                                 const sampler::AcquisitionPlan& plan,
                                 const MaxlikConfig& cfg, int k,
                                 std::uint64_t base_seed);

}  // namespace cvqst::maxlik

#endif  // CVQST_MAXLIK_HPP
