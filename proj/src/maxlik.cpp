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

#include "cvqst/maxlik.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cvqst::maxlik {

namespace {

// Quadrature eigenvector components v_m = exp(i m theta) psi_m(q), one row
// per sample. The eta = 1 POVM of sample i is v_i v_i^dagger, and for eta < 1
// every probability and every R build routes through the loss-channel duality
// Tr[adjoint_loss(v v^dag) rho] = v^dag apply_loss(rho) v, so the N x d
// matrix below is the only per-sample state ever stored.
Eigen::MatrixXcd quadrature_vectors(const std::vector<QuadratureSample>& samples,
                                    int n_max) {
  const auto n = static_cast<Eigen::Index>(samples.size());
  const int d = n_max + 1;
  Eigen::MatrixXcd v(n, d);
  std::vector<double> psi(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    fock_wavefunctions(n_max, samples[i].q, psi);
    const Complex step(std::cos(samples[i].theta), std::sin(samples[i].theta));
    Complex rot(1.0, 0.0);
    for (int m = 0; m < d; ++m) {
      v(i, m) = rot * psi[m];
      rot *= step;
    }
  }
  return v;
}

// pr_i = v_i^dagger lossy_rho v_i, floored at kProbabilityFloor. When
// throw_on_singular is set, a vanishing probability for a sample whose
// quadrature vector is NOT itself vanishing (so the zero is structural, the
// state annihilates the outcome, rather than tail underflow) raises an
// error; dividing such a POVM by the floor would blow up R.
Eigen::VectorXd probabilities(const Eigen::MatrixXcd& v,
                              const Eigen::MatrixXcd& lossy_rho,
                              long long* floored, bool throw_on_singular) {
  Eigen::VectorXd pr =
      (v.conjugate() * lossy_rho).cwiseProduct(v).rowwise().sum().real();
  for (Eigen::Index i = 0; i < pr.size(); ++i) {
    if (pr(i) < kProbabilityFloor) {
      if (pr(i) < -1e-12)
        throw std::runtime_error("maxlik: sample " + std::to_string(i) +
                                 " has negative probability " +
                                 std::to_string(pr(i)) +
                                 " (state is not positive semidefinite)");
      if (throw_on_singular && v.row(i).cwiseAbs2().maxCoeff() > 1e-250)
        throw std::runtime_error(
            "maxlik: sample " + std::to_string(i) +
            " has zero probability under the current state (singular data; "
            "the state assigns no support to this outcome)");
      pr(i) = kProbabilityFloor;
      if (floored) ++*floored;
    }
  }
  return pr;
}

double log_likelihood_of(const Eigen::VectorXd& pr) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < pr.size(); ++i) ll += std::log(pr(i));
  return ll;
}

// R = adjoint_loss((1/N) sum_i v_i v_i^dagger / pr_i)
Eigen::MatrixXcd r_from_probabilities(const Eigen::MatrixXcd& v,
                                      const Eigen::VectorXd& pr, double eta) {
  const auto n = static_cast<double>(v.rows());
  const Eigen::VectorXcd w = (1.0 / (n * pr.array())).cast<Complex>().matrix();
  Eigen::MatrixXcd r = v.transpose() * (w.asDiagonal() * v.conjugate());
  r = Complex(0.5, 0.0) * (r + r.adjoint().eval());
  if (eta < 1.0) r = apply_loss_adjoint(r, eta);
  return r;
}

Eigen::MatrixXcd normalized_state(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd s = Complex(0.5, 0.0) * (m + m.adjoint().eval());
  return s / s.trace().real();
}

}  // namespace

void MaxlikConfig::validate() const {
  if (n_max < 0 || n_max > kMaxFockIndex - 1)
    throw std::invalid_argument("maxlik: n_max must lie in [0, " +
                                std::to_string(kMaxFockIndex - 1) + "]");
  if (max_iters < 1) throw std::invalid_argument("maxlik: max_iters must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("maxlik: epsilon must be > 0");
  if (bias_correction && std::isinf(epsilon))
    throw std::invalid_argument(
        "maxlik: bias-corrected iteration needs finite epsilon");
  if (!(stop_tol > 0.0)) throw std::invalid_argument("maxlik: stop_tol must be > 0");
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::invalid_argument("maxlik: eta must lie in (0, 1]");
}

Eigen::MatrixXcd povm_element(double q, double theta, double eta, int n_max) {
  if (n_max < 0 || n_max > kMaxFockIndex - 1)
    throw std::invalid_argument("maxlik: n_max must lie in [0, " +
                                std::to_string(kMaxFockIndex - 1) + "]");
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::invalid_argument("maxlik: eta must lie in (0, 1]");
  const int d = n_max + 1;
  std::vector<double> psi(d);
  fock_wavefunctions(n_max, q, psi);
  Eigen::VectorXcd v(d);
  for (int m = 0; m < d; ++m)
    v(m) = Complex(std::cos(m * theta), std::sin(m * theta)) * psi[m];
  Eigen::MatrixXcd pi = v * v.adjoint();
  if (eta < 1.0) pi = apply_loss_adjoint(pi, eta);
  return pi;
}

double log_likelihood(const DensityMatrix& rho,
                      const std::vector<QuadratureSample>& samples,
                      double eta) {
  const Eigen::MatrixXcd v = quadrature_vectors(samples, rho.dim() - 1);
  const Eigen::MatrixXcd lossy =
      eta < 1.0 ? apply_loss(rho.matrix(), eta) : rho.matrix();
  return log_likelihood_of(probabilities(v, lossy, nullptr, false));
}

Eigen::MatrixXcd r_operator(const DensityMatrix& rho,
                            const std::vector<QuadratureSample>& samples,
                            double eta, int n_max, long long* floored) {
  if (rho.dim() != n_max + 1)
    throw std::invalid_argument("maxlik: rho dimension must equal n_max + 1");
  const Eigen::MatrixXcd v = quadrature_vectors(samples, n_max);
  const Eigen::MatrixXcd lossy =
      eta < 1.0 ? apply_loss(rho.matrix(), eta) : rho.matrix();
  return r_from_probabilities(v, probabilities(v, lossy, floored, true), eta);
}

MaxlikResult reconstruct(const std::vector<QuadratureSample>& samples,
                         const MaxlikConfig& cfg) {
  cfg.validate();
  if (samples.empty()) throw std::invalid_argument("maxlik: empty sample list");
  const int d = cfg.n_max + 1;
  const Eigen::MatrixXcd v = quadrature_vectors(samples, cfg.n_max);

  // bias correction: G = sum_j Pi_j over the DISTINCT outcomes realized in
  // the record (the measured alphabet, each element counted once, not per
  // sample). For a finite outcome set that does not resolve the identity,
  // the plain fixed point is pulled toward sectors where G is large; the
  // corrected map G^-1 R rho R G^-1 = rho holds exactly at the truth because
  // R built from dense exact data equals G there. G is scaled to unit mean
  // eigenvalue, so complete coverage gives G = identity and g_inv = identity.
  Eigen::MatrixXcd g_inv = Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(d, d);
  double g_condition = 1.0;
  bool corrected = cfg.bias_correction;
  if (cfg.bias_correction) {
    std::set<std::pair<double, double>> alphabet;
    for (const auto& s : samples) alphabet.emplace(s.theta, s.q);
    g.setZero();
    for (const auto& [theta, q] : alphabet)
      g += povm_element(q, theta, cfg.eta, cfg.n_max);
    g *= static_cast<double>(d) / g.trace().real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0))
      throw std::runtime_error(
          "maxlik: POVM average G is singular on the truncated space "
          "(min eigenvalue " + std::to_string(lo) +
          "); reduce n_max or widen phase coverage");
    g_condition = hi / lo;
    if (g_condition > 1e6)
      std::cerr << "maxlik: warning: G condition number " << g_condition
                << "; bias-corrected iteration may be unstable\n";
    if ((g - Eigen::MatrixXcd::Identity(d, d)).norm() <
        1e-9 * std::sqrt(static_cast<double>(d))) {
      corrected = false;  // G is the identity up to rounding: plain path
    } else {
      g_inv = es.eigenvectors() *
              es.eigenvalues().cwiseInverse().cast<Complex>().asDiagonal() *
              es.eigenvectors().adjoint();
    }
  }

  MaxlikResult res{DensityMatrix::vacuum(d), 0,   false, {}, {}, cfg.epsilon,
                   0,                        0.0, g_condition};
  Eigen::MatrixXcd rho =
      Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
  auto lossy = [&](const Eigen::MatrixXcd& m) {
    return cfg.eta < 1.0 ? apply_loss(m, cfg.eta) : m;
  };
  // Plain iteration: residual of the extremal map R rho R = rho. Corrected
  // iteration: the fixed point is N[G^-1 R rho R G^-1] = rho instead.
  auto residual_of = [&](const Eigen::MatrixXcd& rr, const Eigen::MatrixXcd& s) {
    if (!corrected) return (rr * s * rr.adjoint() - s).norm();
    return (normalized_state(g_inv * rr * s * rr.adjoint() * g_inv) - s).norm();
  };
  // The corrected map maximizes the conditional likelihood of the measured
  // alphabet, sum_i ln[pr_i / tr(G rho)]; guarding on the raw likelihood
  // would reject every step toward the debiased fixed point.
  const auto n_samples = static_cast<double>(v.rows());
  auto score_of = [&](double raw_ll, const Eigen::MatrixXcd& s) {
    if (!corrected) return raw_ll;
    return raw_ll - n_samples * std::log((g * s).trace().real());
  };

  Eigen::VectorXd pr = probabilities(v, lossy(rho), &res.floored_samples, true);
  double ll = log_likelihood_of(pr);
  double score = score_of(ll, rho);
  Eigen::MatrixXcd r = r_from_probabilities(v, pr, cfg.eta);
  res.likelihood_trace.push_back(ll);
  res.residual_trace.push_back(residual_of(r, rho));

  double eps = cfg.epsilon;
  int stable_count = 0;
  for (int pass = 0; pass < cfg.max_iters; ++pass) {
    const Eigen::MatrixXcd a = corrected ? (g_inv * r).eval() : r;

    Eigen::MatrixXcd cand;
    if (std::isinf(eps)) {
      cand = normalized_state(a * rho * a.adjoint());
    } else {
      const Eigen::MatrixXcd t =
          (Eigen::MatrixXcd::Identity(d, d) + eps * a) / (1.0 + eps);
      cand = normalized_state(t * rho * t.adjoint());
    }

    Eigen::VectorXd cand_pr =
        probabilities(v, lossy(cand), &res.floored_samples, true);
    const double cand_ll = log_likelihood_of(cand_pr);
    const double cand_score = score_of(cand_ll, cand);
    if (cand_score < score) {
      // step rejected; R is unchanged and the accepted-iteration trace stays
      // monotone (in the guarded functional) by construction
      if (std::isinf(eps)) {
        eps = 1.0;  // permanent fallback from the undiluted map
        continue;
      }
      eps *= 0.5;
      if (eps < 1e-10) break;  // steps are below rounding noise
      continue;
    }

    const double rel =
        std::abs(cand_score - score) / std::max(std::abs(cand_score), 1.0);
    rho = std::move(cand);
    pr = std::move(cand_pr);
    ll = cand_ll;
    score = cand_score;
    ++res.iterations;
    r = r_from_probabilities(v, pr, cfg.eta);
    res.likelihood_trace.push_back(ll);
    res.residual_trace.push_back(residual_of(r, rho));
    stable_count = rel < cfg.stop_tol ? stable_count + 1 : 0;
    if (stable_count >= 10) {
      res.converged = true;
      break;
    }
  }

  res.final_epsilon = eps;
  res.fixed_point_residual = res.residual_trace.back();
  res.rho = DensityMatrix(rho);
  return res;
}

Eigen::MatrixXd bootstrap_errors(const DensityMatrix& rho_ml,
                                 const sampler::AcquisitionPlan& plan,
                                 const MaxlikConfig& cfg,
                                 const std::vector<std::uint64_t>& seeds) {
  if (seeds.size() < 2)
    throw std::invalid_argument("maxlik: bootstrap needs at least 2 replicas");
  const auto k = static_cast<double>(seeds.size());
  const int d = cfg.n_max + 1;
  Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXd mean_sq = Eigen::MatrixXd::Zero(d, d);
  for (std::uint64_t seed : seeds) {
    sampler::AcquisitionPlan replica = plan;
    replica.seed = seed;
    const auto data = sampler::sample(rho_ml, replica);
    const Eigen::MatrixXcd est = reconstruct(data, cfg).rho.matrix();
    mean += est;
    mean_sq += est.cwiseAbs2();
  }
  mean /= k;
  mean_sq /= k;
  return (mean_sq - mean.cwiseAbs2()).cwiseMax(0.0).cwiseSqrt();
}

Eigen::MatrixXd bootstrap_errors(const DensityMatrix& rho_ml,
                                 const sampler::AcquisitionPlan& plan,
                                 const MaxlikConfig& cfg, int k,
                                 std::uint64_t base_seed) {
  if (k < 2)
    throw std::invalid_argument("maxlik: bootstrap needs at least 2 replicas");
  std::vector<std::uint64_t> seeds(k);
  for (int i = 0; i < k; ++i) seeds[i] = base_seed + static_cast<std::uint64_t>(i);
  return bootstrap_errors(rho_ml, plan, cfg, seeds);
}

}  // namespace cvqst::maxlik
