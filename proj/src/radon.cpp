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

#include "cvqst/radon.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cvqst::radon {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// g(u) = (cos u - 1)/u^2 + sin(u)/u, so K(x) = kc^2 g(kc x).
double g_scaled(double u) {
  const double au = std::abs(u);
  if (au < 1e-2) {
    const double u2 = u * u;
    return 0.5 - u2 / 8.0 + u2 * u2 / 144.0;
  }
  return (std::cos(u) - 1.0) / (u * u) + std::sin(u) / u;
}

// Uniform table of g over [0, u_max] (g is even), linear interpolation.
class KernelTable {
 public:
  KernelTable(double kc, double x_max) : kc_(kc), inv_du_(1.0 / kDu) {
    const double u_max = kc * x_max + 1.0;
    const int n = static_cast<int>(u_max * inv_du_) + 2;
    g_.resize(n);
    for (int i = 0; i < n; ++i) g_[i] = g_scaled(i * kDu);
  }

  // returns g(kc * x); callers multiply by kc^2 once at the end
  double operator()(double x) const {
    const double u = std::abs(kc_ * x) * inv_du_;
    const int i = std::min(static_cast<int>(u), static_cast<int>(g_.size()) - 2);
    const double f = u - i;
    return g_[i] + f * (g_[i + 1] - g_[i]);
  }

 private:
  static constexpr double kDu = 2e-3;
  double kc_;
  double inv_du_;
  std::vector<double> g_;
};

struct PhaseGroup {
  double cos_t, sin_t;
  std::vector<double> q;
  std::vector<double> w;
};

double grid_radius(const GridSpec& g) {
  const double q = std::max(std::abs(g.q_min), std::abs(g.q_max));
  const double p = std::max(std::abs(g.p_min), std::abs(g.p_max));
  return std::hypot(q, p);
}

WignerGrid back_project(const std::vector<PhaseGroup>& groups, double total_weight,
                        const RadonConfig& cfg) {
  double q_abs_max = 0.0;
  for (const auto& grp : groups)
    for (double q : grp.q) q_abs_max = std::max(q_abs_max, std::abs(q));
  const KernelTable table(cfg.kc, grid_radius(cfg.grid) + q_abs_max);

  const GridSpec& grid = cfg.grid;
  WignerGrid out{grid, Eigen::MatrixXd::Zero(grid.nq, grid.np)};
  for (const auto& grp : groups) {
    const size_t n = grp.q.size();
    for (int i = 0; i < grid.nq; ++i) {
      const double tq = grid.q_at(i) * grp.cos_t;
      for (int j = 0; j < grid.np; ++j) {
        const double t = tq + grid.p_at(j) * grp.sin_t;
        double acc = 0.0;
        if (grp.w.empty()) {
          for (size_t m = 0; m < n; ++m) acc += table(t - grp.q[m]);
        } else {
          for (size_t m = 0; m < n; ++m) acc += grp.w[m] * table(t - grp.q[m]);
        }
        out.values(i, j) += acc;
      }
    }
  }
  // W = (1/2pi^2) Int_0^pi dtheta Int dq pr(q,theta) K(x_theta - q) turned
  // into a sample mean: phases uniform on [0,2pi) (or [0,pi), identical by
  // K even + pr(q,theta+pi) = pr(-q,theta)) absorb a factor pi, leaving
  // W = (1/2pi) mean_m K(x_theta_m - q_m).
  const double scale =
      cfg.kc * cfg.kc / (2.0 * std::numbers::pi * total_weight);
  out.values *= scale;
  return out;
}

WignerGrid reconstruct_impl(const std::vector<QuadratureSample>& samples,
                            const std::vector<double>* weights,
                            const RadonConfig& cfg) {
  cfg.validate();
  if (samples.empty()) throw std::invalid_argument("radon: empty sample list");
  if (weights && weights->size() != samples.size())
    throw std::invalid_argument("radon: weights/samples size mismatch");
  if (samples.size() < 1000)
    std::cerr << "radon: warning: only " << samples.size()
              << " samples; back-projection is noisy below ~1000\n";

  double total_weight;
  if (weights) {
    total_weight = 0.0;
    for (double w : *weights) {
      if (w < 0.0) throw std::invalid_argument("radon: negative weight");
      total_weight += w;
    }
    if (!(total_weight > 0.0))
      throw std::invalid_argument("radon: weights sum to zero");
  } else {
    total_weight = static_cast<double>(samples.size());
  }

  std::vector<PhaseGroup> groups;
  if (!cfg.binned) {
    // exact path: group identical phases so cos/sin and the projection of
    // each grid point are computed once per distinct theta
    std::map<double, size_t> index;
    for (size_t m = 0; m < samples.size(); ++m) {
      auto [it, inserted] = index.try_emplace(samples[m].theta, groups.size());
      if (inserted) {
        groups.push_back({std::cos(samples[m].theta), std::sin(samples[m].theta),
                          {}, {}});
      }
      PhaseGroup& grp = groups[it->second];
      grp.q.push_back(samples[m].q);
      if (weights) grp.w.push_back((*weights)[m]);
    }
  } else {
    double q_lo = samples[0].q, q_hi = samples[0].q;
    for (const auto& s : samples) {
      q_lo = std::min(q_lo, s.q);
      q_hi = std::max(q_hi, s.q);
    }
    if (q_hi <= q_lo) q_hi = q_lo + 1.0;
    const int nt = cfg.n_phase_bins, nq = cfg.n_q_bins;
    std::vector<double> mass(static_cast<size_t>(nt) * nq, 0.0);
    for (size_t m = 0; m < samples.size(); ++m) {
      double t = std::fmod(samples[m].theta, kTwoPi);
      if (t < 0) t += kTwoPi;
      const int ti = std::min(static_cast<int>(t / kTwoPi * nt), nt - 1);
      const int qi = std::min(
          static_cast<int>((samples[m].q - q_lo) / (q_hi - q_lo) * nq), nq - 1);
      mass[static_cast<size_t>(ti) * nq + qi] += weights ? (*weights)[m] : 1.0;
    }
    const double dq = (q_hi - q_lo) / nq;
    for (int ti = 0; ti < nt; ++ti) {
      const double theta = kTwoPi * (ti + 0.5) / nt;
      PhaseGroup grp{std::cos(theta), std::sin(theta), {}, {}};
      for (int qi = 0; qi < nq; ++qi) {
        const double w = mass[static_cast<size_t>(ti) * nq + qi];
        if (w == 0.0) continue;
        grp.q.push_back(q_lo + (qi + 0.5) * dq);
        grp.w.push_back(w);
      }
      if (!grp.q.empty()) groups.push_back(std::move(grp));
    }
  }
  return back_project(groups, total_weight, cfg);
}

}  // namespace

void RadonConfig::validate() const {
  if (!(kc > 0.0)) throw std::invalid_argument("radon: kc must be positive");
  grid.validate();
  if (binned && (n_phase_bins < 8 || n_q_bins < 8))
    throw std::invalid_argument("radon: binned mode needs at least 8x8 bins");
}

double kernel(double x, double kc) {
  if (!(kc > 0.0)) throw std::invalid_argument("radon: kc must be positive");
  return kc * kc * g_scaled(kc * x);
}

WignerGrid reconstruct(const std::vector<QuadratureSample>& samples,
                       const RadonConfig& cfg) {
  return reconstruct_impl(samples, nullptr, cfg);
}

WignerGrid reconstruct(const std::vector<QuadratureSample>& samples,
                       const std::vector<double>& weights,
                       const RadonConfig& cfg) {
  return reconstruct_impl(samples, &weights, cfg);
}

}  // namespace cvqst::radon
