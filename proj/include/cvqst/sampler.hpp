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

#ifndef CVQST_SAMPLER_HPP
#define CVQST_SAMPLER_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "cvqst/fock.hpp"

namespace cvqst::sampler {

// Local-oscillator phase sequencing over the acquisition.
//   uniform_random: theta drawn per sample from 4096 evenly spaced values in
//                   [0, 2pi). The discretization keeps per-phase quadrature
//                   tables reusable; every phase-harmonic estimator with
//                   |k| < 4096 sees exactly uniform phases, and the recorded
//                   theta is always the theta that generated the draw.
//   swept:          theta ramps once across the acquisition through n_phases
//                   evenly spaced values 2pi*j/n_phases.
//   fixed_list:     theta cycles through the given list (values wrapped into
//                   [0, 2pi)).
struct PhaseSchedule {
  enum class Kind { uniform_random, swept, fixed_list };
  Kind kind = Kind::uniform_random;
  int n_phases = 0;
  std::vector<double> phases;

  static PhaseSchedule uniform_random() { return {}; }
  static PhaseSchedule swept(int n_phases) {
    return {Kind::swept, n_phases, {}};
  }
  static PhaseSchedule fixed_list(std::vector<double> phases) {
    return {Kind::fixed_list, 0, std::move(phases)};
  }
};

// Everything that defines a simulated homodyne run. Detection efficiency
// eta in (0,1], electronic signal-to-noise ratio snr > 1 (infinity = clean
// detector), mode-match probability xi in (0,1] (each trigger heralds the
// target state with probability xi, a vacuum-equivalent dark count
// otherwise). The seed is mandatory state: identical plans give
// byte-identical sample streams.
struct AcquisitionPlan {
  long long n_samples = 0;
  PhaseSchedule schedule;
  double eta = 1.0;
  double snr = std::numeric_limits<double>::infinity();
  double xi = 1.0;
  std::uint64_t seed = 0;
};

// Electronic noise folded into an equivalent optical loss: eta * (1 - 1/snr).
double effective_efficiency(double eta, double snr);

// Draws plan.n_samples quadrature values from the detected distribution of
// `truth`. Per sample: the source is the truth state with probability xi
// and vacuum otherwise (mode mismatch), then the Bernoulli loss channel at
// effective_efficiency(eta, snr) acts on the truth branch. q is drawn by
// piecewise-linear inverse CDF on a 4096-point grid spanning
// [-q_cut, q_cut], q_cut = 2 sqrt(n_max) + 4, which carries all truncated
// states' mass to below 1e-12 per tail.
std::vector<QuadratureSample> sample(const DensityMatrix& truth,
                                     const AcquisitionPlan& plan);

}  // namespace cvqst::sampler

#endif  // CVQST_SAMPLER_HPP
