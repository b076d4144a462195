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

#ifndef CVQST_IO_HPP
#define CVQST_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cvqst/fock.hpp"
#include "cvqst/sampler.hpp"
#include "cvqst/spatial.hpp"
#include "cvqst/states.hpp"

// File formats. All numeric text is locale-independent (std::to_chars /
// std::from_chars); CSV floats carry 9 significant digits. Density-matrix
// JSON keeps full shortest-round-trip precision instead, because a
// reconstructed state must reload bit-exactly to pass state validation
// (trace and positivity tolerances are far tighter than 9 digits).
// Identical inputs produce byte-identical files; nothing here embeds
// timestamps or machine state. Malformed input raises std::invalid_argument
// naming the file and, for row-oriented formats, the 1-based line number.

namespace cvqst::io {

// 9 significant digits, shortest form (general format)
std::string format_sig9(double v);
// shortest string that round-trips the exact double
std::string format_full(double v);

// CSV with header "theta,q"
void write_samples_csv(const std::filesystem::path& path,
                       const std::vector<QuadratureSample>& samples);
std::vector<QuadratureSample> read_samples_csv(const std::filesystem::path& path);

// JSON sidecar recording how a dataset was produced: acquisition plan
// (schedule, eta, snr, xi, seed) and the truth-state description. An
// infinite snr is encoded by omitting the key.
struct SimulationMetadata {
  sampler::AcquisitionPlan plan;
  states::StateSpec truth;
};
void write_metadata_json(const std::filesystem::path& path,
                         const SimulationMetadata& meta);
SimulationMetadata read_metadata_json(const std::filesystem::path& path);

// JSON object {"dim": d, "re": [d*d row-major], "im": [d*d]}, plus a
// parallel "se" array of element-wise standard errors when provided. The
// matrix is stored raw (it may be a non-positive direct-sampling estimate).
struct DensityMatrixFile {
  Eigen::MatrixXcd rho;
  std::optional<Eigen::MatrixXd> se;
};
void write_density_matrix_json(const std::filesystem::path& path,
                               const Eigen::MatrixXcd& rho,
                               const Eigen::MatrixXd* se = nullptr);
DensityMatrixFile read_density_matrix_json(const std::filesystem::path& path);

// CSV with header "q,p,w", rows ordered q-major. The reader rebuilds the
// grid spec from the coordinate columns and requires a complete grid.
void write_wigner_csv(const std::filesystem::path& path, const WignerGrid& w);
WignerGrid read_wigner_csv(const std::filesystem::path& path);

// CSV with header "x,re,im" (1D) or "x,y,re,im" (2D, x-major rows). The
// pitch is recovered from the coordinate columns; k0 is not stored and must
// be supplied to the reader.
void write_mode_csv(const std::filesystem::path& path,
                    const spatial::SpatialMode& mode);
spatial::SpatialMode read_mode_csv(const std::filesystem::path& path, double k0);

// analysis summary, serialized as a flat JSON object for test harnesses
struct AnalysisReport {
  std::string source;  // path of the analyzed artifact
  std::optional<double> fidelity;  // present only when truth metadata given
  std::vector<double> photon_p;    // diagonal of the estimate
  double w_origin = 0.0;
  bool wigner_negative_at_origin = false;
};
void write_report_json(const std::filesystem::path& path,
                       const AnalysisReport& report);

}  // namespace cvqst::io

#endif  // CVQST_IO_HPP
