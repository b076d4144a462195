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

#ifndef CVQST_STATES_HPP
#define CVQST_STATES_HPP

#include <memory>
#include <string>

#include "cvqst/fock.hpp"

namespace cvqst::states {

// Declarative description of a test state. `kind` selects the family:
//   vacuum            --
//   fock              n
//   coherent          alpha (complex)
//   squeezed_vacuum   zeta = tanh(r) in (-1, 1)
//   odd_cat, even_cat alpha (real > 0): |alpha> -/+ |-alpha>, normalized
//   single_rail       c0, c1: c0|0> + c1|1>
//   thermal           nbar >= 0
//   photon_added      base, n applications of the creation operator
//   photon_subtracted base, n applications of the annihilation operator
struct StateSpec {
  std::string kind;
  int n = 0;
  Complex alpha{0.0, 0.0};
  double zeta = 0.0;
  double nbar = 0.0;
  Complex c0{0.0, 0.0};
  Complex c1{0.0, 0.0};
  std::shared_ptr<StateSpec> base;
};

// Builds the (n_max+1)-dimensional truncation. If the population that the
// truncation discards exceeds 1e-6, throws std::invalid_argument naming the
// smallest adequate n_max. Output is exactly renormalized, so the returned
// matrix is a valid DensityMatrix whose trace is one.
DensityMatrix build(const StateSpec& spec, int n_max);

// Overlap between the odd cat at `alpha` and single-photon subtraction of
// the squeezed vacuum with zeta = alpha^2/6. Approaches 1 as alpha -> 0.
double kitten_fidelity_check(double alpha, int n_max);

}  // namespace cvqst::states

#endif  // CVQST_STATES_HPP
