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

#ifndef CVQST_SPECIAL_HPP
#define CVQST_SPECIAL_HPP

#include <span>

namespace cvqst {

// Highest harmonic-oscillator index supported by the wavefunction recursions.
inline constexpr int kMaxFockIndex = 128;

// Highest index and half-range of the irregular (second-solution) recursion.
// Beyond |x| = 12 the exp(x^2/2) growth erodes the working precision.
inline constexpr int kMaxIrregularIndex = 64;
inline constexpr double kIrregularRange = 12.0;

// Dawson integral exp(-x^2) * Int_0^x exp(t^2) dt.
// Absolute error below 1e-13 for |x| <= 12 (tested against a 50-digit oracle).
double dawson(double x);

// Imaginary error function (2/sqrt(pi)) * Int_0^x exp(t^2) dt.
// Requires |x| <= 26 so exp(x^2) stays inside double range.
double erfi(double x);

// Normalized oscillator eigenfunctions for the convention [Q,P] = i
// (vacuum variance 1/2):
//   psi_n(x) = (1/pi)^{1/4} H_n(x) exp(-x^2/2) / sqrt(2^n n!).
// Fills out[0..n_max] with psi_0(x)..psi_{n_max}(x) by the normalized
// three-term recursion, which is stable for all n <= kMaxFockIndex.
void fock_wavefunctions(int n_max, double x, std::span<double> out);

// Single value psi_n(x); prefer the batch form inside loops.
double fock_wavefunction(int n, double x);

// Second (non-normalizable) solutions paired with psi_n:
//   phi_0(x)  = pi^{3/4} exp(-x^2/2) erfi(x)
//   phi_1(x)  = sqrt(2) x phi_0(x) - sqrt(2) pi^{1/4} exp(x^2/2)
//   phi_{n+1} = x sqrt(2/(n+1)) phi_n - sqrt(n/(n+1)) phi_{n-1}   (n >= 1)
// Only the phi_0 -> phi_1 step carries an inhomogeneous exp(x^2/2) term;
// afterwards phi obeys the same recursion as psi. Forward recursion is
// stable because phi is the dominant solution. Requires n_max <=
// kMaxIrregularIndex and |x| <= kIrregularRange.
void irregular_wavefunctions(int n_max, double x, std::span<double> out);

}  // namespace cvqst

#endif  // CVQST_SPECIAL_HPP
