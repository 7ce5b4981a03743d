// Copyright 2026 The ccpart Authors
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

#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <string>

namespace ccpart {

using cplx = std::complex<double>;
using Mask = std::uint64_t;

inline constexpr int kMaxModes = 64;

inline int popcount(Mask m) { return std::popcount(m); }

inline Mask low_bits(int n) { return n >= 64 ? ~Mask{0} : ((Mask{1} << n) - 1); }

inline bool has_bit(Mask m, int p) { return (m >> p) & 1u; }

// Single determinant |Phi>; bit p set <=> spin orbital / qubit p occupied.
struct ReferenceDeterminant {
  Mask occupation = 0;
  int n_modes = 0;

  int n_particles() const { return popcount(occupation); }
  int n_alpha() const;  // even modes
  int n_beta() const;   // odd modes
  bool occupied(int p) const { return has_bit(occupation, p); }

  // "1100..." with mode 0 leftmost.
  std::string bitstring() const;
  static ReferenceDeterminant from_bitstring(const std::string& s);
  static ReferenceDeterminant from_modes(int n_modes, std::initializer_list<int> occ);

  bool operator==(const ReferenceDeterminant&) const = default;
};

// Mode-0-leftmost bitstring of an occupation mask.
std::string mask_to_bitstring(Mask m, int n_modes);
Mask bitstring_to_mask(const std::string& s);

}  // namespace ccpart
