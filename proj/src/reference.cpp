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

#include "ccpart/reference.hpp"

#include <stdexcept>

#include "ccpart/errors.hpp"

namespace ccpart {

namespace {
constexpr Mask kEven = 0x5555555555555555ULL;
}

int ReferenceDeterminant::n_alpha() const { return popcount(occupation & kEven); }
int ReferenceDeterminant::n_beta() const { return popcount(occupation & ~kEven); }

std::string ReferenceDeterminant::bitstring() const {
  return mask_to_bitstring(occupation, n_modes);
}

ReferenceDeterminant ReferenceDeterminant::from_bitstring(const std::string& s) {
  if (s.size() > static_cast<std::size_t>(kMaxModes))
    throw DimensionError("bitstring longer than 64 modes");
  return {bitstring_to_mask(s), static_cast<int>(s.size())};
}

ReferenceDeterminant ReferenceDeterminant::from_modes(int n_modes, std::initializer_list<int> occ) {
  ReferenceDeterminant r{0, n_modes};
  for (int p : occ) {
    if (p < 0 || p >= n_modes) throw DimensionError("occupied mode out of range");
    r.occupation |= Mask{1} << p;
  }
  return r;
}

std::string mask_to_bitstring(Mask m, int n_modes) {
  std::string s(static_cast<std::size_t>(n_modes), '0');
  for (int p = 0; p < n_modes; ++p)
    if (has_bit(m, p)) s[static_cast<std::size_t>(p)] = '1';
  return s;
}

Mask bitstring_to_mask(const std::string& s) {
  Mask m = 0;
  for (std::size_t p = 0; p < s.size(); ++p) {
    if (s[p] == '1')
      m |= Mask{1} << p;
    else if (s[p] != '0')
      throw ParseError("bitstring must contain only 0 and 1: " + s);
  }
  return m;
}

}  // namespace ccpart
