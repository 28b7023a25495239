// Copyright 2026 The cosfire-scene Authors.
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

#include "cosfire/image.hpp"
#include "cosfire/imaging.hpp"

namespace cosfire {

struct InhibitionParams {
  double alpha = 1.0;           // suppression strength
  double surround_ratio = 4.0;  // outer / inner sigma of the DoG surround

  void validate() const;
  bool operator==(const InhibitionParams&) const = default;
};

// Inner sigma of the surround for a channel of wavelength lambda.
inline double surround_inner_sigma(double lambda) { return 0.56 * lambda; }

// Positive part of DoG(sigma_out) - DoG(sigma_in) with unit L1 norm; an
// annulus around the centre. A non-negative max_radius clips the support and
// the clipped weights are renormalized.
Kernel surround_weights(double lambda, double surround_ratio, int max_radius = -1);

// out = max(0, energy - alpha * (energy (*) w)).
GrayImage surround_inhibition(const GrayImage& energy,
                              const InhibitionParams& params, double lambda);

}  // namespace cosfire
