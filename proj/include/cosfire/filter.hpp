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

#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "cosfire/gabor.hpp"
#include "cosfire/image.hpp"
#include "cosfire/inhibition.hpp"

namespace cosfire {

// One subunit: Gabor channel (lambda, theta) expected at polar offset
// (rho, phi) from the keypoint. phi follows the image axes, so the subunit
// sits at keypoint + (rho cos phi, rho sin phi) with y pointing down.
struct CosfireTuple {
  double lambda = 0.0;
  double theta = 0.0;
  double rho = 0.0;
  double phi = 0.0;

  bool operator==(const CosfireTuple&) const = default;
};

struct CosfireFilter {
  std::string name;
  std::string scene;
  std::vector<CosfireTuple> tuples;
  double sigma0 = 0.67;      // blur at rho = 0
  double alpha_blur = 0.1;   // blur growth per pixel of rho
  double t2 = 0.75;          // subunit selection fraction
  double t3 = 0.25;          // output threshold fraction
  std::optional<double> weight_sigma;  // empty means uniform tuple weights
  double prototype_response = 0.0;

  double blur_sigma(double rho) const { return sigma0 + alpha_blur * rho; }
  double tuple_weight(double rho) const;

  // Throws InvalidParameter on a broken invariant. Configured filters must
  // also carry a positive prototype response.
  void validate(bool require_configured = true) const;

  bool operator==(const CosfireFilter&) const = default;
};

struct Keypoint {
  int x = 0;
  int y = 0;
};

struct ConfigSpec {
  std::vector<double> radii{0.0, 5.0, 10.0, 20.0};
  double angular_step = std::numbers::pi / 60.0;
  GaborBank bank = GaborBank::defaults();
  std::optional<InhibitionParams> inhibition = InhibitionParams{};
  double t2 = 0.75;
  double t3 = 0.25;
  double sigma0 = 0.67;
  double alpha_blur = 0.1;
  std::optional<double> weight_sigma;

  void validate() const;
};

// The bank a filter was configured with; needed to recompute its channels.
struct FilterContext {
  GaborBank bank = GaborBank::defaults();
  std::optional<InhibitionParams> inhibition = InhibitionParams{};
};

// Channel responses of one image plus memoized blurred channels. Not
// thread-safe; build one per image per worker.
class ResponseCache {
 public:
  ResponseCache(const GrayImage& image, const FilterContext& context);
  explicit ResponseCache(EnergyStack stack);

  const EnergyStack& stack() const { return stack_; }

  // weighted_max_blur of channel (lambda, theta) at the given sigma.
  const GrayImage& blurred(double lambda, double theta, double sigma);

 private:
  EnergyStack stack_;
  GaborBank lookup_;
  std::map<std::tuple<std::size_t, std::size_t, double>, GrayImage> blurred_;
};

// out(x, y) = in(x - dx, y - dy); vacated pixels are 0.
GrayImage shift_image(const GrayImage& image, int dx, int dy);

// Automatic configuration from a prototype and keypoint.
CosfireFilter configure_filter(const GrayImage& prototype, Keypoint keypoint,
                               const ConfigSpec& spec, std::string name,
                               std::string scene);

// Blurred and shifted channel response of every tuple, in tuple order.
std::vector<GrayImage> subunit_responses(ResponseCache& cache,
                                         const CosfireFilter& filter);

// Weighted geometric mean (prod s_i^w_i)^(1 / sum w_i), zero wherever any
// s_i is zero.
GrayImage combine_subunits(std::span<const GrayImage> subunits,
                           std::span<const double> weights);

// Combined response with values below t3 * max zeroed.
GrayImage apply_filter(ResponseCache& cache, const CosfireFilter& filter);
GrayImage apply_filter(const GrayImage& image, const CosfireFilter& filter,
                       const FilterContext& context);

// Tuples rotated by psi: theta + psi (mod pi, snapped to the nearest bank
// orientation) and phi + psi (mod 2 pi).
CosfireFilter rotate_filter(const CosfireFilter& filter, double psi,
                            const GaborBank& bank);

// Pointwise maximum of apply_filter over the rotated filters.
GrayImage rotation_tolerant_apply(ResponseCache& cache, const CosfireFilter& filter,
                                  std::span<const double> psis);
GrayImage rotation_tolerant_apply(const GrayImage& image, const CosfireFilter& filter,
                                  const FilterContext& context,
                                  std::span<const double> psis);

}  // namespace cosfire
