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

#include "cosfire/inhibition.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cosfire/error.hpp"
#include "fft_convolution.hpp"

namespace cosfire {

void InhibitionParams::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw InvalidParameter("inhibition: alpha must be >= 0");
  }
  if (!(surround_ratio > 1.0) || !std::isfinite(surround_ratio)) {
    throw InvalidParameter("inhibition: surround ratio must be > 1");
  }
}

Kernel surround_weights(double lambda, double surround_ratio, int max_radius) {
  const double inner = surround_inner_sigma(lambda);
  const double outer = surround_ratio * inner;
  int radius = static_cast<int>(std::ceil(3.0 * outer));
  if (max_radius >= 0) radius = std::min(radius, max_radius);
  const int side = 2 * radius + 1;
  const double two_pi = 2.0 * std::numbers::pi;

  std::vector<double> w(static_cast<std::size_t>(side) * side);
  double total = 0.0;
  for (int y = -radius; y <= radius; ++y) {
    for (int x = -radius; x <= radius; ++x) {
      const double r2 = static_cast<double>(x * x + y * y);
      const double g_out = std::exp(-r2 / (2.0 * outer * outer)) / (two_pi * outer * outer);
      const double g_in = std::exp(-r2 / (2.0 * inner * inner)) / (two_pi * inner * inner);
      const double v = std::max(0.0, g_out - g_in);
      w[static_cast<std::size_t>(y + radius) * side + (x + radius)] = v;
      total += v;
    }
  }
  if (!(total > 0.0)) throw InvalidParameter("inhibition: surround support is empty");
  for (double& v : w) v /= total;
  return Kernel(radius, radius, std::move(w));
}

GrayImage surround_inhibition(const GrayImage& energy, const InhibitionParams& params,
                              double lambda) {
  params.validate();
  if (energy.min_value() < 0.0) {
    throw InvalidInput("surround inhibition: energy must be non-negative");
  }
  if (params.alpha == 0.0) return energy;

  // Keep the surround within what a mirrored border can supply.
  const int max_radius = std::min(energy.width(), energy.height()) - 1;
  const int radius = std::min(max_radius, static_cast<int>(std::ceil(
                                              3.0 * params.surround_ratio * surround_inner_sigma(lambda))));
  const auto layout = detail::pad(energy, radius, radius, Border::mirror);
  const int rows = detail::fft_friendly_size(layout.height);
  const int cols = detail::fft_friendly_size(layout.width);
  const auto weights = detail::kernel_spectrum(
      [&] { return surround_weights(lambda, params.surround_ratio, max_radius); }, rows, cols,
      fmt::format("surround:{:a}:{:a}:{}", lambda, params.surround_ratio, radius));
  const auto spectrum = detail::image_spectrum(layout, rows, cols);
  const GrayImage surround =
      detail::correlate_spectra(*spectrum, *weights, layout, energy.width(), energy.height());

  GrayImage out(energy.width(), energy.height());
  auto dst = out.pixels();
  auto e = energy.pixels();
  auto t = surround.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = std::max(0.0, e[i] - params.alpha * t[i]);
  }
  return out;
}

}  // namespace cosfire
