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

#include "cosfire/gabor.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <string>

#include "cosfire/error.hpp"
#include "fft_convolution.hpp"

namespace cosfire {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMatchTolerance = 1e-9;
// Energies below this are transform round-off on [0, 1] inputs.
constexpr double kEnergyFloor = 1e-10;

}  // namespace

void GaborParams::validate() const {
  if (!(lambda >= 2.0)) {
    throw InvalidParameter("gabor: lambda must be >= 2, got " + std::to_string(lambda));
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw InvalidParameter("gabor: gamma must lie in (0, 1]");
  }
  if (!(sigma_over_lambda > 0.0)) {
    throw InvalidParameter("gabor: sigma/lambda must be positive");
  }
  if (!(theta >= 0.0 && theta < kPi)) {
    throw InvalidParameter("gabor: theta must lie in [0, pi)");
  }
  if (!std::isfinite(psi)) throw InvalidParameter("gabor: psi must be finite");
}

int gabor_radius(double lambda, double sigma_over_lambda) {
  return static_cast<int>(std::ceil(3.0 * sigma_over_lambda * lambda));
}

Kernel gabor_kernel(const GaborParams& params) {
  params.validate();
  const double sigma = params.sigma();
  const int radius = gabor_radius(params.lambda, params.sigma_over_lambda);
  const int side = 2 * radius + 1;
  const double c = std::cos(params.theta);
  const double s = std::sin(params.theta);

  std::vector<double> w(static_cast<std::size_t>(side) * side);
  for (int y = -radius; y <= radius; ++y) {
    for (int x = -radius; x <= radius; ++x) {
      const double xr = x * c + y * s;
      const double yr = -x * s + y * c;
      const double envelope = std::exp(
          -(xr * xr + params.gamma * params.gamma * yr * yr) / (2.0 * sigma * sigma));
      w[static_cast<std::size_t>(y + radius) * side + (x + radius)] =
          envelope * std::cos(2.0 * kPi * xr / params.lambda + params.psi);
    }
  }

  double mean = 0.0;
  for (double v : w) mean += v;
  mean /= static_cast<double>(w.size());
  double norm = 0.0;
  for (double& v : w) {
    v -= mean;
    norm += v * v;
  }
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) throw InvalidParameter("gabor: degenerate kernel");
  for (double& v : w) v /= norm;
  return Kernel(radius, radius, std::move(w));
}

namespace {

std::string kernel_key(const GaborParams& p) {
  return fmt::format("gabor:{:a}:{:a}:{:a}:{:a}:{:a}", p.lambda, p.theta, p.gamma,
                     p.sigma_over_lambda, p.psi);
}

void check_fits(const GrayImage& image, int radius) {
  if (2 * radius + 1 >= 2 * image.width() || 2 * radius + 1 >= 2 * image.height()) {
    throw InvalidInput("gabor: kernel of radius " + std::to_string(radius) +
                       " is too large for image " + std::to_string(image.width()) + "x" +
                       std::to_string(image.height()));
  }
}

// Energy of one channel from a shared image spectrum whose padding covers the
// channel's kernel.
GrayImage energy_from_spectrum(const detail::Spectrum& spectrum,
                               const detail::PaddedImage& layout, int width, int height,
                               double lambda, double theta, const GaborEnvelope& envelope) {
  GaborParams even{lambda, theta, envelope.gamma, envelope.sigma_over_lambda, 0.0};
  GaborParams odd = even;
  odd.psi = -kPi / 2.0;
  const auto even_spec = detail::kernel_spectrum([&] { return gabor_kernel(even); },
                                                 spectrum.rows(), spectrum.cols(),
                                                 kernel_key(even));
  const auto odd_spec = detail::kernel_spectrum([&] { return gabor_kernel(odd); },
                                                spectrum.rows(), spectrum.cols(),
                                                kernel_key(odd));
  const GrayImage re = detail::correlate_spectra(spectrum, *even_spec, layout, width, height);
  const GrayImage im = detail::correlate_spectra(spectrum, *odd_spec, layout, width, height);
  GrayImage out(width, height);
  auto dst = out.pixels();
  auto a = re.pixels();
  auto b = im.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const double e = std::hypot(a[i], b[i]);
    dst[i] = e < kEnergyFloor ? 0.0 : e;
  }
  return out;
}

}  // namespace

GrayImage gabor_energy(const GrayImage& image, double lambda, double theta,
                       const GaborEnvelope& envelope) {
  GaborParams{lambda, theta, envelope.gamma, envelope.sigma_over_lambda, 0.0}.validate();
  const int radius = gabor_radius(lambda, envelope.sigma_over_lambda);
  check_fits(image, radius);
  const auto layout = detail::pad(image, radius, radius, Border::mirror);
  const auto spectrum =
      detail::image_spectrum(layout, detail::fft_friendly_size(layout.height),
                             detail::fft_friendly_size(layout.width));
  return energy_from_spectrum(*spectrum, layout, image.width(), image.height(), lambda, theta,
                              envelope);
}

GaborBank GaborBank::defaults() {
  GaborBank bank;
  const double r2 = std::numbers::sqrt2;
  bank.lambdas = {4.0, 4.0 * r2, 8.0, 8.0 * r2, 16.0};
  for (int k = 0; k < 8; ++k) bank.thetas.push_back(k * kPi / 8.0);
  return bank;
}

int GaborBank::max_radius() const {
  int r = 0;
  for (double l : lambdas) r = std::max(r, gabor_radius(l, sigma_over_lambda));
  return r;
}

std::optional<std::size_t> GaborBank::lambda_index(double lambda) const {
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (std::abs(lambdas[i] - lambda) <= kMatchTolerance * std::max(1.0, lambda)) {
      return i;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> GaborBank::theta_index(double theta) const {
  const std::size_t i = nearest_theta_index(theta);
  const double d = std::remainder(thetas[i] - theta, kPi);
  if (std::abs(d) <= kMatchTolerance) return i;
  return std::nullopt;
}

std::size_t GaborBank::nearest_theta_index(double theta) const {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const double d = std::abs(std::remainder(thetas[i] - theta, kPi));
    if (d < best_d - 1e-12) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

void GaborBank::validate() const {
  if (lambdas.empty() || thetas.empty()) {
    throw InvalidParameter("gabor bank: wavelength and orientation lists must be non-empty");
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] >= 2.0)) throw InvalidParameter("gabor bank: lambda must be >= 2");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) {
      throw InvalidParameter("gabor bank: wavelengths must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    if (!(thetas[i] >= 0.0 && thetas[i] < kPi)) {
      throw InvalidParameter("gabor bank: orientations must lie in [0, pi)");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(std::remainder(thetas[i] - thetas[j], kPi)) <= kMatchTolerance) {
        throw InvalidParameter("gabor bank: orientations must be distinct");
      }
    }
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidParameter("gabor bank: gamma must lie in (0, 1]");
  if (!(sigma_over_lambda > 0.0)) throw InvalidParameter("gabor bank: sigma/lambda must be positive");
  if (!(t1 >= 0.0 && t1 <= 1.0)) throw InvalidParameter("gabor bank: t1 must lie in [0, 1]");
}

EnergyStack::EnergyStack(int width, int height, std::vector<double> lambdas,
                         std::vector<double> thetas, std::vector<GrayImage> channels)
    : width_(width),
      height_(height),
      lambdas_(std::move(lambdas)),
      thetas_(std::move(thetas)),
      channels_(std::move(channels)) {
  if (channels_.size() != lambdas_.size() * thetas_.size()) {
    throw InvalidInput("energy stack: channel count does not match the bank");
  }
  for (const auto& c : channels_) {
    if (c.width() != width_ || c.height() != height_) {
      throw InvalidInput("energy stack: channel size differs from the source");
    }
  }
}

double EnergyStack::global_max() const {
  double m = 0.0;
  for (const auto& c : channels_) m = std::max(m, c.max_value());
  return m;
}

void threshold_stack(EnergyStack& stack, double t1) {
  if (!(t1 >= 0.0 && t1 <= 1.0)) throw InvalidParameter("threshold: t1 must lie in [0, 1]");
  const double cut = t1 * stack.global_max();
  for (std::size_t l = 0; l < stack.lambdas().size(); ++l) {
    for (std::size_t t = 0; t < stack.thetas().size(); ++t) {
      for (double& v : stack.channel(l, t).pixels()) {
        if (v < cut) v = 0.0;
      }
    }
  }
}

EnergyStack bank_responses(const GrayImage& image, const GaborBank& bank,
                           const std::optional<InhibitionParams>& inhibition) {
  bank.validate();
  if (inhibition) inhibition->validate();
  const int radius = bank.max_radius();
  check_fits(image, radius);
  // One padded spectrum serves every channel.
  const auto layout = detail::pad(image, radius, radius, Border::mirror);
  const auto spectrum =
      detail::image_spectrum(layout, detail::fft_friendly_size(layout.height),
                             detail::fft_friendly_size(layout.width));
  std::vector<GrayImage> channels;
  channels.reserve(bank.channel_count());
  for (double lambda : bank.lambdas) {
    for (double theta : bank.thetas) {
      GrayImage energy = energy_from_spectrum(*spectrum, layout, image.width(), image.height(),
                                              lambda, theta, bank.envelope());
      if (inhibition) energy = surround_inhibition(energy, *inhibition, lambda);
      channels.push_back(std::move(energy));
    }
  }
  EnergyStack stack(image.width(), image.height(), bank.lambdas, bank.thetas,
                    std::move(channels));
  threshold_stack(stack, bank.t1);
  return stack;
}

}  // namespace cosfire
