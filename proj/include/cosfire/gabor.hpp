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
#include <optional>
#include <vector>

#include "cosfire/image.hpp"
#include "cosfire/imaging.hpp"
#include "cosfire/inhibition.hpp"

namespace cosfire {

struct GaborParams {
  double lambda = 8.0;             // wavelength, pixels
  double theta = 0.0;              // orientation, radians in [0, pi)
  double gamma = 0.5;              // spatial aspect ratio
  double sigma_over_lambda = 0.56;
  double psi = 0.0;                // phase offset, radians

  double sigma() const { return sigma_over_lambda * lambda; }
  void validate() const;
};

// Envelope shared by every channel of a bank.
struct GaborEnvelope {
  double gamma = 0.5;
  double sigma_over_lambda = 0.56;
};

// g(x, y) = exp(-(x'^2 + gamma^2 y'^2) / (2 sigma^2)) cos(2 pi x' / lambda + psi)
// with x' = x cos(theta) + y sin(theta), y' = -x sin(theta) + y cos(theta),
// sampled on radius ceil(3 sigma), then made zero-mean and unit-L2.
Kernel gabor_kernel(const GaborParams& params);

// Support radius of the kernel for a given wavelength.
int gabor_radius(double lambda, double sigma_over_lambda);

// Quadrature energy sqrt(even^2 + odd^2) with psi = 0 and psi = -pi/2.
GrayImage gabor_energy(const GrayImage& image, double lambda, double theta,
                       const GaborEnvelope& envelope);

struct GaborBank {
  std::vector<double> lambdas;
  std::vector<double> thetas;
  double gamma = 0.5;
  double sigma_over_lambda = 0.56;
  double t1 = 0.1;  // fraction of the stack-wide maximum below which responses vanish

  // 8 orientations k*pi/8, wavelengths 4, 4*sqrt(2), 8, 8*sqrt(2), 16.
  static GaborBank defaults();

  GaborEnvelope envelope() const { return {gamma, sigma_over_lambda}; }
  std::size_t channel_count() const { return lambdas.size() * thetas.size(); }
  int max_radius() const;

  // Index of the entry equal to the value within 1e-9, if any.
  std::optional<std::size_t> lambda_index(double lambda) const;
  std::optional<std::size_t> theta_index(double theta) const;
  // Nearest orientation modulo pi.
  std::size_t nearest_theta_index(double theta) const;

  void validate() const;
  bool operator==(const GaborBank&) const = default;
};

// Per-(lambda, theta) response maps of one image.
class EnergyStack {
 public:
  EnergyStack(int width, int height, std::vector<double> lambdas,
              std::vector<double> thetas, std::vector<GrayImage> channels);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<double>& lambdas() const { return lambdas_; }
  const std::vector<double>& thetas() const { return thetas_; }
  std::size_t channel_count() const { return channels_.size(); }

  const GrayImage& channel(std::size_t lambda_index, std::size_t theta_index) const {
    return channels_[lambda_index * thetas_.size() + theta_index];
  }
  GrayImage& channel(std::size_t lambda_index, std::size_t theta_index) {
    return channels_[lambda_index * thetas_.size() + theta_index];
  }

  double global_max() const;

 private:
  int width_;
  int height_;
  std::vector<double> lambdas_;
  std::vector<double> thetas_;
  std::vector<GrayImage> channels_;
};

// Zeroes every value below t1 times the stack-wide maximum.
void threshold_stack(EnergyStack& stack, double t1);

// Energy per channel, surround-inhibited when params are given, then
// thresholded at bank.t1.
EnergyStack bank_responses(const GrayImage& image, const GaborBank& bank,
                           const std::optional<InhibitionParams>& inhibition);

}  // namespace cosfire
