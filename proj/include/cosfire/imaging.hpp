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

#include <filesystem>
#include <span>
#include <vector>

#include "cosfire/image.hpp"

namespace cosfire {

// Odd-sized correlation kernel addressed by offsets in
// [-half_width, half_width] x [-half_height, half_height].
class Kernel {
 public:
  Kernel(int half_width, int half_height, std::vector<double> weights);

  static Kernel identity() { return Kernel(0, 0, {1.0}); }

  int half_width() const { return half_width_; }
  int half_height() const { return half_height_; }
  int width() const { return 2 * half_width_ + 1; }
  int height() const { return 2 * half_height_ + 1; }

  double at(int dx, int dy) const {
    return weights_[static_cast<std::size_t>(dy + half_height_) * width() +
                    static_cast<std::size_t>(dx + half_width_)];
  }
  std::span<const double> weights() const { return weights_; }

  double sum() const;
  double l2_norm() const;

 private:
  int half_width_;
  int half_height_;
  std::vector<double> weights_;
};

enum class Border {
  zero,    // outside pixels read as 0
  mirror,  // reflect about the edge pixel: ... c b | a b c ...
};

enum class ConvolutionMethod {
  automatic,  // direct for small kernels, frequency domain otherwise
  direct,
  fft,
};

// Correlation (the kernel is not flipped):
//   out(x, y) = sum_{dx,dy} k(dx, dy) * in(x + dx, y + dy)
// Output has the input's size. The kernel must be narrower than twice the
// image in each dimension.
GrayImage convolve2d(const GrayImage& image, const Kernel& kernel,
                     Border border = Border::mirror,
                     ConvolutionMethod method = ConvolutionMethod::automatic);

// Gaussian-weighted maximum:
//   out(x, y) = max_{|dx|,|dy| <= ceil(3 sigma)} in(x - dx, y - dy) * G(dx, dy)
// with G(0, 0) = 1. Pixels outside the image do not take part.
GrayImage weighted_max_blur(const GrayImage& image, double sigma);

// 1D weights exp(-d^2 / (2 sigma^2)) for d in [-r, r], r = ceil(3 sigma).
std::vector<double> gaussian_profile(double sigma);

GrayImage to_grayscale(const RgbImage& rgb);

// Decodes PNG or JPEG into luminance in [0, 1]. Anything else throws
// UnsupportedFormat naming the path.
GrayImage load_image(const std::filesystem::path& path);

// Writes an 8-bit PNG, clamping to [0, 1].
void save_image(const std::filesystem::path& path, const GrayImage& image);

// Downscales so that max(width, height) <= max_dimension; returns the input
// unchanged when it already fits.
GrayImage resize_to_max(const GrayImage& image, int max_dimension);

}  // namespace cosfire
