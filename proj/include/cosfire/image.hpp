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
#include <span>
#include <vector>

namespace cosfire {

// Row-major single-channel raster. x grows rightward, y downward, (0,0) is the
// top-left pixel. Decoded images hold intensities in [0, 1]; filter outputs
// reuse the type for arbitrary finite values.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0);
  GrayImage(int width, int height, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int x, int y) { return data_[index(x, y)]; }
  double operator()(int x, int y) const { return data_[index(x, y)]; }

  // Zero outside the raster.
  double at_or_zero(int x, int y) const {
    return contains(x, y) ? data_[index(x, y)] : 0.0;
  }

  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::span<double> pixels() { return data_; }
  std::span<const double> pixels() const { return data_; }

  double max_value() const;
  double min_value() const;

  bool operator==(const GrayImage&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

// Interleaved RGB raster, channels in [0, 1].
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<double> data;  // r, g, b per pixel

  double r(int x, int y) const { return data[3 * (y * width + x)]; }
  double g(int x, int y) const { return data[3 * (y * width + x) + 1]; }
  double b(int x, int y) const { return data[3 * (y * width + x) + 2]; }
};

}  // namespace cosfire
