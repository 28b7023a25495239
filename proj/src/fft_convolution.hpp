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

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cosfire/image.hpp"
#include "cosfire/imaging.hpp"

namespace cosfire::detail {

// Image extended by (pad_x, pad_y) on every side using the border policy.
struct PaddedImage {
  int width;
  int height;
  int pad_x;
  int pad_y;
  std::vector<double> data;
};

PaddedImage pad(const GrayImage& image, int pad_x, int pad_y, Border border);

// Half-spectrum (r2c layout) of a rows x cols real array, FFTW-aligned.
class Spectrum {
 public:
  Spectrum(int rows, int cols);
  ~Spectrum();
  Spectrum(const Spectrum&) = delete;
  Spectrum& operator=(const Spectrum&) = delete;

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return static_cast<std::size_t>(rows_) * (cols_ / 2 + 1); }
  std::complex<double>* data() { return data_; }
  const std::complex<double>* data() const { return data_; }

 private:
  int rows_;
  int cols_;
  std::complex<double>* data_;
};

// Transform sizes able to hold `padded` without wrap-around.
int fft_friendly_size(int n);

std::unique_ptr<Spectrum> image_spectrum(const PaddedImage& padded, int rows, int cols);

// Spectrum of the kernel placed for correlation. With a non-empty key the
// result is memoized process-wide per (key, rows, cols).
std::shared_ptr<const Spectrum> kernel_spectrum(const Kernel& kernel, int rows, int cols,
                                                const std::string& cache_key = {});
std::shared_ptr<const Spectrum> kernel_spectrum(const std::function<Kernel()>& make,
                                                int rows, int cols,
                                                const std::string& cache_key);

// Inverse transform of image * kernel, cropped to the unpadded frame.
GrayImage correlate_spectra(const Spectrum& image, const Spectrum& kernel,
                            const PaddedImage& layout, int out_width, int out_height);

GrayImage correlate_fft(const PaddedImage& padded, int out_width, int out_height,
                        const Kernel& kernel);

}  // namespace cosfire::detail
