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

#include "fft_convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <new>
#include <tuple>
#include <utility>

namespace cosfire::detail {

namespace {

int reflect(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
  }
  return i;
}

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : ptr(fftw_alloc_real(n)), size(n) {
    if (ptr == nullptr) throw std::bad_alloc();
  }
  ~RealBuffer() { fftw_free(ptr); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* ptr;
  std::size_t size;
};

struct PlanPair {
  fftw_plan forward;
  fftw_plan inverse;
};

// FFTW planning is not thread-safe; execution through the new-array API is.
// Plans are made once per transform size and live for the process.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  PlanPair get(int rows, int cols) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find({rows, cols});
    if (it != plans_.end()) return it->second;
    RealBuffer real(static_cast<std::size_t>(rows) * cols);
    Spectrum spec(rows, cols);
    auto* c = reinterpret_cast<fftw_complex*>(spec.data());
    PlanPair pair{
        fftw_plan_dft_r2c_2d(rows, cols, real.ptr, c, FFTW_ESTIMATE),
        fftw_plan_dft_c2r_2d(rows, cols, c, real.ptr, FFTW_ESTIMATE),
    };
    plans_.emplace(std::make_pair(rows, cols), pair);
    return pair;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, PlanPair> plans_;
};

class KernelSpectrumCache {
 public:
  static KernelSpectrumCache& instance() {
    static KernelSpectrumCache cache;
    return cache;
  }

  std::shared_ptr<const Spectrum> find(const std::string& key, int rows, int cols) {
    std::lock_guard lock(mutex_);
    auto it = entries_.find({key, rows, cols});
    return it == entries_.end() ? nullptr : it->second;
  }

  void put(const std::string& key, int rows, int cols, std::shared_ptr<const Spectrum> s) {
    std::lock_guard lock(mutex_);
    if (entries_.size() >= kCapacity) entries_.clear();
    entries_.emplace(std::make_tuple(key, rows, cols), std::move(s));
  }

 private:
  static constexpr std::size_t kCapacity = 512;
  std::mutex mutex_;
  std::map<std::tuple<std::string, int, int>, std::shared_ptr<const Spectrum>> entries_;
};

}  // namespace

Spectrum::Spectrum(int rows, int cols)
    : rows_(rows),
      cols_(cols),
      data_(reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(size()))) {
  if (data_ == nullptr) throw std::bad_alloc();
}

Spectrum::~Spectrum() { fftw_free(data_); }

int fft_friendly_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

PaddedImage pad(const GrayImage& image, int pad_x, int pad_y, Border border) {
  PaddedImage out{image.width() + 2 * pad_x, image.height() + 2 * pad_y, pad_x, pad_y, {}};
  out.data.assign(static_cast<std::size_t>(out.width) * out.height, 0.0);
  for (int y = 0; y < out.height; ++y) {
    int sy = y - pad_y;
    if (border == Border::mirror) {
      sy = reflect(sy, image.height());
    } else if (sy < 0 || sy >= image.height()) {
      continue;
    }
    for (int x = 0; x < out.width; ++x) {
      int sx = x - pad_x;
      if (border == Border::mirror) {
        sx = reflect(sx, image.width());
      } else if (sx < 0 || sx >= image.width()) {
        continue;
      }
      out.data[static_cast<std::size_t>(y) * out.width + x] = image(sx, sy);
    }
  }
  return out;
}

std::unique_ptr<Spectrum> image_spectrum(const PaddedImage& padded, int rows, int cols) {
  RealBuffer real(static_cast<std::size_t>(rows) * cols);
  std::fill(real.ptr, real.ptr + real.size, 0.0);
  for (int y = 0; y < padded.height; ++y) {
    std::copy_n(padded.data.data() + static_cast<std::size_t>(y) * padded.width, padded.width,
                real.ptr + static_cast<std::size_t>(y) * cols);
  }
  auto spec = std::make_unique<Spectrum>(rows, cols);
  fftw_execute_dft_r2c(PlanCache::instance().get(rows, cols).forward, real.ptr,
                       reinterpret_cast<fftw_complex*>(spec->data()));
  return spec;
}

std::shared_ptr<const Spectrum> kernel_spectrum(const Kernel& kernel, int rows, int cols,
                                                const std::string& cache_key) {
  return kernel_spectrum([&] { return kernel; }, rows, cols, cache_key);
}

std::shared_ptr<const Spectrum> kernel_spectrum(const std::function<Kernel()>& make,
                                                int rows, int cols,
                                                const std::string& cache_key) {
  if (!cache_key.empty()) {
    if (auto hit = KernelSpectrumCache::instance().find(cache_key, rows, cols)) return hit;
  }
  const Kernel kernel = make();
  RealBuffer real(static_cast<std::size_t>(rows) * cols);
  std::fill(real.ptr, real.ptr + real.size, 0.0);
  // Correlation as circular convolution: weight k(dx, dy) sits at (-dx, -dy)
  // modulo the transform size.
  for (int dy = -kernel.half_height(); dy <= kernel.half_height(); ++dy) {
    const int row = ((-dy) % rows + rows) % rows;
    for (int dx = -kernel.half_width(); dx <= kernel.half_width(); ++dx) {
      const int col = ((-dx) % cols + cols) % cols;
      real.ptr[static_cast<std::size_t>(row) * cols + col] = kernel.at(dx, dy);
    }
  }
  auto spec = std::make_shared<Spectrum>(rows, cols);
  fftw_execute_dft_r2c(PlanCache::instance().get(rows, cols).forward, real.ptr,
                       reinterpret_cast<fftw_complex*>(spec->data()));
  if (!cache_key.empty()) KernelSpectrumCache::instance().put(cache_key, rows, cols, spec);
  return spec;
}

GrayImage correlate_spectra(const Spectrum& image, const Spectrum& kernel,
                            const PaddedImage& layout, int out_width, int out_height) {
  const int rows = image.rows();
  const int cols = image.cols();
  Spectrum product(rows, cols);
  for (std::size_t i = 0; i < product.size(); ++i) {
    product.data()[i] = image.data()[i] * kernel.data()[i];
  }
  RealBuffer real(static_cast<std::size_t>(rows) * cols);
  fftw_execute_dft_c2r(PlanCache::instance().get(rows, cols).inverse,
                       reinterpret_cast<fftw_complex*>(product.data()), real.ptr);

  const double scale = 1.0 / static_cast<double>(real.size);
  GrayImage out(out_width, out_height);
  for (int y = 0; y < out_height; ++y) {
    const double* row = real.ptr + static_cast<std::size_t>(y + layout.pad_y) * cols + layout.pad_x;
    for (int x = 0; x < out_width; ++x) out(x, y) = row[x] * scale;
  }
  return out;
}

GrayImage correlate_fft(const PaddedImage& padded, int out_width, int out_height,
                        const Kernel& kernel) {
  const int rows = fft_friendly_size(padded.height);
  const int cols = fft_friendly_size(padded.width);
  const auto img = image_spectrum(padded, rows, cols);
  const auto ker = kernel_spectrum(kernel, rows, cols);
  return correlate_spectra(*img, *ker, padded, out_width, out_height);
}

}  // namespace cosfire::detail
