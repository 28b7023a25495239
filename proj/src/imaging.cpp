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

#include "cosfire/imaging.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "cosfire/error.hpp"
#include "fft_convolution.hpp"

namespace cosfire {

Kernel::Kernel(int half_width, int half_height, std::vector<double> weights)
    : half_width_(half_width),
      half_height_(half_height),
      weights_(std::move(weights)) {
  if (half_width < 0 || half_height < 0) {
    throw InvalidParameter("kernel half-extents must be non-negative");
  }
  if (weights_.size() != static_cast<std::size_t>(width()) * height()) {
    throw InvalidParameter("kernel weight count does not match its extent");
  }
  if (!std::all_of(weights_.begin(), weights_.end(),
                   [](double w) { return std::isfinite(w); })) {
    throw InvalidParameter("kernel contains non-finite weights");
  }
}

double Kernel::sum() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

double Kernel::l2_norm() const {
  double s = 0.0;
  for (double w : weights_) s += w * w;
  return std::sqrt(s);
}

namespace {

constexpr int kDirectAreaLimit = 121;

GrayImage correlate_direct(const detail::PaddedImage& padded, int out_width,
                           int out_height, const Kernel& kernel) {
  const int hw = kernel.half_width();
  const int hh = kernel.half_height();
  const int pad_x = (padded.width - out_width) / 2;
  const int pad_y = (padded.height - out_height) / 2;
  GrayImage out(out_width, out_height);
  for (int y = 0; y < out_height; ++y) {
    for (int x = 0; x < out_width; ++x) {
      double acc = 0.0;
      for (int dy = -hh; dy <= hh; ++dy) {
        const double* row =
            padded.data.data() +
            static_cast<std::size_t>(y + pad_y + dy) * padded.width + x + pad_x;
        for (int dx = -hw; dx <= hw; ++dx) {
          acc += kernel.at(dx, dy) * row[dx];
        }
      }
      out(x, y) = acc;
    }
  }
  return out;
}

}  // namespace

GrayImage convolve2d(const GrayImage& image, const Kernel& kernel,
                     Border border, ConvolutionMethod method) {
  if (image.empty()) throw InvalidInput("convolve2d: empty image");
  if (kernel.width() >= 2 * image.width() ||
      kernel.height() >= 2 * image.height()) {
    throw InvalidInput("convolve2d: kernel " + std::to_string(kernel.width()) +
                       "x" + std::to_string(kernel.height()) +
                       " is too large for image " +
                       std::to_string(image.width()) + "x" +
                       std::to_string(image.height()));
  }
  const auto padded =
      detail::pad(image, kernel.half_width(), kernel.half_height(), border);
  if (method == ConvolutionMethod::automatic) {
    method = kernel.width() * kernel.height() <= kDirectAreaLimit
                 ? ConvolutionMethod::direct
                 : ConvolutionMethod::fft;
  }
  if (method == ConvolutionMethod::direct) {
    return correlate_direct(padded, image.width(), image.height(), kernel);
  }
  return detail::correlate_fft(padded, image.width(), image.height(), kernel);
}

std::vector<double> gaussian_profile(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> g(2 * radius + 1);
  for (int d = -radius; d <= radius; ++d) {
    g[d + radius] = std::exp(-(d * d) / (2.0 * sigma * sigma));
  }
  return g;
}

GrayImage weighted_max_blur(const GrayImage& image, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidParameter("weighted_max_blur: sigma must be positive, got " +
                           std::to_string(sigma));
  }
  const std::vector<double> g = gaussian_profile(sigma);
  const int radius = static_cast<int>(g.size() / 2);
  const int w = image.width();
  const int h = image.height();
  constexpr double kLowest = std::numeric_limits<double>::lowest();

  // G(dx, dy) = g(dx) g(dy) > 0, so the 2D maximum splits into a horizontal
  // pass followed by a vertical one.
  GrayImage horizontal(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double best = kLowest;
      const int lo = std::max(-radius, x - (w - 1));
      const int hi = std::min(radius, x);
      for (int d = lo; d <= hi; ++d) {
        best = std::max(best, g[d + radius] * image(x - d, y));
      }
      horizontal(x, y) = best;
    }
  }
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    const int lo = std::max(-radius, y - (h - 1));
    const int hi = std::min(radius, y);
    for (int x = 0; x < w; ++x) {
      double best = kLowest;
      for (int d = lo; d <= hi; ++d) {
        best = std::max(best, g[d + radius] * horizontal(x, y - d));
      }
      out(x, y) = best;
    }
  }
  return out;
}

GrayImage to_grayscale(const RgbImage& rgb) {
  if (rgb.width < 1 || rgb.height < 1) {
    throw InvalidInput("to_grayscale: empty image");
  }
  if (rgb.data.size() != static_cast<std::size_t>(rgb.width) * rgb.height * 3) {
    throw InvalidInput("to_grayscale: channel buffer size mismatch");
  }
  for (double c : rgb.data) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw InvalidInput("to_grayscale: channel value outside [0, 1]");
    }
  }
  GrayImage out(rgb.width, rgb.height);
  for (int y = 0; y < rgb.height; ++y) {
    for (int x = 0; x < rgb.width; ++x) {
      out(x, y) = 0.299 * rgb.r(x, y) + 0.587 * rgb.g(x, y) + 0.114 * rgb.b(x, y);
    }
  }
  return out;
}

namespace {

enum class Codec { png, jpeg, unknown };

Codec sniff(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open image: " + path.string());
  std::array<unsigned char, 8> magic{};
  in.read(reinterpret_cast<char*>(magic.data()), magic.size());
  const auto n = in.gcount();
  static constexpr std::array<unsigned char, 8> kPng = {0x89, 'P',  'N',  'G',
                                                        0x0D, 0x0A, 0x1A, 0x0A};
  if (n == 8 && magic == kPng) return Codec::png;
  if (n >= 3 && magic[0] == 0xFF && magic[1] == 0xD8 && magic[2] == 0xFF) {
    return Codec::jpeg;
  }
  return Codec::unknown;
}

}  // namespace

GrayImage load_image(const std::filesystem::path& path) {
  if (sniff(path) == Codec::unknown) {
    throw UnsupportedFormat("unsupported image format (expected PNG or JPEG): " +
                            path.string());
  }
  const cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw InvalidInput("cannot decode image: " + path.string());

  RgbImage rgb{bgr.cols, bgr.rows, {}};
  rgb.data.resize(static_cast<std::size_t>(bgr.cols) * bgr.rows * 3);
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      const std::size_t i = 3 * (static_cast<std::size_t>(y) * bgr.cols + x);
      rgb.data[i] = row[x][2] / 255.0;
      rgb.data[i + 1] = row[x][1] / 255.0;
      rgb.data[i + 2] = row[x][0] / 255.0;
    }
  }
  return to_grayscale(rgb);
}

void save_image(const std::filesystem::path& path, const GrayImage& image) {
  cv::Mat out(image.height(), image.width(), CV_8UC1);
  for (int y = 0; y < image.height(); ++y) {
    auto* row = out.ptr<unsigned char>(y);
    for (int x = 0; x < image.width(); ++x) {
      const double v = std::clamp(image(x, y), 0.0, 1.0);
      row[x] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
  }
  if (!cv::imwrite(path.string(), out)) {
    throw InvalidInput("cannot write image: " + path.string());
  }
}

GrayImage resize_to_max(const GrayImage& image, int max_dimension) {
  if (max_dimension < 1) {
    throw InvalidParameter("resize_to_max: max dimension must be positive");
  }
  const int longest = std::max(image.width(), image.height());
  if (longest <= max_dimension) return image;
  const double scale = static_cast<double>(max_dimension) / longest;
  const int w = std::max(1, static_cast<int>(std::lround(image.width() * scale)));
  const int h = std::max(1, static_cast<int>(std::lround(image.height() * scale)));
  cv::Mat src(image.height(), image.width(), CV_64F,
              const_cast<double*>(image.pixels().data()));
  cv::Mat dst;
  cv::resize(src, dst, cv::Size(w, h), 0, 0, cv::INTER_AREA);
  std::vector<double> data(dst.begin<double>(), dst.end<double>());
  return GrayImage(w, h, std::move(data));
}

}  // namespace cosfire
