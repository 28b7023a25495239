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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "cosfire/error.hpp"
#include "cosfire/image.hpp"
#include "cosfire/imaging.hpp"
#include "support/oracles.hpp"

using namespace cosfire;
using cosfire::testing::blur_oracle;
using cosfire::testing::convolve_oracle;
using cosfire::testing::max_abs_diff;
using cosfire::testing::random_image;
using cosfire::testing::random_kernel;

TEST_CASE("GrayImage rejects bad dimensions and non-finite data") {
  CHECK_THROWS_AS(GrayImage(0, 3), InvalidInput);
  CHECK_THROWS_AS(GrayImage(2, 2, std::vector<double>(3)), InvalidInput);
  CHECK_THROWS_AS(GrayImage(1, 1, std::vector<double>{std::nan("")}), InvalidInput);
  GrayImage img(3, 2, 0.5);
  CHECK(img.size() == 6);
  CHECK(img.at_or_zero(-1, 0) == 0.0);
  CHECK(img.at_or_zero(2, 1) == 0.5);
}

TEST_CASE("to_grayscale uses luma weights") {
  CHECK(to_grayscale({1, 1, {1, 1, 1}})(0, 0) == doctest::Approx(1.0));
  CHECK(to_grayscale({1, 1, {1, 0, 0}})(0, 0) == doctest::Approx(0.299));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  RgbImage rgb{2, 2, {}};
  for (int i = 0; i < 12; ++i) rgb.data.push_back(u(rng));
  const GrayImage g = to_grayscale(rgb);
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 2; ++x) {
      const double expected = 0.299 * rgb.r(x, y) + 0.587 * rgb.g(x, y) + 0.114 * rgb.b(x, y);
      CHECK(g(x, y) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(to_grayscale({0, 0, {}}), InvalidInput);
  CHECK_THROWS_AS(to_grayscale({1, 1, {1.5, 0, 0}}), InvalidInput);
}

TEST_CASE("identity kernel leaves the image unchanged") {
  std::mt19937_64 rng(1);
  const GrayImage img = random_image(9, 7, rng);
  CHECK(convolve2d(img, Kernel::identity()) == img);
  CHECK(max_abs_diff(convolve2d(img, Kernel::identity(), Border::zero, ConvolutionMethod::fft),
                     img) < 1e-12);
}

TEST_CASE("zero-sum kernel on a constant image gives zero with mirror border") {
  const GrayImage img(12, 10, 0.7);
  Kernel k(1, 1, {1, 0, -1, 2, 0, -2, 1, 0, -1});
  for (auto method : {ConvolutionMethod::direct, ConvolutionMethod::fft}) {
    const GrayImage out = convolve2d(img, k, Border::mirror, method);
    for (double v : out.pixels()) CHECK(std::abs(v) < 1e-12);
  }
}

TEST_CASE("direct and frequency-domain convolution agree with the nested-loop oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const GrayImage img = random_image(16, 16, rng);
    const Kernel k = random_kernel(2, 2, rng);
    for (Border border : {Border::zero, Border::mirror}) {
      const GrayImage oracle = convolve_oracle(img, k, border);
      const GrayImage direct = convolve2d(img, k, border, ConvolutionMethod::direct);
      const GrayImage fft = convolve2d(img, k, border, ConvolutionMethod::fft);
      CHECK(max_abs_diff(direct, oracle) < 1e-9);
      CHECK(max_abs_diff(fft, direct) < 1e-6);
    }
  }
}

TEST_CASE("non-square kernels and odd sizes") {
  std::mt19937_64 rng(12);
  const GrayImage img = random_image(13, 9, rng);
  const Kernel k = random_kernel(3, 1, rng);
  const GrayImage oracle = convolve_oracle(img, k, Border::mirror);
  CHECK(max_abs_diff(convolve2d(img, k, Border::mirror, ConvolutionMethod::fft), oracle) < 1e-9);
  CHECK(max_abs_diff(convolve2d(img, k, Border::mirror, ConvolutionMethod::direct), oracle) <
        1e-12);
}

TEST_CASE("oversized kernel is rejected") {
  std::mt19937_64 rng(2);
  const GrayImage img = random_image(4, 4, rng);
  CHECK_THROWS_AS(convolve2d(img, random_kernel(4, 1, rng)), InvalidInput);
  CHECK_NOTHROW(convolve2d(img, random_kernel(3, 3, rng)));
}

TEST_CASE("convolution is linear") {
  std::mt19937_64 rng(5);
  const GrayImage a = random_image(16, 16, rng);
  const GrayImage b = random_image(16, 16, rng);
  const Kernel k = random_kernel(2, 2, rng);
  GrayImage mix(16, 16);
  for (std::size_t i = 0; i < mix.size(); ++i) {
    mix.pixels()[i] = 2.5 * a.pixels()[i] - 0.75 * b.pixels()[i];
  }
  const GrayImage ca = convolve2d(a, k), cb = convolve2d(b, k), cm = convolve2d(mix, k);
  for (std::size_t i = 0; i < mix.size(); ++i) {
    CHECK(cm.pixels()[i] == doctest::Approx(2.5 * ca.pixels()[i] - 0.75 * cb.pixels()[i])
                                .epsilon(1e-9));
  }
}

TEST_CASE("convolution is translation equivariant away from the border") {
  std::mt19937_64 rng(6);
  const GrayImage img = random_image(24, 24, rng);
  const Kernel k = random_kernel(2, 2, rng);
  const int dx = 3, dy = -2;
  GrayImage shifted(24, 24);
  for (int y = 0; y < 24; ++y) {
    for (int x = 0; x < 24; ++x) shifted(x, y) = img.at_or_zero(x - dx, y - dy);
  }
  const GrayImage a = convolve2d(img, k, Border::zero, ConvolutionMethod::direct);
  const GrayImage b = convolve2d(shifted, k, Border::zero, ConvolutionMethod::direct);
  const int m = 2 + 3;
  for (int y = m; y < 24 - m; ++y) {
    for (int x = m; x < 24 - m; ++x) CHECK(b(x, y) == a(x - dx, y - dy));
  }
}

TEST_CASE("weighted max blur") {
  SUBCASE("zero image stays zero") {
    const GrayImage out = weighted_max_blur(GrayImage(9, 9), 2.0);
    CHECK(out.max_value() == 0.0);
  }
  SUBCASE("impulse spreads to the unit-peak Gaussian") {
    GrayImage img(11, 11);
    img(5, 5) = 1.0;
    const GrayImage out = weighted_max_blur(img, 1.0);
    for (int y = 0; y < 11; ++y) {
      for (int x = 0; x < 11; ++x) {
        const int dx = x - 5, dy = y - 5;
        const double expected = (std::abs(dx) <= 3 && std::abs(dy) <= 3)
                                    ? std::exp(-(dx * dx + dy * dy) / 2.0)
                                    : 0.0;
        CHECK(out(x, y) == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
  SUBCASE("matches the nested-loop oracle exactly") {
    std::mt19937_64 rng(8);
    const GrayImage img = random_image(8, 8, rng);
    CHECK(weighted_max_blur(img, 1.5) == blur_oracle(img, 1.5));
  }
  SUBCASE("monotone and dominating for non-negative input") {
    std::mt19937_64 rng(9);
    const GrayImage a = random_image(12, 10, rng);
    GrayImage b = a;
    for (double& v : b.pixels()) v += 0.1;
    const GrayImage ba = weighted_max_blur(a, 1.2), bb = weighted_max_blur(b, 1.2);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(ba.pixels()[i] <= bb.pixels()[i]);
      CHECK(ba.pixels()[i] >= a.pixels()[i]);
    }
  }
  CHECK_THROWS_AS(weighted_max_blur(GrayImage(3, 3), 0.0), InvalidParameter);
}

TEST_CASE("image files round-trip and unknown formats are rejected") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "cosfire_imaging_test";
  fs::create_directories(dir);
  GrayImage img(5, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 5; ++x) img(x, y) = (x + 5 * y) / 19.0;
  }
  save_image(dir / "a.png", img);
  const GrayImage back = load_image(dir / "a.png");
  REQUIRE(back.width() == 5);
  REQUIRE(back.height() == 4);
  CHECK(max_abs_diff(back, img) <= 0.5 / 255.0 + 1e-12);

  std::ofstream(dir / "b.bmp") << "BM not really";
  try {
    load_image(dir / "b.bmp");
    FAIL("expected an error");
  } catch (const UnsupportedFormat& e) {
    CHECK(std::string(e.what()).find("b.bmp") != std::string::npos);
  }
  CHECK_THROWS_AS(load_image(dir / "missing.png"), InvalidInput);
  fs::remove_all(dir);
}

TEST_CASE("resize_to_max keeps aspect ratio") {
  const GrayImage img(200, 100, 0.5);
  const GrayImage small = resize_to_max(img, 50);
  CHECK(small.width() == 50);
  CHECK(small.height() == 25);
  CHECK(resize_to_max(img, 400) == img);
}
