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

#include <cmath>
#include <numbers>

#include "cosfire/error.hpp"
#include "cosfire/gabor.hpp"
#include "support/oracles.hpp"

using namespace cosfire;
using cosfire::testing::max_abs_diff;

namespace {

constexpr double kPi = std::numbers::pi;

GrayImage sine_grating(int w, int h, double lambda, double theta, double phase = 0.0) {
  GrayImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double t = x * std::cos(theta) + y * std::sin(theta);
      img(x, y) = 0.5 + 0.5 * std::cos(2.0 * kPi * t / lambda + phase);
    }
  }
  return img;
}

double interior_mean(const GrayImage& img, int margin) {
  double sum = 0.0;
  int n = 0;
  for (int y = margin; y < img.height() - margin; ++y) {
    for (int x = margin; x < img.width() - margin; ++x) {
      sum += img(x, y);
      ++n;
    }
  }
  return sum / n;
}

double interior_max(const GrayImage& img, int margin) {
  double best = 0.0;
  for (int y = margin; y < img.height() - margin; ++y) {
    for (int x = margin; x < img.width() - margin; ++x) best = std::max(best, img(x, y));
  }
  return best;
}

double bilinear(const Kernel& k, double x, double y) {
  const int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0, fy = y - y0;
  const auto at = [&](int i, int j) {
    if (std::abs(i) > k.half_width() || std::abs(j) > k.half_height()) return 0.0;
    return k.at(i, j);
  };
  return (1 - fx) * (1 - fy) * at(x0, y0) + fx * (1 - fy) * at(x0 + 1, y0) +
         (1 - fx) * fy * at(x0, y0 + 1) + fx * fy * at(x0 + 1, y0 + 1);
}

}  // namespace

TEST_CASE("gabor kernel is zero-mean and unit-norm") {
  for (double lambda : {4.0, 5.5, 8.0, 16.0}) {
    for (double theta : {0.0, kPi / 8, kPi / 3, 7 * kPi / 8}) {
      for (double psi : {0.0, -kPi / 2, 1.0}) {
        const Kernel k = gabor_kernel({lambda, theta, 0.5, 0.56, psi});
        CHECK(std::abs(k.sum()) < 1e-9);
        CHECK(k.l2_norm() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(k.half_width() == static_cast<int>(std::ceil(3 * 0.56 * lambda)));
      }
    }
  }
}

TEST_CASE("even kernel at theta 0 is symmetric in y") {
  const Kernel k = gabor_kernel({4.0, 0.0, 0.5, 0.56, 0.0});
  for (int y = 0; y <= k.half_height(); ++y) {
    for (int x = -k.half_width(); x <= k.half_width(); ++x) {
      CHECK(k.at(x, y) == doctest::Approx(k.at(x, -y)).epsilon(1e-12));
    }
  }
}

TEST_CASE("oriented kernel equals the rotated theta-0 kernel") {
  const Kernel k0 = gabor_kernel({8.0, 0.0, 0.5, 0.56, 0.0});
  const Kernel k45 = gabor_kernel({8.0, kPi / 4, 0.5, 0.56, 0.0});
  const double c = std::cos(kPi / 4), s = std::sin(kPi / 4);
  // Compare shapes on the disc both square supports cover.
  const int r = k0.half_width() - 1;
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (int y = -r; y <= r; ++y) {
    for (int x = -r; x <= r; ++x) {
      if (x * x + y * y > r * r) continue;
      const double a = bilinear(k0, x * c + y * s, -x * s + y * c);
      const double b = k45.at(x, y);
      ab += a * b;
      aa += a * a;
      bb += b * b;
    }
  }
  const double similarity = ab / std::sqrt(aa * bb);
  MESSAGE("rotated-kernel similarity " << similarity);
  CHECK(similarity > 0.98);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(gabor_kernel({1.5, 0.0}), InvalidParameter);
  CHECK_THROWS_AS(gabor_kernel({8.0, 0.0, 0.0}), InvalidParameter);
  CHECK_THROWS_AS(gabor_kernel({8.0, kPi}), InvalidParameter);
  GaborBank bank = GaborBank::defaults();
  CHECK_NOTHROW(bank.validate());
  bank.lambdas = {8.0, 4.0};
  CHECK_THROWS_AS(bank.validate(), InvalidParameter);
  bank = GaborBank::defaults();
  bank.t1 = 1.5;
  CHECK_THROWS_AS(bank.validate(), InvalidParameter);
}

TEST_CASE("default bank") {
  const GaborBank bank = GaborBank::defaults();
  REQUIRE(bank.lambdas.size() == 5);
  REQUIRE(bank.thetas.size() == 8);
  CHECK(bank.lambdas[1] == doctest::Approx(4 * std::sqrt(2.0)));
  CHECK(bank.thetas[3] == doctest::Approx(3 * kPi / 8));
  CHECK(bank.t1 == 0.1);
  CHECK(bank.nearest_theta_index(kPi - 0.01) == 0);
  CHECK(bank.nearest_theta_index(-kPi / 8) == 7);
}

TEST_CASE("constant image has zero energy") {
  const GrayImage out = gabor_energy(GrayImage(64, 64, 0.6), 8.0, kPi / 8, {});
  CHECK(out.max_value() < 1e-9);
}

TEST_CASE("energy peaks at the grating's wavelength and orientation") {
  const GaborBank bank = GaborBank::defaults();
  for (std::size_t li : {1u, 2u, 3u}) {
    for (std::size_t ti : {0u, 3u, 6u}) {
      const GrayImage img = sine_grating(128, 128, bank.lambdas[li], bank.thetas[ti]);
      double best = -1.0;
      std::size_t bl = 99, bt = 99;
      for (std::size_t l = 0; l < bank.lambdas.size(); ++l) {
        for (std::size_t t = 0; t < bank.thetas.size(); ++t) {
          const double v = interior_max(gabor_energy(img, bank.lambdas[l], bank.thetas[t], {}), 28);
          if (v > best) {
            best = v;
            bl = l;
            bt = t;
          }
        }
      }
      CHECK(bl == li);
      CHECK(bt == ti);
    }
  }
}

TEST_CASE("orthogonal orientation responds weakly") {
  for (double theta : {0.0, kPi / 8, kPi / 4}) {
    const GrayImage img = sine_grating(128, 128, 8.0, theta);
    const double matched = interior_mean(gabor_energy(img, 8.0, theta, {}), 20);
    const double cross = interior_mean(gabor_energy(img, 8.0, theta + kPi / 2, {}), 20);
    CHECK(cross < 0.1 * matched);
  }
}

TEST_CASE("energy is phase invariant") {
  const GrayImage a = gabor_energy(sine_grating(96, 96, 8.0, kPi / 8), 8.0, kPi / 8, {});
  const double scale = interior_max(a, 20);
  for (double shift : {0.25, 0.5, 0.8}) {
    const GrayImage b =
        gabor_energy(sine_grating(96, 96, 8.0, kPi / 8, 2 * kPi * shift), 8.0, kPi / 8, {});
    double worst = 0.0;
    for (int y = 20; y < 76; ++y) {
      for (int x = 20; x < 76; ++x) worst = std::max(worst, std::abs(a(x, y) - b(x, y)));
    }
    CHECK(worst < 0.01 * scale);
  }
}

TEST_CASE("bank responses: thresholding") {
  const GrayImage img = sine_grating(96, 96, 8.0, 0.0);
  GaborBank bank{{8.0}, {0.0, kPi / 2}, 0.5, 0.56, 0.0};

  SUBCASE("t1 = 0 keeps raw energies") {
    const EnergyStack stack = bank_responses(img, bank, std::nullopt);
    CHECK(max_abs_diff(stack.channel(0, 0), gabor_energy(img, 8.0, 0.0, {})) < 1e-9);
    CHECK(max_abs_diff(stack.channel(0, 1), gabor_energy(img, 8.0, kPi / 2, {})) < 1e-9);
  }
  SUBCASE("t1 = 0.5 silences the orthogonal channel") {
    bank.t1 = 0.5;
    const EnergyStack stack = bank_responses(img, bank, std::nullopt);
    CHECK(stack.channel(0, 1).max_value() == 0.0);
    CHECK(stack.channel(0, 0).max_value() > 0.0);
  }
  SUBCASE("t1 = 1 keeps only the global maximum") {
    bank.t1 = 1.0;
    const EnergyStack raw = bank_responses(img, GaborBank{{8.0}, {0.0, kPi / 2}, 0.5, 0.56, 0.0},
                                           std::nullopt);
    const double top = raw.global_max();
    const EnergyStack stack = bank_responses(img, bank, std::nullopt);
    for (std::size_t t = 0; t < 2; ++t) {
      for (double v : stack.channel(0, t).pixels()) CHECK((v == 0.0 || v == top));
    }
    CHECK(stack.global_max() == top);
  }
}

TEST_CASE("bank responses equal per-channel energy then threshold") {
  std::mt19937_64 rng(4);
  const GrayImage img = cosfire::testing::random_image(80, 72, rng);
  const GaborBank bank = GaborBank::defaults();
  const EnergyStack stack = bank_responses(img, bank, std::nullopt);
  double top = 0.0;
  std::vector<GrayImage> raw;
  for (double l : bank.lambdas) {
    for (double t : bank.thetas) {
      raw.push_back(gabor_energy(img, l, t, bank.envelope()));
      top = std::max(top, raw.back().max_value());
    }
  }
  std::size_t i = 0;
  for (std::size_t l = 0; l < bank.lambdas.size(); ++l) {
    for (std::size_t t = 0; t < bank.thetas.size(); ++t, ++i) {
      const GrayImage& got = stack.channel(l, t);
      for (std::size_t p = 0; p < got.size(); ++p) {
        const double e = raw[i].pixels()[p];
        // values straddling the cut may differ by rounding; skip those
        if (std::abs(e - bank.t1 * top) < 1e-9) continue;
        CHECK(got.pixels()[p] == doctest::Approx(e < bank.t1 * top ? 0.0 : e).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("threshold is idempotent and energy non-negative") {
  std::mt19937_64 rng(7);
  const GrayImage img = cosfire::testing::random_image(64, 64, rng);
  GaborBank bank = GaborBank::defaults();
  bank.t1 = 0.0;
  EnergyStack once = bank_responses(img, bank, InhibitionParams{});
  threshold_stack(once, 0.3);
  EnergyStack twice = once;
  threshold_stack(twice, 0.3);
  for (std::size_t l = 0; l < bank.lambdas.size(); ++l) {
    for (std::size_t t = 0; t < bank.thetas.size(); ++t) {
      CHECK(once.channel(l, t) == twice.channel(l, t));
      CHECK(once.channel(l, t).min_value() >= 0.0);
    }
  }
}
