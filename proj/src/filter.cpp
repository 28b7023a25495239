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

#include "cosfire/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cosfire/error.hpp"

namespace cosfire {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double angle, double period) {
  double r = std::fmod(angle, period);
  if (r < 0.0) r += period;
  if (r >= period) r = 0.0;
  return r;
}

// Bilinear sample; zero outside the raster.
double sample(const GrayImage& image, double x, double y) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;
  return (1 - fx) * (1 - fy) * image.at_or_zero(x0, y0) +
         fx * (1 - fy) * image.at_or_zero(x0 + 1, y0) +
         (1 - fx) * fy * image.at_or_zero(x0, y0 + 1) +
         fx * fy * image.at_or_zero(x0 + 1, y0 + 1);
}

// Indices of strict local maxima of a circular sequence. A run of equal
// values counts once, at its middle.
std::vector<std::size_t> circular_peaks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> peaks;
  if (n < 3) return peaks;
  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] != v[(i + n - 1) % n]) {
      start = i;
      break;
    }
  }
  if (start == n) return peaks;  // flat

  std::size_t i = 0;
  while (i < n) {
    const std::size_t a = (start + i) % n;
    std::size_t len = 1;
    while (len < n && v[(a + len) % n] == v[a]) ++len;
    const double left = v[(a + n - 1) % n];
    const double right = v[(a + len) % n];
    if (v[a] > left && v[a] > right) peaks.push_back((a + len / 2) % n);
    i += len;
  }
  return peaks;
}

struct PositionTuple {
  double rho;
  double phi;
  double x;
  double y;
};

}  // namespace

double CosfireFilter::tuple_weight(double rho) const {
  if (!weight_sigma) return 1.0;
  return std::exp(-(rho * rho) / (2.0 * *weight_sigma * *weight_sigma));
}

void CosfireFilter::validate(bool require_configured) const {
  const std::string who = "filter '" + name + "': ";
  if (tuples.empty()) throw InvalidParameter(who + "no tuples");
  for (const auto& t : tuples) {
    if (!(t.rho >= 0.0)) throw InvalidParameter(who + "tuple rho must be >= 0");
    if (!(t.phi >= 0.0 && t.phi < kTwoPi)) {
      throw InvalidParameter(who + "tuple phi must lie in [0, 2 pi)");
    }
    if (!(t.lambda >= 2.0)) throw InvalidParameter(who + "tuple lambda must be >= 2");
    if (!(t.theta >= 0.0 && t.theta < kPi)) {
      throw InvalidParameter(who + "tuple theta must lie in [0, pi)");
    }
  }
  if (!(sigma0 > 0.0)) throw InvalidParameter(who + "sigma0 must be positive");
  if (!(alpha_blur >= 0.0)) throw InvalidParameter(who + "alpha_blur must be >= 0");
  if (!(t2 >= 0.0 && t2 <= 1.0)) throw InvalidParameter(who + "t2 must lie in [0, 1]");
  if (!(t3 >= 0.0 && t3 <= 1.0)) throw InvalidParameter(who + "t3 must lie in [0, 1]");
  if (weight_sigma && !(*weight_sigma > 0.0)) {
    throw InvalidParameter(who + "weight_sigma must be positive");
  }
  if (require_configured && !(prototype_response > 0.0)) {
    throw InvalidParameter(who + "prototype_response must be positive");
  }
}

void ConfigSpec::validate() const {
  bank.validate();
  if (inhibition) inhibition->validate();
  if (radii.empty() || radii.front() != 0.0) {
    throw InvalidParameter("config: radii must start with 0");
  }
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) {
      throw InvalidParameter("config: radii must be strictly ascending");
    }
  }
  if (!(angular_step > 0.0 && angular_step <= kPi / 8.0 + 1e-12)) {
    throw InvalidParameter("config: angular step must lie in (0, pi/8]");
  }
  if (!(t2 >= 0.0 && t2 <= 1.0)) throw InvalidParameter("config: t2 must lie in [0, 1]");
  if (!(t3 >= 0.0 && t3 <= 1.0)) throw InvalidParameter("config: t3 must lie in [0, 1]");
  if (!(sigma0 > 0.0)) throw InvalidParameter("config: sigma0 must be positive");
  if (!(alpha_blur >= 0.0)) throw InvalidParameter("config: alpha_blur must be >= 0");
  if (weight_sigma && !(*weight_sigma > 0.0)) {
    throw InvalidParameter("config: weight_sigma must be positive");
  }
}

ResponseCache::ResponseCache(const GrayImage& image, const FilterContext& context)
    : ResponseCache(bank_responses(image, context.bank, context.inhibition)) {}

ResponseCache::ResponseCache(EnergyStack stack) : stack_(std::move(stack)) {
  lookup_.lambdas = stack_.lambdas();
  lookup_.thetas = stack_.thetas();
}

const GrayImage& ResponseCache::blurred(double lambda, double theta, double sigma) {
  const auto li = lookup_.lambda_index(lambda);
  const auto ti = lookup_.theta_index(theta);
  if (!li || !ti) {
    throw InvalidInput("channel (lambda " + std::to_string(lambda) + ", theta " +
                       std::to_string(theta) + ") is not in the bank");
  }
  const auto key = std::make_tuple(*li, *ti, sigma);
  auto it = blurred_.find(key);
  if (it == blurred_.end()) {
    it = blurred_.emplace(key, weighted_max_blur(stack_.channel(*li, *ti), sigma)).first;
  }
  return it->second;
}

GrayImage shift_image(const GrayImage& image, int dx, int dy) {
  GrayImage out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    const int sy = y - dy;
    if (sy < 0 || sy >= image.height()) continue;
    for (int x = 0; x < image.width(); ++x) {
      const int sx = x - dx;
      if (sx < 0 || sx >= image.width()) continue;
      out(x, y) = image(sx, sy);
    }
  }
  return out;
}

CosfireFilter configure_filter(const GrayImage& prototype, Keypoint keypoint,
                               const ConfigSpec& spec, std::string name,
                               std::string scene) {
  spec.validate();
  const double max_rho = spec.radii.back();
  const int margin = static_cast<int>(std::ceil(max_rho)) + spec.bank.max_radius();
  if (keypoint.x < margin || keypoint.y < margin ||
      keypoint.x > prototype.width() - 1 - margin ||
      keypoint.y > prototype.height() - 1 - margin) {
    throw InvalidKeypoint("keypoint (" + std::to_string(keypoint.x) + "," +
                          std::to_string(keypoint.y) + ") of '" + name +
                          "' must be at least " + std::to_string(margin) +
                          " pixels inside the " + std::to_string(prototype.width()) +
                          "x" + std::to_string(prototype.height()) + " prototype");
  }

  EnergyStack stack = bank_responses(prototype, spec.bank, spec.inhibition);
  const auto& lambdas = stack.lambdas();
  const auto& thetas = stack.thetas();

  GrayImage strongest(prototype.width(), prototype.height());
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      const auto src = stack.channel(l, t).pixels();
      auto dst = strongest.pixels();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::max(dst[i], src[i]);
    }
  }

  // Reference level: strongest response in the disc the filter covers.
  double neighborhood_max = 0.0;
  const int reach = static_cast<int>(std::ceil(max_rho));
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      if (dx * dx + dy * dy > max_rho * max_rho) continue;
      neighborhood_max =
          std::max(neighborhood_max, strongest(keypoint.x + dx, keypoint.y + dy));
    }
  }
  const auto featureless = [&] {
    return ConfigurationFailed("prototype region of '" + name + "' at (" +
                               std::to_string(keypoint.x) + "," +
                               std::to_string(keypoint.y) + ") has no usable structure");
  };
  if (!(neighborhood_max > 0.0)) throw featureless();
  const double cut = spec.t2 * neighborhood_max;

  std::vector<PositionTuple> positions;
  for (double rho : spec.radii) {
    if (rho == 0.0) {
      const double v = strongest(keypoint.x, keypoint.y);
      if (v > 0.0 && v >= cut) {
        positions.push_back({0.0, 0.0, double(keypoint.x), double(keypoint.y)});
      }
      continue;
    }
    const auto samples = static_cast<std::size_t>(std::lround(kTwoPi / spec.angular_step));
    std::vector<double> ring(samples);
    for (std::size_t j = 0; j < samples; ++j) {
      const double phi = kTwoPi * static_cast<double>(j) / static_cast<double>(samples);
      ring[j] = sample(strongest, keypoint.x + rho * std::cos(phi),
                       keypoint.y + rho * std::sin(phi));
    }
    for (std::size_t j : circular_peaks(ring)) {
      if (!(ring[j] > 0.0 && ring[j] >= cut)) continue;
      const double phi = kTwoPi * static_cast<double>(j) / static_cast<double>(samples);
      positions.push_back({rho, phi, keypoint.x + rho * std::cos(phi),
                           keypoint.y + rho * std::sin(phi)});
    }
  }

  CosfireFilter filter;
  filter.name = std::move(name);
  filter.scene = std::move(scene);
  filter.sigma0 = spec.sigma0;
  filter.alpha_blur = spec.alpha_blur;
  filter.t2 = spec.t2;
  filter.t3 = spec.t3;
  filter.weight_sigma = spec.weight_sigma;

  for (const auto& p : positions) {
    std::vector<double> values(lambdas.size() * thetas.size());
    double best = 0.0;
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      for (std::size_t t = 0; t < thetas.size(); ++t) {
        const double v = sample(stack.channel(l, t), p.x, p.y);
        values[l * thetas.size() + t] = v;
        best = std::max(best, v);
      }
    }
    if (!(best > 0.0)) continue;
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      for (std::size_t t = 0; t < thetas.size(); ++t) {
        const double v = values[l * thetas.size() + t];
        if (v > 0.0 && v >= spec.t2 * best) {
          filter.tuples.push_back({lambdas[l], thetas[t], p.rho, p.phi});
        }
      }
    }
  }
  if (filter.tuples.empty()) throw featureless();

  ResponseCache cache(std::move(stack));
  filter.prototype_response = apply_filter(cache, filter).max_value();
  if (!(filter.prototype_response > 0.0)) throw featureless();
  return filter;
}

std::vector<GrayImage> subunit_responses(ResponseCache& cache, const CosfireFilter& filter) {
  std::vector<GrayImage> out;
  out.reserve(filter.tuples.size());
  for (const auto& t : filter.tuples) {
    const GrayImage& blurred = cache.blurred(t.lambda, t.theta, filter.blur_sigma(t.rho));
    // Evidence found at keypoint + (rho cos phi, rho sin phi) is moved onto
    // the keypoint.
    const int dx = static_cast<int>(std::lround(t.rho * std::cos(t.phi)));
    const int dy = static_cast<int>(std::lround(t.rho * std::sin(t.phi)));
    out.push_back(shift_image(blurred, -dx, -dy));
  }
  return out;
}

GrayImage combine_subunits(std::span<const GrayImage> subunits,
                           std::span<const double> weights) {
  if (subunits.empty()) throw InvalidInput("combine_subunits: no subunits");
  if (subunits.size() != weights.size()) {
    throw InvalidInput("combine_subunits: one weight per subunit required");
  }
  double weight_sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw InvalidParameter("combine_subunits: weights must be positive");
    weight_sum += w;
  }
  const int width = subunits.front().width();
  const int height = subunits.front().height();
  for (const auto& s : subunits) {
    if (s.width() != width || s.height() != height) {
      throw InvalidInput("combine_subunits: subunit sizes differ");
    }
  }

  GrayImage out(width, height);
  auto dst = out.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    double log_sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    bool vanished = false;
    for (std::size_t k = 0; k < subunits.size(); ++k) {
      const double v = subunits[k].pixels()[i];
      if (!(v > 0.0)) {
        vanished = true;
        break;
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      log_sum += weights[k] * std::log(v);
    }
    // Clamping only absorbs rounding; the mean always lies in [lo, hi].
    dst[i] = vanished ? 0.0 : std::clamp(std::exp(log_sum / weight_sum), lo, hi);
  }
  return out;
}

GrayImage apply_filter(ResponseCache& cache, const CosfireFilter& filter) {
  const auto subunits = subunit_responses(cache, filter);
  std::vector<double> weights;
  weights.reserve(filter.tuples.size());
  for (const auto& t : filter.tuples) weights.push_back(filter.tuple_weight(t.rho));
  GrayImage response = combine_subunits(subunits, weights);
  const double cut = filter.t3 * response.max_value();
  for (double& v : response.pixels()) {
    if (v < cut) v = 0.0;
  }
  return response;
}

GrayImage apply_filter(const GrayImage& image, const CosfireFilter& filter,
                       const FilterContext& context) {
  ResponseCache cache(image, context);
  return apply_filter(cache, filter);
}

CosfireFilter rotate_filter(const CosfireFilter& filter, double psi, const GaborBank& bank) {
  CosfireFilter rotated = filter;
  for (auto& t : rotated.tuples) {
    t.theta = bank.thetas[bank.nearest_theta_index(wrap(t.theta + psi, kPi))];
    t.phi = wrap(t.phi + psi, kTwoPi);
  }
  return rotated;
}

GrayImage rotation_tolerant_apply(ResponseCache& cache, const CosfireFilter& filter,
                                  std::span<const double> psis) {
  if (psis.empty()) throw InvalidParameter("rotation set must not be empty");
  if (std::none_of(psis.begin(), psis.end(), [](double p) { return p == 0.0; })) {
    throw InvalidParameter("rotation set must contain 0");
  }
  GaborBank bank;
  bank.lambdas = cache.stack().lambdas();
  bank.thetas = cache.stack().thetas();

  GrayImage best;
  for (double psi : psis) {
    GrayImage r = psi == 0.0 ? apply_filter(cache, filter)
                             : apply_filter(cache, rotate_filter(filter, psi, bank));
    if (best.empty()) {
      best = std::move(r);
      continue;
    }
    auto dst = best.pixels();
    auto src = r.pixels();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::max(dst[i], src[i]);
  }
  return best;
}

GrayImage rotation_tolerant_apply(const GrayImage& image, const CosfireFilter& filter,
                                  const FilterContext& context,
                                  std::span<const double> psis) {
  ResponseCache cache(image, context);
  return rotation_tolerant_apply(cache, filter, psis);
}

}  // namespace cosfire
