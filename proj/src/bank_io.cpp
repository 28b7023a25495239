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

#include "cosfire/bank_io.hpp"

#include <fstream>
#include <sstream>

#include "cosfire/error.hpp"
#include "json.hpp"

namespace cosfire {

using nlohmann::json;

namespace {

json tuple_json(const CosfireTuple& t) { return json::array({t.lambda, t.theta, t.rho, t.phi}); }

json filter_json(const CosfireFilter& f) {
  json tuples = json::array();
  for (const auto& t : f.tuples) tuples.push_back(tuple_json(t));
  json out = {
      {"name", f.name},
      {"tuples", std::move(tuples)},
      {"sigma0", f.sigma0},
      {"alpha_blur", f.alpha_blur},
      {"t2", f.t2},
      {"t3", f.t3},
      {"prototype_response", f.prototype_response},
  };
  out["weight_sigma"] = f.weight_sigma ? json(*f.weight_sigma) : json("uniform");
  return out;
}

// Reads fields while tracking where in the document they live, so errors can
// say "scenes[1].filters[0].t2: ..." instead of a bare type error.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  const json& node() const { return node_; }
  const std::string& path() const { return path_; }

  Reader field(std::string_view key) const {
    if (!node_.is_object()) fail("expected an object");
    auto it = node_.find(std::string(key));
    if (it == node_.end()) {
      throw ParseError(path_ + ": missing field '" + std::string(key) + "'");
    }
    return Reader(*it, join(path_, key));
  }

  bool has(std::string_view key) const {
    return node_.is_object() && node_.contains(std::string(key));
  }

  Reader element(std::size_t i) const {
    return Reader(node_.at(i), path_ + "[" + std::to_string(i) + "]");
  }

  std::size_t size() const {
    if (!node_.is_array()) fail("expected an array");
    return node_.size();
  }

  double number() const {
    if (!node_.is_number()) fail("expected a number");
    return node_.get<double>();
  }

  std::string string() const {
    if (!node_.is_string()) fail("expected a string");
    return node_.get<std::string>();
  }

  std::vector<double> numbers() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(element(i).number());
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(path_ + ": " + what);
  }

  [[noreturn]] void violated(const std::string& what) const {
    throw InvariantViolation(path_ + ": " + what);
  }

 private:
  static std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
  }

  const json& node_;
  std::string path_;
};

CosfireFilter read_filter(const Reader& r, const std::string& scene) {
  CosfireFilter f;
  f.name = r.field("name").string();
  f.scene = scene;
  const Reader tuples = r.field("tuples");
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const Reader t = tuples.element(i);
    if (t.size() != 4) t.fail("tuple must be [lambda, theta, rho, phi]");
    CosfireTuple tuple{t.element(0).number(), t.element(1).number(),
                       t.element(2).number(), t.element(3).number()};
    if (!(tuple.rho >= 0.0)) t.element(2).violated("rho must be >= 0");
    f.tuples.push_back(tuple);
  }
  f.sigma0 = r.field("sigma0").number();
  f.alpha_blur = r.field("alpha_blur").number();
  f.t2 = r.field("t2").number();
  f.t3 = r.field("t3").number();
  const Reader ws = r.field("weight_sigma");
  if (ws.node().is_string()) {
    if (ws.string() != "uniform") ws.fail("expected a number or \"uniform\"");
  } else {
    f.weight_sigma = ws.number();
  }
  f.prototype_response = r.field("prototype_response").number();
  try {
    f.validate();
  } catch (const InvalidParameter& e) {
    r.violated(e.what());
  }
  return f;
}

}  // namespace

std::string bank_to_json(const SceneBank& bank) {
  json inhibition = nullptr;
  if (bank.inhibition) {
    inhibition = {{"alpha", bank.inhibition->alpha},
                  {"surround_ratio", bank.inhibition->surround_ratio}};
  }
  json scenes = json::array();
  for (const auto& scene : bank.scenes) {
    json filters = json::array();
    for (const auto& f : scene.filters) filters.push_back(filter_json(f));
    scenes.push_back({{"name", scene.name},
                      {"detection_threshold", scene.detection_threshold},
                      {"filters", std::move(filters)}});
  }
  const json doc = {
      {"version", kBankFormatVersion},
      {"bank",
       {{"lambdas", bank.bank.lambdas},
        {"thetas", bank.bank.thetas},
        {"gamma", bank.bank.gamma},
        {"sigma_over_lambda", bank.bank.sigma_over_lambda},
        {"t1", bank.bank.t1},
        {"inhibition", std::move(inhibition)}}},
      {"scenes", std::move(scenes)},
  };
  return doc.dump(2) + "\n";
}

SceneBank bank_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number.
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + upto, '\n');
    throw ParseError("filter bank, line " + std::to_string(line) + ": " + e.what());
  }

  const Reader root(doc, "");
  if (!doc.is_object()) root.fail("filter bank must be a JSON object");
  const Reader version = root.field("version");
  if (!version.node().is_number_integer() || version.node().get<long long>() != kBankFormatVersion) {
    throw VersionError("unsupported filter bank version " + version.node().dump() +
                       " (expected " + std::to_string(kBankFormatVersion) + ")");
  }

  SceneBank bank;
  const Reader b = root.field("bank");
  bank.bank.lambdas = b.field("lambdas").numbers();
  bank.bank.thetas = b.field("thetas").numbers();
  bank.bank.gamma = b.field("gamma").number();
  bank.bank.sigma_over_lambda = b.field("sigma_over_lambda").number();
  bank.bank.t1 = b.field("t1").number();
  bank.inhibition.reset();
  if (b.has("inhibition") && !b.field("inhibition").node().is_null()) {
    const Reader inh = b.field("inhibition");
    bank.inhibition = InhibitionParams{inh.field("alpha").number(),
                                       inh.field("surround_ratio").number()};
  }

  const Reader scenes = root.field("scenes");
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    const Reader s = scenes.element(i);
    Scene scene;
    scene.name = s.field("name").string();
    scene.detection_threshold = s.field("detection_threshold").number();
    const Reader filters = s.field("filters");
    for (std::size_t j = 0; j < filters.size(); ++j) {
      scene.filters.push_back(read_filter(filters.element(j), scene.name));
    }
    bank.scenes.push_back(std::move(scene));
  }
  try {
    bank.validate();
  } catch (const InvalidParameter& e) {
    throw InvariantViolation(std::string("filter bank: ") + e.what());
  }
  return bank;
}

void save_bank(const SceneBank& bank, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write filter bank: " + path.string());
  out << bank_to_json(bank);
  if (!out) throw InvalidInput("cannot write filter bank: " + path.string());
}

SceneBank load_bank(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read filter bank: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return bank_from_json(text.str());
  } catch (const ParseError& e) {
    // Keep the concrete error type while naming the file.
    if (dynamic_cast<const VersionError*>(&e)) throw VersionError(path.string() + ": " + e.what());
    if (dynamic_cast<const InvariantViolation*>(&e)) {
      throw InvariantViolation(path.string() + ": " + e.what());
    }
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace cosfire
