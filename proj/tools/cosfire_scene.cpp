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

// cosfire-scene: batch command-line front end for the scene recognition pipeline.

#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cosfire/bank_io.hpp"
#include "cosfire/corpus.hpp"
#include "cosfire/error.hpp"
#include "cosfire/imaging.hpp"
#include "cosfire/metrics.hpp"
#include "cosfire/records.hpp"
#include "cosfire/scene.hpp"
#include "cosfire/timeline.hpp"

namespace fs = std::filesystem;
using namespace cosfire;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void setup_logging() {
  auto logger = spdlog::stderr_logger_st("cosfire-scene");
  logger->set_pattern("%l: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("COSFIRE_SCENE_LOG")) {
    const std::string value = env;
    static const std::map<std::string, spdlog::level::level_enum> levels = {
        {"error", spdlog::level::err},
        {"warn", spdlog::level::warn},
        {"info", spdlog::level::info},
        {"debug", spdlog::level::debug}};
    if (auto it = levels.find(value); it != levels.end()) {
      spdlog::set_level(it->second);
    } else {
      spdlog::warn("ignoring COSFIRE_SCENE_LOG={} (expected error, warn, info or debug)", value);
    }
  }
}

std::vector<double> parse_doubles(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError(fmt::format("{}: '{}' is not a number", flag, item));
    }
  }
  if (out.empty()) throw UsageError(flag + ": empty list");
  return out;
}

// Radians, written either as a number or as a multiple of pi: pi/8, -2pi/8, 0.5*pi.
double parse_angle(const std::string& text) {
  static const std::regex pi_form(R"(^([+-]?)(\d*\.?\d*)\*?pi(?:/(\d+\.?\d*))?$)");
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    double value = std::numbers::pi;
    if (m[2].length() > 0) value *= std::stod(m[2]);
    if (m[3].matched) value /= std::stod(m[3]);
    return m[1] == "-" ? -value : value;
  }
  return parse_doubles(text, "--psis").front();
}

Keypoint parse_keypoint(const std::string& text) {
  const auto v = parse_doubles(text, "--keypoint");
  if (v.size() != 2 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1])) {
    throw UsageError(fmt::format("--keypoint expects integer x,y, got '{}'", text));
  }
  return {static_cast<int>(v[0]), static_cast<int>(v[1])};
}

// Output goes to the named file, or standard output when the name is empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InvalidInput("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish(const std::string& path) {
    stream().flush();
    if (!stream()) throw InvalidInput("failed writing " + (path.empty() ? "<stdout>" : path));
  }

 private:
  std::ofstream file_;
};

void write_stamp(std::ostream& out, bool deterministic) {
  if (deterministic) return;
  const auto now = std::chrono::time_point_cast<std::chrono::seconds>(
      std::chrono::system_clock::now());
  out << "# generated_at " << format_timestamp(now) << '\n';
}

// configure --------------------------------------------------------------

struct ConfigureArgs {
  std::vector<std::string> images;
  std::vector<std::string> keypoints;
  std::vector<std::string> scenes;
  std::vector<std::string> names;
  std::string prototypes;
  std::string out;
  std::string radii;
  std::string lambdas;
  int orientations = 8;
  double t1 = 0.1;
  double t2 = 0.75;
  double t3 = 0.25;
  double sigma0 = 0.67;
  double alpha_blur = 0.1;
  std::optional<double> weight_sigma;
  double inhibition_alpha = 1.0;
  double inhibition_ratio = 4.0;
  bool no_inhibition = false;
  double detection_threshold = 0.25;
};

struct PrototypeEntry {
  std::string image;
  Keypoint keypoint;
  std::string scene;
  std::string name;
};

std::vector<PrototypeEntry> collect_prototypes(const ConfigureArgs& a) {
  std::vector<PrototypeEntry> entries;
  const std::size_t n = a.images.size();
  if (a.keypoints.size() != n || a.scenes.size() != n || a.names.size() != n) {
    throw UsageError(fmt::format(
        "each prototype needs --image, --keypoint, --scene and --name (got {}, {}, {}, {})", n,
        a.keypoints.size(), a.scenes.size(), a.names.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    entries.push_back({a.images[i], parse_keypoint(a.keypoints[i]), a.scenes[i], a.names[i]});
  }
  if (!a.prototypes.empty()) {
    const fs::path list(a.prototypes);
    const CsvTable table = read_csv_file(list);
    const std::vector<std::string> expected{"image", "x", "y", "scene", "name"};
    if (table.header != expected) {
      throw ParseError(list.string() + ": expected header image,x,y,scene,name");
    }
    for (const auto& row : table.rows) {
      fs::path image = row.fields[0];
      if (image.is_relative()) image = list.parent_path() / image;
      PrototypeEntry e{image.string(), {}, row.fields[3], row.fields[4]};
      try {
        e.keypoint = parse_keypoint(row.fields[1] + "," + row.fields[2]);
      } catch (const UsageError&) {
        throw ParseError(fmt::format("{}:{}: bad keypoint", list.string(), row.line));
      }
      entries.push_back(std::move(e));
    }
  }
  return entries;
}

int cmd_configure(const ConfigureArgs& a) {
  const auto entries = collect_prototypes(a);
  if (entries.empty()) throw UsageError("empty bank: no prototypes given");
  std::map<std::string, std::size_t> seen;
  for (const auto& e : entries) {
    if (++seen[e.name] > 1) throw UsageError("duplicate filter name '" + e.name + "'");
  }

  ConfigSpec spec;
  if (!a.radii.empty()) spec.radii = parse_doubles(a.radii, "--radii");
  if (!a.lambdas.empty()) spec.bank.lambdas = parse_doubles(a.lambdas, "--lambdas");
  if (a.orientations < 1) throw UsageError("--orientations must be positive");
  spec.bank.thetas.clear();
  for (int k = 0; k < a.orientations; ++k) {
    spec.bank.thetas.push_back(k * std::numbers::pi / a.orientations);
  }
  spec.bank.t1 = a.t1;
  spec.t2 = a.t2;
  spec.t3 = a.t3;
  spec.sigma0 = a.sigma0;
  spec.alpha_blur = a.alpha_blur;
  spec.weight_sigma = a.weight_sigma;
  if (a.no_inhibition) {
    spec.inhibition.reset();
  } else {
    spec.inhibition = InhibitionParams{a.inhibition_alpha, a.inhibition_ratio};
  }
  spec.validate();

  SceneBank bank;
  bank.bank = spec.bank;
  bank.inhibition = spec.inhibition;

  std::map<std::string, GrayImage> loaded;
  for (const auto& e : entries) {
    auto it = loaded.find(e.image);
    if (it == loaded.end()) it = loaded.emplace(e.image, load_image(e.image)).first;
    CosfireFilter filter;
    try {
      filter = configure_filter(it->second, e.keypoint, spec, e.name, e.scene);
    } catch (const Error& err) {
      throw ConfigurationFailed(fmt::format("prototype {} at ({},{}) for filter '{}': {}",
                                            e.image, e.keypoint.x, e.keypoint.y, e.name,
                                            err.what()));
    }
    std::cout << fmt::format("{}\t{}\ttuples={}\tprototype_response={:.6g}\n", filter.scene,
                             filter.name, filter.tuples.size(), filter.prototype_response);
    Scene* scene = nullptr;
    for (auto& s : bank.scenes) {
      if (s.name == e.scene) scene = &s;
    }
    if (scene == nullptr) {
      bank.scenes.push_back({e.scene, a.detection_threshold, {}});
      scene = &bank.scenes.back();
    }
    scene->filters.push_back(std::move(filter));
  }
  bank.validate();
  save_bank(bank, a.out);
  for (const auto& s : bank.scenes) {
    spdlog::info("scene {}: {} filter(s)", s.name, s.filters.size());
  }
  spdlog::info("wrote {}", a.out);
  return kExitOk;
}

// label -------------------------------------------------------------------

struct LabelArgs {
  std::string manifest;
  std::string bank;
  std::string out;
  std::string psis;
  int rotation_steps = 0;
  std::optional<double> detection_threshold;
  int resize_max = 0;
  int jobs = 0;
};

int cmd_label(const LabelArgs& a, bool deterministic) {
  const SceneBank bank = load_bank(a.bank);
  const auto manifest = read_manifest(a.manifest);

  LabelOptions options;
  if (!a.psis.empty() && a.rotation_steps > 0) {
    throw UsageError("--psis and --rotation-steps are mutually exclusive");
  }
  const double step = std::numbers::pi / static_cast<double>(bank.bank.thetas.size());
  if (!a.psis.empty()) {
    options.psis.clear();
    std::stringstream ss(a.psis);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const double psi = parse_angle(item);
      const double steps = psi / step;
      if (std::abs(steps - std::round(steps)) > 1e-6) {
        throw UsageError(fmt::format(
            "--psis: {} is not a multiple of the bank orientation step pi/{}", item,
            bank.bank.thetas.size()));
      }
      options.psis.push_back(std::round(steps) * step);
    }
    if (std::find(options.psis.begin(), options.psis.end(), 0.0) == options.psis.end()) {
      throw UsageError("--psis must include 0");
    }
  } else if (a.rotation_steps > 0) {
    options.psis.clear();
    for (int i = -a.rotation_steps; i <= a.rotation_steps; ++i) options.psis.push_back(i * step);
  }
  options.detection_threshold = a.detection_threshold;
  if (a.resize_max < 0) throw UsageError("--resize-max must be non-negative");

  std::vector<FrameSource> sources;
  for (const auto& m : manifest) {
    const fs::path path = m.path;
    const int resize_max = a.resize_max;
    sources.push_back({m.frame_id, m.timestamp, [path, resize_max] {
                         GrayImage image = load_image(path);
                         return resize_max > 0 ? resize_to_max(image, resize_max) : image;
                       }});
  }
  const int jobs =
      a.jobs > 0 ? a.jobs : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  spdlog::info("labelling {} frame(s) against {} scene(s), {} filter(s), {} worker(s)",
               sources.size(), bank.scenes.size(), bank.filter_count(), jobs);

  const auto started = std::chrono::steady_clock::now();
  const auto results = label_sources(sources, bank, options, jobs);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  LabelTable table;
  for (const auto& s : bank.scenes) table.scenes.push_back(s.name);
  int warnings = 0;
  for (const auto& r : results) {
    if (r.error) {
      ++warnings;
      spdlog::warn("frame {}: {}; labelled {}", r.label.frame_id, *r.error, kUnknownLabel);
    }
    spdlog::debug("frame {} -> {}", r.label.frame_id, r.label.label);
    table.labels.push_back(r.label);
  }
  Output out(a.out);
  write_stamp(out.stream(), deterministic);
  write_labels(out.stream(), table);
  out.finish(a.out);
  spdlog::info("labelled {} frame(s) in {:.2f}s", results.size(), seconds);
  if (warnings > 0) spdlog::warn("{} frame(s) could not be read", warnings);
  return kExitOk;
}

// smooth / segment / evaluate -----------------------------------------------

int cmd_smooth(const std::string& labels, int k, const std::string& out_path,
               bool deterministic) {
  SmoothingParams params{k};
  params.validate();
  LabelTable table = read_labels(labels);
  const auto filled = fill_holes(table.labels, params);
  int changed = 0;
  for (std::size_t i = 0; i < filled.size(); ++i) {
    if (filled[i].label != table.labels[i].label) ++changed;
  }
  table.labels = filled;
  Output out(out_path);
  write_stamp(out.stream(), deterministic);
  write_labels(out.stream(), table);
  out.finish(out_path);
  spdlog::info("filled {} hole(s) with k={}", changed, k);
  return kExitOk;
}

int cmd_segment(const std::string& labels, const std::string& out_path, bool deterministic) {
  const LabelTable table = read_labels(labels);
  const auto events = segment_events(table.labels);
  Output out(out_path);
  write_stamp(out.stream(), deterministic);
  write_events(out.stream(), events);
  out.finish(out_path);
  spdlog::info("{} event(s)", events.size());
  return kExitOk;
}

int cmd_evaluate(const std::string& labels, const std::string& truth_path,
                 const std::string& json_path) {
  const LabelTable table = read_labels(labels);
  const auto truth = read_truth(truth_path);
  std::vector<std::string> scenes = table.scenes;
  for (const auto& t : truth) {
    if (t.label != kUnknownLabel &&
        std::find(scenes.begin(), scenes.end(), t.label) == scenes.end()) {
      scenes.push_back(t.label);
    }
  }
  std::vector<SceneScore> scores;
  for (const auto& s : scenes) scores.push_back(evaluate_scene(table.labels, truth, s));
  const EvalReport report = summary_report(std::move(scores));
  std::cout << format_table(report);
  if (!json_path.empty()) {
    Output out(json_path);
    out.stream() << report_json(report) << '\n';
    out.finish(json_path);
  }
  return kExitOk;
}

// gen-corpus -----------------------------------------------------------------

int cmd_gen_corpus(const std::string& dir, const corpus::CorpusSpec& spec) {
  const auto generated = corpus::generate_corpus(spec);
  corpus::write_corpus(generated, dir);
  const auto tc = corpus::texture_vs_contour();
  save_image(fs::path(dir) / "texture_contour.png", tc.image);
  std::size_t keypoints = 0;
  for (const auto& p : generated.prototypes) keypoints += p.keypoints.size();
  spdlog::info("wrote {} frame(s), {} prototype image(s), {} keypoint(s) under {}",
               generated.frames.size(), generated.prototypes.size(), keypoints, dir);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Familiar-scene recognition in photo streams with COSFIRE filters"};
  app.set_version_flag("--version", "cosfire-scene 0.1.0");
  app.require_subcommand(1);
  bool deterministic = false;
  app.add_flag("--deterministic", deterministic,
               "Omit the generated_at comment from CSV outputs");

  ConfigureArgs ca;
  auto* configure = app.add_subcommand("configure", "Build a filter bank from prototype keypoints");
  configure->add_option("--image", ca.images, "Prototype image (repeatable)");
  configure->add_option("--keypoint", ca.keypoints, "Keypoint x,y for the matching --image");
  configure->add_option("--scene", ca.scenes, "Scene of the matching --image");
  configure->add_option("--name", ca.names, "Filter name for the matching --image");
  configure->add_option("--prototypes", ca.prototypes,
                        "CSV with columns image,x,y,scene,name (paths relative to the file)")
      ->check(CLI::ExistingFile);
  configure->add_option("--out", ca.out, "Bank file to write")->required();
  configure->add_option("--radii", ca.radii, "Comma-separated scan radii")
      ->default_str("0,5,10,20");
  configure->add_option("--lambdas", ca.lambdas, "Comma-separated Gabor wavelengths")
      ->default_str("4,5.657,8,11.31,16");
  configure->add_option("--orientations", ca.orientations, "Gabor orientations over [0, pi)")
      ->capture_default_str();
  configure->add_option("--t1", ca.t1, "Channel threshold fraction")->capture_default_str();
  configure->add_option("--t2", ca.t2, "Tuple selection fraction")->capture_default_str();
  configure->add_option("--t3", ca.t3, "Response threshold fraction")->capture_default_str();
  configure->add_option("--sigma0", ca.sigma0, "Blur sigma at the centre")->capture_default_str();
  configure->add_option("--alpha-blur", ca.alpha_blur, "Blur growth per pixel of radius")
      ->capture_default_str();
  configure->add_option("--weight-sigma", ca.weight_sigma,
                        "Tuple weight spread (uniform weights when omitted)");
  configure->add_option("--inhibition-alpha", ca.inhibition_alpha, "Surround suppression strength")
      ->capture_default_str();
  configure->add_option("--inhibition-ratio", ca.inhibition_ratio,
                        "Outer / inner surround sigma")
      ->capture_default_str();
  configure->add_flag("--no-inhibition", ca.no_inhibition, "Disable surround suppression");
  configure->add_option("--detection-threshold", ca.detection_threshold,
                        "Per-scene fraction of prototype response")
      ->capture_default_str();

  LabelArgs la;
  auto* label = app.add_subcommand("label", "Label every frame of a manifest");
  label->add_option("--manifest", la.manifest, "CSV frame_id,path,timestamp")
      ->required()
      ->check(CLI::ExistingFile);
  label->add_option("--bank", la.bank, "Filter bank file")->required()->check(CLI::ExistingFile);
  label->add_option("--out", la.out, "Labels CSV (standard output when omitted)");
  label->add_option("--psis", la.psis,
                    "Comma-separated filter rotations (radians or pi/n), multiples of the "
                    "orientation step, including 0");
  label->add_option("--rotation-steps", la.rotation_steps,
                    "Try rotations of -n..n orientation steps");
  label->add_option("--detection-threshold", la.detection_threshold,
                    "Override every scene's detection threshold");
  label->add_option("--resize-max", la.resize_max, "Downscale frames to this longest side");
  label->add_option("--jobs", la.jobs, "Worker threads (default: all cores)");

  std::string smooth_labels, smooth_out;
  int smooth_k = 2;
  auto* smooth = app.add_subcommand("smooth", "Fill short unknown gaps between equal labels");
  smooth->add_option("--labels", smooth_labels, "Labels CSV")->required()->check(CLI::ExistingFile);
  smooth->add_option("--k", smooth_k, "Frames inspected on each side")->capture_default_str();
  smooth->add_option("--out", smooth_out, "Labels CSV (standard output when omitted)");

  std::string segment_labels, segment_out;
  auto* segment = app.add_subcommand("segment", "Group consecutive labels into events");
  segment->add_option("--labels", segment_labels, "Labels CSV")
      ->required()
      ->check(CLI::ExistingFile);
  segment->add_option("--out", segment_out, "Events CSV (standard output when omitted)");

  std::string eval_labels, eval_truth, eval_json;
  auto* evaluate = app.add_subcommand("evaluate", "Score labels against ground truth");
  evaluate->add_option("--labels", eval_labels, "Labels CSV")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--truth", eval_truth, "CSV frame_id,label")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--json", eval_json, "Also write the full-precision report here");

  std::string corpus_dir;
  corpus::CorpusSpec corpus_spec;
  auto* gen = app.add_subcommand("gen-corpus", "Write the synthetic two-scene test corpus");
  gen->add_option("--out", corpus_dir, "Output directory")->required();
  gen->add_option("--frames", corpus_spec.frame_count, "Number of frames")->capture_default_str();
  gen->add_option("--seed", corpus_spec.seed, "Random seed")->capture_default_str();
  gen->add_option("--width", corpus_spec.width, "Frame width")->capture_default_str();
  gen->add_option("--height", corpus_spec.height, "Frame height")->capture_default_str();
  gen->add_option("--spacing", corpus_spec.spacing_seconds, "Seconds between frames")
      ->capture_default_str();
  gen->add_option("--distractor-fraction", corpus_spec.distractor_fraction,
                  "Share of blank or texture frames")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*configure) return cmd_configure(ca);
    if (*label) return cmd_label(la, deterministic);
    if (*smooth) return cmd_smooth(smooth_labels, smooth_k, smooth_out, deterministic);
    if (*segment) return cmd_segment(segment_labels, segment_out, deterministic);
    if (*evaluate) return cmd_evaluate(eval_labels, eval_truth, eval_json);
    if (*gen) return cmd_gen_corpus(corpus_dir, corpus_spec);
  } catch (const UsageError& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  } catch (const InvalidParameter& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitData;
  }
  return kExitUsage;
}
