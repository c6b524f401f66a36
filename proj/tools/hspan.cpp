// hspan: dataset preparation, pansharpening, evaluation and rendering.
//
// Exit codes: 0 success, 1 I/O or internal error, 2 validation error,
// 3 partial failure (some evaluation items errored).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hspan/hspan.hpp"

namespace fs = std::filesystem;
using namespace hspan;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kValidation = 2;
constexpr int kPartial = 3;

MtfSpec mtf_from(double gnyq, int ratio, bool no_mtf) {
  MtfSpec spec;
  spec.nyquist_gain = gnyq;
  spec.ratio = ratio;
  if (no_mtf) spec.shape = MtfShape::ideal;
  spec.validate();
  return spec;
}

Roi parse_roi(const std::vector<std::size_t>& v) {
  detail::require(v.size() == 4, "--roi expects x,y,w,h");
  return Roi{v[0], v[1], v[2], v[3]};
}

struct PrepareArgs {
  fs::path scenes, out;
  double invalid_threshold = 0.05;
  std::size_t hs_tile = 384, pan_tile = 2304;
  int ratio = 6;
  bool rr = false, no_mtf = false;
  double gnyq = 0.3;
  std::uint64_t split_seed = 0;
  double test_fraction = 0.2;
  std::optional<double> min_valid_fraction;
  std::size_t workers = 1;
};

int run_prepare(const PrepareArgs& a) {
  DatasetParams p;
  p.invalid_threshold = a.invalid_threshold;
  p.hs_tile = a.hs_tile;
  p.pan_tile = a.pan_tile;
  p.ratio = a.ratio;
  p.rr = a.rr;
  p.mtf = mtf_from(a.gnyq, a.ratio, a.no_mtf);
  p.split_seed = a.split_seed;
  p.test_fraction = a.test_fraction;
  p.min_valid_fraction = a.min_valid_fraction;
  p.workers = a.workers;
  const auto scenes = scenes_from_directory(a.scenes);
  const auto m = build_dataset(scenes, p, a.out);
  std::size_t kept = 0;
  for (bool k : m.band_mask) kept += k;
  std::cerr << "prepared " << m.tiles.size() << " tiles from " << scenes.size() << " scenes, "
            << kept << "/" << m.band_mask.size() << " bands kept\n";
  return kOk;
}

struct SharpenArgs {
  std::string method;
  fs::path pan, hs, out;
  int ratio = 6;
  double gnyq = 0.3;
  bool clamp = false;
};

int run_sharpen(const SharpenArgs& a) {
  const PanImage pan = load_pan(a.pan);
  const HyperCube hs = load_hypercube(a.hs);
  const SharpenRequest req{pan, hs, a.ratio, mtf_from(a.gnyq, a.ratio, false)};
  FusedCube fused = sharpen(a.method, req);
  if (a.clamp) fused = clamp_negative(fused);
  store_container(fused, a.out);
  return kOk;
}

struct EvalArgs {
  std::string protocol = "rr";
  fs::path manifest;
  std::vector<std::string> methods;
  std::vector<std::string> imports;
  double gnyq = 0.3, alpha = 1.0, beta = 1.0, h_over_l = 1.0 / 6.0;
  std::size_t workers = 1;
  std::optional<fs::path> out;
  std::string format = "csv";
  std::string split = "test";
};

// An import is DIR or NAME=DIR; a bare DIR is named after its last component.
MethodSpec parse_import(const std::string& s) {
  const auto eq = s.find('=');
  if (eq != std::string::npos && eq > 0) return MethodSpec::imported(s.substr(eq + 1), s.substr(0, eq));
  return MethodSpec::imported(s);
}

int run_eval_cmd(const EvalArgs& a) {
  RunConfig cfg;
  cfg.manifest = a.manifest;
  detail::require(a.protocol == "rr" || a.protocol == "fr", "--protocol must be rr or fr");
  cfg.protocol = a.protocol == "rr" ? Protocol::rr : Protocol::fr;
  for (const auto& m : a.methods) cfg.methods.push_back(MethodSpec::builtin(m));
  for (const auto& i : a.imports) cfg.methods.push_back(parse_import(i));
  detail::require(!cfg.methods.empty(), "eval: give at least one --method or --import");
  cfg.mtf.nyquist_gain = a.gnyq;
  cfg.alpha = a.alpha;
  cfg.beta = a.beta;
  cfg.h_over_l = a.h_over_l;
  cfg.workers = a.workers;
  cfg.split = a.split;
  const ReportFormat format = parse_report_format(a.format);

  const MetricReport report = run_eval(cfg);
  if (a.out) {
    emit_report(report, format, *a.out);
  } else {
    std::cout << format_report(report, format);
  }
  for (const auto& row : report.rows)
    if (!row.ok()) std::cerr << row.tile << " / " << row.method << ": " << row.error << "\n";
  return report.has_failures() ? kPartial : kOk;
}

struct SynthArgs {
  std::uint64_t seed = 0;
  std::vector<std::size_t> size{64, 64};
  std::size_t bands = 16;
  int ratio = 6;
  std::size_t tiles = 1;
  std::size_t workers = 1;
  fs::path out;
};

int run_synth(const SynthArgs& a) {
  detail::require(a.size.size() == 2, "--size expects H,W");
  SynthParams p;
  p.seed = a.seed;
  p.hs_height = a.size[0];
  p.hs_width = a.size[1];
  detail::require(p.hs_height == p.hs_width, "synth: tiles must be square (H == W)");
  p.bands = a.bands;
  p.ratio = a.ratio;
  p.mtf.ratio = a.ratio;
  write_synth_dataset(p, a.tiles, a.out, a.workers);
  return kOk;
}

struct RenderArgs {
  fs::path cube, out;
  std::vector<double> wavelengths{641.0, 563.0, 478.0};
  std::vector<double> stretch{1.0, 99.0};
  std::vector<std::size_t> roi;
};

int run_render(const RenderArgs& a) {
  detail::require(a.wavelengths.size() == 3, "--wavelengths expects three values");
  detail::require(a.stretch.size() == 2, "--stretch expects lo,hi");
  const HyperCube cube = load_hypercube(a.cube);
  std::optional<Roi> roi;
  if (!a.roi.empty()) roi = parse_roi(a.roi);
  const RgbImage img = render(cube, {a.wavelengths[0], a.wavelengths[1], a.wavelengths[2]},
                              Stretch{a.stretch[0], a.stretch[1]}, roi);
  write_png(img, a.out);
  return kOk;
}

struct SignatureArgs {
  fs::path cube, out;
  std::vector<std::size_t> roi;
};

int run_signature(const SignatureArgs& a) {
  const HyperCube cube = load_hypercube(a.cube);
  const Roi roi = parse_roi(a.roi);
  const auto sig = extract_signature(cube, roi);
  nlohmann::ordered_json j;
  j["roi"] = {{"x", roi.x}, {"y", roi.y}, {"width", roi.width}, {"height", roi.height}};
  j["wavelengths"] = cube.meta().wavelengths;
  j["signature"] = sig;
  std::ofstream out(a.out, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + a.out.string());
  out << j.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hspan: hyperspectral pansharpening benchmark toolkit"};
  app.require_subcommand(1);

  PrepareArgs prep;
  auto* prepare = app.add_subcommand("prepare", "Clean, tile and split a scene corpus");
  prepare->add_option("--scenes", prep.scenes, "Directory of scenes")->required();
  prepare->add_option("--out", prep.out, "Output dataset directory")->required();
  prepare->add_option("--invalid-threshold", prep.invalid_threshold, "Band removal threshold");
  prepare->add_option("--hs-tile", prep.hs_tile, "HS tile size (px)");
  prepare->add_option("--pan-tile", prep.pan_tile, "PAN tile size (px)");
  prepare->add_option("--ratio", prep.ratio, "PAN/HS resolution ratio");
  prepare->add_flag("--rr", prep.rr, "Also write reduced-resolution triplets");
  prepare->add_flag("--no-mtf", prep.no_mtf, "Degrade with an ideal low-pass instead of the MTF");
  prepare->add_option("--gnyq", prep.gnyq, "MTF gain at Nyquist");
  prepare->add_option("--split-seed", prep.split_seed, "Seed of the scene-level split");
  prepare->add_option("--test-fraction", prep.test_fraction, "Fraction of scenes in the test split");
  prepare->add_option("--min-valid-fraction", prep.min_valid_fraction, "Drop tiles below this valid-pixel fraction");
  prepare->add_option("--workers", prep.workers, "Worker threads");

  SharpenArgs sh;
  auto* sharpen_cmd = app.add_subcommand("sharpen", "Fuse a PAN image with an HS cube");
  sharpen_cmd->add_option("--method", sh.method, "exp|pca|gsa")->required()
      ->check(CLI::IsMember({"exp", "pca", "gsa"}));
  sharpen_cmd->add_option("--pan", sh.pan)->required();
  sharpen_cmd->add_option("--hs", sh.hs)->required();
  sharpen_cmd->add_option("--ratio", sh.ratio);
  sharpen_cmd->add_option("--out", sh.out)->required();
  sharpen_cmd->add_option("--gnyq", sh.gnyq, "MTF gain at Nyquist (GSA weights)");
  sharpen_cmd->add_flag("--clamp-negative", sh.clamp, "Clamp negative outputs to zero");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Score methods over a prepared dataset");
  eval->add_option("--protocol", ev.protocol, "rr|fr")->check(CLI::IsMember({"rr", "fr"}));
  eval->add_option("--manifest", ev.manifest)->required();
  eval->add_option("--method", ev.methods, "Built-in method (repeatable)")->take_all();
  eval->add_option("--import", ev.imports, "DIR or NAME=DIR of fused results (repeatable)")->take_all();
  eval->add_option("--gnyq", ev.gnyq);
  eval->add_option("--alpha", ev.alpha);
  eval->add_option("--beta", ev.beta);
  eval->add_option("--h-over-l", ev.h_over_l);
  eval->add_option("--workers", ev.workers);
  eval->add_option("--split", ev.split, "test|train|all");
  eval->add_option("--out", ev.out, "Report path (stdout if omitted)");
  eval->add_option("--format", ev.format)->check(CLI::IsMember({"csv", "json", "md"}));

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset");
  synth->add_option("--seed", sy.seed);
  synth->add_option("--size", sy.size, "HS tile size H,W")->delimiter(',')->expected(2);
  synth->add_option("--bands", sy.bands);
  synth->add_option("--ratio", sy.ratio);
  synth->add_option("--tiles", sy.tiles);
  synth->add_option("--workers", sy.workers);
  synth->add_option("--out", sy.out)->required();

  RenderArgs rn;
  auto* render_cmd = app.add_subcommand("render", "Render three bands to an 8-bit PNG");
  render_cmd->add_option("--cube", rn.cube)->required();
  render_cmd->add_option("--wavelengths", rn.wavelengths, "R,G,B targets in nm")->delimiter(',')->expected(3);
  render_cmd->add_option("--stretch", rn.stretch, "lo,hi percentiles")->delimiter(',')->expected(2);
  render_cmd->add_option("--roi", rn.roi, "x,y,w,h")->delimiter(',')->expected(4);
  render_cmd->add_option("--out", rn.out)->required();

  SignatureArgs sg;
  auto* signature = app.add_subcommand("signature", "Per-band mean over a region");
  signature->add_option("--cube", sg.cube)->required();
  signature->add_option("--roi", sg.roi, "x,y,w,h")->delimiter(',')->expected(4)->required();
  signature->add_option("--out", sg.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*prepare) return run_prepare(prep);
    if (*sharpen_cmd) return run_sharpen(sh);
    if (*eval) return run_eval_cmd(ev);
    if (*synth) return run_synth(sy);
    if (*render_cmd) return run_render(rn);
    if (*signature) return run_signature(sg);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const DegenerateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
