// Command-line front end: scenario execution, parameter sweeps, report
// comparison, preset export.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ifgi/config.hpp"
#include "ifgi/errors.hpp"
#include "ifgi/kv.hpp"
#include "ifgi/metrics.hpp"
#include "ifgi/oracle.hpp"
#include "ifgi/pgm.hpp"
#include "ifgi/pipeline.hpp"
#include "ifgi/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitTolerance = 4;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int threads = 1;
};

ifgi::ScenarioConfig load_scenario(const CommonFlags& flags) {
  ifgi::KeyValueFile kv = ifgi::KeyValueFile::parse_file(flags.config_path);
  if (flags.seed) kv.set("run.seed", std::to_string(*flags.seed));
  if (!flags.out_dir.empty()) kv.set("output.dir", flags.out_dir);
  return ifgi::scenario_from_kv(kv);
}

ifgi::RunReport execute(const ifgi::ScenarioConfig& config, const std::string& mode,
                        int threads) {
  const ifgi::SceneObject scene = ifgi::build_scene(config);
  ifgi::PipelineOptions options{config.accidental_correction, threads};
  if (mode == "cgi")
    return ifgi::run_cgi(scene, config.splitter.input_pol, config.source, config.detector,
                         config.n_frames, config.seed, options);
  return ifgi::run_ifgi(scene, config.splitter, config.source, config.detector, config.n_frames,
                        config.seed, options);
}

int cmd_run(const CommonFlags& flags, const std::string& mode) {
  const ifgi::ScenarioConfig config = load_scenario(flags);
  const ifgi::RunReport report = execute(config, mode, flags.threads);
  ifgi::write_run_outputs(config.out_dir, report, config);

  const ifgi::MetricsRow row = ifgi::build_metrics_row(report, config);
  std::cout << "wrote " << config.out_dir << " (mode=" << mode << ", scene=" << row.scene
            << ")\n"
            << "  delta_n = " << ifgi::format_double(row.metrics.delta_n)
            << "  sigma_bg = " << ifgi::format_double(row.metrics.sigma_bg)
            << "  interacted_frac = " << ifgi::format_double(row.interacted_frac) << "\n";
  return kExitOk;
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> values;
  std::string token;
  std::istringstream in(csv);
  while (std::getline(in, token, ',')) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
      throw ifgi::ConfigError("sweep value is not a number: '" + token + "'");
    values.push_back(v);
  }
  if (values.empty()) throw ifgi::ConfigError("sweep needs a non-empty value list");
  return values;
}

int cmd_sweep(const CommonFlags& flags, const std::string& param, const std::string& values_csv) {
  const std::vector<double> values = parse_values(values_csv);
  const ifgi::ScenarioConfig base = load_scenario(flags);
  if (param != "r_ratio" && param != "gamma" && param != "phi")
    throw ifgi::ConfigError("unknown sweep parameter: " + param + " (r_ratio|gamma|phi)");
  if (param == "phi" && base.scene_preset != "glass_shard")
    throw ifgi::ConfigError("phi sweeps need scene.preset = glass_shard");

  // One direct-probe baseline at the base configuration.
  const ifgi::RunReport cgi_report = execute(base, "cgi", flags.threads);
  const double delta_n_ref =
      ifgi::compute_metrics(cgi_report.composed, base.rois).delta_n;

  std::string csv = ifgi::csv_header();
  for (const double v : values) {
    ifgi::ScenarioConfig config = base;
    if (param == "r_ratio") {
      if (!(v >= 0.0 && v <= 1.0)) throw ifgi::ConfigError("r_ratio values must lie in [0,1]");
      config.splitter.r = v;
      config.splitter.t = 1.0 - v;
    } else if (param == "gamma") {
      if (!(v >= 0.0 && v <= 1.0)) throw ifgi::ConfigError("gamma values must lie in [0,1]");
      config.splitter.gamma = v;
    } else {
      config.scene_phase_rad = v;
    }
    const ifgi::RunReport report = execute(config, "ifgi", flags.threads);
    ifgi::MetricsRow row = ifgi::build_metrics_row(report, config);
    row.param = param;
    row.value = ifgi::format_double(v);
    if (param != "phi") {
      row.delta_n_ref = delta_n_ref;
      if (delta_n_ref != 0.0) row.delta_n_ratio = row.metrics.delta_n / delta_n_ref;
    }
    csv += ifgi::csv_row(row);
  }

  std::error_code ec;
  std::filesystem::create_directories(base.out_dir, ec);
  if (ec) throw ifgi::IoError(base.out_dir + ": cannot create directory: " + ec.message());
  const std::string path = base.out_dir + "/metrics.csv";
  {
    const std::string tmp = path + ".tmp";
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw ifgi::IoError(tmp + ": cannot open for writing");
    file << csv;
    file.close();
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw ifgi::IoError(path + ": rename failed: " + ec.message());
  }
  std::cout << "wrote " << path << " (" << values.size() << " rows)\n";
  return kExitOk;
}

double cell_as_double(const std::map<std::string, std::string>& row, const std::string& key) {
  const auto it = row.find(key);
  if (it == row.end() || it->second.empty())
    throw ifgi::IoError("metrics CSV missing column value: " + key);
  return std::strtod(it->second.c_str(), nullptr);
}

int cmd_compare(const std::string& dir_a, const std::string& dir_b, double tolerance) {
  const auto rows_a = ifgi::read_metrics_csv(dir_a + "/metrics.csv");
  const auto rows_b = ifgi::read_metrics_csv(dir_b + "/metrics.csv");
  if (rows_a.size() != 1 || rows_b.size() != 1)
    throw ifgi::ConfigError("compare expects single-run reports (one CSV row each)");

  const ifgi::KeyValueFile cfg_a = ifgi::KeyValueFile::parse_file(dir_a + "/resolved.cfg");
  const ifgi::KeyValueFile cfg_b = ifgi::KeyValueFile::parse_file(dir_b + "/resolved.cfg");
  for (const char* key : {"grid.width", "grid.height", "grid.pitch_mm", "roi.inside",
                          "roi.outside", "roi.background"}) {
    if (cfg_a.get_string(key) != cfg_b.get_string(key))
      throw ifgi::ConfigError(std::string("compare: reports disagree on ") + key);
  }

  const auto& a = rows_a[0];
  const auto& b = rows_b[0];
  const double dn_a = cell_as_double(a, "delta_n");
  const double dn_b = cell_as_double(b, "delta_n");
  const double frac_a = cell_as_double(a, "interacted_frac");
  const double frac_b = cell_as_double(b, "interacted_frac");
  const double gain_a = cell_as_double(a, "oracle_gain");
  const double gain_b = cell_as_double(b, "oracle_gain");
  const double oracle_ia = cell_as_double(a, "oracle_interaction");
  const double oracle_ib = cell_as_double(b, "oracle_interaction");

  const auto print_report = [](const char* tag, const std::map<std::string, std::string>& row) {
    std::printf("%s: mode=%s scene=%s delta_n=%s visibility=%s sigma_bg=%s interacted=%s/%s\n",
                tag, row.at("mode").c_str(), row.at("scene").c_str(), row.at("delta_n").c_str(),
                row.at("visibility").empty() ? "n/a" : row.at("visibility").c_str(),
                row.at("sigma_bg").c_str(), row.at("interacted").c_str(),
                row.at("pairs").c_str());
  };
  print_report("a", a);
  print_report("b", b);

  const double ratio_dn = (dn_a != 0.0) ? dn_b / dn_a : std::nan("");
  const double ratio_frac = (frac_a != 0.0) ? frac_b / frac_a : std::nan("");
  const double oracle_ratio_dn = (gain_a != 0.0) ? gain_b / gain_a : std::nan("");
  const double oracle_ratio_frac = (oracle_ia != 0.0) ? oracle_ib / oracle_ia : std::nan("");
  std::printf("delta_n ratio (b/a):    measured=%s predicted=%s\n",
              ifgi::format_double(ratio_dn).c_str(), ifgi::format_double(oracle_ratio_dn).c_str());
  std::printf("interacted ratio (b/a): measured=%s predicted=%s\n",
              ifgi::format_double(ratio_frac).c_str(),
              ifgi::format_double(oracle_ratio_frac).c_str());

  bool flagged = false;
  if (std::isfinite(ratio_dn) && std::isfinite(oracle_ratio_dn) &&
      std::abs(ratio_dn - oracle_ratio_dn) > tolerance)
    flagged = true;
  if (std::isfinite(ratio_frac) && std::isfinite(oracle_ratio_frac) &&
      std::abs(ratio_frac - oracle_ratio_frac) > tolerance)
    flagged = true;
  if (flagged) {
    std::printf("FLAG: measured ratios deviate from prediction beyond tolerance %s\n",
                ifgi::format_double(tolerance).c_str());
    return kExitTolerance;
  }
  std::printf("ratios agree within tolerance %s\n", ifgi::format_double(tolerance).c_str());
  return kExitOk;
}

int cmd_scene(const std::string& preset, const std::string& out_dir, int width, int height) {
  const ifgi::SceneGrid grid{width, height, 0.05};
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ifgi::IoError(out_dir + ": cannot create directory: " + ec.message());

  ifgi::Pgm img;
  img.width = grid.width;
  img.height = grid.height;
  img.maxval = 65535;
  img.pixels.assign(static_cast<size_t>(grid.npixels()), 0);

  ifgi::KeyValueFile desc;
  if (preset == "uo_stencil") {
    const ifgi::Bitmap bits = ifgi::uo_bitmap(grid);
    for (size_t i = 0; i < bits.set.size(); ++i) img.pixels[i] = bits.set[i] ? 65535 : 0;
    desc.set("interpretation", "stencil");
  } else if (preset == "glass_shard") {
    const ifgi::PixelRect region = ifgi::shard_region(grid);
    for (int y = region.y0; y < region.y1; ++y)
      for (int x = region.x0; x < region.x1; ++x)
        img.pixels[static_cast<size_t>(y) * grid.width + x] = 65535;
    desc.set("interpretation", "phase");
    desc.set("max_param", ifgi::format_double(M_PI / 2.0));
  } else if (preset == "bomb_lc") {
    const ifgi::Bitmap bits = ifgi::bomb_bitmap(grid);
    for (size_t i = 0; i < bits.set.size(); ++i) img.pixels[i] = bits.set[i] ? 65535 : 0;
    desc.set("interpretation", "rotator");
    desc.set("max_param", ifgi::format_double(M_PI / 2.0));
  } else {
    throw ifgi::ConfigError("unknown scene preset: " + preset +
                            " (uo_stencil|glass_shard|bomb_lc)");
  }
  desc.set("label", preset);

  const std::string pgm_path = out_dir + "/" + preset + ".pgm";
  ifgi::write_pgm(pgm_path, img, ifgi::PgmFormat::ascii);
  desc.write_file(pgm_path + ".scene");
  std::cout << "wrote " << pgm_path << " and " << pgm_path << ".scene\n";
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-pair ghost-imaging simulator: direct-probe (CGI) and "
               "interferometric interaction-free (IFGI) experiments"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string mode = "ifgi";
  std::string param;
  std::string values_csv;
  std::string dir_a, dir_b;
  double tolerance = 0.05;
  std::string preset;
  int width = 128, height = 128;

  auto* run = app.add_subcommand("run", "Execute one experiment and write its report");
  run->add_option("--config", flags.config_path, "scenario key-value file")->required();
  run->add_option("--mode", mode, "cgi|ifgi")->required()->check(CLI::IsMember({"cgi", "ifgi"}));
  run->add_option("--seed", flags.seed, "override run.seed");
  run->add_option("--out", flags.out_dir, "override output.dir");
  run->add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "Run one experiment per parameter value");
  sweep->add_option("--config", flags.config_path, "scenario key-value file")->required();
  sweep->add_option("--param", param, "r_ratio|gamma|phi")->required();
  sweep->add_option("--values", values_csv, "comma-separated values")->required();
  sweep->add_option("--seed", flags.seed, "override run.seed");
  sweep->add_option("--out", flags.out_dir, "override output.dir");
  sweep->add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber);

  auto* compare = app.add_subcommand("compare", "Compare two run reports against predictions");
  compare->add_option("report_a", dir_a, "first report directory")->required();
  compare->add_option("report_b", dir_b, "second report directory")->required();
  compare->add_option("--tolerance", tolerance, "allowed |measured - predicted| ratio gap");

  auto* scene = app.add_subcommand("scene", "Export a preset scene as graymap + descriptor");
  scene->add_option("--preset", preset, "uo_stencil|glass_shard|bomb_lc")->required();
  scene->add_option("--out", flags.out_dir, "output directory")->required();
  scene->add_option("--width", width, "grid width")->check(CLI::PositiveNumber);
  scene->add_option("--height", height, "grid height")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(flags, mode);
    if (sweep->parsed()) return cmd_sweep(flags, param, values_csv);
    if (compare->parsed()) return cmd_compare(dir_a, dir_b, tolerance);
    if (scene->parsed()) return cmd_scene(preset, flags.out_dir, width, height);
  } catch (const ifgi::ConfigError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ifgi::IoError& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return kExitConfig;
}
