#include "ifgi/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ifgi/errors.hpp"
#include "ifgi/oracle.hpp"
#include "ifgi/pgm.hpp"

namespace ifgi {

namespace {

constexpr const char* kColumns[] = {
    "param",         "value",        "mode",        "scene",       "r",
    "t",             "gamma",        "n_frames",    "pair_rate",   "seed",
    "pairs",         "interacted",   "absorbed",    "discarded",   "interacted_frac",
    "delta_n",       "visibility",   "sigma_bg",    "n_out_mean",  "n_in_mean",
    "delta_n_ref",   "delta_n_ratio",
    "d_in_mean",     "cd_in_mean",   "pd_measured", "oracle_gain", "oracle_interaction",
    "oracle_pd",
};

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string opt_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

void atomic_write_text(const std::string& path, const std::string& payload) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError(tmp + ": cannot open for writing");
    file.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!file) throw IoError(tmp + ": write failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError(path + ": rename failed: " + ec.message());
}

} // namespace

std::string csv_header() {
  std::string out;
  bool first = true;
  for (const char* col : kColumns) {
    if (!first) out += ",";
    first = false;
    out += col;
  }
  out += "\n";
  return out;
}

std::string csv_row(const MetricsRow& row) {
  std::vector<std::string> cells = {
      row.param,
      row.value,
      row.mode,
      csv_escape(row.scene),
      format_double(row.r),
      format_double(row.t),
      format_double(row.gamma),
      std::to_string(row.n_frames),
      format_double(row.pair_rate),
      std::to_string(row.seed),
      std::to_string(row.pairs),
      std::to_string(row.interacted),
      std::to_string(row.absorbed),
      std::to_string(row.discarded),
      format_double(row.interacted_frac),
      format_double(row.metrics.delta_n),
      opt_cell(row.metrics.visibility),
      format_double(row.metrics.sigma_bg),
      format_double(row.metrics.n_out_mean),
      format_double(row.metrics.n_in_mean),
      opt_cell(row.delta_n_ref),
      opt_cell(row.delta_n_ratio),
      opt_cell(row.d_in_mean),
      opt_cell(row.cd_in_mean),
      opt_cell(row.pd_measured),
      format_double(row.oracle_gain),
      format_double(row.oracle_interaction),
      opt_cell(row.oracle_pd),
  };
  std::string out;
  bool first = true;
  for (const auto& cell : cells) {
    if (!first) out += ",";
    first = false;
    out += cell;
  }
  out += "\n";
  return out;
}

MetricsRow build_metrics_row(const RunReport& report, const ScenarioConfig& config) {
  MetricsRow row;
  row.mode = report.mode;
  row.scene = config.scene_file.empty() ? config.scene_preset : config.scene_file;
  row.gamma = config.splitter.gamma;
  row.n_frames = config.n_frames;
  row.pair_rate = config.source.pair_rate;
  row.seed = config.seed;
  row.pairs = report.object_tallies.pairs;
  row.interacted = report.object_tallies.interacted;
  row.absorbed = report.object_tallies.absorbed;
  row.discarded = report.object_tallies.discarded;
  row.interacted_frac = report.interacted_fraction();
  row.metrics = compute_metrics(report.composed, config.rois);

  if (report.mode == "ifgi") {
    row.r = config.splitter.r;
    row.t = config.splitter.t;
    row.oracle_gain = std::abs(delta_n_ifgi(1.0, config.splitter.r, config.splitter.t));
    row.oracle_interaction = config.splitter.t;

    const bool corrected = report.has_channel("acc_d");
    std::vector<ComposeTerm> d_terms = {{&report.channel("d").image, 1}};
    std::vector<ComposeTerm> cd_terms = {{&report.channel("c").image, 1},
                                         {&report.channel("d").image, 1}};
    if (corrected) {
      d_terms.push_back({&report.channel("acc_d").image, -1});
      cd_terms.push_back({&report.channel("acc_c").image, -1});
      cd_terms.push_back({&report.channel("acc_d").image, -1});
    }
    const SignedImage d_corr = compose(d_terms);
    const SignedImage cd_corr = compose(cd_terms);
    row.d_in_mean = roi_mean(d_corr, config.rois.inside);
    row.cd_in_mean = roi_mean(cd_corr, config.rois.inside);
    if (*row.cd_in_mean != 0.0) row.pd_measured = *row.d_in_mean / *row.cd_in_mean;

    if (config.scene_file.empty() && config.scene_preset == "glass_shard")
      row.oracle_pd =
          phase_signal(1.0, config.splitter.r, config.splitter.t, config.scene_phase_rad);
  } else {
    // Direct probe: fully transmissive coupling to the object.
    row.r = 0.0;
    row.t = 1.0;
    row.oracle_gain = 1.0;
    row.oracle_interaction = 1.0;
  }
  return row;
}

std::vector<std::map<std::string, std::string>> read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open");

  const auto split = [&](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cell += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += c;
      }
    }
    cells.push_back(cell);
    return cells;
  };

  std::string header_line;
  if (!std::getline(in, header_line)) throw IoError(path + ": empty CSV");
  if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();
  const std::vector<std::string> header = split(header_line);

  std::vector<std::map<std::string, std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size())
      throw IoError(path + ": row has " + std::to_string(cells.size()) + " cells, expected " +
                    std::to_string(header.size()));
    std::map<std::string, std::string> row;
    for (size_t i = 0; i < header.size(); ++i) row[header[i]] = cells[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

Pgm count_image_to_pgm(const CountImage& image) {
  Pgm out;
  out.width = image.grid.width;
  out.height = image.grid.height;
  out.maxval = 65535;
  out.pixels.resize(image.counts.size());
  for (size_t i = 0; i < image.counts.size(); ++i) {
    if (image.counts[i] > 65535)
      throw IoError("count image exceeds the 16-bit graymap range; reduce exposure");
    out.pixels[i] = static_cast<std::uint16_t>(image.counts[i]);
  }
  return out;
}

void write_signed_pgm(const std::string& path, const SignedImage& image) {
  std::int64_t lo = 0, hi = 0;
  for (const auto v : image.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const std::int64_t offset = -lo;
  if (hi + offset > 65535)
    throw IoError(path + ": signed image span exceeds the 16-bit graymap range");

  Pgm out;
  out.width = image.grid.width;
  out.height = image.grid.height;
  out.maxval = 65535;
  out.pixels.resize(image.values.size());
  for (size_t i = 0; i < image.values.size(); ++i)
    out.pixels[i] = static_cast<std::uint16_t>(image.values[i] + offset);
  write_pgm(path, out);

  KeyValueFile sidecar;
  sidecar.set("offset", std::to_string(offset));
  sidecar.write_file(path + ".offset");
}

SignedImage read_signed_pgm(const std::string& path) {
  const Pgm img = read_pgm(path);
  const KeyValueFile sidecar = KeyValueFile::parse_file(path + ".offset");
  const std::int64_t offset = sidecar.get_int("offset");
  SignedImage out(SceneGrid{img.width, img.height, 0.05});
  for (size_t i = 0; i < img.pixels.size(); ++i)
    out.values[i] = static_cast<std::int64_t>(img.pixels[i]) - offset;
  return out;
}

void write_run_outputs(const std::string& dir, const RunReport& report,
                       const ScenarioConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir + ": cannot create directory: " + ec.message());

  std::string channel_list;
  for (const auto& ch : report.channels) {
    write_pgm(dir + "/" + ch.name + ".pgm", count_image_to_pgm(ch.image));
    if (!channel_list.empty()) channel_list += ",";
    channel_list += ch.name;
  }
  write_signed_pgm(dir + "/composed.pgm", report.composed);

  atomic_write_text(dir + "/metrics.csv",
                    csv_header() + csv_row(build_metrics_row(report, config)));

  KeyValueFile resolved = scenario_to_kv(config);
  resolved.set("output.channels", channel_list);
  resolved.write_file(dir + "/resolved.cfg");
}

} // namespace ifgi
