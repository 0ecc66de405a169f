#include "tmfractal/pipeline.hpp"

#include <fstream>
#include <sstream>

#include "tmfractal/errors.hpp"

namespace tmfractal {

std::string derived_config(const std::filesystem::path& runs, const std::string& knobs) {
  std::string config;
  if (const auto meta = read_metadata(metadata_path(runs))) {
    for (const char* key : {"states", "symbols", "inputs", "cutoff"}) {
      const auto it = meta->find(key);
      if (it != meta->end()) config += std::string(key) + "=" + it->second + " ";
    }
  }
  return config + knobs;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

StageStats write_dims_file(const std::filesystem::path& runs,
                           const std::filesystem::path& out_path, double tail_fraction) {
  std::ostringstream knobs;
  knobs << "tail=" << tail_fraction;
  const std::string config = derived_config(runs, knobs.str());
  std::ofstream out = open_out(out_path);
  write_dims_header(out, runs.filename().string(), config);
  StageStats stats;
  for_each_machine(runs, [&](std::span<const RunRecord> group) {
    ++stats.machines;
    const MachineSequences seq = build_sequences(group);
    try {
      write_dims_row(out, {seq.machine, box_dimension(seq, tail_fraction)});
      ++stats.rows_written;
    } catch (const InsufficientData&) {
    }
  });
  finish(out, out_path);
  return stats;
}

StageStats write_classes_file(const std::filesystem::path& runs,
                              const std::filesystem::path& out_path,
                              const ClassifierConfig& config) {
  const std::string cfg = derived_config(runs, config.describe());
  std::ofstream out = open_out(out_path);
  write_classes_header(out, runs.filename().string(), cfg);
  StageStats stats;
  for_each_machine(runs, [&](std::span<const RunRecord> group) {
    ++stats.machines;
    write_classes_row(out, classify_machine(build_sequences(group), config));
    ++stats.rows_written;
  });
  finish(out, out_path);
  return stats;
}

std::string config_field(const std::string& config, const std::string& key) {
  std::istringstream in(config);
  std::string token;
  const std::string prefix = key + "=";
  while (in >> token) {
    if (token.starts_with(prefix)) return token.substr(prefix.size());
  }
  return "unknown";
}

std::string report_from_classes(const std::filesystem::path& classes,
                                const DistributionFilter& filter,
                                DistributionReport* report_out) {
  Provenance provenance;
  const auto rows = read_classes(classes, &provenance);
  if (hex64(config_hash(provenance.config)) != provenance.config_hash) {
    throw IntegrityError("config hash mismatch in " + classes.string());
  }
  const DistributionReport report = distribution_report(rows, filter);
  if (report_out) *report_out = report;

  ReportConfig rc;
  const std::string& c = provenance.config;
  rc.space = "(" + config_field(c, "states") + "," + config_field(c, "symbols") + ")";
  rc.inputs = config_field(c, "inputs");
  rc.cutoff = config_field(c, "cutoff");
  rc.classifier = "prefix_skip=" + config_field(c, "prefix_skip") +
                  " zero_tol=" + config_field(c, "zero_tol") +
                  " max_degree=" + config_field(c, "max_degree") +
                  " growth_floor=" + config_field(c, "growth_floor") +
                  " tail=" + config_field(c, "tail");
  rc.source = provenance.source;
  return write_report(report, rc);
}

}  // namespace tmfractal
