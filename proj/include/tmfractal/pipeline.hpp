#pragma once

// File-to-file stages used by the CLI and the acceptance suite.

#include <cstdint>
#include <filesystem>
#include <string>

#include "tmfractal/classify.hpp"
#include "tmfractal/dataset.hpp"

namespace tmfractal {

struct StageStats {
  std::uint64_t machines = 0;
  std::uint64_t rows_written = 0;
};

// Canonical config string for files derived from `runs`: the sweep sidecar
// (if present) followed by the stage's own knobs.
std::string derived_config(const std::filesystem::path& runs, const std::string& knobs);

// One dims row per machine with enough data; machines with insufficient
// data are skipped.
StageStats write_dims_file(const std::filesystem::path& runs,
                           const std::filesystem::path& out, double tail_fraction);

StageStats write_classes_file(const std::filesystem::path& runs,
                              const std::filesystem::path& out,
                              const ClassifierConfig& config);

// Report over a classes file, with the header filled from its provenance.
std::string report_from_classes(const std::filesystem::path& classes,
                                const DistributionFilter& filter,
                                DistributionReport* report_out = nullptr);

// Value of `key=` inside a space-separated config string, or "unknown".
std::string config_field(const std::string& config, const std::string& key);

}  // namespace tmfractal
