#pragma once

// Exhaustive sweeps over a machine space and input range.
//
// Ids are split into contiguous shards. Workers simulate every input for a
// shard and hand the rendered CSV block to the writer, which appends shards
// strictly in index order. After a shard is flushed its index is appended to
// the checkpoint file, so the checkpoint always lists a prefix 0..m-1 and a
// resumed sweep only needs to truncate the output past shard m-1.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tmfractal/dataset.hpp"
#include "tmfractal/enumeration.hpp"
#include "tmfractal/run_record.hpp"

namespace tmfractal {

struct SweepConfig {
  MachineSpace space;
  Input x_first = 1;
  Input x_last = 21;
  std::uint64_t cutoff = 60000;
  std::uint64_t shard_size = 4096;
  std::filesystem::path output;
  std::optional<std::filesystem::path> checkpoint;
  unsigned threads = 0;  // 0 = hardware concurrency
  bool accelerate = true;
  // Stop after this many shards have been flushed, leaving a resumable
  // checkpoint. Used to exercise interruption.
  std::optional<std::uint64_t> stop_after_shards;

  void validate() const;
  std::uint64_t shard_count() const;
  std::string inputs_text() const;  // "1..21"
  // Fields that must match between a checkpoint and a resuming sweep.
  Metadata metadata() const;
};

struct SweepSummary {
  std::uint64_t shards_total = 0;
  std::uint64_t shards_computed = 0;
  std::uint64_t records_written = 0;
  bool complete = false;
};

// Full sweep from scratch; truncates output and checkpoint.
SweepSummary sweep(const SweepConfig& config);

// Completes the missing shards recorded in config.checkpoint. Throws
// ValidationError listing mismatching fields if the checkpoint was written by
// a different configuration.
SweepSummary resume(const SweepConfig& config);

// Records for one shard, in (id, x) order.
std::vector<RunRecord> simulate_shard(const SweepConfig& config, std::uint64_t shard);

struct Extremes {
  Input x = 0;
  std::uint64_t max_t = 0;
  std::set<MachineId> max_t_ids;
  std::uint64_t max_space = 0;
  std::set<MachineId> max_space_ids;
  std::uint64_t max_black = 0;
  std::set<MachineId> max_black_ids;
};

class ExtremesTracker {
 public:
  explicit ExtremesTracker(Input x) { best_.x = x; }
  void add(const RunRecord& rec);
  // Empty if no halted run at x was seen.
  std::optional<Extremes> result() const;

 private:
  Extremes best_;
  bool any_ = false;
};

std::optional<Extremes> extremes(const std::filesystem::path& runs, Input x);

}  // namespace tmfractal
