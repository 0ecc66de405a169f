#include "tmfractal/miner.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "tmfractal/errors.hpp"
#include "tmfractal/fast_runner.hpp"

namespace tmfractal {

void SweepConfig::validate() const {
  (void)MachineSpace::make(space.states, space.symbols);
  if (x_first < 1) throw ValidationError("inputs must start at x >= 1");
  if (x_last < x_first) throw ValidationError("input range " + inputs_text() + " is empty");
  if (cutoff < 1) throw ValidationError("cutoff must be >= 1");
  if (shard_size < 1) throw ValidationError("shard size must be >= 1");
  if (output.empty()) throw ValidationError("output path required");
}

std::uint64_t SweepConfig::shard_count() const {
  const std::uint64_t size = space.space_size();
  return (size + shard_size - 1) / shard_size;
}

std::string SweepConfig::inputs_text() const {
  return std::to_string(x_first) + ".." + std::to_string(x_last);
}

Metadata SweepConfig::metadata() const {
  return {{"states", std::to_string(space.states)},
          {"symbols", std::to_string(space.symbols)},
          {"inputs", inputs_text()},
          {"cutoff", std::to_string(cutoff)},
          {"shard_size", std::to_string(shard_size)}};
}

std::vector<RunRecord> simulate_shard(const SweepConfig& config, std::uint64_t shard) {
  const std::uint64_t first = shard * config.shard_size;
  const std::uint64_t last =
      std::min(config.space.space_size(), first + config.shard_size);
  FastRunner runner(config.cutoff, config.x_last, config.accelerate);
  std::vector<RunRecord> out;
  out.reserve(static_cast<std::size_t>((last - first) * (config.x_last - config.x_first + 1)));
  for (MachineId id : enumerate(config.space, first, last)) {
    runner.load(decode(config.space, id), id);
    for (Input x = config.x_first; x <= config.x_last; ++x) out.push_back(runner.run(x));
  }
  return out;
}

namespace {

std::filesystem::path config_sidecar(const std::filesystem::path& checkpoint) {
  std::filesystem::path p = checkpoint;
  p += ".config";
  return p;
}

std::string render_shard(const SweepConfig& config, std::uint64_t shard) {
  std::string text;
  for (const RunRecord& r : simulate_shard(config, shard)) append_run_row(text, r);
  return text;
}

// Simulates shards [first_shard, shard_count) on worker threads and appends
// them to `out` in order.
SweepSummary run_shards(const SweepConfig& config, std::uint64_t first_shard,
                        std::ofstream& out, std::ofstream* checkpoint) {
  SweepSummary summary;
  summary.shards_total = config.shard_count();
  const std::uint64_t end = summary.shards_total;
  const std::uint64_t limit =
      config.stop_after_shards ? std::min(end, first_shard + *config.stop_after_shards) : end;

  unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, threads);
  const std::uint64_t window = 4ull * threads;

  std::mutex mu;
  std::condition_variable ready;    // a shard finished
  std::condition_variable advance;  // the writer consumed a shard
  std::map<std::uint64_t, std::string> done;
  std::uint64_t next_to_write = first_shard;
  std::uint64_t next_to_take = first_shard;
  bool failed = false;
  std::exception_ptr error;

  auto worker = [&] {
    while (true) {
      std::uint64_t shard;
      {
        std::unique_lock lock(mu);
        advance.wait(lock, [&] { return failed || next_to_take < next_to_write + window; });
        if (failed || next_to_take >= limit) return;
        shard = next_to_take++;
      }
      try {
        std::string text = render_shard(config, shard);
        std::lock_guard lock(mu);
        done.emplace(shard, std::move(text));
      } catch (...) {
        std::lock_guard lock(mu);
        failed = true;
        if (!error) error = std::current_exception();
      }
      ready.notify_all();
      advance.notify_all();
    }
  };

  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);

  const std::uint64_t per_machine = config.x_last - config.x_first + 1;
  const std::uint64_t size = config.space.space_size();
  try {
    while (true) {
      std::string text;
      std::uint64_t shard;
      {
        std::unique_lock lock(mu);
        if (next_to_write >= limit) break;
        ready.wait(lock, [&] { return failed || done.count(next_to_write) > 0; });
        if (failed) break;
        shard = next_to_write;
        text = std::move(done[shard]);
        done.erase(shard);
      }
      out.write(text.data(), static_cast<std::streamsize>(text.size()));
      out.flush();
      if (!out) throw IoError("write failed for " + config.output.string());
      if (checkpoint) {
        *checkpoint << shard << '\n';
        checkpoint->flush();
        if (!*checkpoint) throw IoError("checkpoint write failed");
      }
      const std::uint64_t ids =
          std::min(size, (shard + 1) * config.shard_size) - shard * config.shard_size;
      summary.records_written += ids * per_machine;
      ++summary.shards_computed;
      {
        std::lock_guard lock(mu);
        ++next_to_write;
      }
      advance.notify_all();
    }
  } catch (...) {
    {
      std::lock_guard lock(mu);
      failed = true;
      if (!error) error = std::current_exception();
    }
    advance.notify_all();
  }
  {
    std::lock_guard lock(mu);
    if (next_to_write >= limit) failed = true;  // release idle workers
  }
  advance.notify_all();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  summary.complete = next_to_write == end;
  return summary;
}

std::string metadata_diff(const Metadata& recorded, const Metadata& requested) {
  std::string diff;
  for (const auto& [key, value] : requested) {
    const auto it = recorded.find(key);
    const std::string old = it == recorded.end() ? "<missing>" : it->second;
    if (old != value) {
      if (!diff.empty()) diff += "; ";
      diff += key + ": checkpoint=" + old + " requested=" + value;
    }
  }
  return diff;
}

}  // namespace

SweepSummary sweep(const SweepConfig& config) {
  config.validate();
  std::ofstream out(config.output, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + config.output.string());
  out << kRunsHeader << '\n';
  write_metadata(metadata_path(config.output), config.metadata());

  std::optional<std::ofstream> checkpoint;
  if (config.checkpoint) {
    write_metadata(config_sidecar(*config.checkpoint), config.metadata());
    checkpoint.emplace(*config.checkpoint, std::ios::binary | std::ios::trunc);
    if (!*checkpoint) throw IoError("cannot write " + config.checkpoint->string());
  }
  return run_shards(config, 0, out, checkpoint ? &*checkpoint : nullptr);
}

SweepSummary resume(const SweepConfig& config) {
  config.validate();
  if (!config.checkpoint) throw ValidationError("resume requires a checkpoint path");
  const auto recorded = read_metadata(config_sidecar(*config.checkpoint));
  if (!recorded) {
    throw IoError("no checkpoint configuration at " +
                  config_sidecar(*config.checkpoint).string());
  }
  const std::string diff = metadata_diff(*recorded, config.metadata());
  if (!diff.empty()) throw ValidationError("checkpoint configuration mismatch: " + diff);

  std::ifstream ck(*config.checkpoint);
  if (!ck) throw IoError("cannot read checkpoint " + config.checkpoint->string());
  std::uint64_t completed = 0;
  std::string line;
  while (std::getline(ck, line)) {
    if (line.empty()) continue;
    if (line != std::to_string(completed)) {
      throw IntegrityError("checkpoint " + config.checkpoint->string() +
                           " is not a prefix of shard indices at '" + line + "'");
    }
    ++completed;
  }
  ck.close();

  // Truncate the output after the last checkpointed shard.
  const std::uint64_t boundary_id =
      std::min(config.space.space_size(), completed * config.shard_size);
  const std::uint64_t expected_rows = boundary_id * (config.x_last - config.x_first + 1);
  std::uintmax_t keep = 0;
  {
    std::ifstream in(config.output, std::ios::binary);
    if (!in) throw IoError("cannot read " + config.output.string());
    if (!std::getline(in, line) || line != kRunsHeader) {
      throw IntegrityError("output " + config.output.string() + " has a bad header");
    }
    keep = line.size() + 1;
    std::uint64_t rows = 0;
    while (rows < expected_rows && std::getline(in, line)) {
      if (parse_run_row(line).id >= boundary_id) break;
      keep += line.size() + 1;
      ++rows;
    }
    if (rows < expected_rows) {
      throw IntegrityError("output " + config.output.string() + " has " + std::to_string(rows) +
                           " rows but the checkpoint claims " + std::to_string(expected_rows));
    }
  }
  SweepSummary summary;
  summary.shards_total = config.shard_count();
  if (completed >= summary.shards_total) {
    summary.complete = true;
    return summary;
  }
  std::filesystem::resize_file(config.output, keep);

  std::ofstream out(config.output, std::ios::binary | std::ios::app);
  std::ofstream checkpoint(*config.checkpoint, std::ios::binary | std::ios::app);
  if (!out || !checkpoint) throw IoError("cannot reopen sweep files for append");
  return run_shards(config, completed, out, &checkpoint);
}

void ExtremesTracker::add(const RunRecord& rec) {
  if (rec.x != best_.x || !rec.halted) return;
  auto update = [&](std::uint64_t value, std::uint64_t& best, std::set<MachineId>& ids) {
    if (!any_ || value > best) {
      best = value;
      ids = {rec.id};
    } else if (value == best) {
      ids.insert(rec.id);
    }
  };
  update(rec.t, best_.max_t, best_.max_t_ids);
  update(rec.space, best_.max_space, best_.max_space_ids);
  update(rec.black_count, best_.max_black, best_.max_black_ids);
  any_ = true;
}

std::optional<Extremes> ExtremesTracker::result() const {
  if (!any_) return std::nullopt;
  return best_;
}

std::optional<Extremes> extremes(const std::filesystem::path& runs, Input x) {
  RunsReader reader(runs);
  ExtremesTracker tracker(x);
  while (auto rec = reader.next()) tracker.add(*rec);
  return tracker.result();
}

}  // namespace tmfractal
