// Command-line front end: decode, run, diagram, mine, dims, classify,
// report, extremes.

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "tmfractal/dataset.hpp"
#include "tmfractal/enumeration.hpp"
#include "tmfractal/errors.hpp"
#include "tmfractal/fast_runner.hpp"
#include "tmfractal/miner.hpp"
#include "tmfractal/pipeline.hpp"
#include "tmfractal/render.hpp"
#include "tmfractal/simulator.hpp"

namespace {

using namespace tmfractal;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitIntegrity = 4;

struct InputRange {
  Input first = 1;
  Input last = 1;
};

Input parse_input(const std::string& text) {
  unsigned long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end || value == 0 || value > 0xffffffffUL) {
    throw ValidationError("bad input value '" + text + "' (need an integer >= 1)");
  }
  return static_cast<Input>(value);
}

// "a..b" inclusive, or a single value.
InputRange parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const Input x = parse_input(text);
    return {x, x};
  }
  InputRange r{parse_input(text.substr(0, dots)), parse_input(text.substr(dots + 2))};
  if (r.last < r.first) throw ValidationError("empty input range '" + text + "'");
  return r;
}

struct Globals {
  int states = 3;
  int colors = 2;
  unsigned threads = 0;
  bool seed_ignored = false;

  MachineSpace space() const { return MachineSpace::make(states, colors); }
};

const char* move_char(Move m) { return m == Move::Left ? "L" : "R"; }

void print_table(const MachineTable& table) {
  const MachineSpace& space = table.space();
  for (int q = 1; q <= space.states; ++q) {
    for (int a = 0; a < space.symbols; ++a) {
      const Transition& r = table.at(q, static_cast<Symbol>(a));
      std::cout << 'q' << q << ' ' << a << " -> write " << int(r.write) << ", move "
                << move_char(r.move) << ", state q" << r.next_state << '\n';
    }
  }
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time diagrams, box dimension and runtime classes of small Turing machines"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--states", g.states, "Number of states")->capture_default_str();
  app.add_option("--colors", g.colors, "Number of tape symbols")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for mine (0 = all cores)");
  app.add_flag("--seed-ignored", g.seed_ignored, "Accepted for compatibility; nothing is random");

  // decode
  auto* decode_cmd = app.add_subcommand("decode", "Print the transition table of a machine");
  MachineId decode_id = 0;
  decode_cmd->add_option("--id", decode_id, "Rule number")->required();

  // run
  auto* run_cmd = app.add_subcommand("run", "Run one machine on one input");
  MachineId run_id = 0;
  std::string run_input;
  std::uint64_t run_cutoff = 60000;
  run_cmd->add_option("--id", run_id, "Rule number")->required();
  run_cmd->add_option("--input", run_input, "Input x >= 1")->required();
  run_cmd->add_option("--max-steps", run_cutoff, "Step cutoff")->capture_default_str();

  // diagram
  auto* diagram_cmd = app.add_subcommand("diagram", "Write space-time diagrams as PBM");
  MachineId diagram_id = 0;
  std::string diagram_inputs;
  std::string diagram_out;
  std::uint64_t diagram_cutoff = 60000;
  ImageSpec spec;
  diagram_cmd->add_option("--id", diagram_id, "Rule number")->required();
  diagram_cmd->add_option("--input", diagram_inputs, "Input x, or a..b for a montage")
      ->required();
  diagram_cmd->add_option("--out", diagram_out, "Output .pbm path")->required();
  diagram_cmd->add_option("--scale", spec.scale, "Pixels per cell")->capture_default_str();
  diagram_cmd->add_option("--gutter", spec.gutter, "Cells between montage panels")
      ->capture_default_str();
  diagram_cmd->add_option("--max-steps", diagram_cutoff, "Step cutoff")->capture_default_str();

  // mine
  auto* mine_cmd = app.add_subcommand("mine", "Sweep the whole machine space");
  std::string mine_inputs = "1..21";
  std::uint64_t mine_cutoff = 60000;
  std::string mine_out;
  std::string mine_checkpoint;
  std::uint64_t mine_shard = 4096;
  bool mine_resume = false;
  bool mine_plain = false;
  mine_cmd->add_option("--inputs", mine_inputs, "Input range a..b")->capture_default_str();
  mine_cmd->add_option("--max-steps", mine_cutoff, "Step cutoff")->capture_default_str();
  mine_cmd->add_option("--out", mine_out, "Runs CSV path")->required();
  mine_cmd->add_option("--checkpoint", mine_checkpoint, "Checkpoint file (enables resume)");
  mine_cmd->add_option("--shard-size", mine_shard, "Ids per work unit")->capture_default_str();
  mine_cmd->add_flag("--resume", mine_resume, "Continue from --checkpoint");
  mine_cmd->add_flag("--no-accelerate", mine_plain, "Disable non-halting shortcuts");

  // dims
  auto* dims_cmd = app.add_subcommand("dims", "Box dimension per machine");
  std::string dims_in, dims_out;
  double dims_tail = kDefaultTailFraction;
  dims_cmd->add_option("--in", dims_in, "Runs CSV")->required();
  dims_cmd->add_option("--out", dims_out, "Dims CSV")->required();
  dims_cmd->add_option("--tail", dims_tail, "Tail fraction in (0,1]")->capture_default_str();

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "Growth classes per machine");
  std::string classify_in, classify_out;
  ClassifierConfig knobs;
  classify_cmd->add_option("--in", classify_in, "Runs CSV")->required();
  classify_cmd->add_option("--out", classify_out, "Classes CSV")->required();
  classify_cmd->add_option("--prefix-skip", knobs.prefix_skip)->capture_default_str();
  classify_cmd->add_option("--zero-tol", knobs.zero_tol)->capture_default_str();
  classify_cmd->add_option("--max-degree", knobs.max_degree)->capture_default_str();
  classify_cmd->add_option("--growth-floor", knobs.growth_floor)->capture_default_str();
  classify_cmd->add_option("--max-period", knobs.max_period, "Judge growth per residue class x mod p for p up to this")->capture_default_str();
  classify_cmd->add_option("--tail", knobs.tail_fraction)->capture_default_str();

  // report
  auto* report_cmd = app.add_subcommand("report", "Distribution over complexity classes");
  std::string report_in;
  std::string report_filter = "super-linear";
  report_cmd->add_option("--in", report_in, "Classes CSV")->required();
  report_cmd->add_option("--filter", report_filter, "super-linear | all")
      ->check(CLI::IsMember({"super-linear", "all"}))
      ->capture_default_str();

  // extremes
  auto* extremes_cmd = app.add_subcommand("extremes", "Machines with the largest t, space, N");
  std::string extremes_in;
  std::string extremes_input;
  extremes_cmd->add_option("--in", extremes_in, "Runs CSV")->required();
  extremes_cmd->add_option("--input", extremes_input, "Input x")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*decode_cmd) {
      print_table(decode(g.space(), decode_id));
    } else if (*run_cmd) {
      const MachineSpace space = g.space();
      const RunResult r = run(decode(space, run_id), parse_input(run_input), run_cutoff);
      if (r.halted) {
        std::cout << "halted=1 t=" << r.steps << " space=" << r.space << " N=" << r.black_count
                  << '\n';
      } else {
        std::cout << "halted=0 cutoff=" << r.steps << " space=" << r.space << '\n';
      }
    } else if (*diagram_cmd) {
      const MachineSpace space = g.space();
      const MachineTable table = decode(space, diagram_id);
      const InputRange range = parse_range(diagram_inputs);
      if (diagram_cutoff > 20000) {
        // A diagram that reaches the cutoff has (cutoff+1)^2 cells.
        for (Input x = range.first; x <= range.last; ++x) {
          FastRunner probe(diagram_cutoff, x);
          probe.load(table, diagram_id);
          if (!probe.run(x).halted) {
            throw ValidationError("machine " + std::to_string(diagram_id) +
                                  " does not halt on x=" + std::to_string(x) +
                                  " within the cutoff; lower --max-steps to render it");
          }
        }
      }
      std::vector<DiagramBitmap> diagrams;
      for (Input x = range.first; x <= range.last; ++x) {
        diagrams.push_back(*run(table, x, diagram_cutoff, true).diagram);
      }
      write_file(diagram_out, diagrams.size() == 1 ? diagram_to_pbm(diagrams[0], spec)
                                                   : stack_diagrams(diagrams, spec));
    } else if (*mine_cmd) {
      SweepConfig config;
      config.space = g.space();
      const InputRange range = parse_range(mine_inputs);
      config.x_first = range.first;
      config.x_last = range.last;
      config.cutoff = mine_cutoff;
      config.shard_size = mine_shard;
      config.output = mine_out;
      config.threads = g.threads;
      config.accelerate = !mine_plain;
      if (!mine_checkpoint.empty()) config.checkpoint = mine_checkpoint;
      if (mine_resume && !config.checkpoint) {
        throw ValidationError("--resume requires --checkpoint");
      }
      const SweepSummary s = mine_resume ? resume(config) : sweep(config);
      std::cerr << "shards " << s.shards_computed << " computed, " << s.shards_total
                << " total, " << s.records_written << " records written"
                << (s.complete ? "" : " (incomplete)") << '\n';
    } else if (*dims_cmd) {
      const StageStats s = write_dims_file(dims_in, dims_out, dims_tail);
      std::cerr << s.machines << " machines, " << s.rows_written << " dimensions\n";
    } else if (*classify_cmd) {
      const StageStats s = write_classes_file(classify_in, classify_out, knobs);
      std::cerr << s.machines << " machines classified\n";
    } else if (*report_cmd) {
      const DistributionFilter filter = report_filter == "all"
                                            ? DistributionFilter::all_known()
                                            : DistributionFilter::super_linear_runtime();
      std::cout << report_from_classes(report_in, filter);
    } else if (*extremes_cmd) {
      const Input x = parse_input(extremes_input);
      const auto best = extremes(extremes_in, x);
      if (!best) {
        std::cout << "no halted runs at x=" << x << '\n';
        return 0;
      }
      auto ids = [](const std::set<MachineId>& s) {
        std::string out;
        for (MachineId id : s) out += (out.empty() ? "" : ",") + std::to_string(id);
        return out;
      };
      std::cout << "x=" << x << '\n'
                << "max_t=" << best->max_t << " ids=" << ids(best->max_t_ids) << '\n'
                << "max_space=" << best->max_space << " ids=" << ids(best->max_space_ids)
                << '\n'
                << "max_N=" << best->max_black << " ids=" << ids(best->max_black_ids) << '\n';
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const IntegrityError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitIntegrity;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
