#include "tmfractal/simulator.hpp"

#include <algorithm>
#include <numeric>

#include "tmfractal/errors.hpp"

namespace tmfractal {

TapeState initial_config(Input x) {
  if (x == 0) throw ValidationError("input must be >= 1 (unary, non-empty)");
  TapeState cfg;
  cfg.cells.assign(x, Symbol{1});
  return cfg;
}

StepOutcome step(const MachineTable& table, TapeState& cfg) {
  const Transition& rule = table.at(cfg.state, cfg.read());
  const auto pos = static_cast<std::size_t>(cfg.head);
  if (pos >= cfg.cells.size()) {
    if (rule.write == 0) {
      // Writing blank past the frontier leaves the tape unchanged.
    } else {
      cfg.cells.resize(pos + 1, Symbol{0});
      cfg.cells[pos] = rule.write;
    }
  } else {
    cfg.cells[pos] = rule.write;
  }
  cfg.state = rule.next_state;
  if (rule.move == Move::Left) {
    --cfg.head;
    if (cfg.head < 0) return StepOutcome::Halted;
  } else {
    ++cfg.head;
  }
  return StepOutcome::Running;
}

RunResult run(const MachineTable& table, Input x, std::uint64_t cutoff,
              bool record_diagram) {
  if (cutoff == 0) throw ValidationError("cutoff must be >= 1");
  TapeState cfg = initial_config(x);

  RunResult result;
  result.machine = encode(table);
  result.input = x;

  std::uint64_t nonzero = x;
  std::uint64_t total = nonzero;
  std::int64_t max_head = 0;
  std::vector<std::vector<Symbol>> snapshots;
  if (record_diagram) snapshots.push_back(cfg.cells);

  std::uint64_t t = 0;
  while (t < cutoff) {
    const auto pos = static_cast<std::size_t>(cfg.head);
    const Symbol before = cfg.read();
    const StepOutcome outcome = step(table, cfg);
    ++t;
    const Symbol after = pos < cfg.cells.size() ? cfg.cells[pos] : Symbol{0};
    nonzero = nonzero + (after != 0) - (before != 0);
    total += nonzero;
    if (record_diagram) snapshots.push_back(cfg.cells);
    if (outcome == StepOutcome::Halted) {
      result.halted = true;
      break;
    }
    max_head = std::max(max_head, cfg.head);
  }

  result.steps = t;
  result.space = std::max<std::uint64_t>(x, static_cast<std::uint64_t>(max_head) + 1);
  result.black_count = total;

  if (record_diagram) {
    DiagramBitmap diagram;
    diagram.width = result.space;
    diagram.rows = snapshots.size();
    diagram.bits.assign(diagram.width * diagram.rows, 0);
    for (std::size_t r = 0; r < snapshots.size(); ++r) {
      const auto& row = snapshots[r];
      for (std::size_t c = 0; c < row.size() && c < diagram.width; ++c) {
        diagram.bits[r * diagram.width + c] = row[c] != 0 ? 1 : 0;
      }
    }
    result.diagram = std::move(diagram);
  }
  return result;
}

std::uint64_t recount_black(const DiagramBitmap& diagram) {
  return static_cast<std::uint64_t>(
      std::count_if(diagram.bits.begin(), diagram.bits.end(),
                    [](std::uint8_t b) { return b != 0; }));
}

}  // namespace tmfractal
