#pragma once

// One-way infinite tape simulation. The tape has a closed left end at cell 0
// and grows to the right on demand. Input x is a block of x ones starting at
// cell 0; the head starts on cell 0 in state 1. There is no halt state: a
// machine halts when it moves left from cell 0, after its write is applied.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "tmfractal/enumeration.hpp"

namespace tmfractal {

using Input = std::uint32_t;

struct TapeState {
  std::vector<Symbol> cells;  // cells past the end read as 0
  std::int64_t head = 0;
  int state = 1;

  Symbol read() const {
    return static_cast<std::size_t>(head) < cells.size()
               ? cells[static_cast<std::size_t>(head)]
               : Symbol{0};
  }
};

// Space-time diagram: row i is the tape after i steps, one byte per cell
// (1 = nonzero symbol).
struct DiagramBitmap {
  std::size_t width = 0;
  std::size_t rows = 0;
  std::vector<std::uint8_t> bits;

  bool at(std::size_t row, std::size_t col) const {
    return bits[row * width + col] != 0;
  }
};

struct RunResult {
  MachineId machine = 0;
  Input input = 0;
  bool halted = false;
  std::uint64_t steps = 0;        // t; equals the cutoff when !halted
  std::uint64_t space = 0;        // max(x, 1 + highest head index)
  std::uint64_t black_count = 0;  // N, summed over rows 0..t
  std::optional<DiagramBitmap> diagram;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

inline bool operator==(const DiagramBitmap& a, const DiagramBitmap& b) {
  return a.width == b.width && a.rows == b.rows && a.bits == b.bits;
}

TapeState initial_config(Input x);

enum class StepOutcome { Running, Halted };

// Applies one transition in place. On Halted the write has been applied and
// head is -1.
StepOutcome step(const MachineTable& table, TapeState& cfg);

RunResult run(const MachineTable& table, Input x, std::uint64_t cutoff,
              bool record_diagram = false);

std::uint64_t recount_black(const DiagramBitmap& diagram);

}  // namespace tmfractal
