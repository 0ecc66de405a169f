#pragma once

// Wolfram-style numbering of (states, symbols) Turing machine tables.
//
// A rule number is written in base 2*s*k with exactly s*k digits, most
// significant first. Digit p describes the cell (state p/k + 1, read symbol
// k-1 - p%k). A digit d decodes to next state d/(2k) + 1, written symbol
// (d % 2k)/2, and a LEFT move when d is odd. This layout reproduces the
// runtimes of the known (3,2) busy beavers 599063 and 666364.

#include <cstdint>
#include <ranges>
#include <vector>

namespace tmfractal {

using MachineId = std::uint64_t;
using Symbol = std::uint8_t;

struct MachineSpace {
  int states = 3;
  int symbols = 2;

  // Throws ValidationError for states < 1, symbols < 2 or spaces whose size
  // does not fit in 64 bits.
  static MachineSpace make(int states, int symbols);

  std::uint64_t base() const { return 2ull * states * symbols; }
  int table_cells() const { return states * symbols; }
  std::uint64_t space_size() const;

  bool contains(MachineId id) const { return id < space_size(); }
  friend bool operator==(const MachineSpace&, const MachineSpace&) = default;
};

enum class Move : std::uint8_t { Left, Right };

struct Transition {
  Symbol write = 0;
  Move move = Move::Left;
  int next_state = 1;  // 1-based

  friend bool operator==(const Transition&, const Transition&) = default;
};

class MachineTable {
 public:
  MachineTable(MachineSpace space, std::vector<Transition> rules);

  const MachineSpace& space() const { return space_; }
  const Transition& at(int state, Symbol read) const {
    return rules_[static_cast<std::size_t>(state - 1) * space_.symbols + read];
  }
  // Rules in (state, symbol) order: index (state-1)*k + symbol.
  const std::vector<Transition>& rules() const { return rules_; }

  friend bool operator==(const MachineTable&, const MachineTable&) = default;

 private:
  MachineSpace space_;
  std::vector<Transition> rules_;
};

// Base-2sk digits of id, most significant first, zero padded to s*k digits.
std::vector<std::uint64_t> rule_digits(const MachineSpace& space, MachineId id);

MachineTable decode(const MachineSpace& space, MachineId id);
MachineId encode(const MachineTable& table);

// Ids in [first, last) ascending, each exactly once. An empty or inverted
// interval yields nothing. Throws ValidationError if last exceeds the space.
std::ranges::iota_view<MachineId, MachineId> enumerate(const MachineSpace& space,
                                                       MachineId first,
                                                       MachineId last);

}  // namespace tmfractal
