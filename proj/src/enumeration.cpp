#include "tmfractal/enumeration.hpp"

#include <limits>
#include <string>

#include "tmfractal/errors.hpp"

namespace tmfractal {

MachineSpace MachineSpace::make(int states, int symbols) {
  if (states < 1) throw ValidationError("states must be >= 1");
  if (symbols < 2) throw ValidationError("symbols must be >= 2");
  if (symbols > 256) throw ValidationError("symbols must be <= 256");
  MachineSpace space{states, symbols};
  (void)space.space_size();  // overflow check
  return space;
}

std::uint64_t MachineSpace::space_size() const {
  const std::uint64_t b = base();
  std::uint64_t size = 1;
  for (int i = 0; i < table_cells(); ++i) {
    if (size > std::numeric_limits<std::uint64_t>::max() / b) {
      throw ValidationError("machine space (" + std::to_string(states) + "," +
                            std::to_string(symbols) +
                            ") is too large to enumerate");
    }
    size *= b;
  }
  return size;
}

MachineTable::MachineTable(MachineSpace space, std::vector<Transition> rules)
    : space_(space), rules_(std::move(rules)) {
  if (rules_.size() != static_cast<std::size_t>(space_.table_cells())) {
    throw ValidationError("transition table has " +
                          std::to_string(rules_.size()) + " cells, expected " +
                          std::to_string(space_.table_cells()));
  }
  for (const Transition& rule : rules_) {
    if (rule.write >= space_.symbols) {
      throw ValidationError("written symbol " + std::to_string(rule.write) +
                            " outside [0, " + std::to_string(space_.symbols) +
                            ")");
    }
    if (rule.next_state < 1 || rule.next_state > space_.states) {
      throw ValidationError("next state " + std::to_string(rule.next_state) +
                            " outside [1, " + std::to_string(space_.states) +
                            "]");
    }
  }
}

namespace {

void check_id(const MachineSpace& space, MachineId id) {
  const std::uint64_t size = space.space_size();
  if (id >= size) {
    throw ValidationError("machine id " + std::to_string(id) +
                          " out of range: space (" +
                          std::to_string(space.states) + "," +
                          std::to_string(space.symbols) + ") has " +
                          std::to_string(size) + " machines");
  }
}

// Table cell (in MachineTable::rules order) described by digit position p.
std::size_t cell_of_digit(const MachineSpace& space, int p) {
  const int k = space.symbols;
  const int state = p / k + 1;
  const int read = k - 1 - p % k;
  return static_cast<std::size_t>(state - 1) * k + read;
}

}  // namespace

std::vector<std::uint64_t> rule_digits(const MachineSpace& space, MachineId id) {
  check_id(space, id);
  const std::uint64_t b = space.base();
  std::vector<std::uint64_t> digits(space.table_cells());
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    *it = id % b;
    id /= b;
  }
  return digits;
}

MachineTable decode(const MachineSpace& space, MachineId id) {
  const auto digits = rule_digits(space, id);
  const std::uint64_t two_k = 2ull * space.symbols;
  std::vector<Transition> rules(digits.size());
  for (int p = 0; p < space.table_cells(); ++p) {
    const std::uint64_t d = digits[p];
    Transition& rule = rules[cell_of_digit(space, p)];
    rule.next_state = static_cast<int>(d / two_k) + 1;
    rule.write = static_cast<Symbol>((d % two_k) / 2);
    rule.move = (d % 2 == 1) ? Move::Left : Move::Right;
  }
  return MachineTable(space, std::move(rules));
}

MachineId encode(const MachineTable& table) {
  const MachineSpace& space = table.space();
  const std::uint64_t two_k = 2ull * space.symbols;
  MachineId id = 0;
  for (int p = 0; p < space.table_cells(); ++p) {
    const Transition& rule = table.rules()[cell_of_digit(space, p)];
    const std::uint64_t d = static_cast<std::uint64_t>(rule.next_state - 1) * two_k +
                            2ull * rule.write +
                            (rule.move == Move::Left ? 1 : 0);
    id = id * space.base() + d;
  }
  return id;
}

std::ranges::iota_view<MachineId, MachineId> enumerate(const MachineSpace& space,
                                                       MachineId first,
                                                       MachineId last) {
  const std::uint64_t size = space.space_size();
  if (last > size) {
    throw ValidationError("id range end " + std::to_string(last) +
                          " exceeds space size " + std::to_string(size));
  }
  if (last < first) last = first;
  return std::views::iota(first, last);
}

}  // namespace tmfractal
