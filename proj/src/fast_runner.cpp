#include "tmfractal/fast_runner.hpp"

#include <algorithm>
#include <cstring>

#include "tmfractal/errors.hpp"

namespace tmfractal {

RunRecord to_record(const RunResult& result) {
  RunRecord rec;
  rec.id = result.machine;
  rec.x = result.input;
  rec.halted = result.halted;
  rec.space = result.space;
  if (result.halted) {
    rec.t = result.steps;
    rec.black_count = result.black_count;
  }
  return rec;
}

FastRunner::FastRunner(std::uint64_t cutoff, Input max_input, bool accelerate)
    : cutoff_(cutoff), max_input_(max_input), accelerate_(accelerate) {
  if (cutoff == 0) throw ValidationError("cutoff must be >= 1");
  if (max_input == 0) throw ValidationError("input must be >= 1");
  // Head positions never exceed cutoff; inputs occupy [0, max_input).
  tape_.assign(static_cast<std::size_t>(std::max<std::uint64_t>(cutoff, max_input)) + 2,
               Symbol{0});
}

void FastRunner::load(const MachineTable& table, MachineId id) {
  const MachineSpace& space = table.space();
  if (space.states > 255) throw ValidationError("too many states for FastRunner");
  id_ = id;
  symbols_ = space.symbols;
  rules_.resize(table.rules().size());
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const Transition& r = table.rules()[i];
    rules_[i] = {r.write, static_cast<std::int8_t>(r.move == Move::Left ? -1 : 1),
                 static_cast<std::uint8_t>(r.next_state - 1)};
  }
  // A state escapes right if following blank-reading transitions from it
  // revisits a state without ever moving left.
  escapes_right_.assign(space.states, 0);
  for (int start = 0; start < space.states; ++start) {
    std::vector<std::uint8_t> seen(space.states, 0);
    int q = start;
    bool escapes = false;
    while (true) {
      const PackedRule& r = rules_[static_cast<std::size_t>(q) * symbols_];
      if (r.delta < 0) break;
      seen[q] = 1;
      q = r.next;
      if (seen[q]) {
        escapes = true;
        break;
      }
    }
    escapes_right_[start] = escapes ? 1 : 0;
  }
}

RunRecord FastRunner::run(Input x) {
  if (x == 0) throw ValidationError("input must be >= 1 (unary, non-empty)");
  if (x > max_input_) throw ValidationError("input exceeds FastRunner capacity");
  return accelerate_ ? run_accelerated(x) : run_plain(x);
}

RunRecord FastRunner::run_plain(Input x) {
  std::fill_n(tape_.begin(), x, Symbol{1});
  std::int64_t head = 0;
  std::int64_t max_head = 0;
  std::size_t q = 0;
  std::uint64_t nonzero = x;
  std::uint64_t total = x;
  RunRecord rec{id_, x, false, 0, 0, 0};
  const std::size_t k = static_cast<std::size_t>(symbols_);
  std::uint64_t t = 0;
  while (t < cutoff_) {
    Symbol& cell = tape_[static_cast<std::size_t>(head)];
    const PackedRule r = rules_[q * k + cell];
    nonzero = nonzero + (r.write != 0) - (cell != 0);
    cell = r.write;
    total += nonzero;
    q = r.next;
    head += r.delta;
    ++t;
    if (head < 0) {
      rec.halted = true;
      break;
    }
    max_head = std::max(max_head, head);
  }
  const auto extent = std::max<std::size_t>(x, static_cast<std::size_t>(max_head) + 1);
  std::fill_n(tape_.begin(), extent, Symbol{0});
  rec.space = extent;
  if (rec.halted) {
    rec.t = t;
    rec.black_count = total;
  }
  return rec;
}

RunRecord FastRunner::run_accelerated(Input x) {
  std::fill_n(tape_.begin(), x, Symbol{1});
  std::int64_t head = 0;
  std::int64_t max_head = 0;
  std::size_t q = 0;
  std::uint64_t nonzero = x;
  std::uint64_t total = x;
  RunRecord rec{id_, x, false, 0, 0, 0};
  const std::size_t k = static_cast<std::size_t>(symbols_);
  // Cells at or beyond `fresh` have never been visited or written.
  std::int64_t fresh = x;

  std::uint64_t next_snapshot = 1;
  std::size_t snap_q = 0;
  std::int64_t snap_head = -1;
  std::size_t snap_extent = 0;
  bool periodic = false;
  std::uint64_t escape_at = 0;
  std::int64_t escape_head = -1;

  std::uint64_t t = 0;
  while (t < cutoff_) {
    Symbol& cell = tape_[static_cast<std::size_t>(head)];
    const PackedRule r = rules_[q * k + cell];
    nonzero = nonzero + (r.write != 0) - (cell != 0);
    cell = r.write;
    total += nonzero;
    q = r.next;
    head += r.delta;
    ++t;
    if (head < 0) {
      rec.halted = true;
      break;
    }
    if (head > max_head) {
      max_head = head;
      if (head >= fresh) {
        fresh = head + 1;
        if (escapes_right_[q]) {
          escape_at = t;
          escape_head = head;
          break;
        }
      }
    }
    if (head == snap_head && q == snap_q) {
      const auto extent = static_cast<std::size_t>(fresh);
      if (std::memcmp(tape_.data(), snapshot_.data(), snap_extent) == 0 &&
          std::all_of(tape_.begin() + static_cast<std::ptrdiff_t>(snap_extent),
                      tape_.begin() + static_cast<std::ptrdiff_t>(extent),
                      [](Symbol s) { return s == 0; })) {
        periodic = true;
        break;
      }
    }
    if (t == next_snapshot) {
      snap_q = q;
      snap_head = head;
      snap_extent = static_cast<std::size_t>(fresh);
      snapshot_.assign(tape_.begin(), tape_.begin() + static_cast<std::ptrdiff_t>(snap_extent));
      next_snapshot *= 2;
    }
  }

  const auto touched = static_cast<std::size_t>(fresh);
  std::fill_n(tape_.begin(), touched, Symbol{0});
  if (rec.halted) {
    rec.t = t;
    rec.black_count = total;
    rec.space = std::max<std::uint64_t>(x, static_cast<std::uint64_t>(max_head) + 1);
  } else if (escape_head >= 0) {
    const std::uint64_t last = static_cast<std::uint64_t>(escape_head) + (cutoff_ - escape_at);
    rec.space = std::max<std::uint64_t>(x, last + 1);
  } else {
    (void)periodic;
    rec.space = std::max<std::uint64_t>(x, static_cast<std::uint64_t>(max_head) + 1);
  }
  return rec;
}

}  // namespace tmfractal
