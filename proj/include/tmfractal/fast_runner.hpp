#pragma once

// Sweep-oriented simulator. Produces the same (halted, t, space, N) records
// as tmfractal::run but reuses its tape buffer across runs and can stop early
// on two provably non-halting patterns:
//
//  * right escape: the head enters a never-visited cell in a state whose
//    blank-reading transitions only ever move right, so it marches right
//    until the cutoff;
//  * exact repetition: the full configuration (state, head, tape) equals a
//    snapshot taken at an earlier power-of-two step (Brent's scheme), so the
//    run is periodic and its head extent is already known.
//
// Neither shortcut changes the record; non-halted records carry only space.

#include <cstdint>
#include <vector>

#include "tmfractal/enumeration.hpp"
#include "tmfractal/run_record.hpp"
#include "tmfractal/simulator.hpp"

namespace tmfractal {

class FastRunner {
 public:
  FastRunner(std::uint64_t cutoff, Input max_input, bool accelerate = true);

  void load(const MachineTable& table, MachineId id);
  RunRecord run(Input x);

  std::uint64_t cutoff() const { return cutoff_; }

 private:
  struct PackedRule {
    Symbol write;
    std::int8_t delta;
    std::uint8_t next;  // 0-based
  };

  RunRecord run_plain(Input x);
  RunRecord run_accelerated(Input x);

  std::uint64_t cutoff_;
  Input max_input_;
  bool accelerate_;
  int symbols_ = 2;
  MachineId id_ = 0;
  std::vector<PackedRule> rules_;
  std::vector<std::uint8_t> escapes_right_;  // per 0-based state
  std::vector<Symbol> tape_;
  std::vector<Symbol> snapshot_;
};

}  // namespace tmfractal
