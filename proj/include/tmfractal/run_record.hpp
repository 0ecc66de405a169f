#pragma once

#include <cstdint>

#include "tmfractal/enumeration.hpp"
#include "tmfractal/simulator.hpp"

namespace tmfractal {

// Flat persisted form of a RunResult: one row of the runs dataset.
struct RunRecord {
  MachineId id = 0;
  Input x = 0;
  bool halted = false;
  std::uint64_t t = 0;            // 0 when !halted
  std::uint64_t space = 0;        // value at the cutoff when !halted
  std::uint64_t black_count = 0;  // 0 when !halted

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

RunRecord to_record(const RunResult& result);

}  // namespace tmfractal
