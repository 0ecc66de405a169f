#pragma once

// Per-machine sequences over an input range and the box dimension
//
//   d(tau) = 2                                  if t(tau, x) is eventually constant
//   d(tau) = liminf_{x->inf} log N(tau,x) / log t(tau,x)   otherwise
//
// estimated from finite data by the minimum ratio over a trailing window,
// with a log-log regression slope reported alongside.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tmfractal/run_record.hpp"

namespace tmfractal {

struct MachineSequences {
  MachineId machine = 0;
  std::vector<Input> inputs;  // contiguous, ascending
  std::vector<std::optional<std::uint64_t>> t_seq;  // empty when not halted
  std::vector<std::uint64_t> space_seq;
  std::vector<std::optional<std::uint64_t>> n_seq;  // empty when not halted
  std::vector<bool> halted_mask;

  std::size_t size() const { return inputs.size(); }
};

// Throws ValidationError on mixed ids, unsorted or non-contiguous inputs.
MachineSequences build_sequences(std::span<const RunRecord> records);

struct RatioPoint {
  Input x = 0;
  double ratio = 0.0;
};

// log N / log t for every halted x with t >= 2. Empty when none qualify.
std::vector<RatioPoint> ratio_sequence(const MachineSequences& seq);

struct DimensionEstimate {
  double liminf_proxy = 0.0;
  double slope = 0.0;  // NaN when fewer than two distinct runtimes
  bool is_constant_runtime = false;
  double final_value = 0.0;
};

constexpr double kDefaultTailFraction = 0.5;
constexpr std::size_t kMinRatioPoints = 8;

// Tail window = last ceil(tail_fraction * size) entries. Throws
// InsufficientData when neither clause can be evaluated.
DimensionEstimate box_dimension(const MachineSequences& seq,
                                double tail_fraction = kDefaultTailFraction);

// (n + 1) / n for a machine running in time O(x^n), n >= 1.
double theoretical_dimension(int runtime_degree);

// Ordinary least-squares slope of ys against xs. NaN if xs has no spread.
double least_squares_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace tmfractal
