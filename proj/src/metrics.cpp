#include "tmfractal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tmfractal/errors.hpp"

namespace tmfractal {

MachineSequences build_sequences(std::span<const RunRecord> records) {
  MachineSequences seq;
  if (records.empty()) return seq;
  seq.machine = records.front().id;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RunRecord& r = records[i];
    if (r.id != seq.machine) {
      throw ValidationError("mixed machine ids " + std::to_string(seq.machine) +
                            " and " + std::to_string(r.id) + " in one sequence");
    }
    if (i > 0 && r.x != records[i - 1].x + 1) {
      throw ValidationError("inputs for machine " + std::to_string(r.id) +
                            " are not contiguous at x=" + std::to_string(r.x));
    }
    seq.inputs.push_back(r.x);
    seq.halted_mask.push_back(r.halted);
    seq.space_seq.push_back(r.space);
    if (r.halted) {
      seq.t_seq.emplace_back(r.t);
      seq.n_seq.emplace_back(r.black_count);
    } else {
      seq.t_seq.emplace_back(std::nullopt);
      seq.n_seq.emplace_back(std::nullopt);
    }
  }
  return seq;
}

namespace {

bool eligible(const MachineSequences& seq, std::size_t i) {
  return seq.halted_mask[i] && *seq.t_seq[i] >= 2;
}

double ratio_at(const MachineSequences& seq, std::size_t i) {
  return std::log(static_cast<double>(*seq.n_seq[i])) /
         std::log(static_cast<double>(*seq.t_seq[i]));
}

}  // namespace

std::vector<RatioPoint> ratio_sequence(const MachineSequences& seq) {
  std::vector<RatioPoint> out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (eligible(seq, i)) out.push_back({seq.inputs[i], ratio_at(seq, i)});
  }
  return out;
}

double least_squares_slope(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / sxx;
}

DimensionEstimate box_dimension(const MachineSequences& seq, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw ValidationError("tail fraction must lie in (0, 1]");
  }
  const std::size_t len = seq.size();
  const auto window = std::min<std::size_t>(
      len, static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(len))));
  const std::size_t begin = len - window;

  // Constant clause: every halted runtime in the tail is the same.
  std::optional<std::uint64_t> common;
  std::size_t halted_in_tail = 0;
  bool constant = true;
  for (std::size_t i = begin; i < len; ++i) {
    if (!seq.halted_mask[i]) continue;
    ++halted_in_tail;
    if (!common) {
      common = *seq.t_seq[i];
    } else if (*common != *seq.t_seq[i]) {
      constant = false;
    }
  }
  DimensionEstimate est;
  if (constant && halted_in_tail >= 2) {
    est.is_constant_runtime = true;
    est.final_value = 2.0;
    est.liminf_proxy = 2.0;
    est.slope = std::numeric_limits<double>::quiet_NaN();
    return est;
  }

  std::size_t total_eligible = 0;
  for (std::size_t i = 0; i < len; ++i) total_eligible += eligible(seq, i) ? 1 : 0;
  std::vector<double> log_t, log_n;
  double proxy = std::numeric_limits<double>::infinity();
  for (std::size_t i = begin; i < len; ++i) {
    if (!eligible(seq, i)) continue;
    proxy = std::min(proxy, ratio_at(seq, i));
    log_t.push_back(std::log(static_cast<double>(*seq.t_seq[i])));
    log_n.push_back(std::log(static_cast<double>(*seq.n_seq[i])));
  }
  if (total_eligible < kMinRatioPoints || log_t.empty()) {
    throw InsufficientData("machine " + std::to_string(seq.machine) + " has " +
                               std::to_string(total_eligible) +
                               " halted inputs with t >= 2; need " +
                               std::to_string(kMinRatioPoints),
                           total_eligible);
  }
  est.liminf_proxy = proxy;
  est.slope = least_squares_slope(log_t, log_n);
  est.final_value = proxy;
  return est;
}

double theoretical_dimension(int runtime_degree) {
  if (runtime_degree < 1) {
    throw ValidationError("runtime degree must be >= 1; constant runtime has dimension 2");
  }
  return static_cast<double>(runtime_degree + 1) / runtime_degree;
}

}  // namespace tmfractal
