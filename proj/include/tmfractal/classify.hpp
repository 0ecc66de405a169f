#pragma once

// Asymptotic growth classes of runtime, space and boxes sequences, detected
// by exact finite differences, and their aggregation into a distribution.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "tmfractal/metrics.hpp"

namespace tmfractal {

enum class GrowthKind { Constant, Poly, SuperPoly, Unknown };
enum class UnknownReason { None, NonHalting, InsufficientWindow, Ambiguous };

struct GrowthClass {
  GrowthKind kind = GrowthKind::Unknown;
  int degree = 0;  // >= 1 for Poly, 0 otherwise
  UnknownReason reason = UnknownReason::None;
  std::size_t window = 0;  // tail entries examined
  double residual = 0.0;   // largest |difference| at the deciding order

  static GrowthClass constant(std::size_t window = 0);
  static GrowthClass poly(int degree, std::size_t window = 0);
  static GrowthClass super_poly(std::size_t window = 0);
  static GrowthClass unknown(UnknownReason reason, std::size_t window = 0);

  // Identity ignores the evidence fields.
  friend bool operator==(const GrowthClass& a, const GrowthClass& b) {
    return a.kind == b.kind && a.degree == b.degree && a.reason == b.reason;
  }
  friend bool operator<(const GrowthClass& a, const GrowthClass& b) {
    return std::tie(a.kind, a.degree, a.reason) < std::tie(b.kind, b.degree, b.reason);
  }
};

struct ClassifierConfig {
  std::size_t prefix_skip = 4;
  double zero_tol = 0.0;
  int max_degree = 5;
  double growth_floor = 0.1;
  // Largest period p for which growth is judged per residue class x mod p.
  // 1 means plain finite differences.
  std::size_t max_period = 2;
  double tail_fraction = kDefaultTailFraction;

  // "prefix_skip=4 zero_tol=0 max_degree=5 growth_floor=0.1 max_period=2 tail=0.5"
  std::string describe() const;
};

// Entries without a value are non-halting runs.
GrowthClass classify_growth(std::span<const std::optional<std::uint64_t>> values,
                            const ClassifierConfig& config = {});
GrowthClass classify_growth(std::span<const std::uint64_t> values,
                            const ClassifierConfig& config = {});

struct MachineClassification {
  MachineId machine = 0;
  GrowthClass boxes_class;
  GrowthClass runtime_class;
  GrowthClass space_class;
  std::optional<DimensionEstimate> dimension;  // empty on insufficient data
};

MachineClassification classify_machine(const MachineSequences& seq,
                                       const ClassifierConfig& config = {});

using ClassTriple = std::tuple<GrowthClass, GrowthClass, GrowthClass>;  // boxes, runtime, space

struct DistributionFilter {
  std::string description;
  std::function<bool(const MachineClassification&)> accept;

  // Super-linear runtime only, no Unknown classes.
  static DistributionFilter super_linear_runtime();
  static DistributionFilter all_known();
};

struct DistributionReport {
  std::map<ClassTriple, std::uint64_t> cells;
  std::uint64_t total_considered = 0;
  std::uint64_t total_seen = 0;
  std::string filters;

  std::uint64_t count(const GrowthClass& boxes, const GrowthClass& runtime,
                      const GrowthClass& space) const;
};

DistributionReport distribution_report(std::span<const MachineClassification> items,
                                       const DistributionFilter& filter =
                                           DistributionFilter::super_linear_runtime());

// Incremental form used when streaming classifications from disk.
class DistributionBuilder {
 public:
  explicit DistributionBuilder(DistributionFilter filter =
                                   DistributionFilter::super_linear_runtime());
  void add(const MachineClassification& item);
  const DistributionReport& report() const { return report_; }

 private:
  DistributionFilter filter_;
  DistributionReport report_;
};

}  // namespace tmfractal
