#include "tmfractal/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tmfractal/errors.hpp"

namespace tmfractal {

GrowthClass GrowthClass::constant(std::size_t window) {
  GrowthClass g;
  g.kind = GrowthKind::Constant;
  g.window = window;
  return g;
}

GrowthClass GrowthClass::poly(int degree, std::size_t window) {
  GrowthClass g;
  g.kind = GrowthKind::Poly;
  g.degree = degree;
  g.window = window;
  return g;
}

GrowthClass GrowthClass::super_poly(std::size_t window) {
  GrowthClass g;
  g.kind = GrowthKind::SuperPoly;
  g.window = window;
  return g;
}

GrowthClass GrowthClass::unknown(UnknownReason reason, std::size_t window) {
  GrowthClass g;
  g.kind = GrowthKind::Unknown;
  g.reason = reason;
  g.window = window;
  return g;
}

std::string ClassifierConfig::describe() const {
  std::ostringstream out;
  out << "prefix_skip=" << prefix_skip << " zero_tol=" << zero_tol
      << " max_degree=" << max_degree << " growth_floor=" << growth_floor
      << " max_period=" << max_period << " tail=" << tail_fraction;
  return out.str();
}

namespace {

// Largest magnitude in diffs; differences are exact in 128-bit integers.
double max_abs(const std::vector<__int128>& diffs) {
  double m = 0.0;
  for (__int128 d : diffs) m = std::max(m, std::fabs(static_cast<double>(d)));
  return m;
}

struct DegreeFit {
  int degree = 0;  // 0 = constant
  double residual = 0.0;
};

// Smallest j such that the (j+1)-th differences vanish, with at least
// kMinZeros entries left to vouch for it. Empty if none up to max_degree.
constexpr std::size_t kMinZeros = 3;

std::optional<DegreeFit> fit_degree(const std::vector<std::uint64_t>& seq,
                                    const ClassifierConfig& config, std::size_t min_zeros) {
  std::vector<__int128> diffs(seq.begin(), seq.end());
  for (int j = 0; j <= config.max_degree; ++j) {
    for (std::size_t i = 0; i + 1 < diffs.size(); ++i) diffs[i] = diffs[i + 1] - diffs[i];
    if (!diffs.empty()) diffs.pop_back();
    if (diffs.size() < min_zeros) return std::nullopt;
    const double residual = max_abs(diffs);
    if (residual <= config.zero_tol) return DegreeFit{j, residual};
  }
  return std::nullopt;
}

// Quasi-polynomial fit: every residue class x mod period is polynomial; the
// degree is the largest among them.
std::optional<DegreeFit> fit_with_period(const std::vector<std::uint64_t>& tail,
                                         const ClassifierConfig& config, std::size_t period) {
  // Period 1 keeps the plain rule: whatever the window allows.
  const std::size_t min_zeros = period == 1 ? 1 : kMinZeros;
  DegreeFit worst;
  for (std::size_t r = 0; r < period; ++r) {
    std::vector<std::uint64_t> sub;
    for (std::size_t i = r; i < tail.size(); i += period) sub.push_back(tail[i]);
    const auto fit = fit_degree(sub, config, min_zeros);
    if (!fit) return std::nullopt;
    worst.degree = std::max(worst.degree, fit->degree);
    worst.residual = std::max(worst.residual, fit->residual);
  }
  return worst;
}

bool grows_with_stride(const std::vector<std::uint64_t>& tail, double floor,
                       std::size_t stride) {
  if (tail.size() <= stride) return false;
  for (std::size_t i = 0; i + stride < tail.size(); ++i) {
    if (tail[i] == 0 ||
        static_cast<double>(tail[i + stride]) < (1.0 + floor) * static_cast<double>(tail[i])) {
      return false;
    }
  }
  return true;
}

GrowthClass classify_tail(const std::vector<std::uint64_t>& tail,
                          const ClassifierConfig& config) {
  const std::size_t window = tail.size();
  for (std::size_t p = 1; p <= config.max_period; ++p) {
    const auto fit = fit_with_period(tail, config, p);
    if (!fit) continue;
    GrowthClass g = fit->degree == 0 ? GrowthClass::constant(window)
                                     : GrowthClass::poly(fit->degree, window);
    g.residual = fit->residual;
    return g;
  }
  if (grows_with_stride(tail, config.growth_floor, 1)) return GrowthClass::super_poly(window);
  return GrowthClass::unknown(UnknownReason::Ambiguous, window);
}

}  // namespace

GrowthClass classify_growth(std::span<const std::optional<std::uint64_t>> values,
                            const ClassifierConfig& config) {
  if (config.max_degree < 1) throw ValidationError("max_degree must be >= 1");
  if (config.max_period < 1) throw ValidationError("max_period must be >= 1");
  const std::size_t need = config.prefix_skip + static_cast<std::size_t>(config.max_degree) + 4;
  const std::size_t window =
      values.size() > config.prefix_skip ? values.size() - config.prefix_skip : 0;
  if (values.size() < need) {
    return GrowthClass::unknown(UnknownReason::InsufficientWindow, window);
  }
  std::vector<std::uint64_t> tail;
  tail.reserve(window);
  for (std::size_t i = config.prefix_skip; i < values.size(); ++i) {
    if (!values[i]) return GrowthClass::unknown(UnknownReason::NonHalting, window);
    tail.push_back(*values[i]);
  }
  return classify_tail(tail, config);
}

GrowthClass classify_growth(std::span<const std::uint64_t> values,
                            const ClassifierConfig& config) {
  std::vector<std::optional<std::uint64_t>> wrapped(values.begin(), values.end());
  return classify_growth(std::span<const std::optional<std::uint64_t>>(wrapped), config);
}

MachineClassification classify_machine(const MachineSequences& seq,
                                       const ClassifierConfig& config) {
  MachineClassification out;
  out.machine = seq.machine;
  out.runtime_class = classify_growth(seq.t_seq, config);
  out.boxes_class = classify_growth(seq.n_seq, config);

  // Space values at the cutoff are not a space function; mask like t and N.
  std::vector<std::optional<std::uint64_t>> space(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq.halted_mask[i]) space[i] = seq.space_seq[i];
  }
  out.space_class = classify_growth(space, config);

  try {
    out.dimension = box_dimension(seq, config.tail_fraction);
  } catch (const InsufficientData&) {
    out.dimension.reset();
  }
  return out;
}

namespace {

bool any_unknown(const MachineClassification& c) {
  return c.runtime_class.kind == GrowthKind::Unknown ||
         c.space_class.kind == GrowthKind::Unknown ||
         c.boxes_class.kind == GrowthKind::Unknown;
}

}  // namespace

DistributionFilter DistributionFilter::super_linear_runtime() {
  return {"runtime super-linear (not O(1), not O(n)); Unknown classes excluded",
          [](const MachineClassification& c) {
            if (any_unknown(c)) return false;
            const GrowthClass& rt = c.runtime_class;
            return !(rt.kind == GrowthKind::Constant ||
                     (rt.kind == GrowthKind::Poly && rt.degree == 1));
          }};
}

DistributionFilter DistributionFilter::all_known() {
  return {"all machines with known classes",
          [](const MachineClassification& c) { return !any_unknown(c); }};
}

std::uint64_t DistributionReport::count(const GrowthClass& boxes,
                                        const GrowthClass& runtime,
                                        const GrowthClass& space) const {
  const auto it = cells.find({boxes, runtime, space});
  return it == cells.end() ? 0 : it->second;
}

DistributionBuilder::DistributionBuilder(DistributionFilter filter)
    : filter_(std::move(filter)) {
  report_.filters = filter_.description;
}

void DistributionBuilder::add(const MachineClassification& item) {
  ++report_.total_seen;
  if (!filter_.accept(item)) return;
  ++report_.cells[{item.boxes_class, item.runtime_class, item.space_class}];
  ++report_.total_considered;
}

DistributionReport distribution_report(std::span<const MachineClassification> items,
                                       const DistributionFilter& filter) {
  DistributionBuilder builder(filter);
  for (const auto& item : items) builder.add(item);
  return builder.report();
}

}  // namespace tmfractal
