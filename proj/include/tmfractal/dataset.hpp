#pragma once

// File formats.
//
//   runs     id,x,halted,t,space,N       (t and N empty when halted = 0)
//   dims     id,final_value,liminf_proxy,slope,is_constant_runtime
//   classes  id,runtime_class,space_class,boxes_class,dimension
//
// Derived files (dims, classes) start with one provenance comment line
//   # source=<runs file> config_hash=<16 hex> config=<canonical config>
// Class tokens: C, P1..P5, SP, U:<non-halting|insufficient-window|ambiguous>.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmfractal/classify.hpp"
#include "tmfractal/metrics.hpp"
#include "tmfractal/run_record.hpp"

namespace tmfractal {

inline constexpr const char* kRunsHeader = "id,x,halted,t,space,N";
inline constexpr const char* kDimsHeader =
    "id,final_value,liminf_proxy,slope,is_constant_runtime";
inline constexpr const char* kClassesHeader =
    "id,runtime_class,space_class,boxes_class,dimension";

// ---- runs ----------------------------------------------------------------

void append_run_row(std::string& out, const RunRecord& rec);
RunRecord parse_run_row(std::string_view line);  // throws IntegrityError

void write_runs(const std::filesystem::path& path, std::span<const RunRecord> records);

// Streams records from a runs file, validating the header.
class RunsReader {
 public:
  explicit RunsReader(const std::filesystem::path& path);
  std::optional<RunRecord> next();
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::string line_;
  std::uint64_t line_no_ = 1;
};

std::vector<RunRecord> read_runs(const std::filesystem::path& path);

// Calls fn once per machine with its consecutive records. Throws
// IntegrityError if ids are not sorted.
void for_each_machine(const std::filesystem::path& path,
                      const std::function<void(std::span<const RunRecord>)>& fn);

// Sequences for one machine. Throws IntegrityError naming (id, x) when a row
// in the file's input range is missing, or when the id is absent.
MachineSequences load_sequences(const std::filesystem::path& path, MachineId id);

// ---- sidecar metadata ------------------------------------------------------

// key=value lines, e.g. the sweep configuration next to a runs file.
using Metadata = std::map<std::string, std::string>;
void write_metadata(const std::filesystem::path& path, const Metadata& meta);
std::optional<Metadata> read_metadata(const std::filesystem::path& path);
std::filesystem::path metadata_path(const std::filesystem::path& data_file);

// ---- provenance -------------------------------------------------------------

std::uint64_t config_hash(std::string_view canonical_config);
std::string hex64(std::uint64_t value);

struct Provenance {
  std::string source;
  std::string config;
  std::string config_hash;  // as recorded
};

std::string provenance_line(const std::string& source, const std::string& config);
Provenance parse_provenance(std::string_view line);  // throws IntegrityError

// ---- dims ------------------------------------------------------------------

struct DimsRow {
  MachineId id = 0;
  DimensionEstimate estimate;
};

void write_dims_header(std::ostream& out, const std::string& source,
                       const std::string& config);
void write_dims_row(std::ostream& out, const DimsRow& row);
std::vector<DimsRow> read_dims(const std::filesystem::path& path,
                               Provenance* provenance = nullptr);

// ---- classes ---------------------------------------------------------------

std::string class_token(const GrowthClass& g);
GrowthClass parse_class_token(std::string_view token);  // throws IntegrityError

void write_classes_header(std::ostream& out, const std::string& source,
                          const std::string& config);
void write_classes_row(std::ostream& out, const MachineClassification& c);
// Rows carry the dimension's final value only; other estimate fields are 0.
std::vector<MachineClassification> read_classes(const std::filesystem::path& path,
                                                Provenance* provenance = nullptr);

// ---- report ----------------------------------------------------------------

// O(1), O(n), O(n^d), o(P), ?(reason)
std::string class_notation(const GrowthClass& g);

struct ReportConfig {
  std::string space;      // "(3,2)"
  std::string inputs;     // "1..21"
  std::string cutoff;     // "60000"
  std::string classifier; // ClassifierConfig::describe()
  std::string source;
};

std::string write_report(const DistributionReport& report, const ReportConfig& config);

// Six significant digits, no separators; "nan" for NaN.
std::string format_real(double value);

}  // namespace tmfractal
