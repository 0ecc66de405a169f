#include "tmfractal/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <sstream>

#include "tmfractal/errors.hpp"

namespace tmfractal {

namespace {

std::vector<std::string_view> split_fields(std::string_view line, char sep = ',') {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::uint64_t parse_u64(std::string_view field, std::string_view what,
                        std::string_view line) {
  std::uint64_t value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw IntegrityError("bad " + std::string(what) + " field '" + std::string(field) +
                         "' in row: " + std::string(line));
  }
  return value;
}

double parse_real(std::string_view field, std::string_view line) {
  const std::string text(field);
  if (text == "nan") return std::nan("");
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw IntegrityError("bad number '" + text + "' in row: " + std::string(line));
  }
  return value;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

// ---- runs ----------------------------------------------------------------

void append_run_row(std::string& out, const RunRecord& rec) {
  char buf[128];
  int n;
  if (rec.halted) {
    n = std::snprintf(buf, sizeof buf, "%llu,%u,1,%llu,%llu,%llu\n",
                      static_cast<unsigned long long>(rec.id), rec.x,
                      static_cast<unsigned long long>(rec.t),
                      static_cast<unsigned long long>(rec.space),
                      static_cast<unsigned long long>(rec.black_count));
  } else {
    n = std::snprintf(buf, sizeof buf, "%llu,%u,0,,%llu,\n",
                      static_cast<unsigned long long>(rec.id), rec.x,
                      static_cast<unsigned long long>(rec.space));
  }
  out.append(buf, static_cast<std::size_t>(n));
}

RunRecord parse_run_row(std::string_view line) {
  const auto f = split_fields(line);
  if (f.size() != 6) {
    throw IntegrityError("expected 6 fields in runs row: " + std::string(line));
  }
  RunRecord rec;
  rec.id = parse_u64(f[0], "id", line);
  const std::uint64_t x = parse_u64(f[1], "x", line);
  if (x == 0 || x > 0xffffffffull) throw IntegrityError("bad input in row: " + std::string(line));
  rec.x = static_cast<Input>(x);
  if (f[2] == "1") {
    rec.halted = true;
    rec.t = parse_u64(f[3], "t", line);
    rec.black_count = parse_u64(f[5], "N", line);
  } else if (f[2] == "0") {
    if (!f[3].empty() || !f[5].empty()) {
      throw IntegrityError("non-halted row must leave t and N empty: " + std::string(line));
    }
  } else {
    throw IntegrityError("halted must be 0 or 1: " + std::string(line));
  }
  rec.space = parse_u64(f[4], "space", line);
  return rec;
}

void write_runs(const std::filesystem::path& path, std::span<const RunRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  std::string buf = std::string(kRunsHeader) + "\n";
  for (const RunRecord& r : records) append_run_row(buf, r);
  out << buf;
  if (!out) throw IoError("write failed for " + path.string());
}

RunsReader::RunsReader(const std::filesystem::path& path)
    : path_(path), in_(open_in(path)) {
  std::string header;
  if (!std::getline(in_, header)) {
    throw IntegrityError("empty runs file " + path.string());
  }
  strip_cr(header);
  if (header != kRunsHeader) {
    throw IntegrityError("malformed runs header '" + header + "' in " + path.string() +
                         " (expected '" + kRunsHeader + "')");
  }
}

std::optional<RunRecord> RunsReader::next() {
  while (std::getline(in_, line_)) {
    ++line_no_;
    strip_cr(line_);
    if (line_.empty()) continue;
    return parse_run_row(line_);
  }
  return std::nullopt;
}

std::vector<RunRecord> read_runs(const std::filesystem::path& path) {
  RunsReader reader(path);
  std::vector<RunRecord> out;
  while (auto rec = reader.next()) out.push_back(*rec);
  return out;
}

void for_each_machine(const std::filesystem::path& path,
                      const std::function<void(std::span<const RunRecord>)>& fn) {
  RunsReader reader(path);
  std::vector<RunRecord> group;
  while (auto rec = reader.next()) {
    if (!group.empty() && rec->id != group.front().id) {
      if (rec->id < group.front().id) {
        throw IntegrityError("runs file " + path.string() + " is not sorted by id at id " +
                             std::to_string(rec->id));
      }
      fn(group);
      group.clear();
    }
    group.push_back(*rec);
  }
  if (!group.empty()) fn(group);
}

MachineSequences load_sequences(const std::filesystem::path& path, MachineId id) {
  RunsReader reader(path);
  std::optional<Input> lo, hi;
  MachineId first_id = 0;
  std::vector<RunRecord> mine;
  while (auto rec = reader.next()) {
    if (!lo) first_id = rec->id;
    if (rec->id == first_id) {
      lo = lo ? std::min(*lo, rec->x) : rec->x;
      hi = hi ? std::max(*hi, rec->x) : rec->x;
    }
    if (rec->id == id) mine.push_back(*rec);
    if (rec->id > id && rec->id != first_id) break;
  }
  if (!lo) throw IntegrityError("runs file " + path.string() + " has no rows");
  if (mine.empty()) {
    throw IntegrityError("machine " + std::to_string(id) + " not present in " +
                         path.string());
  }
  std::size_t i = 0;
  for (Input x = *lo; x <= *hi; ++x) {
    if (i >= mine.size() || mine[i].x != x) {
      throw IntegrityError("missing row (id=" + std::to_string(id) +
                           ", x=" + std::to_string(x) + ") in " + path.string());
    }
    ++i;
  }
  if (i != mine.size()) {
    throw IntegrityError("unexpected extra rows for machine " + std::to_string(id));
  }
  return build_sequences(mine);
}

// ---- sidecar metadata ------------------------------------------------------

std::filesystem::path metadata_path(const std::filesystem::path& data_file) {
  std::filesystem::path p = data_file;
  p += ".meta";
  return p;
}

void write_metadata(const std::filesystem::path& path, const Metadata& meta) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& [k, v] : meta) out << k << '=' << v << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

std::optional<Metadata> read_metadata(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  Metadata meta;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw IntegrityError("bad metadata line '" + line + "' in " + path.string());
    }
    meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return meta;
}

// ---- provenance -------------------------------------------------------------

std::uint64_t config_hash(std::string_view canonical_config) {
  // FNV-1a, 64 bit.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical_config) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string provenance_line(const std::string& source, const std::string& config) {
  return "# source=" + source + " config_hash=" + hex64(config_hash(config)) +
         " config=" + config;
}

Provenance parse_provenance(std::string_view line) {
  constexpr std::string_view src = "# source=";
  constexpr std::string_view hash = " config_hash=";
  constexpr std::string_view cfg = " config=";
  const auto h = line.find(hash);
  const auto c = line.find(cfg, h == std::string_view::npos ? 0 : h + hash.size());
  if (!line.starts_with(src) || h == std::string_view::npos || c == std::string_view::npos) {
    throw IntegrityError("missing provenance line: " + std::string(line));
  }
  Provenance p;
  p.source = std::string(line.substr(src.size(), h - src.size()));
  p.config_hash = std::string(line.substr(h + hash.size(), c - h - hash.size()));
  p.config = std::string(line.substr(c + cfg.size()));
  return p;
}

namespace {

// Reads the provenance line and checks the header. Returns data lines.
std::vector<std::string> read_derived(const std::filesystem::path& path,
                                      const char* expected_header,
                                      Provenance* provenance) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IntegrityError("empty file " + path.string());
  strip_cr(line);
  const Provenance p = parse_provenance(line);
  if (provenance) *provenance = p;
  if (!std::getline(in, line)) throw IntegrityError("missing header in " + path.string());
  strip_cr(line);
  if (line != expected_header) {
    throw IntegrityError("malformed header '" + line + "' in " + path.string() +
                         " (expected '" + expected_header + "')");
  }
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (!line.empty()) rows.push_back(line);
  }
  return rows;
}

}  // namespace

// ---- dims ------------------------------------------------------------------

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

void write_dims_header(std::ostream& out, const std::string& source,
                       const std::string& config) {
  out << provenance_line(source, config) << '\n' << kDimsHeader << '\n';
}

void write_dims_row(std::ostream& out, const DimsRow& row) {
  const DimensionEstimate& e = row.estimate;
  out << row.id << ',' << format_real(e.final_value) << ',' << format_real(e.liminf_proxy)
      << ',' << format_real(e.slope) << ',' << (e.is_constant_runtime ? 1 : 0) << '\n';
}

std::vector<DimsRow> read_dims(const std::filesystem::path& path, Provenance* provenance) {
  std::vector<DimsRow> out;
  for (const std::string& line : read_derived(path, kDimsHeader, provenance)) {
    const auto f = split_fields(line);
    if (f.size() != 5) throw IntegrityError("expected 5 fields in dims row: " + line);
    DimsRow row;
    row.id = parse_u64(f[0], "id", line);
    row.estimate.final_value = parse_real(f[1], line);
    row.estimate.liminf_proxy = parse_real(f[2], line);
    row.estimate.slope = parse_real(f[3], line);
    if (f[4] != "0" && f[4] != "1") throw IntegrityError("bad flag in dims row: " + line);
    row.estimate.is_constant_runtime = f[4] == "1";
    out.push_back(row);
  }
  return out;
}

// ---- classes ---------------------------------------------------------------

std::string class_token(const GrowthClass& g) {
  switch (g.kind) {
    case GrowthKind::Constant:
      return "C";
    case GrowthKind::Poly:
      return "P" + std::to_string(g.degree);
    case GrowthKind::SuperPoly:
      return "SP";
    case GrowthKind::Unknown:
      break;
  }
  switch (g.reason) {
    case UnknownReason::NonHalting:
      return "U:non-halting";
    case UnknownReason::InsufficientWindow:
      return "U:insufficient-window";
    default:
      return "U:ambiguous";
  }
}

GrowthClass parse_class_token(std::string_view token) {
  if (token == "C") return GrowthClass::constant();
  if (token == "SP") return GrowthClass::super_poly();
  if (token == "U:non-halting") return GrowthClass::unknown(UnknownReason::NonHalting);
  if (token == "U:insufficient-window") {
    return GrowthClass::unknown(UnknownReason::InsufficientWindow);
  }
  if (token == "U:ambiguous") return GrowthClass::unknown(UnknownReason::Ambiguous);
  if (token.size() >= 2 && token[0] == 'P') {
    int degree = 0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data() + 1, end, degree);
    if (ec == std::errc() && ptr == end && degree >= 1) return GrowthClass::poly(degree);
  }
  throw IntegrityError("unknown class token '" + std::string(token) + "'");
}

void write_classes_header(std::ostream& out, const std::string& source,
                          const std::string& config) {
  out << provenance_line(source, config) << '\n' << kClassesHeader << '\n';
}

void write_classes_row(std::ostream& out, const MachineClassification& c) {
  out << c.machine << ',' << class_token(c.runtime_class) << ','
      << class_token(c.space_class) << ',' << class_token(c.boxes_class) << ',';
  if (c.dimension) out << format_real(c.dimension->final_value);
  out << '\n';
}

std::vector<MachineClassification> read_classes(const std::filesystem::path& path,
                                                Provenance* provenance) {
  std::vector<MachineClassification> out;
  for (const std::string& line : read_derived(path, kClassesHeader, provenance)) {
    const auto f = split_fields(line);
    if (f.size() != 5) throw IntegrityError("expected 5 fields in classes row: " + line);
    MachineClassification c;
    c.machine = parse_u64(f[0], "id", line);
    c.runtime_class = parse_class_token(f[1]);
    c.space_class = parse_class_token(f[2]);
    c.boxes_class = parse_class_token(f[3]);
    if (!f[4].empty()) {
      DimensionEstimate e;
      e.final_value = parse_real(f[4], line);
      c.dimension = e;
    }
    out.push_back(c);
  }
  return out;
}

// ---- report ----------------------------------------------------------------

std::string class_notation(const GrowthClass& g) {
  switch (g.kind) {
    case GrowthKind::Constant:
      return "O(1)";
    case GrowthKind::Poly:
      return g.degree == 1 ? "O(n)" : "O(n^" + std::to_string(g.degree) + ")";
    case GrowthKind::SuperPoly:
      return "o(P)";
    case GrowthKind::Unknown:
      break;
  }
  return "?(" + class_token(g).substr(2) + ")";
}

std::string write_report(const DistributionReport& report, const ReportConfig& config) {
  std::ostringstream out;
  out << "# Distribution of machines over complexity classes\n";
  out << "# space: " << config.space << '\n';
  out << "# inputs: " << config.inputs << '\n';
  out << "# cutoff: " << config.cutoff << '\n';
  out << "# classifier: " << config.classifier << '\n';
  out << "# filter: " << report.filters << '\n';
  if (!config.source.empty()) out << "# source: " << config.source << '\n';
  out << "# machines seen: " << report.total_seen
      << ", matched filter: " << report.total_considered << '\n';

  if (report.cells.empty()) {
    out << "no machines matched filter\n";
    return out.str();
  }

  struct Row {
    std::string boxes, runtime, space;
    std::uint64_t count;
  };
  std::vector<Row> rows;
  for (const auto& [key, count] : report.cells) {
    const auto& [boxes, runtime, space] = key;
    rows.push_back({class_notation(boxes), class_notation(runtime), class_notation(space),
                    count});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.count > b.count; });

  std::size_t wb = 5, wr = 7, ws = 5;  // header widths
  for (const Row& r : rows) {
    wb = std::max(wb, r.boxes.size());
    wr = std::max(wr, r.runtime.size());
    ws = std::max(ws, r.space.size());
  }
  auto cell = [](std::ostream& o, const std::string& s, std::size_t w) {
    o << std::left << std::setw(static_cast<int>(w)) << s << "  ";
  };
  cell(out, "Boxes", wb);
  cell(out, "Runtime", wr);
  cell(out, "Space", ws);
  out << "Machines\n";
  for (const Row& r : rows) {
    cell(out, r.boxes, wb);
    cell(out, r.runtime, wr);
    cell(out, r.space, ws);
    out << r.count << '\n';
  }
  return out.str();
}

}  // namespace tmfractal
