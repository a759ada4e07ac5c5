#include "spiralscan/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace spiralscan {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

[[noreturn]] void fail(const std::string& msg) {
  throw std::runtime_error("scan order file: " + msg);
}

} // namespace

std::vector<std::uint8_t> encode_scan_order(const ScanOrder& so) {
  validate_scan_order(so);
  std::vector<std::uint8_t> out;
  out.reserve(14 + 4 * so.order.size());
  out.insert(out.end(), kScanOrderMagic, kScanOrderMagic + 4);
  put_u16(out, kScanOrderVersion);
  put_u32(out, so.dims.height);
  put_u32(out, so.dims.width);
  for (std::uint32_t v : so.order) put_u32(out, v);
  return out;
}

ScanOrder decode_scan_order(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 14)
    fail("header truncated: expected at least 14 bytes, got " +
         std::to_string(bytes.size()));
  if (std::memcmp(bytes.data(), kScanOrderMagic, 4) != 0)
    fail("bad magic bytes");
  const std::uint16_t version = get_u16(bytes.data() + 4);
  if (version != kScanOrderVersion)
    fail("unsupported version " + std::to_string(version));
  ScanOrder so;
  so.dims.height = get_u32(bytes.data() + 6);
  so.dims.width = get_u32(bytes.data() + 10);
  validate_dims(so.dims);
  const std::size_t n = so.dims.n_cells();
  const std::size_t expected = 14 + 4 * n;
  if (bytes.size() != expected)
    fail("payload size mismatch: expected " + std::to_string(expected) +
         " bytes, got " + std::to_string(bytes.size()));
  so.order.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    so.order[i] = get_u32(bytes.data() + 14 + 4 * i);
  validate_scan_order(so);
  return so;
}

namespace {

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

void write_file_bytes(const std::string& path,
                      const std::uint8_t* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(data), size);
  if (!out) throw std::runtime_error("write failed for " + path);
}

} // namespace

void write_scan_order_binary(const std::string& path, const ScanOrder& so) {
  const std::vector<std::uint8_t> bytes = encode_scan_order(so);
  write_file_bytes(path, bytes.data(), bytes.size());
}

ScanOrder read_scan_order_binary(const std::string& path) {
  return decode_scan_order(read_file_bytes(path));
}

std::string encode_scan_order_csv(const ScanOrder& so) {
  validate_scan_order(so);
  std::string out = "k,row,col\n";
  char buf[64];
  for (std::size_t k = 0; k < so.order.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%zu,%u,%u\n", k,
                  so.dims.row_of(so.order[k]), so.dims.col_of(so.order[k]));
    out += buf;
  }
  return out;
}

ScanOrder decode_scan_order_csv(const std::string& text) {
  std::size_t pos = 0;
  auto next_line = [&](std::string& line) -> bool {
    if (pos >= text.size()) return false;
    const std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) {
      line = text.substr(pos);
      pos = text.size();
    } else {
      line = text.substr(pos, eol - pos);
      pos = eol + 1;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  std::string line;
  if (!next_line(line) || line != "k,row,col")
    fail("csv header must be exactly \"k,row,col\"");

  std::vector<std::pair<std::uint32_t, std::uint32_t>> cells;
  std::uint32_t max_row = 0, max_col = 0;
  std::size_t expected_k = 0;
  while (next_line(line)) {
    if (line.empty()) {
      if (pos >= text.size()) break; // single trailing newline
      fail("empty csv line");
    }
    unsigned long long k = 0, row = 0, col = 0;
    char extra = 0;
    if (std::sscanf(line.c_str(), "%llu,%llu,%llu%c", &k, &row, &col, &extra) !=
        3)
      fail("malformed csv line: \"" + line + "\"");
    if (k != expected_k)
      fail("csv step " + std::to_string(expected_k) + " expected, got " +
           std::to_string(k));
    if (row > 0xffffffffULL || col > 0xffffffffULL) fail("csv index overflow");
    cells.emplace_back(static_cast<std::uint32_t>(row),
                       static_cast<std::uint32_t>(col));
    max_row = std::max(max_row, static_cast<std::uint32_t>(row));
    max_col = std::max(max_col, static_cast<std::uint32_t>(col));
    ++expected_k;
  }
  if (cells.empty()) fail("csv has no rows");

  ScanOrder so;
  so.dims.height = max_row + 1;
  so.dims.width = max_col + 1;
  validate_dims(so.dims);
  so.order.reserve(cells.size());
  for (const auto& [r, c] : cells) so.order.push_back(so.dims.cell_at(r, c));
  validate_scan_order(so);
  return so;
}

void write_scan_order_csv(const std::string& path, const ScanOrder& so) {
  const std::string text = encode_scan_order_csv(so);
  write_file_bytes(path, reinterpret_cast<const std::uint8_t*>(text.data()),
                   text.size());
}

ScanOrder read_scan_order_csv(const std::string& path) {
  const std::vector<std::uint8_t> bytes = read_file_bytes(path);
  return decode_scan_order_csv(
      std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

ScanOrder read_scan_order_any(const std::string& path) {
  const std::vector<std::uint8_t> bytes = read_file_bytes(path);
  if (bytes.size() >= 4 &&
      std::memcmp(bytes.data(), kScanOrderMagic, 4) == 0)
    return decode_scan_order(bytes);
  return decode_scan_order_csv(
      std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

std::string format_double_17(double v) {
  if (std::isnan(v)) throw std::invalid_argument("cannot serialize NaN");
  if (std::isinf(v)) throw std::invalid_argument("cannot serialize infinity");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string JsonWriter::take() { return std::move(out_); }

void JsonWriter::pre_value() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (!first_in_scope_.back()) out_ += ',';
  first_in_scope_.back() = false;
}

void JsonWriter::begin_object() {
  pre_value();
  out_ += '{';
  first_in_scope_.push_back(true);
}

void JsonWriter::end_object() {
  out_ += '}';
  first_in_scope_.pop_back();
}

void JsonWriter::begin_array() {
  pre_value();
  out_ += '[';
  first_in_scope_.push_back(true);
}

void JsonWriter::end_array() {
  out_ += ']';
  first_in_scope_.pop_back();
}

void JsonWriter::key(const std::string& k) {
  if (!first_in_scope_.back()) out_ += ',';
  first_in_scope_.back() = false;
  out_ += '"';
  out_ += k;
  out_ += "\":";
  after_key_ = true;
}

void JsonWriter::value(const std::string& v) {
  pre_value();
  out_ += '"';
  for (char c : v) {
    switch (c) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\n': out_ += "\\n"; break;
      case '\r': out_ += "\\r"; break;
      case '\t': out_ += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out_ += buf;
        } else {
          out_ += c;
        }
    }
  }
  out_ += '"';
}

void JsonWriter::value(double v) {
  pre_value();
  out_ += format_double_17(v);
}

void JsonWriter::value(std::int64_t v) {
  pre_value();
  out_ += std::to_string(v);
}

void JsonWriter::value(std::uint64_t v) {
  pre_value();
  out_ += std::to_string(v);
}

void JsonWriter::value(bool v) {
  pre_value();
  out_ += v ? "true" : "false";
}

void JsonWriter::null_value() {
  pre_value();
  out_ += "null";
}

void json_isotropy_report(JsonWriter& w, const IsotropyReport& rep) {
  w.begin_object();
  w.key("n_points");
  w.value(static_cast<std::uint64_t>(rep.n_points));
  w.key("nn_variance");
  if (rep.n_points >= 2) w.value(rep.nn_variance); else w.null_value();
  w.key("nn_mean");
  if (rep.n_points >= 2) w.value(rep.nn_mean); else w.null_value();
  w.key("delaunay_edge_variance");
  if (rep.delaunay_edge_variance) w.value(*rep.delaunay_edge_variance);
  else w.null_value();
  w.key("delaunay_edge_mean");
  if (rep.delaunay_edge_mean) w.value(*rep.delaunay_edge_mean);
  else w.null_value();
  w.key("step_mean");
  if (rep.has_steps) w.value(rep.step_mean); else w.null_value();
  w.key("step_max");
  if (rep.has_steps) w.value(rep.step_max); else w.null_value();
  w.key("step_variance");
  if (rep.has_steps) w.value(rep.step_variance); else w.null_value();
  w.end_object();
}

void json_footprint(JsonWriter& w, const FootprintMap& fp,
                    std::uint32_t n_seeds) {
  w.begin_object();
  w.key("mu");
  w.value(fp.mu);
  w.key("sigma");
  w.value(fp.sigma);
  w.key("probe");
  w.value(fp.probe);
  w.key("n_seeds");
  w.value(static_cast<std::uint64_t>(n_seeds));
  w.key("zero_map");
  w.value(fp.zero_map);
  w.end_object();
}

void json_config(JsonWriter& w, const ReportConfig& cfg) {
  w.begin_object();
  w.key("lambda_c");
  w.value(cfg.lambda_c);
  w.key("eta_f");
  w.value(cfg.eta_f);
  w.key("eta_c");
  w.value(cfg.eta_c);
  w.key("alpha");
  w.value(cfg.alpha);
  w.key("phi_g_radians");
  w.value(cfg.phi_g_radians);
  w.key("seed");
  w.value(static_cast<std::uint64_t>(cfg.seed));
  w.end_object();
}

namespace {

void json_dims(JsonWriter& w, const GridDims& dims) {
  w.begin_object();
  w.key("height");
  w.value(static_cast<std::uint64_t>(dims.height));
  w.key("width");
  w.value(static_cast<std::uint64_t>(dims.width));
  w.end_object();
}

} // namespace

std::string render_report(const GridDims& dims, const std::string& strategy,
                          const ReportConfig& cfg, const IsotropyReport& rep,
                          const FootprintMap* fp, std::uint32_t n_seeds,
                          const std::optional<double>& timing_ms) {
  JsonWriter w;
  w.begin_object();
  w.key("tool_version");
  w.value(std::string(kToolVersion));
  w.key("dims");
  json_dims(w, dims);
  w.key("strategy");
  w.value(strategy);
  w.key("config");
  json_config(w, cfg);
  w.key("metrics");
  json_isotropy_report(w, rep);
  if (fp) {
    w.key("footprint");
    json_footprint(w, *fp, n_seeds);
  }
  if (timing_ms) {
    w.key("timings_ms");
    w.value(*timing_ms);
  }
  w.end_object();
  std::string s = w.take();
  s += '\n';
  return s;
}

std::string render_compare_report(
    const GridDims& dims, const ReportConfig& cfg, std::uint32_t n_seeds,
    const std::map<std::string, StrategyResult>& strategies,
    const std::optional<double>& timing_ms) {
  JsonWriter w;
  w.begin_object();
  w.key("tool_version");
  w.value(std::string(kToolVersion));
  w.key("dims");
  json_dims(w, dims);
  w.key("strategy");
  w.value(std::string("compare"));
  w.key("config");
  json_config(w, cfg);
  w.key("strategies");
  w.begin_object();
  for (const auto& [name, result] : strategies) {
    w.key(name);
    w.begin_object();
    w.key("metrics");
    json_isotropy_report(w, result.metrics);
    if (result.metrics_continuous) {
      w.key("metrics_continuous");
      json_isotropy_report(w, *result.metrics_continuous);
    }
    if (result.fp) {
      w.key("footprint");
      json_footprint(w, *result.fp, n_seeds);
    }
    w.end_object();
  }
  w.end_object();
  if (timing_ms) {
    w.key("timings_ms");
    w.value(*timing_ms);
  }
  w.end_object();
  std::string s = w.take();
  s += '\n';
  return s;
}

// ---------------------------------------------------------------------------
// PGM
// ---------------------------------------------------------------------------

std::vector<std::uint8_t> encode_pgm(const FootprintMap& fp) {
  validate_dims(fp.dims);
  if (fp.values.size() != fp.dims.n_cells())
    throw std::invalid_argument("footprint value count mismatch");
  std::string header = "P5\n" + std::to_string(fp.dims.width) + " " +
                       std::to_string(fp.dims.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + fp.values.size());
  for (double v : fp.values) {
    const double clamped = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    out.push_back(static_cast<std::uint8_t>(std::lround(clamped * 255.0)));
  }
  return out;
}

void write_pgm(const std::string& path, const FootprintMap& fp) {
  const std::vector<std::uint8_t> bytes = encode_pgm(fp);
  write_file_bytes(path, bytes.data(), bytes.size());
}

} // namespace spiralscan
