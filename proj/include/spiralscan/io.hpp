#pragma once

#include "spiralscan/grid.hpp"
#include "spiralscan/isotropy.hpp"
#include "spiralscan/ssm.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spiralscan {

// Binary scan order container:
//   "FSSC" magic | u16 version | u32 height | u32 width | n_cells x u32
// all little-endian. Readers reject short/overlong payloads and anything
// that is not a permutation.
inline constexpr char kScanOrderMagic[4] = {'F', 'S', 'S', 'C'};
inline constexpr std::uint16_t kScanOrderVersion = 1;

std::vector<std::uint8_t> encode_scan_order(const ScanOrder& so);
ScanOrder decode_scan_order(const std::vector<std::uint8_t>& bytes);

void write_scan_order_binary(const std::string& path, const ScanOrder& so);
ScanOrder read_scan_order_binary(const std::string& path);

// CSV twin: header "k,row,col" and one line per step. Dims are recovered
// from the maximal row/col, which a permutation always covers.
std::string encode_scan_order_csv(const ScanOrder& so);
ScanOrder decode_scan_order_csv(const std::string& text);

void write_scan_order_csv(const std::string& path, const ScanOrder& so);
ScanOrder read_scan_order_csv(const std::string& path);

// Sniffs the magic bytes to pick the binary or CSV reader.
ScanOrder read_scan_order_any(const std::string& path);

// Deterministic JSON emission: fixed key order, floats at 17 significant
// digits, no locale dependence. Identical inputs yield identical bytes.
class JsonWriter {
public:
  std::string take();

  void begin_object();
  void end_object();
  void begin_array();
  void end_array();
  void key(const std::string& k);
  void value(const std::string& v);
  void value(double v);
  void value(std::int64_t v);
  void value(std::uint64_t v);
  void value(bool v);
  void null_value();

private:
  void pre_value();
  std::string out_;
  std::vector<bool> first_in_scope_{true};
  bool after_key_ = false;
};

std::string format_double_17(double v);

struct ReportConfig {
  double lambda_c = 0.7;
  double eta_f = 0.0;
  double eta_c = 0.0;
  double alpha = 0.0;
  double phi_g_radians = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr const char* kToolVersion = "1.0.0";

void json_isotropy_report(JsonWriter& w, const IsotropyReport& rep);
void json_footprint(JsonWriter& w, const FootprintMap& fp,
                    std::uint32_t n_seeds);
void json_config(JsonWriter& w, const ReportConfig& cfg);

// Single-strategy report document.
std::string render_report(const GridDims& dims, const std::string& strategy,
                          const ReportConfig& cfg, const IsotropyReport& rep,
                          const FootprintMap* fp, std::uint32_t n_seeds,
                          const std::optional<double>& timing_ms);

// Multi-strategy comparison document.
struct StrategyResult {
  IsotropyReport metrics;
  std::optional<IsotropyReport> metrics_continuous;
  std::optional<FootprintMap> fp;
};
std::string render_compare_report(
    const GridDims& dims, const ReportConfig& cfg, std::uint32_t n_seeds,
    const std::map<std::string, StrategyResult>& strategies,
    const std::optional<double>& timing_ms);

// 8-bit grayscale PGM (P5), values linearly mapped from [0,1] to [0,255].
std::vector<std::uint8_t> encode_pgm(const FootprintMap& fp);
void write_pgm(const std::string& path, const FootprintMap& fp);

} // namespace spiralscan
