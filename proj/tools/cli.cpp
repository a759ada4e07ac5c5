#include "spiralscan/baselines.hpp"
#include "spiralscan/fermat.hpp"
#include "spiralscan/io.hpp"
#include "spiralscan/isotropy.hpp"
#include "spiralscan/matching.hpp"
#include "spiralscan/parallel.hpp"
#include "spiralscan/ssm.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

using namespace spiralscan;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

struct CommonOpts {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  double lambda_c = 0.7;
  double eta_f = 0.0;     // 0: grid diagonal
  double eta_c = 0.0;
  double alpha = 0.0;     // 0: half-diagonal rule
  double phi_g_deg = 0.0; // 0: golden angle
  std::uint32_t candidates = 32;
  std::string mode = "accelerated";
  std::uint64_t seed = 0;
};

void add_dims(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--height", o.height, "grid height in cells")
      ->required()
      ->check(CLI::Range(1u, 65535u));
  cmd->add_option("--width", o.width, "grid width in cells")
      ->required()
      ->check(CLI::Range(1u, 65535u));
}

void add_match_opts(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--lambda-c", o.lambda_c,
                  "continuity weight in [0,1] (default 0.7)")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--eta-f", o.eta_f,
                  "spiral-distance normalizer (default: grid diagonal)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--eta-c", o.eta_c,
                  "continuity-distance normalizer (default: grid diagonal)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", o.alpha,
                  "spiral radial scale (default: half-diagonal rule)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--phi-g-deg", o.phi_g_deg,
                  "angular step in degrees (default: golden angle)")
      ->check(CLI::Range(1e-9, 360.0 - 1e-9));
  cmd->add_option("--candidates", o.candidates,
                  "initial nearest-candidate budget (default 32)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--mode", o.mode, "matching mode (default accelerated)")
      ->check(CLI::IsMember({"exhaustive", "accelerated"}));
  cmd->add_option("--seed", o.seed, "seed echoed into reports");
}

MatchConfig resolve_match(const GridDims& dims, const CommonOpts& o) {
  MatchConfig cfg = MatchConfig::defaults_for(dims);
  cfg.lambda_c = o.lambda_c;
  if (o.eta_f > 0.0) cfg.eta_f = o.eta_f;
  if (o.eta_c > 0.0) cfg.eta_c = o.eta_c;
  cfg.candidate_count = o.candidates;
  cfg.mode =
      o.mode == "exhaustive" ? MatchMode::exhaustive : MatchMode::accelerated;
  return cfg;
}

SpiralParams resolve_spiral(const GridDims& dims, const CommonOpts& o) {
  SpiralParams p = SpiralParams::defaults_for(dims);
  if (o.alpha > 0.0) p.alpha = o.alpha;
  if (o.phi_g_deg > 0.0) p.phi_g = o.phi_g_deg * M_PI / 180.0;
  return p;
}

ScanOrder build_order(const std::string& strategy, const GridDims& dims,
                      const CommonOpts& o) {
  if (strategy == "raster") return raster_scan(dims);
  if (strategy == "rect") return rect_spiral_scan(dims);
  const SpiralParams sp = resolve_spiral(dims, o);
  return match_grid(gen_spiral_points(sp), dims, resolve_match(dims, o));
}

ReportConfig report_config(const GridDims& dims, const CommonOpts& o) {
  const MatchConfig m = resolve_match(dims, o);
  const SpiralParams sp = resolve_spiral(dims, o);
  ReportConfig rc;
  rc.lambda_c = m.lambda_c;
  rc.eta_f = m.eta_f;
  rc.eta_c = m.eta_c;
  rc.alpha = sp.alpha;
  rc.phi_g_radians = sp.phi_g;
  rc.seed = o.seed;
  return rc;
}

bool parse_probe(const std::string& probe, const GridDims& dims,
                 std::int64_t& row, std::int64_t& col) {
  if (probe == "center") {
    row = col = -1;
    return true;
  }
  if (probe == "corner") {
    row = col = 0;
    return true;
  }
  long long r = 0, c = 0;
  char extra = 0;
  if (std::sscanf(probe.c_str(), "%lld,%lld%c", &r, &c, &extra) != 2)
    return false;
  if (r < 0 || c < 0 || r >= static_cast<long long>(dims.height) ||
      c >= static_cast<long long>(dims.width))
    return false;
  row = r;
  col = c;
  return true;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

} // namespace

int main(int argc, char** argv) {
  init_threads_from_env();

  CLI::App app{
      "spiralscan: construction and analysis of 2D-to-1D grid scan orders"};
  app.require_subcommand(1);

  // ---- generate ----
  CommonOpts gen_opts;
  std::string gen_strategy, gen_out, gen_format = "bin";
  auto* gen = app.add_subcommand("generate", "build a scan order and save it");
  gen->add_option("--strategy", gen_strategy, "raster | rect | fermat")
      ->required()
      ->check(CLI::IsMember({"raster", "rect", "fermat"}));
  add_dims(gen, gen_opts);
  add_match_opts(gen, gen_opts);
  gen->add_option("--out", gen_out, "output path")->required();
  gen->add_option("--format", gen_format, "bin | csv (default bin)")
      ->check(CLI::IsMember({"bin", "csv"}));

  // ---- metrics ----
  std::string met_in, met_out;
  bool met_timings = false;
  auto* met = app.add_subcommand(
      "metrics", "isotropy and step statistics for a saved scan order");
  met->add_option("--in", met_in, "scan order file (binary or csv)")
      ->required();
  met->add_option("--out-json", met_out, "report path")->required();
  met->add_flag("--timings", met_timings,
                "include wall-clock timing in the report");

  // ---- compare ----
  CommonOpts cmp_opts;
  std::string cmp_out, cmp_heatmap_dir, cmp_probe = "center";
  std::uint32_t cmp_seeds = 5, cmp_channels = 4, cmp_state = 8;
  bool cmp_selective = false, cmp_timings = false;
  auto* cmp = app.add_subcommand(
      "compare", "metrics and operator footprints for all strategies");
  add_dims(cmp, cmp_opts);
  add_match_opts(cmp, cmp_opts);
  cmp->add_option("--seeds", cmp_seeds, "footprint seeds (default 5)")
      ->check(CLI::PositiveNumber);
  cmp->add_option("--channels", cmp_channels, "block channels (default 4)")
      ->check(CLI::PositiveNumber);
  cmp->add_option("--state-dim", cmp_state, "ssm state size (default 8)")
      ->check(CLI::PositiveNumber);
  cmp->add_flag("--selective", cmp_selective,
                "input-dependent discretization step");
  cmp->add_option("--probe", cmp_probe, "center | corner | r,c");
  cmp->add_option("--out-json", cmp_out, "report path")->required();
  cmp->add_option("--heatmap-dir", cmp_heatmap_dir,
                  "directory for per-strategy PGM heatmaps")
      ->required();
  cmp->add_flag("--timings", cmp_timings,
                "include wall-clock timing in the report");

  // ---- footprint ----
  CommonOpts fp_opts;
  std::string fp_strategy = "fermat", fp_in, fp_probe = "center";
  std::string fp_pgm, fp_json;
  std::uint32_t fp_seeds = 5, fp_channels = 4, fp_state = 8;
  double fp_step = 1e-4;
  bool fp_selective = false;
  auto* fpc = app.add_subcommand(
      "footprint", "Jacobian sensitivity map of one output position");
  fpc->add_option("--strategy", fp_strategy, "raster | rect | fermat")
      ->check(CLI::IsMember({"raster", "rect", "fermat"}));
  fpc->add_option("--in", fp_in,
                  "saved scan order (overrides --strategy and dims)");
  fpc->add_option("--height", fp_opts.height, "grid height in cells")
      ->check(CLI::Range(1u, 65535u));
  fpc->add_option("--width", fp_opts.width, "grid width in cells")
      ->check(CLI::Range(1u, 65535u));
  add_match_opts(fpc, fp_opts);
  fpc->add_option("--seeds", fp_seeds, "parameter seeds (default 5)")
      ->check(CLI::PositiveNumber);
  fpc->add_option("--channels", fp_channels, "block channels (default 4)")
      ->check(CLI::PositiveNumber);
  fpc->add_option("--state-dim", fp_state, "ssm state size (default 8)")
      ->check(CLI::PositiveNumber);
  fpc->add_option("--fd-step", fp_step, "finite-difference step")
      ->check(CLI::PositiveNumber);
  fpc->add_flag("--selective", fp_selective,
                "input-dependent discretization step");
  fpc->add_option("--probe", fp_probe, "center | corner | r,c");
  fpc->add_option("--out-pgm", fp_pgm, "heatmap path")->required();
  fpc->add_option("--out-json", fp_json, "optional report path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto start = Clock::now();
      const GridDims dims{gen_opts.height, gen_opts.width};
      const ScanOrder so = build_order(gen_strategy, dims, gen_opts);
      if (gen_format == "csv")
        write_scan_order_csv(gen_out, so);
      else
        write_scan_order_binary(gen_out, so);
      std::printf("wrote %s (%zu cells, %.1f ms)\n", gen_out.c_str(),
                  so.order.size(), elapsed_ms(start));
      return 0;
    }

    if (met->parsed()) {
      const auto start = Clock::now();
      const ScanOrder so = read_scan_order_any(met_in);
      if (so.dims.n_cells() < 2)
        throw std::runtime_error(
            "metrics need at least two cells; got a single-cell order");
      const IsotropyReport rep = report_for_order(so);
      ReportConfig rc{}; // a saved order carries no generation parameters
      rc.lambda_c = 0.0;
      const std::optional<double> timing =
          met_timings ? std::optional<double>(elapsed_ms(start)) : std::nullopt;
      write_text(met_out,
                 render_report(so.dims, "file", rc, rep, nullptr, 0, timing));
      std::printf("wrote %s (%zu cells)\n", met_out.c_str(), so.order.size());
      return 0;
    }

    if (cmp->parsed()) {
      const auto start = Clock::now();
      const GridDims dims{cmp_opts.height, cmp_opts.width};
      const MatchConfig mcfg = resolve_match(dims, cmp_opts);

      FootprintConfig fcfg;
      fcfg.channels = cmp_channels;
      fcfg.state_dim = cmp_state;
      fcfg.selective = cmp_selective;
      fcfg.n_seeds = cmp_seeds;
      fcfg.base_seed = cmp_opts.seed;
      if (!parse_probe(cmp_probe, dims, fcfg.probe_row, fcfg.probe_col))
        throw std::runtime_error("--probe must be center, corner or r,c");

      const auto metrics = compare_strategies(dims, mcfg);
      std::filesystem::create_directories(cmp_heatmap_dir);

      std::map<std::string, StrategyResult> strategies;
      std::printf("%-18s %-14s %-12s %-12s\n", "strategy", "nn_variance",
                  "footprint_mu", "footprint_sigma");
      const std::vector<std::pair<std::string, ScanOrder>> orders = {
          {"raster", raster_scan(dims)},
          {"rect_spiral", rect_spiral_scan(dims)},
          {"fermat",
           match_grid(gen_spiral_points(resolve_spiral(dims, cmp_opts)), dims,
                      mcfg)}};
      for (const auto& [name, order] : orders) {
        const FootprintMap fp = footprint(order, fcfg);
        write_pgm((std::filesystem::path(cmp_heatmap_dir) / (name + ".pgm"))
                      .string(),
                  fp);
        StrategyResult res;
        res.metrics = metrics.at(name == "fermat" ? "fermat_cells" : name);
        if (name == "fermat")
          res.metrics_continuous = metrics.at("fermat_continuous");
        res.fp = fp;
        const double nn_var = name == "fermat"
                                  ? metrics.at("fermat_continuous").nn_variance
                                  : res.metrics.nn_variance;
        std::printf("%-18s %-14.6g %-12.6f %-12.6f\n", name.c_str(), nn_var,
                    fp.mu, fp.sigma);
        strategies[name] = std::move(res);
      }

      const std::optional<double> timing =
          cmp_timings ? std::optional<double>(elapsed_ms(start)) : std::nullopt;
      write_text(cmp_out,
                 render_compare_report(dims, report_config(dims, cmp_opts),
                                       cmp_seeds, strategies, timing));
      std::printf("wrote %s and heatmaps under %s\n", cmp_out.c_str(),
                  cmp_heatmap_dir.c_str());
      return 0;
    }

    if (fpc->parsed()) {
      ScanOrder so;
      CommonOpts& o = fp_opts;
      if (!fp_in.empty()) {
        so = read_scan_order_any(fp_in);
      } else {
        if (o.height == 0 || o.width == 0)
          throw std::runtime_error(
              "--height and --width are required without --in");
        so = build_order(fp_strategy, GridDims{o.height, o.width}, o);
      }
      FootprintConfig fcfg;
      fcfg.channels = fp_channels;
      fcfg.state_dim = fp_state;
      fcfg.selective = fp_selective;
      fcfg.n_seeds = fp_seeds;
      fcfg.base_seed = o.seed;
      fcfg.fd_step = fp_step;
      if (!parse_probe(fp_probe, so.dims, fcfg.probe_row, fcfg.probe_col))
        throw std::runtime_error("--probe must be center, corner or r,c");

      const FootprintMap fp = footprint(so, fcfg);
      write_pgm(fp_pgm, fp);
      if (!fp_json.empty()) {
        const IsotropyReport rep = report_for_order(so);
        write_text(fp_json,
                   render_report(so.dims, fp_in.empty() ? fp_strategy : "file",
                                 report_config(so.dims, o), rep, &fp, fp_seeds,
                                 std::nullopt));
      }
      std::printf("footprint mu=%.6f sigma=%.6f probe=%s -> %s\n", fp.mu,
                  fp.sigma, fp.probe.c_str(), fp_pgm.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
