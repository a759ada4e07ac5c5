// End-to-end checks of the command-line surface: runs the real binary and
// inspects exit codes and produced artifacts.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
  if (!ok) {
    std::printf("FAIL: %s\n", what.c_str());
    ++g_failures;
  }
}

int run(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

} // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::printf("usage: test_cli <path-to-spiralscan-binary>\n");
    return 1;
  }
  const std::string cli = argv[1];
  const fs::path tmp = fs::temp_directory_path() / "spiralscan_cli_test";
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  const auto p = [&](const char* name) { return (tmp / name).string(); };

  // generate: csv body matches the documented layout
  check(run(cli + " generate --strategy raster --height 2 --width 3"
                  " --format csv --out " + p("r.csv") + " >/dev/null") == 0,
        "generate raster csv exits 0");
  check(slurp(p("r.csv")) ==
            "k,row,col\n0,0,0\n1,0,1\n2,0,2\n3,1,0\n4,1,1\n5,1,2\n",
        "csv body matches");

  // generate: binary size arithmetic
  check(run(cli + " generate --strategy fermat --height 16 --width 16"
                  " --lambda-c 0.7 --out " + p("f.fssc") + " >/dev/null") == 0,
        "generate fermat binary exits 0");
  check(fs::file_size(p("f.fssc")) == 14 + 4 * 256, "binary size is 14+4n");

  // flag validation names the offending option on stderr
  check(run(cli + " generate --strategy raster --height 2 --width 2"
                  " --lambda-c 1.5 --out " + p("x.fssc") +
                  " >/dev/null 2>" + p("err.txt")) != 0,
        "lambda out of range exits nonzero");
  check(slurp(p("err.txt")).find("--lambda-c") != std::string::npos,
        "error names --lambda-c");

  // metrics: deterministic byte-identical reports
  check(run(cli + " metrics --in " + p("f.fssc") + " --out-json " +
            p("m1.json") + " >/dev/null") == 0,
        "metrics exits 0");
  check(run(cli + " metrics --in " + p("f.fssc") + " --out-json " +
            p("m2.json") + " >/dev/null") == 0,
        "metrics second run exits 0");
  const std::string m1 = slurp(p("m1.json"));
  check(!m1.empty() && m1 == slurp(p("m2.json")),
        "metrics reports are byte-identical");
  check(m1.find("\"step_mean\":") != std::string::npos,
        "report carries step statistics");

  // metrics on a missing file
  check(run(cli + " metrics --in " + p("missing.fssc") + " --out-json " +
            p("m3.json") + " >/dev/null 2>/dev/null") != 0,
        "missing input exits nonzero");

  // metrics on a truncated file mentions byte counts
  {
    std::string bytes = slurp(p("f.fssc"));
    bytes.resize(bytes.size() - 3);
    std::ofstream out(p("trunc.fssc"), std::ios::binary);
    out << bytes;
    out.close();
    check(run(cli + " metrics --in " + p("trunc.fssc") + " --out-json " +
              p("m4.json") + " >/dev/null 2>" + p("err2.txt")) != 0,
          "truncated input exits nonzero");
    check(slurp(p("err2.txt")).find("size mismatch") != std::string::npos,
          "truncation diagnostic mentions the size mismatch");
  }

  // compare: table on stdout, report and three valid heatmaps
  check(run(cli + " compare --height 12 --width 12 --seeds 2 --channels 2"
                  " --state-dim 3 --out-json " + p("c.json") +
                  " --heatmap-dir " + p("hm") + " >" + p("table.txt")) == 0,
        "compare exits 0");
  check(slurp(p("table.txt")).find("fermat") != std::string::npos,
        "table lists the fermat row");
  for (const char* name : {"raster.pgm", "rect_spiral.pgm", "fermat.pgm"}) {
    const std::string pgm = slurp(tmp / "hm" / name);
    check(pgm.substr(0, 3) == "P5\n" && pgm.find("12 12\n255\n") != std::string::npos,
          std::string("heatmap header valid: ") + name);
  }
  check(slurp(p("c.json")).find("\"strategies\":") != std::string::npos,
        "compare report nests strategies");

  // compare rejects --seeds 0
  check(run(cli + " compare --height 4 --width 4 --seeds 0 --out-json " +
            p("c0.json") + " --heatmap-dir " + p("hm0") +
            " >/dev/null 2>/dev/null") != 0,
        "--seeds 0 exits nonzero");

  // footprint: pgm written, probe parsing
  check(run(cli + " footprint --strategy raster --height 8 --width 8"
                  " --seeds 1 --channels 2 --state-dim 3 --probe 2,3"
                  " --out-pgm " + p("fp.pgm") + " >/dev/null") == 0,
        "footprint exits 0");
  check(slurp(p("fp.pgm")).substr(0, 3) == "P5\n", "footprint pgm valid");
  check(run(cli + " footprint --strategy raster --height 8 --width 8"
                  " --seeds 1 --probe 9,9 --out-pgm " + p("fp2.pgm") +
                  " >/dev/null 2>/dev/null") != 0,
        "out-of-grid probe exits nonzero");

  // footprint from a saved order
  check(run(cli + " footprint --in " + p("f.fssc") +
                  " --seeds 1 --channels 2 --state-dim 3 --out-pgm " +
                  p("fp3.pgm") + " --out-json " + p("fp3.json") +
                  " >/dev/null") == 0,
        "footprint from file exits 0");
  check(slurp(p("fp3.json")).find("\"footprint\":") != std::string::npos,
        "footprint report section present");

  // thread cap must not change artifacts
  check(run("SPIRALSCAN_THREADS=2 " + cli +
            " generate --strategy fermat --height 16 --width 16 --out " +
            p("f2.fssc") + " >/dev/null") == 0,
        "generate under SPIRALSCAN_THREADS exits 0");
  check(slurp(p("f.fssc")) == slurp(p("f2.fssc")),
        "thread cap leaves the artifact bit-identical");

  fs::remove_all(tmp);
  if (g_failures == 0) std::printf("cli checks passed\n");
  return g_failures;
}
