#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "infoflow/csv.hpp"
#include "infoflow/estimator.hpp"
#include "infoflow/series.hpp"
#include "infoflow/simulator.hpp"
#include "synthetic_grid.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d(INFOFLOW_TEST_WORKDIR);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::string& args, const std::string& env = "") {
  const auto out = workdir() / "stdout.txt";
  const auto err = workdir() / "stderr.txt";
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" + INFOFLOW_CLI_PATH +
                          "' " + args + " > '" + out.string() + "' 2> '" +
                          err.string() + "'";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out), slurp(err)};
}

std::string path_arg(const fs::path& p) { return "'" + p.string() + "'"; }

// The one-way coupled fixture written once by the simulate subcommand.
const fs::path& fixture() {
  static const fs::path p = [] {
    const auto path = workdir() / "fixture.csv";
    const auto r = run("simulate --seed 1 --out " + path_arg(path));
    REQUIRE(r.code == 0);
    return path;
  }();
  return p;
}

std::size_t data_rows(const std::string& text) {
  std::size_t rows = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') ++rows;
  }
  return rows - 1;  // header
}

}  // namespace

TEST_CASE("simulate writes the default fixture with an embedded manifest") {
  const auto text = slurp(fixture());
  CHECK(text.rfind("# manifest ", 0) == 0);
  CHECK(data_rows(text) == 100001);
  const auto table = infoflow::read_csv(fixture());
  REQUIRE(table.header == std::vector<std::string>{"t", "x1", "x2"});
  CHECK(*infoflow::parse_real(table.rows.back()[0]) == doctest::Approx(100.0));
  CHECK(*infoflow::parse_real(table.rows.front()[1]) == 1.0);
  CHECK(*infoflow::parse_real(table.rows.front()[2]) == 2.0);

  const auto manifest = json::parse(text.substr(11, text.find('\n') - 11));
  CHECK(manifest["command"] == "simulate");
  CHECK(manifest["parameters"]["dt"] == 0.001);
  CHECK(manifest["parameters"]["steps"] == 100000);
  CHECK(manifest.contains("tool_version"));
}

TEST_CASE("identical simulate runs give identical files") {
  const auto a = workdir() / "sim_a.csv";
  const auto b = workdir() / "sim_b.csv";
  REQUIRE(run("simulate --seed 4 --steps 2000 --out " + path_arg(a)).code == 0);
  REQUIRE(run("simulate --seed 4 --steps 2000 --out " + path_arg(b)).code == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("simulate takes a config file with flags overriding it") {
  const auto cfg = workdir() / "sim.cfg";
  std::ofstream(cfg) << "# noise-free decay\nb1 = 0\nb2 = 0\nsteps = 10\ndt = 0.5\n";
  const auto out = workdir() / "sim_cfg.csv";
  REQUIRE(run("simulate --config " + path_arg(cfg) + " --dt 0.1 --out " + path_arg(out)).code == 0);
  const auto table = infoflow::read_csv(out);
  REQUIRE(table.rows.size() == 11);
  CHECK(*infoflow::parse_real(table.rows[10][0]) == doctest::Approx(1.0));
  // Without noise, X2 follows (1 - dt)^n * 2.
  CHECK(*infoflow::parse_real(table.rows[10][2]) == doctest::Approx(2.0 * std::pow(0.9, 10)));
}

TEST_CASE("bad flags exit with an input error") {
  CHECK(run("simulate --no-such-flag").code == 2);
  CHECK(run("analyze --dt 1").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("simulate --x0 1 --out x.csv").code == 2);
}

TEST_CASE("analyze reproduces the library pipeline") {
  const auto r = run("analyze --input " + path_arg(fixture()) +
                     " --dt 0.001 --window 5:100 --time-unit s");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  for (const char* key : {"variant", "t21", "t12", "se21", "se12", "ci21", "ci12",
                          "alpha", "m", "dt", "a_hat", "f_hat", "b_hat", "det_c"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["variant"] == "stationary");
  CHECK(j["m"] == 95000);
  CHECK(j["units"] == "nats per s");
  CHECK(j["manifest"]["command"] == "analyze");
  CHECK(j["manifest"]["input_digests"].size() == 1);

  auto [x1, x2] = infoflow::load_csv(fixture(), "x1", "x2", 0.001);
  const auto pair = infoflow::align(infoflow::window(x1, 5.0, 100.0),
                                    infoflow::window(x2, 5.0, 100.0));
  const auto cov = infoflow::covariances(pair);
  const auto e = infoflow::fisher_ci(pair, infoflow::fit_mle(pair, cov), cov, 0.05);
  CHECK(j["t21"].get<double>() == e.t21);
  CHECK(j["t12"].get<double>() == e.t12);
  CHECK(j["ci21"][0].get<double>() == e.ci21.lower);
  CHECK(j["ci12"][1].get<double>() == e.ci12.upper);
  CHECK(r.err.find("T(x2 -> x1)") != std::string::npos);
}

TEST_CASE("star window outside the analysed span is rejected") {
  const auto r = run("analyze --input " + path_arg(fixture()) +
                     " --dt 0.001 --window 10:20 --star-window 5:10");
  CHECK(r.code == 2);
  CHECK(r.err.find("WindowTooShort") != std::string::npos);
  const auto ok = run("analyze --input " + path_arg(fixture()) +
                      " --dt 0.001 --window 0:10 --star-window 5:10 --subsample 10");
  REQUIRE(ok.code == 0);
  CHECK(json::parse(ok.out)["variant"] == "nonstationary_star");
}

TEST_CASE("bootstrap intervals are reproducible from the seed") {
  const std::string args = "analyze --input " + path_arg(fixture()) +
                           " --dt 0.001 --window 5:30 --ci bootstrap --n-boot 200";
  const auto a = run(args + " --seed 7");
  const auto b = run(args + " --seed 7 --threads 1");
  const auto env = run(args, "INFOFLOW_SEED=7");
  REQUIRE(a.code == 0);
  const auto ja = json::parse(a.out);
  const auto jb = json::parse(b.out);
  const auto je = json::parse(env.out);
  CHECK(ja["ci21"] == jb["ci21"]);
  CHECK(ja["ci12"] == jb["ci12"]);
  CHECK(ja["ci21"] == je["ci21"]);
  CHECK(ja["bootstrap"]["seed"] == 7);
  CHECK(a.out == run(args + " --seed 7").out);
}

TEST_CASE("analyze error taxonomy") {
  const auto dup = workdir() / "dup.csv";
  std::ofstream(dup) << "x1,x2\n1,2\n3,6\n2,4\n5,10\n4,8\n";
  CHECK(run("analyze --input " + path_arg(dup) + " --dt 1").code == 3);
  CHECK(run("analyze --input " + path_arg(dup) + " --dt 1 --x2 nope").code == 2);
  CHECK(run("analyze --input " + path_arg(workdir() / "absent.csv") + " --dt 1").code == 2);
  CHECK(run("analyze --input " + path_arg(dup) + " --dt 1 --subsample 3").code == 2);
}

TEST_CASE("theory prints the stationary flows") {
  const auto traj = workdir() / "moments.csv";
  const auto r = run("theory --out " + path_arg(traj));
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["t21"].get<double>() == doctest::Approx(0.1111).epsilon(1e-3));
  CHECK(j["t12"].get<double>() == 0.0);
  CHECK(r.err.find("T21 = 0.1111") != std::string::npos);
  const auto table = infoflow::read_csv(traj);
  CHECK(table.header.size() == 8);
  CHECK(table.rows.size() == 1001);

  const auto diag = run("theory --a12 0 --a21 0");
  REQUIRE(diag.code == 0);
  CHECK(json::parse(diag.out)["t21"].get<double>() == 0.0);
  CHECK(json::parse(diag.out)["t12"].get<double>() == 0.0);

  CHECK(run("theory --a11 0.5").code == 3);
}

TEST_CASE("map reduces to analyze on a single cell") {
  const auto g = synthetic::coupled_grid(1, 1, 3001, 0.01, {0.8}, 3);
  const auto dir = workdir() / "single";
  fs::create_directories(dir);
  infoflow::save_grid(g.field, dir / "grid.csv");
  {
    std::ofstream idx(dir / "index.csv");
    idx.precision(17);
    idx << "index,cell\n";
    const auto cell = g.field.cell_series(0);
    for (std::size_t t = 0; t < cell.size(); ++t) idx << g.index[t] << ',' << cell[t] << '\n';
  }
  const auto m = run("map --index " + path_arg(dir / "index.csv") + " --grid-manifest " +
                     path_arg(dir / "grid.csv") + " --out-dir " + path_arg(dir / "out"));
  REQUIRE(m.code == 0);
  const auto a = run("analyze --input " + path_arg(dir / "index.csv") +
                     " --x1 index --x2 cell --dt 0.01");
  REQUIRE(a.code == 0);
  const auto j = json::parse(a.out);
  const auto to_field = infoflow::read_csv(dir / "out" / "index_to_field.csv", false);
  const auto to_index = infoflow::read_csv(dir / "out" / "field_to_index.csv", false);
  CHECK(*infoflow::parse_real(to_field.rows[0][0]) == j["t12"].get<double>());
  CHECK(*infoflow::parse_real(to_index.rows[0][0]) == j["t21"].get<double>());
  const auto summary = json::parse(slurp(dir / "out" / "map_summary.json"));
  CHECK(summary["manifest"]["command"] == "map");
}

TEST_CASE("map recovers the coupling pattern of a synthetic grid") {
  std::vector<double> coupling{1, 0, 1, 0, 1, 0};
  const auto g = synthetic::coupled_grid(2, 3, 20001, 0.01, coupling, 1);
  const auto dir = workdir() / "pattern";
  fs::create_directories(dir);
  infoflow::save_grid(g.field, dir / "grid.csv");
  {
    std::ofstream idx(dir / "index.csv");
    idx.precision(17);
    idx << "index\n";
    for (double v : g.index.values()) idx << v << '\n';
  }
  REQUIRE(run("map --index " + path_arg(dir / "index.csv") + " --grid-manifest " +
              path_arg(dir / "grid.csv") + " --out-dir " + path_arg(dir / "out"))
              .code == 0);
  const auto sig = infoflow::read_csv(dir / "out" / "index_to_field_significant.csv", false);
  REQUIRE(sig.rows.size() == 2);
  for (std::size_t lat = 0; lat < 2; ++lat) {
    for (std::size_t lon = 0; lon < 3; ++lon) {
      if (coupling[lat * 3 + lon] != 0.0) CHECK(sig.rows[lat][lon] == "1");
    }
  }
}

TEST_CASE("map manifest problems are input errors") {
  const auto dir = workdir() / "broken";
  fs::create_directories(dir);
  std::ofstream(dir / "values.csv") << "1,2\n3,4\n5,7\n";
  std::ofstream(dir / "grid.csv")
      << "key,value\nn_time,3\nn_lat,1\nn_lon,2\ndt,1\nvalues,values.csv\nmask,gone.csv\n";
  std::ofstream(dir / "index.csv") << "index\n1\n2\n4\n";
  const auto r = run("map --index " + path_arg(dir / "index.csv") + " --grid-manifest " +
                     path_arg(dir / "grid.csv") + " --out-dir " + path_arg(dir / "out"));
  CHECK(r.code == 2);
  CHECK(r.err.find("ManifestError") != std::string::npos);
}

TEST_CASE("validate with collapsed bands fails and lists rows") {
  const auto r = run("validate --seed 1 --band-scale 0");
  CHECK(r.code == 1);
  CHECK(r.out.find("failing rows") != std::string::npos);
}
