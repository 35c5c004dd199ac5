#include <doctest.h>

#include <bit>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "ftz/config.hpp"
#include "ftz/io.hpp"
#include "ftz/runner.hpp"

using namespace ftz;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir(const std::string& name) {
  const fs::path p = fs::path(FTZ_TEST_TMP) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FTZ_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

json small_config() {
  return json::parse(R"({
    "alpha": 1.0,
    "grid": {"extent": 16, "points": 256},
    "basis": {"dimension": 20},
    "symbol": {"kind": "gaussian", "decay": 1.0},
    "lattice_radius": 2,
    "heat_t": 0.25,
    "schatten_p": [1, 2]
  })");
}

}  // namespace

TEST_CASE("config defaults and parsing") {
  const ExperimentConfig d = parse_config(json::object());
  CHECK(d.alpha == 1.0);
  CHECK(d.dimension == 40);
  CHECK(d.lattice_radius == 3);
  CHECK(d.grid.points() == 256);
  CHECK(d.tolerance("decompose_residual") == 1e-3);

  const ExperimentConfig c = parse_config(json::parse(R"({
    "alpha": 0.5, "symbol": {"kind": "plane_wave", "frequency": [1, -2], "amplitude": [0, 2]},
    "tolerances": {"weyl_conjugation": 1e-6}, "quadrature": {"scheme": "gauss_hermite", "order": 100}
  })"));
  CHECK(c.alpha == 0.5);
  CHECK(c.symbol.kind == SymbolSpec::Kind::plane_wave);
  CHECK(c.symbol.frequency == Vec2(1, -2));
  CHECK(c.symbol.amplitude == cplx(0, 2));
  CHECK(c.tolerance("weyl_conjugation") == 1e-6);
  CHECK(c.quadrature.order == 100);

  // echoing a config and parsing it again gives the same config
  const ExperimentConfig again = parse_config(to_json(c));
  CHECK(to_json(again) == to_json(c));
}

TEST_CASE("config rejects unknown and inapplicable keys") {
  const auto bad = [](const char* text) { CHECK_THROWS_AS(parse_config(json::parse(text)), ConfigError); };
  bad(R"({"alpah": 1})");
  bad(R"({"grid": {"extent": 16, "pts": 256}})");
  bad(R"({"grid": {"extent": 16, "points": 100}})");
  bad(R"({"symbol": {"kind": "gaussian"}})");
  bad(R"({"symbol": {"kind": "gaussian", "decay": 1, "frequency": [1, 0]}})");
  bad(R"({"symbol": {"kind": "gaussian", "decay": -1}})");
  bad(R"({"symbol": {"kind": "wavelet"}})");
  bad(R"({"symbol": {"kind": "constant", "colour": 1}})");
  bad(R"({"tolerances": {"made_up": 1e-3}})");
  bad(R"({"tolerances": {"weyl_conjugation": 0}})");
  bad(R"({"alpha": 0})");
  bad(R"({"basis": {"dimension": 0}})");
  bad(R"({"schatten_p": [0.5]})");
  bad(R"({"quadrature": {"scheme": "gauss_hermite", "order": 10}})");
  bad(R"({"quadrature": {"scheme": "simpson"}})");
  bad(R"({"lattice_radius": 8})");
  bad(R"({"output": {"dir": 3}})");
}

TEST_CASE("config files") {
  const fs::path dir = tmp_dir("config_files");
  CHECK_THROWS_AS(load_config((dir / "missing.json").string()), IoError);
  write(dir / "broken.json", "{\"alpha\": ");
  CHECK_THROWS_AS(load_config((dir / "broken.json").string()), ConfigError);
  write(dir / "rel.json", R"({"symbol": {"kind": "grid_file", "path": "sym.csv"}})");
  const ExperimentConfig c = load_config((dir / "rel.json").string());
  CHECK(fs::path(c.symbol.path) == dir / "sym.csv");
}

TEST_CASE("matrix cache round trip") {
  const fs::path dir = tmp_dir("matrix_cache");
  const fs::path p = dir / "id.ftlz";
  const OperatorMatrix id = OperatorMatrix::identity(FockBasis(1.0, 4));
  save_matrix(id, p.string());
  CHECK(fs::file_size(p) == 5 + 4 + 8 + 16 * 16);
  const OperatorMatrix back = load_matrix(p.string());
  CHECK(std::memcmp(back.entries().data(), id.entries().data(), 16 * sizeof(cplx)) == 0);
  CHECK(slurp(p).substr(0, 5) == "FTLZ1");

  // awkward alpha bits and entries survive
  const double alpha = 0.1 + 0.2;
  Eigen::MatrixXcd m(3, 3);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = cplx(std::sqrt(double(i) + 0.1), -1.0 / (i + 3));
  save_matrix(OperatorMatrix(FockBasis(alpha, 3), m), p.string());
  const OperatorMatrix b = load_matrix(p.string(), 3);
  CHECK(std::bit_cast<std::uint64_t>(b.basis().alpha()) == std::bit_cast<std::uint64_t>(alpha));
  CHECK(std::memcmp(b.entries().data(), m.data(), m.size() * sizeof(cplx)) == 0);
  // row-major on disk: the second stored pair is entry (0, 1)
  const std::string raw = slurp(p);
  double re = 0.0;
  std::memcpy(&re, raw.data() + 17 + 16, 8);
  CHECK(re == m(0, 1).real());

  CHECK_THROWS_AS(load_matrix(p.string(), 4), IoError);
}

TEST_CASE("matrix cache rejects damaged files") {
  const fs::path dir = tmp_dir("matrix_damage");
  const fs::path p = dir / "m.ftlz";
  save_matrix(OperatorMatrix::identity(FockBasis(1.0, 4)), p.string());
  const std::string good = slurp(p);

  write(dir / "short.ftlz", good.substr(0, good.size() - 1));
  CHECK_THROWS_AS(load_matrix((dir / "short.ftlz").string()), IoError);
  write(dir / "long.ftlz", good + "x");
  CHECK_THROWS_AS(load_matrix((dir / "long.ftlz").string()), IoError);
  std::string magic = good;
  magic[4] = '2';
  write(dir / "magic.ftlz", magic);
  CHECK_THROWS_AS(load_matrix((dir / "magic.ftlz").string()), IoError);
  CHECK_THROWS_AS(load_matrix((dir / "absent.ftlz").string()), IoError);
}

TEST_CASE("symbol csv ingest") {
  const fs::path dir = tmp_dir("symbol_csv");
  const Grid grid(8.0, 8);
  std::string ones = "# extent=8 points=8\n";
  for (int i = 0; i < 64; ++i) ones += "1,0\n";
  write(dir / "ones.csv", ones);
  const ScalarField f = ingest_symbol_csv((dir / "ones.csv").string(), grid);
  CHECK((f.samples().array() == cplx(1.0)).all());

  CHECK_THROWS_AS(ingest_symbol_csv((dir / "ones.csv").string(), Grid(16.0, 8)), IoError);
  CHECK_THROWS_AS(ingest_symbol_csv((dir / "ones.csv").string(), Grid(8.0, 16)), IoError);

  write(dir / "short.csv", ones.substr(0, ones.size() - 4));
  CHECK_THROWS_AS(ingest_symbol_csv((dir / "short.csv").string(), grid), IoError);
  write(dir / "long.csv", ones + "1,0\n");
  CHECK_THROWS_AS(ingest_symbol_csv((dir / "long.csv").string(), grid), IoError);
  std::string junk = ones;
  junk.replace(junk.find("1,0"), 3, "1,x");
  write(dir / "junk.csv", junk);
  CHECK_THROWS_AS(ingest_symbol_csv((dir / "junk.csv").string(), grid), IoError);
  std::string nan = ones;
  nan.replace(nan.find("1,0"), 3, "nan,0");
  write(dir / "nan.csv", nan);
  CHECK_THROWS_AS(ingest_symbol_csv((dir / "nan.csv").string(), grid), IoError);
  write(dir / "nohead.csv", ones.substr(ones.find('\n') + 1));
  CHECK_THROWS_AS(ingest_symbol_csv((dir / "nohead.csv").string(), grid), IoError);

  const Grid big(16.0, 256);
  const ScalarField g = sample_symbol(SymbolSpec::modulated_gaussian(Vec2(0.3, -0.2), 0.5), big);
  export_symbol_csv(g, (dir / "g.csv").string());
  const ScalarField back = ingest_symbol_csv((dir / "g.csv").string(), big);
  CHECK((back.samples() - g.samples()).cwiseAbs().maxCoeff() == 0.0);

  // a sampled file drives the same matrices as the analytic symbol
  const OperatorMatrix a = toeplitz_matrix(SymbolSpec::modulated_gaussian(Vec2(0.3, -0.2), 0.5), FockBasis(1.0, 10));
  const OperatorMatrix s = toeplitz_matrix(sample_symbol(SymbolSpec::grid_file((dir / "g.csv").string()), big),
                                           FockBasis(1.0, 10));
  CHECK((a.entries() - s.entries()).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("command names") {
  for (Command c : {Command::transform, Command::toeplitz, Command::decompose, Command::bounds, Command::schatten,
                    Command::carleson, Command::selftest})
    CHECK(parse_command(command_name(c)) == c);
  CHECK_THROWS_AS(parse_command("plot"), ConfigError);
}

TEST_CASE("decompose of the constant symbol") {
  json doc = small_config();
  doc["symbol"] = {{"kind", "constant"}};
  const fs::path out = tmp_dir("run_decompose_one");
  const RunOutcome r = run(Command::decompose, parse_config(doc), out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.report["results"]["significant_pieces"] == 1);
  CHECK(r.report["results"]["residuals"][0].get<double>() <= 1e-8);
  CHECK(fs::exists(out / "decompose.json"));
  CHECK(slurp(out / "residuals.csv").rfind("r,residual\n", 0) == 0);
  for (const json& a : r.report["assertions"]) {
    CHECK(a["passed"].get<bool>());
    CHECK(!a["anchor"].get<std::string>().empty());
  }
  CHECK(r.report["config"] == to_json(parse_config(doc)));
}

TEST_CASE("bounds table") {
  const fs::path out = tmp_dir("run_bounds");
  const RunOutcome r = run(Command::bounds, parse_config(small_config()), out.string());
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(out / "bounds.csv");
  CHECK(csv.rfind("bound_name,bound_value,measured,ratio\n", 0) == 0);
  CHECK(csv.find("\nschur,") != std::string::npos);
  CHECK(csv.find("\nmain_bound,") != std::string::npos);
}

TEST_CASE("reports are deterministic") {
  const ExperimentConfig cfg = parse_config(small_config());
  const fs::path a = tmp_dir("det_a"), b = tmp_dir("det_b");
  run(Command::transform, cfg, a.string());
  run(Command::transform, cfg, b.string());
  CHECK(slurp(a / "transform.json") == slurp(b / "transform.json"));
  CHECK(slurp(a / "heat.csv") == slurp(b / "heat.csv"));
}

TEST_CASE("exit codes") {
  const fs::path dir = tmp_dir("exit_codes");
  write(dir / "ok.json", small_config().dump());
  CHECK(run_cli("transform --config " + (dir / "ok.json").string() + " --out " + (dir / "ok").string()) == 0);
  CHECK(fs::exists(dir / "ok" / "transform.json"));

  json strict = small_config();
  strict["tolerances"] = {{"heat_semigroup", 1e-30}};
  write(dir / "strict.json", strict.dump());
  CHECK(run_cli("transform --config " + (dir / "strict.json").string() + " --out " + (dir / "strict").string()) == 1);
  const json rep = json::parse(slurp(dir / "strict" / "transform.json"));
  CHECK(rep["passed"] == false);

  json unknown = small_config();
  unknown["colour"] = "blue";
  write(dir / "unknown.json", unknown.dump());
  CHECK(run_cli("transform --config " + (dir / "unknown.json").string()) == 2);
  CHECK(run_cli("transform") == 2);
  CHECK(run_cli("plot --config " + (dir / "ok.json").string()) == 2);
  CHECK(run_cli("transform --config " + (dir / "nowhere.json").string()) == 3);

  json missing_symbol = small_config();
  missing_symbol["symbol"] = {{"kind", "grid_file"}, {"path", "absent.csv"}};
  write(dir / "nosym.json", missing_symbol.dump());
  CHECK(run_cli("transform --config " + (dir / "nosym.json").string() + " --out " + (dir / "nosym").string()) == 3);
}
