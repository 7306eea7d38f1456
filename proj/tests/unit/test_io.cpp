#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wkde/error.hpp"
#include "wkde/io.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace wkde;
namespace fs = std::filesystem;

namespace {

const std::string source_dir = WKDE_SOURCE_DIR;

Errc code_of(const std::function<void()>& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return Errc::config_error;
}

std::string message_of(const std::function<void()>& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

struct TempFile
{
  fs::path path;

  explicit TempFile(const std::string& contents)
  {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("wkde_io_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".csv");
    std::ofstream(path) << contents;
  }
  ~TempFile() { fs::remove(path); }
  std::string str() const { return path.string(); }
};

ExperimentConfig parse(const std::string& text)
{
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

const char* minimal = "sizes = 100\nkernels = gaussian\nselectors = amise_oracle\n";

} // namespace

TEST_CASE("Old Faithful column")
{
  const auto s = ingest_csv(source_dir + "/data/faithful.csv", "eruptions");
  CHECK(s.size() == 272);
  CHECK(s.dim == 1);
  CHECK(s.generator_id == "file");
  CHECK(s.values.front() == 3.6);
  CHECK(s.values[1] == 1.8);
  const auto w = ingest_csv(source_dir + "/data/faithful.csv", "waiting");
  CHECK(w.values.front() == 79.0);
  const auto all = read_csv(source_dir + "/data/faithful.csv");
  CHECK(all.rows.size() == 272);
  CHECK(all.column("eruptions") == s.values);
}

TEST_CASE("CSV errors")
{
  CHECK(code_of([] { ingest_csv("/nonexistent/file.csv", "x"); }) == Errc::file_not_found);
  CHECK(code_of([] { ingest_csv(source_dir + "/data/faithful.csv", "duration"); }) == Errc::unknown_column);
  CHECK(code_of([] { read_csv(source_dir + "/data/faithful.csv").column("duration"); }) == Errc::unknown_column);

  TempFile bad("a,b\n1,2\n3,4\nx,5\n6,7\n");
  CHECK(code_of([&] { ingest_csv(bad.str(), "a"); }) == Errc::parse_error);
  CHECK(message_of([&] { ingest_csv(bad.str(), "a"); }).find("row 3") != std::string::npos);
  CHECK(ingest_csv(bad.str(), "b").values == std::vector<double>{ 2, 4, 5, 7 });
  CHECK(code_of([&] { read_csv(bad.str()); }) == Errc::parse_error);

  TempFile ragged("a,b\n1,2\n3\n");
  CHECK(code_of([&] { read_csv(ragged.str()); }) == Errc::parse_error);
  CHECK(code_of([&] { ingest_csv(ragged.str(), "b"); }) == Errc::parse_error);

  TempFile quoted("\"id\",\"value\"\n\"a\",1.5\n\"b, c\",-2e-3\n\n");
  CHECK(ingest_csv(quoted.str(), "value").values == std::vector<double>{ 1.5, -2e-3 });

  TempFile empty("");
  CHECK(code_of([&] { ingest_csv(empty.str(), "a"); }) == Errc::parse_error);
}

TEST_CASE("config parsing")
{
  const auto c = parse(
    "# comment\n"
    "density = huber:c=1   # trailing comment\n"
    "sizes = 250, 500,1000\n"
    "kernels = epanechnikov,gaussian\n"
    "selectors = amise_oracle,gcpi\n"
    "\n"
    "reps = 20\n"
    "seed = 99\n"
    "grid = -5, 5, 501\n"
    "pilot_alpha = 1/6\n"
    "tau = 1e-6\n");
  CHECK(c.density == "huber:c=1");
  CHECK(c.sizes == std::vector<std::size_t>{ 250, 500, 1000 });
  CHECK(c.kernels == std::vector<std::string>{ "epanechnikov", "gaussian" });
  CHECK(c.selectors == std::vector<std::string>{ "amise_oracle", "gcpi" });
  CHECK(c.reps == 20);
  CHECK(c.master_seed == 99);
  CHECK(c.grid.lo == -5.0);
  CHECK(c.grid.hi == 5.0);
  CHECK(c.grid.count == 501);
  CHECK(c.pilot_alpha == 1.0 / 6.0);
  CHECK(c.tau == 1e-6);
  CHECK(c.dim == 1);

  const auto d = parse(minimal);
  CHECK(d.reps == 500);
  CHECK(d.master_seed == 123);
  CHECK(d.grid.count == 1201);
  CHECK(d.density == "kinked:eps=0.5");
}

TEST_CASE("config errors carry line numbers")
{
  const std::string base = minimal;
  CHECK(code_of([&] { parse(base + "reps = 0\n"); }) == Errc::config_error);
  CHECK(message_of([&] { parse(base + "reps = 0\n"); }).find("test.cfg:4") != std::string::npos);
  CHECK(message_of([&] { parse("# x\n\nsizes = 1O0\n"); }).find("test.cfg:3") != std::string::npos);
  CHECK(code_of([&] { parse(base + "colour = blue\n"); }) == Errc::config_error);
  CHECK(code_of([&] { parse(base + "just words\n"); }) == Errc::config_error);
  CHECK(code_of([&] { parse(base + "sizes = 200\n"); }) == Errc::config_error);
  CHECK(code_of([&] { parse(base + "tau = -1\n"); }) == Errc::config_error);
  CHECK(code_of([&] { parse(base + "pilot_alpha = 0.3\n"); }) == Errc::config_error);
  CHECK(code_of([&] { parse(base + "grid = 1,0,10\n"); }) == Errc::config_error);
  CHECK(code_of([&] { parse(base + "grid = 0,1\n"); }) == Errc::config_error);
  CHECK(code_of([&] { parse(base + "density = gumbel\n"); }) == Errc::config_error);
  CHECK(code_of([&] { parse(base + "dim = 3\n"); }) == Errc::config_error);
  CHECK(code_of([&] { parse("sizes = 100\nkernels = gaussian\n"); }) == Errc::config_error);
  CHECK(code_of([&] { parse("sizes = 2\nkernels = gaussian\nselectors = gcpi\n"); }) == Errc::config_error);
  CHECK(code_of([&] { parse("sizes = 100\nkernels = triweight\nselectors = gcpi\n"); }) == Errc::unknown_name);
  CHECK(message_of([&] { parse("sizes = 100\nkernels = triweight\nselectors = gcpi\n"); }).find("test.cfg:2") !=
        std::string::npos);
  CHECK(code_of([&] { parse("sizes = 100\nkernels = gaussian\nselectors = plugin\n"); }) == Errc::unknown_name);
  CHECK(code_of([] { load_config("/nonexistent.cfg"); }) == Errc::file_not_found);
}

TEST_CASE("shipped configs")
{
  const auto t2 = load_config(source_dir + "/configs/table2.cfg");
  CHECK(t2.sizes.size() * t2.kernels.size() * t2.selectors.size() == 12);
  CHECK(t2.reps == 500);
  CHECK(t2.master_seed == 123);
  const auto t3 = load_config(source_dir + "/configs/table3.cfg");
  CHECK(t3.sizes.size() * t3.kernels.size() * t3.selectors.size() == 12);
  CHECK(t3.selectors == std::vector<std::string>{ "amise_oracle", "gcpi", "silverman" });
  CHECK(t3.pilot_alpha == 1.0 / 6.0);
  CHECK(t3.tau == 1e-8);
  const auto mv = load_config(source_dir + "/configs/mv2d.cfg");
  CHECK(mv.dim == 2);
  CHECK(mv.grid.count == 201);
}

TEST_CASE("real formatting round-trips")
{
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(gen) * std::pow(10.0, static_cast<int>(gen() % 40) - 20);
    CHECK(std::stod(format_real(v)) == v);
  }
  CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("result CSV")
{
  std::vector<ResultRow> rows(2);
  rows[0] = { 250, "epanechnikov", "amise_oracle", 0.713, 0.0029, 8.5e-5, std::nullopt, 0 };
  rows[1] = { 250, "epanechnikov", "gcpi", 0.8, 0.0031, 9e-5, 1.17, 0 };
  std::ostringstream out;
  write_results_csv(out, rows);
  const std::string text = out.str();
  CHECK(text.rfind("n,kernel,selector,bandwidth_mean,mean_ise,se_ise,median_h_ratio\n", 0) == 0);
  CHECK(text.find("amise_oracle,0.71299999999999997,0.0028999999999999998,8.5000000000000006e-05,\n") !=
        std::string::npos);

  TempFile f(text);
  CHECK(ingest_csv(f.str(), "mean_ise").values == std::vector<double>{ 0.0029, 0.0031 });
  CHECK(ingest_csv(f.str(), "n").values == std::vector<double>{ 250, 250 });
  CHECK(code_of([&] { ingest_csv(f.str(), "median_h_ratio"); }) == Errc::parse_error);
}

TEST_CASE("density grid emission")
{
  const EvaluationGrid grid{ -6.0, 6.0, 1201 };
  std::ostringstream out;
  emit_density_grid("kinked:eps=0.5", grid, out);
  TempFile f(out.str());
  const auto x = ingest_csv(f.str(), "x").values;
  const auto fx = ingest_csv(f.str(), "f").values;
  REQUIRE(x.size() == 1201);
  CHECK(std::abs(trapezoid(fx, grid.spacing()) - 1.0) < 1e-3);
  CHECK(fx[600 - 100] != fx[600 + 100]);
  CHECK(x[600] == 0.0);

  // the kink row has an empty second-derivative cell and is the only one
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "x,f,f_second_ae");
  int empty_cells = 0;
  while (std::getline(lines, line)) {
    if (line.back() == ',') {
      ++empty_cells;
      CHECK(line.rfind("0,", 0) == 0);
    }
  }
  CHECK(empty_cells == 1);

  // round trip of numeric columns is exact
  const auto model = make_density("kinked:eps=0.5");
  for (std::size_t i = 0; i < grid.count; ++i) {
    CHECK(x[i] == grid.at(i));
    CHECK(fx[i] == model->pdf(grid.at(i)));
  }

  std::ostringstream sym;
  emit_density_grid("kinked:eps=0", grid, sym);
  TempFile g(sym.str());
  const auto f0 = ingest_csv(g.str(), "f").values;
  CHECK(f0[500] == f0[700]);
  CHECK_THROWS_AS(emit_density_grid("kinked:eps=7", grid, out), Error);
}
