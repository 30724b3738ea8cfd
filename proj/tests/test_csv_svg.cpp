#include <doctest.h>

#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <sstream>
#include <string>

#include "lawnsim/csv.hpp"
#include "lawnsim/svg.hpp"

using namespace lawnsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() / fs::path("lawnsim_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string file(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("csv writer round-trips through the reader") {
  TempDir tmp;
  const std::string path = tmp.file("t.csv");
  {
    CsvWriter w(path);
    w.provenance(Scenario{}, 42);
    w.header({"a", "b"});
    w.row(std::vector<double>{1.5, -2.0});
    w.row(std::vector<double>{3.25, 1e-9});
  }
  const auto t = read_csv(path);
  REQUIRE(t.columns.size() == 2);
  CHECK(t.columns[0] == "a");
  CHECK(t.column_index("b") == 1);
  CHECK(t.column_index("missing") == -1);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][0] == 3.25);
  CHECK(t.rows[1][1] == 1e-9);
}

TEST_CASE("scenario hash tracks parameter changes") {
  Scenario a, b;
  CHECK(scenario_hash(a) == scenario_hash(b));
  b.d_th_m = 51.0;
  CHECK(scenario_hash(a) != scenario_hash(b));
  b = a;
  b.gamma_override = 1.0;
  CHECK(scenario_hash(a) != scenario_hash(b));
}

TEST_CASE("plot rendering") {
  TempDir tmp;

  SUBCASE("heatmap from a small grid csv") {
    const std::string csv = tmp.file("hm.csv");
    {
      CsvWriter w(csv);
      w.header({"x_m", "y_m", "p_ho"});
      for (double y : {0.0, 5.0})
        for (double x : {0.0, 5.0, 10.0}) w.row(std::vector<double>{x, y, (x + y) / 15.0});
    }
    const std::string svg = tmp.file("hm.svg");
    emit_plotdata(csv, PlotKind::heatmap, svg);
    const std::string content = slurp(svg);
    CHECK(content.find("<svg") != std::string::npos);
    CHECK(content.find("<rect") != std::string::npos);

    SUBCASE("re-rendering is byte-identical") {
      const std::string svg2 = tmp.file("hm2.svg");
      emit_plotdata(csv, PlotKind::heatmap, svg2);
      CHECK(slurp(svg2) == content);
    }
  }

  SUBCASE("line chart from a sweep csv") {
    const std::string csv = tmp.file("ln.csv");
    {
      CsvWriter w(csv);
      w.header({"rho", "L_rsrp_m", "L_joint_m"});
      w.row(std::vector<double>{0.06, 239.0, 256.0});
      w.row(std::vector<double>{0.2, 239.0, 58.0});
    }
    const std::string svg = tmp.file("ln.svg");
    emit_plotdata(csv, PlotKind::lines, svg);
    const std::string content = slurp(svg);
    CHECK(content.find("<polyline") != std::string::npos);
    CHECK(content.find("L_joint_m") != std::string::npos);
  }

  SUBCASE("schema mismatch names the missing column") {
    const std::string csv = tmp.file("bad.csv");
    {
      CsvWriter w(csv);
      w.header({"foo", "bar"});
      w.row(std::vector<double>{1.0, 2.0});
    }
    CHECK_THROWS_WITH_AS(emit_plotdata(csv, PlotKind::heatmap, tmp.file("bad.svg")),
                         doctest::Contains("x_m"), plot_error);
  }

  SUBCASE("empty csv is an error and writes nothing") {
    const std::string csv = tmp.file("empty.csv");
    {
      CsvWriter w(csv);
      w.header({"x_m", "y_m", "v"});
    }
    const std::string out = tmp.file("empty.svg");
    CHECK_THROWS_AS(emit_plotdata(csv, PlotKind::heatmap, out), plot_error);
    CHECK(!fs::exists(out));
  }
}
