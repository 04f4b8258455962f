// Tests for the verification harness and its supporting layers: suite
// orchestration, report bookkeeping, deterministic serialization (17-digit
// round trips, checksums, manifests, checkpoints), and chart emission.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "kpp/errors.hpp"
#include "kpp/harness.hpp"
#include "kpp/io.hpp"
#include "kpp/reaction.hpp"
#include "kpp/report.hpp"
#include "kpp/svg.hpp"

using namespace kpp;
namespace fs = std::filesystem;

namespace {
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("kpp_harness_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};
}  // namespace

TEST_CASE("report bookkeeping: gating, advisory rows, merge prefixes") {
  VerificationReport rep("demo");
  rep.add_le("small-enough", 0.5, 1.0);
  CHECK(rep.pass());
  rep.add("advisory-miss", 3.0, 1.0, false, "informational", /*mandatory=*/false);
  CHECK(rep.pass());  // advisory failures do not gate
  CHECK(rep.to_text().find("WARN") != std::string::npos);

  VerificationReport inner("inner");
  inner.add_le("too-big", 2.0, 1.0);
  CHECK_FALSE(inner.pass());
  rep.merge(inner, "sub");
  CHECK_FALSE(rep.pass());
  CHECK(rep.rows().back().id == "sub/too-big");

  const auto j = rep.to_json();
  CHECK(j.at("suite") == "demo");
  CHECK(j.at("pass") == false);
  CHECK(j.at("checks").size() == 3);
  CHECK(j.at("checks")[0].at("id") == "small-enough");
  // Serialization is deterministic.
  CHECK(rep.to_json().dump() == rep.to_json().dump());
  CHECK(rep.to_text() == rep.to_text());
}

TEST_CASE("17-digit formatting round-trips doubles exactly") {
  for (const double v : {1.0 / 3.0, 0.1 + 0.2, 3.3166194915771485, -1e-300, 0.0}) {
    CHECK(std::stod(fmt17(v)) == v);
  }
}

TEST_CASE("checksums match the reference FNV-1a vectors") {
  CHECK(fnv1a64_hex("") == "cbf29ce484222325");    // offset basis
  CHECK(fnv1a64_hex("abc") == "e71fa2190541574b");  // classic test vector
  CHECK(fnv1a64_hex("abc") != fnv1a64_hex("abd"));
}

TEST_CASE("file round trip preserves arbitrary bytes") {
  TempDir tmp;
  const std::string bytes = std::string("a\nb\r\n") + '\0' + "tail";
  write_file(tmp.path / "blob.bin", bytes);
  CHECK(read_file(tmp.path / "blob.bin") == bytes);
  CHECK_THROWS(read_file(tmp.path / "missing.bin"));
}

TEST_CASE("column CSV emission: exact values, schema guards") {
  const std::string csv = csv_columns({"a", "b"}, {{1.0 / 3.0}, {2.0}});
  CHECK(csv.rfind("a,b\n", 0) == 0);
  CHECK(csv.find(fmt17(1.0 / 3.0)) != std::string::npos);
  CHECK_THROWS_AS(csv_columns({"a"}, {{1.0}, {2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(csv_columns({"a", "b"}, {{1.0}, {2.0, 3.0}}), std::invalid_argument);
}

TEST_CASE("checkpoints round-trip bit-exactly through JSON") {
  Checkpoint cp;
  cp.step = 1234;
  cp.t_base = -3.3166194915771485;
  cp.grid = Grid{60.0, 600, 0.025};
  cp.u = {0.0, 1.0 / 3.0, 0.1 + 0.2, 1e-300};
  cp.config_echo = "{\"reaction\":\"logistic\"}";
  const Checkpoint back = checkpoint_from_json(checkpoint_to_json(cp));
  CHECK(back.step == cp.step);
  CHECK(back.t_base == cp.t_base);  // exact, not approximate
  CHECK(back.grid.L == cp.grid.L);
  CHECK(back.grid.nx == cp.grid.nx);
  CHECK(back.grid.dt == cp.grid.dt);
  REQUIRE(back.u.size() == cp.u.size());
  for (std::size_t i = 0; i < cp.u.size(); ++i) CHECK(back.u[i] == cp.u[i]);
  CHECK(back.config_echo == cp.config_echo);
}

TEST_CASE("manifest records, verifies, and carries forward artifacts") {
  TempDir tmp;
  nlohmann::ordered_json cfg;
  cfg["reaction"] = "logistic";
  Manifest man(cfg);
  man.put(tmp.path, "one.csv", "x,y\n1,2\n");
  man.put(tmp.path, "two.txt", "hello\n");
  man.write(tmp.path);
  CHECK(Manifest::verify(tmp.path).empty());
  CHECK(Manifest::load_config(tmp.path).at("reaction") == "logistic");

  // Tampering is detected and named; deletion reported as missing.
  write_file(tmp.path / "one.csv", "x,y\n1,3\n");
  auto bad = Manifest::verify(tmp.path);
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].find("one.csv") != std::string::npos);
  fs::remove(tmp.path / "two.txt");
  bad = Manifest::verify(tmp.path);
  REQUIRE(bad.size() == 2);
  CHECK((bad[0] + bad[1]).find("missing") != std::string::npos);

  // A fresh manifest can absorb the old records, then override some.
  Manifest cont(cfg);
  cont.absorb_outputs(tmp.path);
  cont.put(tmp.path, "one.csv", "x,y\n1,3\n");  // records the tampered bytes
  cont.write(tmp.path);
  bad = Manifest::verify(tmp.path);
  REQUIRE(bad.size() == 1);  // only the deleted file remains wrong
  CHECK(bad[0].find("two.txt") != std::string::npos);
}

TEST_CASE("charts are deterministic, self-contained SVG") {
  ChartSpec spec;
  spec.title = "demo <chart>";
  spec.x_label = "x";
  spec.y_label = "y";
  Curve c;
  c.label = "series";
  c.color = "#1f77b4";
  c.x = {0.0, 1.0, 2.0, 3.0};
  c.y = {0.1, 1.0, 0.0, 10.0};
  spec.curves = {c};
  const std::string svg = svg_chart(spec);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("viewBox=\"0 0 800 500\"") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("demo &lt;chart&gt;") != std::string::npos);  // XML escaping
  CHECK(svg == svg_chart(spec));  // bit-for-bit deterministic

  // Log-scale charts break the polyline at non-positive samples instead of
  // emitting invalid coordinates.
  ChartSpec logspec = spec;
  logspec.log_y = true;
  const std::string logsvg = svg_chart(logspec);
  CHECK(logsvg.find("polyline") != std::string::npos);
  CHECK(logsvg.find("nan") == std::string::npos);
  CHECK(logsvg.find("inf") == std::string::npos);

  // Stacked panels share one document with proportional height.
  const std::string panels = svg_panels({spec, logspec});
  CHECK(panels.find("viewBox=\"0 0 800 1000\"") != std::string::npos);
}

TEST_CASE("suite dispatch and row prefixes") {
  const Reaction r = Reaction::preset("logistic");
  CHECK_THROWS_AS(run_suite("nosuch", r, 1), ConfigError);

  const VerificationReport profiles = run_suite("profiles", r, 1);
  CHECK(profiles.pass());
  CHECK(profiles.rows().size() >= 20);

  const VerificationReport type2 = run_suite("type2", r, 1);
  CHECK(type2.pass());
  bool has_family = false, has_member = false, has_level = false;
  for (const auto& row : type2.rows()) {
    has_family |= row.id.rfind("family/", 0) == 0;
    has_member |= row.id.rfind("n=8/", 0) == 0;
    has_level |= row.id.rfind("level/", 0) == 0;
  }
  CHECK(has_family);
  CHECK(has_member);
  CHECK(has_level);
}

TEST_CASE("front-anchored suite verifies both tested speeds") {
  const VerificationReport rep = run_suite("type1", Reaction::preset("logistic"), 1);
  CHECK(rep.pass());
  bool above = false, minimal = false;
  for (const auto& row : rep.rows()) {
    above |= row.id.rfind("c=2.5/", 0) == 0;
    minimal |= row.id.rfind("minimal/", 0) == 0;
  }
  CHECK(above);
  CHECK(minimal);
}

TEST_CASE("solver suite passes end to end with the seeded trials") {
  const VerificationReport rep = run_suite("solver", Reaction::preset("logistic"), 12345);
  CHECK(rep.pass());
  // The seeded part is reproducible: same seed, same measured numbers.
  const VerificationReport again = run_suite("solver", Reaction::preset("logistic"), 12345);
  CHECK(rep.to_json().dump() == again.to_json().dump());
}