// Verification-harness behavior: deterministic seeded reports, hypothesis
// gating (including strict rejection), ceiling enforcement for the classical
// maximal inequality, five-space norm tables, and convergence schedules.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dmlab/grid.hpp"
#include "dmlab/harness.hpp"
#include "dmlab/musielak.hpp"
#include "dmlab/walsh.hpp"

using namespace dmlab;

namespace {

ExperimentConfig small_config(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  cfg.trials = 12;
  cfg.resolutions = {4, 6};
  cfg.seed = 7;
  return cfg;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("campaign registry lists the implemented inequalities") {
  const std::vector<std::string>& names = verify_names();
  CHECK(names.size() == 15);
  for (const char* expected :
       {"doob", "weak-type", "dual-doob", "doob-sq", "fefferman-stein", "stein", "bdg",
        "five-space", "transform", "partial-sum", "fejer", "fejer-dyadic", "uv-maximal", "atoms",
        "atoms-e4"}) {
    CAPTURE(expected);
    CHECK(std::find(names.begin(), names.end(), std::string(expected)) != names.end());
  }
}

TEST_CASE("identical configurations produce byte-identical reports") {
  ExperimentConfig cfg = small_config("doob");
  VerificationReport a = verify(cfg);
  VerificationReport b = verify(cfg);
  CHECK(report_csv(a) == report_csv(b));
  CHECK(report_json(a) == report_json(b));

  cfg.seed = 8;
  VerificationReport c = verify(cfg);
  CHECK(report_csv(a) != report_csv(c));  // the seed genuinely steers the inputs
}

TEST_CASE("maximal inequality at p=2 passes under the classical ceiling") {
  ExperimentConfig cfg = small_config("doob");
  cfg.trials = 24;
  VerificationReport rep = verify(cfg);

  CHECK(rep.hypothesis.checked);
  CHECK(rep.hypothesis.pass);
  CHECK_FALSE(rep.hypothesis_rejected);
  CHECK(rep.has_ceiling);
  CHECK(rep.ceiling == doctest::Approx(2.0).epsilon(1e-5));
  REQUIRE(rep.rows.size() == 2);
  for (const ResolutionStats& row : rep.rows) {
    CHECK(row.trials == 24);
    CHECK(row.max_ratio > 0.0);
    CHECK(row.max_ratio <= rep.ceiling);
    CHECK(row.median_ratio > 0.0);
    CHECK(row.median_ratio <= row.max_ratio);
    CHECK(row.worst_index >= 0);
    CHECK(row.worst_index < 24);
  }
  CHECK(rep.stability_spread >= 1.0);
  CHECK(rep.stability_spread <= rep.stability_factor);
  CHECK(rep.pass);
}

TEST_CASE("strict mode rejects the L1 hypothesis before sampling") {
  ExperimentConfig cfg = small_config("stein");
  cfg.phi_spec = "power:p=1";
  VerificationReport rep = verify(cfg);
  CHECK(rep.hypothesis.checked);
  CHECK_FALSE(rep.hypothesis.pass);
  CHECK(rep.hypothesis_rejected);
  CHECK(rep.rows.empty());
  CHECK_FALSE(rep.pass);

  // Exploratory mode annotates the failed hypothesis but still samples.
  cfg.strict = false;
  cfg.trials = 4;
  VerificationReport explore = verify(cfg);
  CHECK_FALSE(explore.hypothesis.pass);
  CHECK_FALSE(explore.hypothesis_rejected);
  REQUIRE(explore.rows.size() == 2);
  for (const ResolutionStats& row : explore.rows) CHECK(row.trials == 4);
}

TEST_CASE("hypothesis gates match the known families") {
  ExperimentConfig cfg = small_config("dual-doob");
  cfg.phi_spec = "power:p=2";
  cfg.trials = 4;
  CHECK(verify(cfg).hypothesis.pass);

  cfg = small_config("doob-sq");
  cfg.phi_spec = "power:p=2";  // rescaled dual is degenerate: trivially fine
  cfg.trials = 4;
  CHECK(verify(cfg).hypothesis.pass);

  cfg = small_config("fejer");
  cfg.phi_spec = "power:p=0.6";  // above the 1/2 threshold
  cfg.trials = 2;
  cfg.resolutions = {4};
  VerificationReport fej = verify(cfg);
  CHECK(fej.hypothesis.pass);
  CHECK(fej.pass);

  cfg.phi_spec = "power:p=0.4";  // below the threshold: rejected
  CHECK(verify(cfg).hypothesis_rejected);

  cfg = small_config("uv-maximal");
  cfg.phi_spec = "loggrow:alpha=1.5";  // not a plain power
  CHECK(verify(cfg).hypothesis_rejected);
  cfg.phi_spec = "power:p=1";
  CHECK(verify(cfg).hypothesis_rejected);

  cfg = small_config("atoms-e4");
  cfg.kind = "s";
  cfg.r = 0.6;
  cfg.phi_spec = "power:p=0.75";
  CHECK(verify(cfg).hypothesis_rejected);  // construction kind must be M
  cfg.kind = "M";
  cfg.r = 2.0;
  CHECK(verify(cfg).hypothesis_rejected);  // aggregation exponent must sit in (0,1]
}

TEST_CASE("atoms campaign compares the atomic norm against its Hardy norm") {
  ExperimentConfig cfg = small_config("atoms");
  cfg.kind = "s";
  cfg.r = 1.0;
  cfg.trials = 6;
  cfg.resolutions = {4, 5};
  VerificationReport rep = verify(cfg);
  CHECK_FALSE(rep.hypothesis.checked);
  REQUIRE(rep.rows.size() == 2);
  for (const ResolutionStats& row : rep.rows) {
    CHECK(row.trials == 6);
    // Two-sided aggregate comparison: the ratio lives in [1, 4] for r = 1.
    CHECK(row.max_ratio >= 1.0 - 1e-9);
    CHECK(row.max_ratio <= 4.0 + 1e-9);
  }
  CHECK(rep.pass);
}

TEST_CASE("off-support Fejer aggregate stays finite for the M construction") {
  ExperimentConfig cfg = small_config("atoms-e4");
  cfg.kind = "M";
  cfg.r = 0.6;
  cfg.phi_spec = "power:p=0.75";
  cfg.trials = 3;
  cfg.resolutions = {4};
  VerificationReport rep = verify(cfg);
  CHECK(rep.hypothesis.pass);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].trials >= 1);
  CHECK(std::isfinite(rep.rows[0].max_ratio));
}

TEST_CASE("configuration errors are reported as invalid arguments") {
  ExperimentConfig cfg = small_config("doob");
  cfg.name = "nonsense";
  CHECK_THROWS_AS(verify(cfg), std::invalid_argument);

  cfg = small_config("doob");
  cfg.trials = 0;
  CHECK_THROWS_AS(verify(cfg), std::invalid_argument);

  cfg = small_config("doob");
  cfg.resolutions = {};
  CHECK_THROWS_AS(verify(cfg), std::invalid_argument);

  cfg = small_config("doob");
  cfg.resolutions = {0};
  CHECK_THROWS_AS(verify(cfg), std::invalid_argument);

  cfg = small_config("doob");
  cfg.resolutions = {DyadicGrid::max_resolution() + 1};
  CHECK_THROWS_AS(verify(cfg), std::invalid_argument);

  cfg = small_config("doob");
  cfg.law = "bogus";
  CHECK_THROWS_AS(verify(cfg), std::invalid_argument);

  cfg = small_config("doob");
  cfg.stability_factor = 0.5;
  CHECK_THROWS_AS(verify(cfg), std::invalid_argument);

  cfg = small_config("atoms");
  cfg.kind = "Z";
  CHECK_THROWS_AS(verify(cfg), std::invalid_argument);
}

TEST_CASE("CSV rows carry the configured metadata and quoting") {
  ExperimentConfig cfg = small_config("doob");
  cfg.phi_spec = "double-phase:p=2,q=4,w=one";
  cfg.trials = 4;
  VerificationReport rep = verify(cfg);
  std::vector<std::string> lines = split_lines(report_csv(rep));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] ==
        "inequality,phi_spec,resolution,trials,max_ratio,median_ratio,worst_seed_index,pass");
  CHECK(lines[1].rfind("doob,\"double-phase:p=2,q=4,w=one\",4,4,", 0) == 0);
  CHECK(lines[2].rfind("doob,\"double-phase:p=2,q=4,w=one\",6,4,", 0) == 0);
  const char tail = rep.pass ? '1' : '0';
  CHECK(lines[1].back() == tail);
  CHECK(lines[2].back() == tail);

  const std::string path = "harness_report_roundtrip.csv";
  write_report_csv(rep, path);
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == report_csv(rep));
  std::remove(path.c_str());
}

TEST_CASE("JSON report mirrors the structured fields") {
  ExperimentConfig cfg = small_config("doob");
  cfg.trials = 4;
  VerificationReport rep = verify(cfg);
  nlohmann::json j = nlohmann::json::parse(report_json(rep));
  CHECK(j["inequality"] == "doob");
  CHECK(j["phi_spec"] == "power:p=2");
  CHECK(j["seed"] == 7);
  CHECK(j["hypothesis"]["pass"] == true);
  CHECK(j["hypothesis_rejected"] == false);
  CHECK(j["has_ceiling"] == true);
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["resolution"] == 4);
  CHECK(j["rows"][0]["trials"] == 4);
  CHECK(j["pass"] == rep.pass);
}

TEST_CASE("five-space table is unit for a single Rademacher jump") {
  DyadicGrid g(3);
  SampledFunction f = rademacher(0, g);
  DyadicMartingale m = martingale_of(f, false);
  MusielakFunction phi = parse_phi("power:p=2");
  FiveSpaceReport rep = five_space_report(m, phi);
  REQUIRE(rep.defined);
  for (double v : rep.norms) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(rep.ratios[i][j] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.names[0] == "maximal");
  CHECK(rep.names[4] == "envelope-square");

  DyadicMartingale zero = martingale_of(SampledFunction::constant(g, 0.0), false);
  FiveSpaceReport empty = five_space_report(zero, phi);
  CHECK_FALSE(empty.defined);
  for (const auto& row : empty.ratios)
    for (double v : row) CHECK(v == 0.0);
}

TEST_CASE("convergence schedule reports errors and the analytic limit") {
  DyadicGrid g(3);
  SampledFunction f = walsh_function(3, g);
  MusielakFunction phi = parse_phi("power:p=2");
  std::vector<ConvergenceRow> rows = fejer_convergence(f, phi, {1, 2, 3, 4, 8});
  REQUIRE(rows.size() == 6);

  CHECK(rows[0].n == 1);
  CHECK(rows[0].partial_error == doctest::Approx(1.0).epsilon(1e-9));  // s_1 = mean = 0
  CHECK(rows[0].fejer_error == doctest::Approx(1.0).epsilon(1e-9));

  // The single coefficient sits at index 3, so every partial sum from n = 4 on is exact.
  CHECK(rows[3].n == 4);
  CHECK(rows[3].partial_error <= 1e-12);
  CHECK(rows[4].n == 8);
  CHECK(rows[4].partial_error <= 1e-12);
  CHECK(rows[4].fejer_error > 0.0);  // sigma_8 still averages the early deficient sums

  CHECK(rows[5].analytic_limit);
  CHECK(rows[5].fejer_error == 0.0);
  CHECK(rows[5].partial_error == 0.0);

  CHECK_THROWS_AS(fejer_convergence(f, phi, {}), std::invalid_argument);
  CHECK_THROWS_AS(fejer_convergence(f, phi, {4, 2}), std::invalid_argument);
  CHECK_THROWS_AS(fejer_convergence(f, phi, {0, 2}), std::invalid_argument);
}
