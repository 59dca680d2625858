#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "ccnet/harness.hpp"
#include "ccnet/json_io.hpp"

using namespace ccnet;

namespace {

ExperimentConfig base_config(SchemeKind kind, unsigned h, unsigned r, unsigned D,
                             unsigned t2) {
  ExperimentConfig c;
  c.kind = kind;
  c.h = h;
  c.r = r;
  c.D = D;
  c.t2 = t2;
  return c;
}

}  // namespace

TEST_CASE("run_experiment reproduces the small worked instance") {
  ExperimentConfig c = base_config(SchemeKind::Baseline, 5, 2, 10, 3);
  RateReport rep = run_experiment(c);
  REQUIRE(rep.pass);
  CHECK(rep.R1_measured == Rational(1, 8));
  CHECK(rep.R2_measured == Rational(1, 8));
  CHECK(rep.M == Rational(15, 2));
  CHECK(rep.decode_verified);
  CHECK(rep.memory_verified);
}

TEST_CASE("run_experiment measured equals theory on a second grid point") {
  ExperimentConfig c = base_config(SchemeKind::Baseline, 4, 2, 6, 1);
  RateReport rep = run_experiment(c);
  REQUIRE(rep.pass);
  CHECK(rep.R1_measured == Rational(1, 2));
  CHECK(rep.R2_measured == Rational(1, 3));
}

TEST_CASE("full user caches silence the server") {
  ExperimentConfig c = base_config(SchemeKind::Baseline, 4, 2, 6, 3);  // t2 = Khat
  RateReport rep = run_experiment(c);
  REQUIRE(rep.pass);
  CHECK(rep.server_bits_per_relay == 0);
  CHECK(rep.R1_measured == Rational(0));
}

TEST_CASE("keyed schemes run many random demands with fresh pads") {
  ExperimentConfig c = base_config(SchemeKind::SecureDelivery, 4, 2, 6, 1);
  c.demand_policy = DemandPolicy::UniformRandom;
  c.num_random_demands = 20;
  RateReport rep = run_experiment(c);
  REQUIRE(rep.pass);
  CHECK(rep.demands_checked == 20);
}

TEST_CASE("explicit demand vectors are honored") {
  ExperimentConfig c = base_config(SchemeKind::SecureCaching, 4, 2, 6, 1);
  c.demand_policy = DemandPolicy::Explicit;
  c.explicit_demands = {{6, 5, 4, 3, 2, 1}, {1, 1, 2, 2, 3, 3}};
  RateReport rep = run_experiment(c);
  REQUIRE(rep.pass);
  CHECK(rep.demands_checked == 2);
}

TEST_CASE("theoretical rates helper agrees with the bounds module") {
  Topology topo(5, 3);
  ExperimentConfig c = base_config(SchemeKind::SecureBoth, 5, 3, 50, 2);
  SchemeParams p = make_params(c, topo);
  RatePoint rp = theoretical_rates(p);
  CHECK(rp.M == p.M);
  CHECK(rp.R2 == Rational(1, 3));
}

TEST_CASE("sweep rows are deterministic and ordered by grid index") {
  ExperimentConfig c = base_config(SchemeKind::Baseline, 4, 2, 6, 0);
  SweepResult a = sweep(c, {0, 1, 2, 3});
  SweepResult b = sweep(c, {0, 1, 2, 3});
  const std::string csv_a = to_csv(a), csv_b = to_csv(b);
  CHECK(csv_a == csv_b);  // byte-identical across runs
  for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].t2 == i);
  SweepResult seq = sweep(c, {0, 1, 2, 3}, false);
  CHECK(to_csv(seq) == csv_a);  // concurrency does not change the output
}

TEST_CASE("single-point sweep equals run_experiment") {
  ExperimentConfig c = base_config(SchemeKind::Baseline, 4, 2, 6, 0);
  SweepResult res = sweep(c, {1});
  REQUIRE(res.rows.size() == 1);
  REQUIRE(res.rows[0].ok);
  c.t2 = 1;
  RateReport direct = run_experiment(c);
  CHECK(res.rows[0].report.R1_measured == direct.R1_measured);
  CHECK(res.rows[0].report.R2_measured == direct.R2_measured);
  CHECK(res.rows[0].report.M == direct.M);
}

TEST_CASE("sweep records per-point failures and continues") {
  ExperimentConfig c = base_config(SchemeKind::Baseline, 4, 2, 6, 0);
  SweepResult res = sweep(c, {1, 9, 2});  // t2=9 is off-grid
  REQUIRE(res.rows.size() == 3);
  CHECK(res.rows[0].ok);
  CHECK_FALSE(res.rows[1].ok);
  CHECK(res.rows[1].error.find("t2") != std::string::npos);
  CHECK(res.rows[2].ok);
  const std::string csv = to_csv(res);
  CHECK(csv.find("FAIL:") != std::string::npos);
}

TEST_CASE("csv schema: versioned comment, header, parse-back") {
  ExperimentConfig c = base_config(SchemeKind::Baseline, 4, 2, 6, 0);
  SweepResult res = sweep(c, {0, 1, 2});
  std::istringstream in(to_csv(res));
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "# ccnet-sweep-csv v1");
  REQUIRE(std::getline(in, line));
  CHECK(line == csv_header());
  const std::size_t ncols = std::count(line.begin(), line.end(), ',') + 1;
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') + 1 == ncols);
    // parse back M and R1 and compare against the report
    std::istringstream ls(line);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    CHECK(cells[0] == "baseline");
    CHECK(Rational::parse(cells[7]) == res.rows[std::size_t(rows)].report.M);
    CHECK(cells.back() == "PASS");
    ++rows;
  }
  CHECK(rows == 3);
}

TEST_CASE("decimal rendering in rate reports") {
  CHECK(Rational(1, 8).to_decimal() == "0.125");
  CHECK(Rational(0).to_decimal() == "0");
}

TEST_CASE("emit_plot_data writes csv and optional formats") {
  ExperimentConfig c = base_config(SchemeKind::Baseline, 4, 2, 6, 0);
  SweepResult res = sweep(c, {0, 1, 2, 3});
  PlotOutputs outs;
  outs.csv_path = "harness_test_out.csv";
  outs.svg_path = "harness_test_out.svg";
  emit_plot_data(res, outs);
  std::ifstream csv(outs.csv_path);
  REQUIRE(csv.good());
  std::string first;
  std::getline(csv, first);
  CHECK(first == "# ccnet-sweep-csv v1");
  std::ifstream svg(outs.svg_path);
  REQUIRE(svg.good());
  std::string body((std::istreambuf_iterator<char>(svg)), std::istreambuf_iterator<char>());
  CHECK(body.find("<svg") != std::string::npos);
  CHECK(body.find("polyline") != std::string::npos);
  std::remove(outs.csv_path.c_str());
  std::remove(outs.svg_path.c_str());
}

TEST_CASE("config parsing from json") {
  nlohmann::json j = {
      {"h", 4},      {"r", 2},        {"D", 6},
      {"N", "3/2"},  {"scheme", "secure_delivery"},
      {"t1", 0},     {"t2", 1},       {"seed", 99},
      {"F_multiplier", 2},            {"field", "gf256"},
      {"demands", "uniform_random"},  {"num_random_demands", 7},
  };
  ExperimentConfig c = config_from_json(j);
  CHECK(c.h == 4);
  CHECK(c.N == Rational(3, 2));
  CHECK(c.kind == SchemeKind::SecureDelivery);
  CHECK(c.seed == 99);
  CHECK(c.F_multiplier == 2);
  CHECK(c.demand_policy == DemandPolicy::UniformRandom);
  CHECK(c.num_random_demands == 7);

  nlohmann::json je = {{"h", 4}, {"r", 2}, {"D", 6},
                       {"demands", nlohmann::json::array({{1, 2, 3, 4, 5, 6}})}};
  ExperimentConfig ce = config_from_json(je);
  CHECK(ce.demand_policy == DemandPolicy::Explicit);
  REQUIRE(ce.explicit_demands.size() == 1);
  CHECK(ce.explicit_demands[0] == Demand{1, 2, 3, 4, 5, 6});

  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"h", 4}}), nlohmann::json::exception);
  CHECK_THROWS_AS(
      config_from_json(nlohmann::json{{"h", 4}, {"r", 2}, {"D", 6}, {"demands", "bogus"}}),
      std::invalid_argument);
}

TEST_CASE("placement and transcript dumps are valid json lines") {
  Topology topo(4, 2);
  SchemeParams p = params_secure_delivery(topo, 6, Rational(0), 0, 1);
  Library lib = random_library(6, p.F_min, 1);
  SeededEntropy e(2);
  Placement pl(lib, topo, p, e);
  Transcript tr = deliver(pl, all_distinct_demand(6));

  std::ostringstream pd;
  dump_placement_jsonl(pl, pd, true);
  std::istringstream pin(pd.str());
  std::string line;
  int keys = 0, segs = 0;
  while (std::getline(pin, line)) {
    auto rec = nlohmann::json::parse(line);  // throws on malformed output
    if (rec["rec"] == "key") ++keys;
    if (rec["rec"] == "segment2") ++segs;
  }
  CHECK(keys == int(pl.registry().size()));
  CHECK(segs == int(4 * 6 * p.piece_sets.count()));

  // key ids are redacted unless explicitly requested
  std::ostringstream td_red, td_full;
  dump_transcript_jsonl(tr, td_red, false);
  dump_transcript_jsonl(tr, td_full, true);
  CHECK(td_red.str().find("key_id") == std::string::npos);
  CHECK(td_full.str().find("key_id") != std::string::npos);
  CHECK(td_red.str().find("\"padded\":true") != std::string::npos);

  nlohmann::json t = to_json(topo);
  CHECK(t["K"] == 6);
  CHECK(t["user_relays"].size() == 6);
}

TEST_CASE("experiment failures carry a diagnostic label") {
  ExperimentConfig c = base_config(SchemeKind::Baseline, 4, 2, 6, 0);
  c.demand_policy = DemandPolicy::Explicit;  // no vectors supplied
  RateReport rep = run_experiment(c);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.failure.empty());
}
